"""One-subdivided-clique witnesses in attachment graphs.

A witness for clique size k names k principal vertices and, for every
principal pair, a private connector adjacent to both endpoints -- a
length-2 path replacing each clique edge.  The online finder follows the
constructive route: principals are per-block degree leaders among the
first t1 = k^2 vertices judged at time t2 = k^4, and in strict mode a
later vertex may connect a pair only with its first two edges, which is
what keeps one vertex from serving two pairs.  The offline greedy finder
drops those restrictions and reports the largest k it can complete on a
finished graph.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from pa_lab import rng
from pa_lab.bounds import wilson_interval
from pa_lab.process import ProcessParams, generate

MODES = ("strict", "greedy")

#: Greedy principal sets are prefixes of one 64-bit adjacency mask order.
_GREEDY_K_CAP = 64


def _pair_key(a: int, b: int) -> tuple:
    if a == b:
        raise ValueError(f"a principal pair needs two distinct vertices, got {a}")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class FinderConfig:
    """Parameters of the online witness search.

    t1 is the principal candidate pool (first t1 vertices, split into k
    blocks) and t2 the time at which block leaders are judged; they default
    to k^2 and k^4.  strict_first_edges defaults to True exactly in strict
    mode: a vertex then connects a pair only when its first edge hits one
    endpoint and its second the other, while greedy mode admits any pair
    among the vertex's edge targets.
    """

    k: int
    mode: str = "strict"
    t1: int = None
    t2: int = None
    strict_first_edges: bool = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.t1 is None:
            object.__setattr__(self, "t1", self.k * self.k)
        if self.t2 is None:
            object.__setattr__(self, "t2", self.k**4)
        if self.strict_first_edges is None:
            object.__setattr__(self, "strict_first_edges", self.mode == "strict")
        if self.t1 < self.k or self.t1 % self.k:
            raise ValueError(f"t1={self.t1} must split into k={self.k} equal blocks")
        if self.t1 > self.t2:
            raise ValueError(f"need t1 <= t2, got t1={self.t1} > t2={self.t2}")


@dataclass(frozen=True)
class Witness:
    """k principals plus one private connector per principal pair."""

    principals: tuple
    connectors: dict = field(default_factory=dict)

    def __post_init__(self):
        principals = tuple(int(p) for p in self.principals)
        if len(set(principals)) != len(principals) or not principals:
            raise ValueError("principals must be non-empty and distinct")
        connectors = {
            _pair_key(int(a), int(b)): int(c)
            for (a, b), c in self.connectors.items()
        }
        object.__setattr__(self, "principals", principals)
        object.__setattr__(self, "connectors", connectors)

    @property
    def k(self) -> int:
        return len(self.principals)

    def pairs(self) -> list:
        """All C(k,2) principal pairs in lexicographic id order."""
        return [_pair_key(a, b) for a, b in combinations(sorted(self.principals), 2)]

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "principals": list(self.principals),
            "connectors": [
                {"pair": [a, b], "vertex": c}
                for (a, b), c in sorted(self.connectors.items())
            ],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Witness":
        connectors = {
            (entry["pair"][0], entry["pair"][1]): entry["vertex"]
            for entry in obj["connectors"]
        }
        return cls(tuple(obj["principals"]), connectors)


@dataclass(frozen=True)
class Verification:
    """Verdict plus human-readable diagnostics (first violation first)."""

    ok: bool
    diagnostics: tuple = ()


@dataclass
class RunStats:
    """Bookkeeping of one online run: who connected when, and hub growth."""

    n: int
    m: int
    seed: int
    k: int
    principals: tuple = ()
    connection_times: dict = field(default_factory=dict)
    found_at: int = None
    checkpoints: tuple = ()
    principal_degrees: tuple = ()

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "seed": self.seed,
            "k": self.k,
            "principals": list(self.principals),
            "found_at": self.found_at,
            "connection_times": [
                {"pair": [a, b], "time": t}
                for (a, b), t in sorted(self.connection_times.items())
            ],
            "checkpoints": list(self.checkpoints),
            "principal_degrees": [list(row) for row in self.principal_degrees],
        }


def select_principals(g, cfg: FinderConfig) -> tuple:
    """Per-block degree leaders among the first t1 vertices, judged at t2.

    Block b holds vertices b*(t1/k)+1 ... (b+1)*(t1/k); ties go to the
    lowest id.  Returns the k leaders in block order.
    """
    if cfg.t2 > g.n:
        raise ValueError(f"need t2 <= n, got t2={cfg.t2} > n={g.n}")
    degs = g.degrees_at(cfg.t2)
    block = cfg.t1 // cfg.k
    out = []
    for b in range(cfg.k):
        lo = b * block
        out.append(lo + int(np.argmax(degs[lo : lo + block])) + 1)
    return tuple(out)


def _doubling_checkpoints(t2: int, n: int) -> tuple:
    out = []
    cp = t2
    while cp <= n:
        out.append(cp)
        cp *= 2
    return tuple(out)


def find_witness_online(n: int, m: int, cfg: FinderConfig, seed: int) -> tuple:
    """Grow a graph to time n and connect principal pairs as vertices arrive.

    Returns (witness, stats); the witness is None when some pair is still
    unconnected at the horizon, and stats.found_at is the time the last
    pair got its connector.  Principal degrees are recorded at the doubling
    checkpoints t2, 2*t2, 4*t2, ... <= n.
    """
    if cfg.strict_first_edges and m < 2:
        raise ValueError("strict first-edges mode needs m >= 2")
    if cfg.t2 > n:
        raise ValueError(f"need t2 <= horizon, got t2={cfg.t2} > n={n}")
    g = generate(n, ProcessParams(m=m, seed=seed))
    principals = select_principals(g, cfg)
    stats = RunStats(n=n, m=m, seed=seed, k=cfg.k, principals=principals)
    stats.checkpoints = _doubling_checkpoints(cfg.t2, n)
    stats.principal_degrees = tuple(
        tuple(int(g.degrees_at(cp)[p - 1]) for cp in stats.checkpoints)
        for p in principals
    )
    wanted = {_pair_key(a, b) for a, b in combinations(principals, 2)}
    if not wanted:
        stats.found_at = cfg.t2
        return Witness(principals, {}), stats

    in_p = np.zeros(n + 1, dtype=bool)
    in_p[list(principals)] = True
    targets, _ = g.edge_arrays()
    connectors = {}
    if cfg.strict_first_edges:
        first = targets[cfg.t2 * m :: m]
        second = targets[cfg.t2 * m + 1 :: m]
        cand = np.nonzero(in_p[first] & in_p[second] & (first != second))[0]
        for rel in cand.tolist():
            pair = _pair_key(int(first[rel]), int(second[rel]))
            if pair in connectors:
                continue
            vertex = cfg.t2 + 1 + rel
            connectors[pair] = vertex
            stats.connection_times[pair] = vertex
            if len(connectors) == len(wanted):
                stats.found_at = vertex
                break
    else:
        hit_rows = in_p[targets].reshape(n, m)[cfg.t2 :]
        cand = np.nonzero(hit_rows.sum(axis=1) >= 2)[0]
        for rel in cand.tolist():
            vertex = cfg.t2 + 1 + rel
            row = targets[(vertex - 1) * m : vertex * m]
            hits = sorted({int(x) for x in row if in_p[x]})
            if len(hits) < 2:
                continue
            for pair in combinations(hits, 2):
                if pair not in connectors:
                    connectors[pair] = vertex
                    stats.connection_times[pair] = vertex
                    break
            if len(connectors) == len(wanted):
                stats.found_at = vertex
                break

    if len(connectors) < len(wanted):
        return None, stats
    return Witness(principals, connectors), stats


def _edge_keys(g) -> tuple:
    """Sorted searchable keys of the edge multiset (undirected)."""
    u, v = g.edge_arrays()
    lo = np.minimum(u, v).astype(np.int64)
    hi = np.maximum(u, v).astype(np.int64)
    keys = lo * np.int64(g.n + 1) + hi
    keys.sort()
    return keys, np.int64(g.n + 1)


def _has_edge(keys: np.ndarray, stride, a: int, b: int) -> bool:
    key = np.int64(min(a, b)) * stride + np.int64(max(a, b))
    i = int(np.searchsorted(keys, key))
    return i < len(keys) and keys[i] == key


def verify_witness(g, w: Witness) -> Verification:
    """Check every witness invariant against the graph's edge multiset.

    Structure first (all pairs present, connectors private and distinct),
    then adjacency of each connector to both endpoints of its pair.
    """
    for x in (*w.principals, *w.connectors.values()):
        if not 1 <= x <= g.n:
            raise ValueError(f"vertex id {x} out of range 1..{g.n}")
    problems = []
    wanted = set(w.pairs())
    got = set(w.connectors)
    for pair in sorted(wanted - got):
        problems.append(f"pair {pair} has no connector")
    for pair in sorted(got - wanted):
        problems.append(f"connector pair {pair} is not a principal pair")
    values = list(w.connectors.values())
    if len(set(values)) != len(values):
        problems.append("connector reuse: some vertex serves two pairs")
    clash = set(values) & set(w.principals)
    if clash:
        problems.append(f"connector equals a principal: {sorted(clash)}")
    keys, stride = _edge_keys(g)
    for pair in sorted(wanted & got):
        c = w.connectors[pair]
        for p in pair:
            if not _has_edge(keys, stride, p, c):
                problems.append(
                    f"connector {c} of pair {pair} is not adjacent to {p}"
                )
    return Verification(not problems, tuple(problems))


def greedy_max_witness(g) -> Witness:
    """Largest-k witness a deterministic greedy completes on a finished graph.

    Principals are the top-k-degree vertices (ties to lower id).  Every
    other vertex adjacent to at least two of them is offered, in id order,
    to the lexicographically smallest unconnected pair it covers.  k starts
    at an adjacency-supported ceiling and decreases until every pair gets a
    connector; k = 1 always completes.  The result is a lower bound on the
    largest one-subdivided clique, with no optimality claim.
    """
    n = g.n
    degs = np.asarray(g.degrees)
    kmax = min(_GREEDY_K_CAP, n)
    order = np.lexsort((np.arange(n), -degs))
    top_ids = (order[:kmax] + 1).astype(np.int64)

    # Bit r of masks[v] = adjacency of v to the rank-r principal candidate;
    # the principal set for any k <= kmax is then a prefix mask.
    pbit = np.zeros(n + 1, dtype=np.uint64)
    pbit[top_ids] = np.uint64(1) << np.arange(kmax, dtype=np.uint64)
    u, v = g.edge_arrays()
    masks = np.zeros(n + 1, dtype=np.uint64)
    np.bitwise_or.at(masks, v, pbit[u])
    np.bitwise_or.at(masks, u, pbit[v])

    for k in range(kmax, 0, -1):
        principals = tuple(int(p) for p in top_ids[:k])
        need = k * (k - 1) // 2
        if need == 0:
            return Witness(principals, {})
        if need > n - k:
            continue
        sub = masks & np.uint64((1 << k) - 1)
        multi = (sub & (sub - np.uint64(1))) != 0
        multi[top_ids[:k]] = False
        connectors = {}
        for cid in np.nonzero(multi)[0].tolist():
            bits = int(sub[cid])
            hits = sorted(int(top_ids[r]) for r in range(k) if bits >> r & 1)
            for pair in combinations(hits, 2):
                if pair not in connectors:
                    connectors[pair] = cid
                    break
            if len(connectors) == need:
                return Witness(principals, connectors)
    raise AssertionError("unreachable: k=1 always completes")


@dataclass(frozen=True)
class SuccessEstimate:
    """Monte Carlo success frequency of the online finder, with 99% CI."""

    n: int
    m: int
    k: int
    trials: int
    successes: int
    estimate: float
    ci_low: float
    ci_high: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "trials": self.trials,
            "successes": self.successes,
            "estimate": self.estimate,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
        }


def success_probability(
    n: int, m: int, k: int, trials: int, seed: int, jobs: int = 1
) -> SuccessEstimate:
    """Fraction of independent runs where the online finder completes.

    Trial i uses the process seed derived from (seed, i), so the estimate
    is bit-reproducible for any job count.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng.check_seed(seed)
    cfg = FinderConfig(k)

    def run_range(lo, hi):
        hits = 0
        for i in range(lo, hi):
            witness, _ = find_witness_online(n, m, cfg, rng.derive_seed(seed, i))
            hits += witness is not None
        return hits

    jobs = max(1, min(int(jobs), trials))
    if jobs == 1:
        successes = run_range(0, trials)
    else:
        edges = [trials * j // jobs for j in range(jobs + 1)]
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            successes = sum(ex.map(run_range, edges[:-1], edges[1:]))
    lo, hi = wilson_interval(successes, trials)
    return SuccessEstimate(n, m, k, trials, successes, successes / trials, lo, hi)


def write_witness_json(w: Witness, f) -> None:
    """Witness as JSON {k, principals, connectors:[{pair, vertex}, ...]}."""
    json.dump(w.to_json_dict(), f, indent=2)
    f.write("\n")


def read_witness_json(f) -> Witness:
    """Inverse of write_witness_json."""
    return Witness.from_json_dict(json.load(f))
