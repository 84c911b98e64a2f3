"""Preferential-attachment graph process.

The elementary process adds one vertex and one edge per step: at step t the
new vertex v_t attaches to an earlier vertex v_s with probability
d(v_s)/(2t-1), where degrees are taken in the committed graph and v_t's own
pending stub counts as one endpoint, so the self-loop branch has probability
1/(2t-1).  The m-edges-per-vertex variant is obtained by merging consecutive
blocks of m vertices of an elementary run: block i becomes merged vertex
v'_i = {v_{(i-1)m+1}, ..., v_{im}}.

Vertex ids are 1-based in the public API.  A self-loop contributes 2 to its
vertex's degree, so the degree total is always 2*m*n over m*n edges.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from pa_lab import rng
from pa_lab._backend import kernels

EDGE_LIST_MAGIC = "# pa"


@dataclass(frozen=True)
class ProcessParams:
    """Static parameters of a run: edges per vertex and master seed."""

    m: int = 1
    seed: int = 0

    def __post_init__(self):
        if int(self.m) < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        rng.check_seed(self.seed)


@dataclass(frozen=True)
class VertexSet:
    """A set of vertices fixed by time t0 (all members born at or before t0)."""

    members: tuple
    t0: int

    def __post_init__(self):
        members = tuple(int(v) for v in self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise ValueError("vertex set must be non-empty")
        if len(set(members)) != len(members):
            raise ValueError("vertex set members must be distinct")
        if min(members) < 1:
            raise ValueError("vertex ids are 1-based")
        if max(members) > self.t0:
            raise ValueError(f"all members must be born by t0={self.t0}")


class PAGraph:
    """A realized attachment graph.

    Internally every graph stores its elementary (m=1) run of length m*n; the
    public edge list and degrees are the merged view at block size m.  The
    j-th merged edge is the j-th elementary edge with both endpoints mapped
    through ceil(./m); merged vertex i throws edges (i-1)m+1 .. im, in that
    order.
    """

    def __init__(self, m, seed, slots, degrees1, targets1, n1, bitgen):
        self.m = int(m)
        self.seed = int(seed)
        self._slots = slots
        self._degrees1 = degrees1
        self._targets1 = targets1
        self._n1 = int(n1)  # completed elementary steps
        self._bitgen = bitgen
        self._merged_degrees = None
        self._dirty = True

    @property
    def n(self) -> int:
        """Number of (merged) vertices."""
        return self._n1 // self.m

    @property
    def edge_count(self) -> int:
        return self._n1

    def edge_arrays(self):
        """(u, v) int64 arrays of the merged edge list, 1-based, u <= v."""
        n1 = self._n1
        v = np.arange(1, n1 + 1, dtype=np.int64)
        u = self._targets1[:n1] + 1
        if self.m > 1:
            u = (u + self.m - 1) // self.m
            v = (v + self.m - 1) // self.m
        else:
            u = u.copy()
        return u, v

    @property
    def edges(self):
        """Merged edge list as (u, v) tuples in creation order."""
        u, v = self.edge_arrays()
        return list(zip(u.tolist(), v.tolist()))

    @property
    def degrees(self) -> np.ndarray:
        """Merged degrees; index i holds the degree of vertex i+1."""
        if self._merged_degrees is None or self._dirty:
            d1 = self._degrees1[: self._n1]
            if self.m == 1:
                self._merged_degrees = d1.copy()
            else:
                self._merged_degrees = d1.reshape(self.n, self.m).sum(axis=1)
            self._dirty = False
        return self._merged_degrees

    def degree(self, v: int) -> int:
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex id {v} out of range 1..{self.n}")
        return int(self.degrees[v - 1])

    def degrees_at(self, t: int) -> np.ndarray:
        """Merged degrees as they stood at (merged) time t."""
        if not 1 <= t <= self.n:
            raise ValueError(f"time {t} out of range 1..{self.n}")
        tau = t * self.m
        d1 = np.bincount(self._targets1[:tau], minlength=tau).astype(np.int64) + 1
        if self.m == 1:
            return d1
        return d1.reshape(t, self.m).sum(axis=1)

    def step(self):
        """Advance the elementary process by one step (m=1 graphs only).

        Mutates the graph in place and returns it.  Continues the generator's
        deterministic stream, so n steps from generate(t, params) reproduce
        generate(t + n, params) exactly.
        """
        if self.m != 1:
            raise ValueError("step() is only supported on elementary (m=1) graphs")
        need = self._n1 + 1
        if len(self._degrees1) < need:
            self._grow(need)
        kernels.pa_extend(self._slots, self._degrees1, self._targets1,
                          self._n1, need, self._bitgen)
        self._n1 = need
        self._dirty = True
        return self

    def _grow(self, need: int):
        cap = max(need, 2 * len(self._degrees1), 16)
        for name, width in (("_slots", 2), ("_degrees1", 1), ("_targets1", 1)):
            old = getattr(self, name)
            new = np.zeros(width * cap, dtype=np.int64)
            new[: len(old)] = old
            setattr(self, name, new)


def generate(n: int, params: ProcessParams) -> PAGraph:
    """Run the process for n vertices at m edges per vertex.

    Equivalent, bit for bit, to merging generate(m*n, m=1, same seed) at block
    size m.  Consumes exactly m*n doubles of the seed's stream.
    """
    if int(n) < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    n1 = int(n) * params.m
    slots = np.zeros(2 * n1, dtype=np.int64)
    degrees1 = np.zeros(n1, dtype=np.int64)
    targets1 = np.zeros(n1, dtype=np.int64)
    bitgen = rng.bit_generator(params.seed)
    kernels.pa_extend(slots, degrees1, targets1, 0, n1, bitgen)
    return PAGraph(params.m, params.seed, slots, degrees1, targets1, n1, bitgen)


def merge_to_m(g: PAGraph, m: int) -> PAGraph:
    """Merged view of an elementary run at block size m.

    Requires g.m == 1 and m dividing g.n.  The result is a frozen snapshot
    (copies the run), so stepping g afterwards does not affect it.
    """
    if g.m != 1:
        raise ValueError("merge_to_m expects an elementary (m=1) graph")
    if int(m) < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if g.n % int(m) != 0:
        raise ValueError(f"n={g.n} is not divisible by m={m}")
    n1 = g._n1
    return PAGraph(m, g.seed, g._slots[: 2 * n1].copy(), g._degrees1[:n1].copy(),
                   g._targets1[:n1].copy(), n1, None)


def degree_of_set(g: PAGraph, s: VertexSet) -> int:
    """Total degree of the set's members in g."""
    if max(s.members) > g.n:
        raise ValueError(f"set member {max(s.members)} out of range 1..{g.n}")
    degrees = g.degrees
    return int(sum(int(degrees[v - 1]) for v in s.members))


def trajectory(n: int, params: ProcessParams, s: VertexSet, checkpoints) -> list:
    """Degrees of the set S at the given checkpoint times of one fresh run.

    Checkpoints must be strictly ascending and lie in [s.t0, n].
    """
    checkpoints = [int(c) for c in checkpoints]
    if not checkpoints:
        raise ValueError("at least one checkpoint is required")
    if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise ValueError("checkpoints must be strictly ascending")
    if checkpoints[0] < s.t0 or checkpoints[-1] > n:
        raise ValueError(f"checkpoints must lie in [{s.t0}, {n}]")
    m = params.m
    n1 = n * m
    slots = np.zeros(2 * n1, dtype=np.int64)
    degrees1 = np.zeros(n1, dtype=np.int64)
    targets1 = np.zeros(n1, dtype=np.int64)
    bitgen = rng.bit_generator(params.seed)
    out = []
    done = 0
    for c in checkpoints:
        kernels.pa_extend(slots, degrees1, targets1, done, c * m, bitgen)
        done = c * m
        total = 0
        for v in s.members:
            base = (v - 1) * m
            total += int(degrees1[base: base + m].sum())
        out.append(total)
    return out


def write_edge_list(g: PAGraph, path) -> None:
    """Plain-text export: header line then one 'u v' pair per edge."""
    u, v = g.edge_arrays()
    with open(path, "w") as fh:
        fh.write(f"{EDGE_LIST_MAGIC} n={g.n} m={g.m} seed={g.seed}\n")
        for a, b in zip(u.tolist(), v.tolist()):
            fh.write(f"{a} {b}\n")


@dataclass
class EdgeListGraph:
    """A graph re-read from an edge-list file; supports the same queries as PAGraph."""

    n: int
    m: int
    seed: int
    edge_u: np.ndarray = field(repr=False)
    edge_v: np.ndarray = field(repr=False)

    def edge_arrays(self):
        return self.edge_u, self.edge_v

    @property
    def edges(self):
        return list(zip(self.edge_u.tolist(), self.edge_v.tolist()))

    @property
    def degrees(self) -> np.ndarray:
        counts = np.bincount(self.edge_u, minlength=self.n + 1)
        counts += np.bincount(self.edge_v, minlength=self.n + 1)
        return counts[1:].astype(np.int64)


def read_edge_list(path) -> EdgeListGraph:
    """Read a graph written by write_edge_list."""
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith(EDGE_LIST_MAGIC):
            raise ValueError(f"not an edge-list file (bad header): {header!r}")
        meta = dict(tok.split("=") for tok in header[len(EDGE_LIST_MAGIC):].split())
        n, m, seed = int(meta["n"]), int(meta["m"]), int(meta["seed"])
        with warnings.catch_warnings():
            # an empty body is reported by the explicit size check below
            warnings.simplefilter("ignore", UserWarning)
            pairs = np.loadtxt(fh, dtype=np.int64, ndmin=2)
    if pairs.size == 0:
        raise ValueError("edge-list file contains no edges")
    if pairs.shape[0] != n * m:
        raise ValueError(f"expected {n * m} edges, found {pairs.shape[0]}")
    return EdgeListGraph(n, m, seed, pairs[:, 0].copy(), pairs[:, 1].copy())
