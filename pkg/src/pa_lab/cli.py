"""Command-line front end with reproducible seeds and machine-readable output.

Usage: pa-lab COMMAND [ACTION] key=value ...

Flags are long-form key=value pairs; a bare --flag means flag=true.  Every
run that writes a file also writes <out>.manifest.json recording the
command, resolved parameters, seed, artifact paths and tool version, so
re-running the recorded command line reproduces the outputs bit for bit.
Seeds default to the PA_LAB_SEED environment variable, then 0.  Exit
codes: 0 completed (check verdicts are data), 1 error, 2 only when
--strict is set and some reported check does not hold.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from pa_lab import __version__, bounds, cliques, distributions, rng, urns
from pa_lab.process import ProcessParams, generate, read_edge_list, write_edge_list
from pa_lab.urns import DEGREE_MATRIX, ReplacementMatrix, UrnPmf, UrnSpec

#: dist defaults to exact rationals up to this horizon, float DP beyond.
AUTO_EXACT_MAX = 500

_USAGE = """\
pa-lab -- preferential attachment laboratory

usage: pa-lab COMMAND [ACTION] key=value ... [--strict]

commands:
  gen       n= [m=1] [seed=] out=            write an edge-list file
  dist      t= n= [d=] [mode=auto] out=      degree pmf CSV (d= conditions on D(t)=d)
  figure    which=left|right out=            multi-column pmf CSV at n=10000
  urn easy-case  n= [mode=exact] [out=]      closed-form pmf of the base urn
  urn pmf        n= a0= b0= [mode=exact] [out=]   closed-form pmf, matrix [1,1,0,2]
  urn enumerate  matrix=a,b,g,d a0= b0= n= [out=] exact pmf by urn DP
  urn simulate   matrix=a,b,g,d a0= b0= n= [trials=1] [seed=] [out=]
  bounds tail        c= n= [mode=float] [out=]
  bounds small       n= [epsilon=0.1] [mode=float] [out=]
  bounds short-lower t= delta= d0= trials= [seed=] [jobs=1] [out=]
  bounds short-upper t= delta= d0= trials= [seed=] [jobs=1] [out=]
  bounds band        t= epsilon= d0= horizon= trials= [seed=] [jobs=1] [out=]
  bounds mean        n= trials= [seed=] [jobs=1] [out=]
  clique find    k= n= [m=2] [seed=] [mode=strict] [t1=] [t2=] [out=]
  clique greedy  graph=FILE | n= [m=2] [seed=]  [out=]
  clique verify  graph=FILE witness=FILE [out=]
  clique success k= n= [m=2] trials= [seed=] [jobs=1] [out=]

Seed defaults to $PA_LAB_SEED, then 0.  bounds/clique write JSON (CSV when
out= ends in .csv for bounds); without out= they print to stdout.  --strict
turns failed check verdicts into exit code 2.
"""


class CLIError(Exception):
    """A violated command-line precondition (reported, exit code 1)."""


@dataclass(frozen=True)
class RunManifest:
    """Reproduction record written alongside every output file."""

    command: str
    parameters: dict
    seed: int
    artifacts: list
    version: str

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "artifacts": [str(p) for p in self.artifacts],
            "version": self.version,
        }

    def write(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")


def _parse_tokens(tokens) -> dict:
    params = {}
    for tok in tokens:
        body = tok[2:] if tok.startswith("--") else tok
        key, _, value = body.partition("=")
        if not key:
            raise CLIError(f"malformed flag {tok!r}")
        if key in params:
            raise CLIError(f"duplicate flag {key}")
        params[key] = value if "=" in body else "true"
    return params


def _pop(params: dict, key: str, default=None, required: bool = False) -> str:
    if key in params:
        return params.pop(key)
    if required:
        raise CLIError(f"missing required flag {key}=")
    return default


def _pop_int(params, key, default=None, required=False, low=None):
    raw = _pop(params, key, required=required)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise CLIError(f"{key}= expects an integer, got {raw!r}") from None
    if low is not None and value < low:
        raise CLIError(f"{key}= must be >= {low}, got {value}")
    return value


def _pop_float(params, key, default=None, required=False):
    raw = _pop(params, key, required=required)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise CLIError(f"{key}= expects a number, got {raw!r}") from None


def _pop_choice(params, key, choices, default=None, required=False):
    raw = _pop(params, key, default=default, required=required)
    if raw is not None and raw not in choices:
        raise CLIError(f"{key}= must be one of {', '.join(choices)}; got {raw!r}")
    return raw


def _pop_bool(params, key, default=False):
    raw = _pop(params, key)
    if raw is None:
        return default
    if raw not in ("true", "false"):
        raise CLIError(f"{key}= must be true or false, got {raw!r}")
    return raw == "true"


def _pop_seed(params) -> int:
    raw = _pop(params, "seed")
    if raw is None:
        raw = os.environ.get("PA_LAB_SEED", "0")
    try:
        seed = int(raw)
    except ValueError:
        raise CLIError(f"seed= expects an integer, got {raw!r}") from None
    rng.check_seed(seed)
    return seed


def _reject_unknown(params: dict) -> None:
    if params:
        raise CLIError(f"unknown flag(s): {', '.join(sorted(params))}")


def _manifest(command, parameters, seed, artifacts) -> None:
    """Write <first-artifact>.manifest.json next to the outputs."""
    primary = artifacts[0]
    manifest = RunManifest(command, parameters, seed, artifacts, __version__)
    manifest.write(f"{primary}.manifest.json")


def _emit_json(obj: dict, out, command, parameters, seed) -> None:
    if out is None:
        print(json.dumps(obj, indent=2))
        return
    with open(out, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
    _manifest(command, parameters, seed, [out])
    print(f"wrote {out}")


# --- commands ---------------------------------------------------------------


def _cmd_gen(action, params) -> bool:
    if action:
        raise CLIError(f"gen takes no action, got {action!r}")
    n = _pop_int(params, "n", required=True, low=1)
    m = _pop_int(params, "m", default=1, low=1)
    seed = _pop_seed(params)
    out = _pop(params, "out", required=True)
    _reject_unknown(params)
    g = generate(n, ProcessParams(m=m, seed=seed))
    write_edge_list(g, out)
    _manifest("gen", {"n": n, "m": m, "seed": seed, "out": str(out)}, seed, [out])
    print(f"wrote {out} ({g.edge_count} edges)")
    return False


def _cmd_dist(action, params) -> bool:
    if action:
        raise CLIError(f"dist takes no action, got {action!r}")
    t = _pop_int(params, "t", required=True, low=1)
    n = _pop_int(params, "n", required=True, low=1)
    d = _pop_int(params, "d")
    mode = _pop_choice(params, "mode", ("auto", "exact", "float"), default="auto")
    out = _pop(params, "out", required=True)
    _reject_unknown(params)
    if mode == "auto":
        mode = "exact" if n <= AUTO_EXACT_MAX else "float"
    if d is None:
        dist = distributions.vertex_dist(t, n, mode)
    else:
        dist = distributions.conditional_dist(t, d, n, mode)
    with open(out, "w") as fh:
        distributions.to_csv(dist, fh)
    parameters = {"t": t, "n": n, "d": d, "mode": mode, "out": str(out)}
    _manifest("dist", parameters, 0, [out])
    print(f"wrote {out} (support {dist.support_min}..{dist.support_max}, {mode})")
    return False


def _urn_pmf_from_values(spec, draws, support_min, values, mode) -> UrnPmf:
    return UrnPmf.from_values(spec, draws, support_min, values, mode)


def _write_urn(pmf: UrnPmf, out, parameters, seed=0) -> None:
    if out is None:
        pmf.to_csv(sys.stdout)
        return
    with open(out, "w") as fh:
        pmf.to_csv(fh)
    _manifest("urn", parameters, seed, [out])
    print(f"wrote {out}")


def _cmd_urn(action, params) -> bool:
    actions = ("easy-case", "pmf", "enumerate", "simulate")
    if action not in actions:
        raise CLIError(f"urn needs an action: {', '.join(actions)}")
    out = _pop(params, "out")
    if action == "easy-case":
        n = _pop_int(params, "n", required=True, low=1)
        mode = _pop_choice(params, "mode", urns.MODES, default="exact")
        _reject_unknown(params)
        spec = UrnSpec(DEGREE_MATRIX, 1, 0)
        values = [urns.easy_case_pmf(n, k, mode) for k in range(2, n + 2)]
        pmf = _urn_pmf_from_values(spec, n, 2, values, mode)
        _write_urn(pmf, out, {"action": action, "n": n, "mode": mode, "out": str(out)})
    elif action == "pmf":
        n = _pop_int(params, "n", required=True, low=0)
        a0 = _pop_int(params, "a0", required=True, low=1)
        b0 = _pop_int(params, "b0", required=True, low=0)
        mode = _pop_choice(params, "mode", urns.MODES, default="exact")
        _reject_unknown(params)
        spec = UrnSpec(DEGREE_MATRIX, a0, b0)
        values = [urns.nonalternating_pmf(n, a0, b0, k, mode) for k in range(n + 1)]
        pmf = _urn_pmf_from_values(spec, n, a0, values, mode)
        parameters = {"action": action, "n": n, "a0": a0, "b0": b0, "mode": mode,
                      "out": str(out)}
        _write_urn(pmf, out, parameters)
    elif action == "enumerate":
        matrix = ReplacementMatrix.from_flat(_pop(params, "matrix", required=True))
        a0 = _pop_int(params, "a0", required=True, low=0)
        b0 = _pop_int(params, "b0", required=True, low=0)
        n = _pop_int(params, "n", required=True, low=0)
        _reject_unknown(params)
        pmf = urns.enumerate_exact(UrnSpec(matrix, a0, b0), n)
        parameters = {"action": action, "matrix": matrix.flat(), "a0": a0,
                      "b0": b0, "n": n, "out": str(out)}
        _write_urn(pmf, out, parameters)
    else:
        matrix = ReplacementMatrix.from_flat(_pop(params, "matrix", required=True))
        a0 = _pop_int(params, "a0", required=True, low=0)
        b0 = _pop_int(params, "b0", required=True, low=0)
        n = _pop_int(params, "n", required=True, low=0)
        trials = _pop_int(params, "trials", default=1, low=1)
        seed = _pop_seed(params)
        _reject_unknown(params)
        spec = UrnSpec(matrix, a0, b0)
        rows = ["trial,a,b"]
        for i in range(trials):
            a, b = urns.simulate(spec, n, rng.derive_seed(seed, i))
            rows.append(f"{i},{a},{b}")
        text = "\n".join(rows) + "\n"
        if out is None:
            sys.stdout.write(text)
        else:
            with open(out, "w") as fh:
                fh.write(text)
            parameters = {"action": action, "matrix": matrix.flat(), "a0": a0,
                          "b0": b0, "n": n, "trials": trials, "seed": seed,
                          "out": str(out)}
            _manifest("urn", parameters, seed, [out])
            print(f"wrote {out}")
    return False


def _write_reports(reports, out, parameters, seed) -> None:
    if out is None:
        bounds.write_reports_json(reports, sys.stdout)
        return
    with open(out, "w") as fh:
        if str(out).endswith(".csv"):
            bounds.write_reports_csv(reports, fh)
        else:
            bounds.write_reports_json(reports, fh)
    _manifest("bounds", parameters, seed, [out])
    print(f"wrote {out}")


def _cmd_bounds(action, params) -> bool:
    actions = ("tail", "small", "short-lower", "short-upper", "band", "mean")
    if action not in actions:
        raise CLIError(f"bounds needs an action: {', '.join(actions)}")
    out = _pop(params, "out")
    jobs = _pop_int(params, "jobs", default=1, low=1)
    seed = 0
    if action == "tail":
        c = _pop_float(params, "c", required=True)
        n = _pop_int(params, "n", required=True, low=1)
        mode = _pop_choice(params, "mode", ("exact", "float"), default="float")
        _reject_unknown(params)
        reports = [bounds.first_vertex_tail(c, n, mode)]
        parameters = {"action": action, "c": c, "n": n, "mode": mode}
    elif action == "small":
        n = _pop_int(params, "n", required=True, low=2)
        epsilon = _pop_float(params, "epsilon", default=0.1)
        mode = _pop_choice(params, "mode", ("exact", "float"), default="float")
        _reject_unknown(params)
        reports = [bounds.small_degree_prob(n, epsilon, mode)]
        parameters = {"action": action, "n": n, "epsilon": epsilon, "mode": mode}
    elif action in ("short-lower", "short-upper"):
        t = _pop_int(params, "t", required=True, low=1)
        delta = _pop_float(params, "delta", required=True)
        d0 = _pop_int(params, "d0", required=True, low=1)
        trials = _pop_int(params, "trials", required=True, low=1)
        seed = _pop_seed(params)
        _reject_unknown(params)
        fn = bounds.short_term_lower if action == "short-lower" else bounds.short_term_upper
        reports = [fn(t, delta, d0, trials, seed, jobs=jobs)]
        parameters = {"action": action, "t": t, "delta": delta, "d0": d0,
                      "trials": trials, "seed": seed, "jobs": jobs}
    elif action == "band":
        t = _pop_int(params, "t", required=True, low=1)
        epsilon = _pop_float(params, "epsilon", required=True)
        d0 = _pop_int(params, "d0", required=True, low=1)
        horizon = _pop_int(params, "horizon", required=True, low=1)
        trials = _pop_int(params, "trials", required=True, low=1)
        seed = _pop_seed(params)
        _reject_unknown(params)
        spec = bounds.BandCheckSpec(t, epsilon, d0, horizon, trials, seed)
        reports = [bounds.band_check(spec, jobs=jobs)]
        parameters = {"action": action, "t": t, "epsilon": epsilon, "d0": d0,
                      "horizon": horizon, "trials": trials, "seed": seed,
                      "jobs": jobs}
    else:
        n = _pop_int(params, "n", required=True, low=1)
        trials = _pop_int(params, "trials", required=True, low=1)
        seed = _pop_seed(params)
        _reject_unknown(params)
        mean, stderr = bounds.mc_first_vertex_mean(n, trials, seed, jobs=jobs)
        oracle = bounds.mean_oracle(n)
        z = (mean - oracle) / stderr if stderr else 0.0
        reports = [bounds.BoundReport(
            name="mc_mean_vs_oracle", measured=mean, bound=oracle,
            holds=abs(z) <= 4.0, method="monte-carlo", trials=trials,
            ci_halfwidth=4.0 * stderr,
            note=f"z={z:.4f}; holds means within 4 standard errors",
        )]
        parameters = {"action": action, "n": n, "trials": trials, "seed": seed,
                      "jobs": jobs}
    parameters["out"] = str(out)
    _write_reports(reports, out, parameters, seed)
    return any(not r.holds for r in reports)


def _load_graph(params):
    graph = _pop(params, "graph")
    if graph is not None:
        for key in ("n", "m"):
            if key in params:
                raise CLIError(f"graph= and {key}= are mutually exclusive")
        return read_edge_list(graph), {"graph": str(graph)}
    n = _pop_int(params, "n", required=True, low=1)
    m = _pop_int(params, "m", default=2, low=1)
    seed = _pop_seed(params)
    g = generate(n, ProcessParams(m=m, seed=seed))
    return g, {"n": n, "m": m, "seed": seed}


def _stats_path(out) -> Path:
    p = Path(out)
    return p.with_name(p.stem + ".stats.json")


def _cmd_clique(action, params) -> bool:
    actions = ("find", "greedy", "verify", "success")
    if action not in actions:
        raise CLIError(f"clique needs an action: {', '.join(actions)}")
    out = _pop(params, "out")
    if action == "find":
        k = _pop_int(params, "k", required=True, low=1)
        n = _pop_int(params, "n", required=True, low=1)
        m = _pop_int(params, "m", default=2, low=1)
        seed = _pop_seed(params)
        mode = _pop_choice(params, "mode", cliques.MODES, default="strict")
        t1 = _pop_int(params, "t1")
        t2 = _pop_int(params, "t2")
        _reject_unknown(params)
        cfg = cliques.FinderConfig(k, mode=mode, t1=t1, t2=t2)
        witness, stats = cliques.find_witness_online(n, m, cfg, seed)
        parameters = {"action": action, "k": k, "n": n, "m": m, "seed": seed,
                      "mode": mode, "t1": cfg.t1, "t2": cfg.t2, "out": str(out)}
        if witness is None:
            payload = {"found": False, "reason": "not found by horizon"}
        else:
            payload = witness.to_json_dict()
        if out is None:
            print(json.dumps(payload, indent=2))
        else:
            if witness is None:
                print(f"not found by horizon (n={n})")
            else:
                print(f"witness found at t={stats.found_at} "
                      f"(principals {list(witness.principals)})")
            with open(out, "w") as fh:
                json.dump(payload, fh, indent=2)
                fh.write("\n")
            stats_path = _stats_path(out)
            with open(stats_path, "w") as fh:
                json.dump(stats.to_dict(), fh, indent=2)
                fh.write("\n")
            _manifest("clique", parameters, seed, [out, stats_path])
            print(f"wrote {out} and {stats_path}")
        return False
    if action == "greedy":
        g, gparams = _load_graph(params)
        _reject_unknown(params)
        witness = cliques.greedy_max_witness(g)
        parameters = {"action": action, **gparams, "out": str(out)}
        if out is not None:
            print(f"greedy witness k={witness.k}")
        _emit_json(witness.to_json_dict(), out, "clique", parameters,
                   gparams.get("seed", 0))
        return False
    if action == "verify":
        graph = _pop(params, "graph", required=True)
        witness_path = _pop(params, "witness", required=True)
        _reject_unknown(params)
        g = read_edge_list(graph)
        with open(witness_path) as fh:
            try:
                witness = cliques.read_witness_json(fh)
            except (KeyError, json.JSONDecodeError) as e:
                raise CLIError(
                    f"{witness_path} is not a witness file ({e})"
                ) from None
        verdict = cliques.verify_witness(g, witness)
        parameters = {"action": action, "graph": str(graph),
                      "witness": str(witness_path), "out": str(out)}
        payload = {"ok": verdict.ok, "diagnostics": list(verdict.diagnostics)}
        _emit_json(payload, out, "clique", parameters, 0)
        return not verdict.ok
    # success
    k = _pop_int(params, "k", required=True, low=1)
    n = _pop_int(params, "n", required=True, low=1)
    m = _pop_int(params, "m", default=2, low=1)
    trials = _pop_int(params, "trials", required=True, low=1)
    seed = _pop_seed(params)
    jobs = _pop_int(params, "jobs", default=1, low=1)
    _reject_unknown(params)
    estimate = cliques.success_probability(n, m, k, trials, seed, jobs=jobs)
    parameters = {"action": action, "k": k, "n": n, "m": m, "trials": trials,
                  "seed": seed, "jobs": jobs, "out": str(out)}
    _emit_json(estimate.to_dict(), out, "clique", parameters, seed)
    return False


def _dense_column(dist, lo: int, size: int) -> np.ndarray:
    column = np.zeros(size, dtype=np.float64)
    i = dist.support_min - lo
    column[i : i + len(dist.dense)] = dist.dense
    return column


#: figure horizon and the two conditioning points of the left panel.
FIGURE_N = 10_000
FIGURE_CONDITIONS = ((100, 18), (1000, 56))
#: right panel: initial segments of s vertices, fixed at time s with total 2s.
FIGURE_SEGMENTS = (1, 20, 50)


def figure_distributions(which: str) -> tuple:
    """(column names, [DegreeDistribution, ...]) for one figure panel."""
    if which == "left":
        names = ["p_uncond", "p_cond100", "p_cond1000"]
        dists = [distributions.vertex_dist(1, FIGURE_N, "float")]
        for t, d in FIGURE_CONDITIONS:
            dists.append(distributions.conditional_dist(t, d, FIGURE_N, "float"))
    elif which == "right":
        names = [f"p_first{s}" for s in FIGURE_SEGMENTS]
        dists = [
            distributions.conditional_dist(s, 2 * s, FIGURE_N, "float")
            for s in FIGURE_SEGMENTS
        ]
    else:
        raise CLIError(f"which= must be left or right, got {which!r}")
    return names, dists


def _cmd_figure(action, params) -> bool:
    if action:
        raise CLIError(f"figure takes no action, got {action!r}")
    which = _pop(params, "which", required=True)
    out = _pop(params, "out", required=True)
    _reject_unknown(params)
    names, dists = figure_distributions(which)
    lo = min(d.support_min for d in dists)
    hi = max(d.support_max for d in dists)
    size = hi - lo + 1
    columns = [_dense_column(d, lo, size) for d in dists]
    with open(out, "w") as fh:
        fh.write("degree," + ",".join(names) + "\n")
        for i in range(size):
            row = ",".join(f"{col[i]:.17g}" for col in columns)
            fh.write(f"{lo + i},{row}\n")
    _manifest("figure", {"which": which, "n": FIGURE_N, "out": str(out)}, 0, [out])
    print(f"wrote {out} ({size} rows)")
    return False


_COMMANDS = {
    "gen": _cmd_gen,
    "dist": _cmd_dist,
    "urn": _cmd_urn,
    "bounds": _cmd_bounds,
    "clique": _cmd_clique,
    "figure": _cmd_figure,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("help", "-h", "--help"):
        print(_USAGE, end="")
        return 0
    command, *rest = argv
    if command not in _COMMANDS:
        print(f"error: unknown command {command!r}; try pa-lab help",
              file=sys.stderr)
        return 1
    action = None
    if rest and "=" not in rest[0] and not rest[0].startswith("--"):
        action = rest[0]
        rest = rest[1:]
    try:
        params = _parse_tokens(rest)
        strict = _pop_bool(params, "strict")
        violations = _COMMANDS[command](action, params)
    except (CLIError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        path = getattr(e, "filename", None)
        detail = e.strerror or str(e)
        print(f"error: {path + ': ' if path else ''}{detail}", file=sys.stderr)
        return 1
    return 2 if strict and violations else 0


if __name__ == "__main__":
    sys.exit(main())
