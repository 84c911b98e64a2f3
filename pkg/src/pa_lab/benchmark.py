"""Timing comparison of the compiled and pure-python kernels.

Run as:  python -m pa_lab.benchmark [scale=1.0] [seed=0]

Each hot kernel runs the same seeded workload on both backends; the report
shows wall times, the speedup, and whether the outputs are identical
(they must be -- both backends consume the same Philox double stream).
scale= multiplies every workload size.
"""

from __future__ import annotations

import sys
from time import perf_counter

import numpy as np

from pa_lab import _kernels_py, rng

try:
    from pa_lab import _kernels
except ImportError:
    _kernels = None


def _bench_pa_extend(kern, n, seed):
    slots = np.zeros(2 * n, dtype=np.int64)
    degrees1 = np.zeros(n, dtype=np.int64)
    targets1 = np.zeros(n, dtype=np.int64)
    kern.pa_extend(slots, degrees1, targets1, 0, n, rng.bit_generator(seed))
    return targets1.tolist()


def _bench_chain_final(kern, trials, seed):
    out = []
    for i in range(trials):
        out.append(kern.chain_final(20, 1000, 3000, rng.bit_generator(seed, i)))
    return out


def _bench_chain_band(kern, trials, seed):
    out = []
    for i in range(trials):
        out.append(kern.chain_band(80, 200, 10_000, 0.3, rng.bit_generator(seed, i)))
    return out


def _bench_urn_simulate(kern, n, seed):
    return kern.urn_simulate(1, 0, 1, 1, 0, 2, n, rng.bit_generator(seed))


def _workloads(scale, seed):
    def sized(base):
        return max(1, int(base * scale))

    return [
        ("pa_extend", sized(200_000),
         lambda k, n=sized(200_000): _bench_pa_extend(k, n, seed)),
        ("chain_final", sized(2_000),
         lambda k, t=sized(2_000): _bench_chain_final(k, t, seed)),
        ("chain_band", sized(300),
         lambda k, t=sized(300): _bench_chain_band(k, t, seed)),
        ("urn_simulate", sized(2_000_000),
         lambda k, n=sized(2_000_000): _bench_urn_simulate(k, n, seed)),
    ]


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    scale, seed = 1.0, 0
    for tok in argv:
        key, _, value = tok.partition("=")
        if key == "scale":
            scale = float(value)
        elif key == "seed":
            seed = int(value)
        else:
            print(f"error: unknown flag {tok!r} (use scale=, seed=)",
                  file=sys.stderr)
            return 1
    if _kernels is None:
        print("compiled backend not importable; timing python backend only")
    header = f"{'kernel':<22}{'size':>10}{'python':>12}{'compiled':>12}{'speedup':>10}  identical"
    print(header)
    print("-" * len(header))
    for name, size, run in _workloads(scale, seed):
        t0 = perf_counter()
        py_out = run(_kernels_py)
        py_t = perf_counter() - t0
        if _kernels is None:
            print(f"{name:<22}{size:>10,}{py_t:>11.3f}s{'-':>12}{'-':>10}  -")
            continue
        t0 = perf_counter()
        c_out = run(_kernels)
        c_t = perf_counter() - t0
        same = "yes" if py_out == c_out else "NO"
        speedup = py_t / c_t if c_t > 0 else float("inf")
        print(f"{name:<22}{size:>10,}{py_t:>11.3f}s{c_t:>11.3f}s{speedup:>9.1f}x  {same}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
