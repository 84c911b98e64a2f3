"""Pure-Python simulation kernels (fallback backend).

Mirrors pa_lab._kernels: same signatures, same one-double-per-step consumption
from the supplied bit generator, bit-identical results on the same stream.
The compiled backend is preferred at import time when available; this module
keeps everything functional without a C toolchain.
"""

from __future__ import annotations

import numpy as np


def backend_name() -> str:
    return "python"


def pa_extend(slots, degrees, targets, t0: int, t1: int, bitgen) -> None:
    """Advance the one-edge-per-step attachment process from step t0 to t1.

    All vertex ids are 0-based here.  At step t the new vertex t-1 picks a
    uniform endpoint slot among the 2(t-1) committed ones plus its own pending
    stub; picking the stub is the self-loop branch.

    slots   : int64, capacity >= 2*t1; committed endpoint slots, two per edge.
    degrees : int64, capacity >= t1.
    targets : int64, capacity >= t1; targets[t-1] = target of edge t (<= t-1).
    Consumes exactly t1 - t0 doubles.
    """
    if t1 <= t0:
        return
    if len(slots) < 2 * t1 or len(degrees) < t1 or len(targets) < t1:
        raise ValueError("arrays too small for requested extension")
    us = np.random.Generator(bitgen).random(t1 - t0)
    for i in range(t1 - t0):
        t = t0 + 1 + i
        top = 2 * t - 2
        j = int(us[i] * (top + 1))
        if j > top:
            j = top
        target = slots[j] if j < top else t - 1
        slots[top] = target
        slots[top + 1] = t - 1
        degrees[target] += 1
        degrees[t - 1] += 1
        targets[t - 1] = target


def chain_final(d0: int, t0: int, t1: int, bitgen) -> int:
    """Final value at time t1 of the degree chain started at (t0, d0).

    Transition into time t increments with probability d/(2t-1).
    Consumes exactly t1 - t0 doubles.
    """
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    us = np.random.Generator(bitgen).random(t1 - t0)
    d = int(d0)
    t = int(t0)
    for u in us:
        t += 1
        if u * (2 * t - 1) < d:
            d += 1
    return d


def chain_band(d0: int, t0: int, horizon: int, eps: float, bitgen) -> int:
    """First time in (t0, horizon] the chain leaves (1 +- eps)*sqrt(n/t0)*d0, else 0.

    The band is open on both sides; comparisons are done on squared values.
    Early exit on first violation (the trial's stream is not reused after).
    """
    if horizon < t0:
        raise ValueError("horizon must be >= t0")
    us = np.random.Generator(bitgen).random(horizon - t0)
    d = int(d0)
    t = int(t0)
    lo2 = (1.0 - eps) * (1.0 - eps) * d0 * d0 / t0
    hi2 = (1.0 + eps) * (1.0 + eps) * d0 * d0 / t0
    for u in us:
        t += 1
        if u * (2 * t - 1) < d:
            d += 1
        dd = float(d) * float(d)
        if dd <= lo2 * t or dd >= hi2 * t:
            return t
    return 0


def urn_simulate(a0: int, b0: int, alpha: int, beta: int, gamma: int, delta: int,
                 n: int, bitgen):
    """(a, b) after n draws of the additive two-color urn.  Consumes n doubles."""
    us = np.random.Generator(bitgen).random(n)
    a = int(a0)
    b = int(b0)
    for u in us:
        if u * (a + b) < a:
            a += alpha
            b += beta
        else:
            a += gamma
            b += delta
    return a, b
