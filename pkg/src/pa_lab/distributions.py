"""Exact and floating-point degree distributions of the attachment process.

The degree of a fixed vertex set evolves as a Markov chain: the transition
into time t raises the degree by one with probability d/(2t-1) and keeps it
otherwise.  forward_dp pushes a whole distribution through that recurrence.

Exact mode stores integer numerators over the common denominator
prod(2t-1), which the DP never reduces; float mode stores linear-space
probabilities with periodic renormalization (drift is logged and hard-fails
beyond 1e-9) and clamps entries below 1e-300 to zero, reporting the clamped
total.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

logger = logging.getLogger(__name__)

MODES = ("exact", "float")
EXACT_TIME_CAP = 2000
FLOAT_DRIFT_LIMIT = 1e-9
FLOAT_CLAMP = 1e-300
_RENORM_EVERY = 512


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


@dataclass
class DegreeDistribution:
    """Law of a set's degree at a fixed time, on a dense integer support.

    Exact mode: probabilities[i] = numerators[i] / denominator.
    Float mode: probabilities[i] = dense[i] (linear space).
    """

    time: int
    support_min: int
    mode: str
    numerators: list = None
    denominator: int = 1
    dense: np.ndarray = field(default=None, repr=False)
    clamp_total: float = 0.0

    def __post_init__(self):
        _check_mode(self.mode)
        if self.time < 1:
            raise ValueError(f"time must be >= 1, got {self.time}")
        if self.support_min < 0:
            raise ValueError("support_min must be >= 0")

    @property
    def support_max(self) -> int:
        return self.support_min + len(self._raw) - 1

    @property
    def _raw(self):
        return self.numerators if self.mode == "exact" else self.dense

    @property
    def probabilities(self):
        """Tuple of Fractions (exact) or a float array (float mode)."""
        if self.mode == "exact":
            return tuple(Fraction(v, self.denominator) for v in self.numerators)
        return self.dense

    def prob(self, k: int):
        """P[D = k]; zero outside the stored support."""
        if not self.support_min <= k <= self.support_max:
            return Fraction(0) if self.mode == "exact" else 0.0
        i = k - self.support_min
        if self.mode == "exact":
            return Fraction(self.numerators[i], self.denominator)
        return float(self.dense[i])

    def total(self):
        if self.mode == "exact":
            return Fraction(sum(self.numerators), self.denominator)
        return float(self.dense.sum())


def point_mass(d: int, t: int, mode: str = "exact") -> DegreeDistribution:
    """Distribution concentrated at degree d at time t."""
    _check_mode(mode)
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    if mode == "exact":
        return DegreeDistribution(t, d, "exact", numerators=[1], denominator=1)
    return DegreeDistribution(t, d, "float", dense=np.array([1.0]))


def birth_law(t: int, mode: str = "exact") -> DegreeDistribution:
    """Law of the degree of vertex v_t right after its own step.

    Self-loop (degree 2) with probability 1/(2t-1), else degree 1; v_1 always
    self-loops.
    """
    _check_mode(mode)
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if t == 1:
        return point_mass(2, 1, mode)
    w = 2 * t - 1
    if mode == "exact":
        return DegreeDistribution(t, 1, "exact", numerators=[w - 1, 1], denominator=w)
    return DegreeDistribution(t, 1, "float", dense=np.array([(w - 1) / w, 1 / w]))


def forward_dp(initial: DegreeDistribution, n: int) -> DegreeDistribution:
    """Law at time n of the degree chain started from `initial`.

    Requires initial.support_max <= 2 * initial.time (no set can exceed twice
    its fixing time in total degree) and, in exact mode, n within the
    big-rational envelope (n <= 2000).
    """
    t0 = initial.time
    if n < t0:
        raise ValueError(f"target time {n} is before the initial time {t0}")
    if initial.support_max > 2 * t0:
        raise ValueError(
            f"initial support extends to {initial.support_max} > 2*t0 = {2 * t0}")
    if initial.mode == "exact":
        if n > EXACT_TIME_CAP:
            raise ValueError(
                f"exact mode supports n <= {EXACT_TIME_CAP}; use float mode for n={n}")
        return _forward_exact(initial, n)
    return _forward_float(initial, n)


def _forward_exact(initial: DegreeDistribution, n: int) -> DegreeDistribution:
    lo = initial.support_min
    num = list(initial.numerators)
    den = initial.denominator
    for t in range(initial.time + 1, n + 1):
        w = 2 * t - 1
        top = lo + len(num) - 1
        new = [0] * (len(num) + 1)
        for i, v in enumerate(num):
            if v:
                x = lo + i
                new[i] += v * (w - x)
                new[i + 1] += v * x
        num = new
        den *= w
    return DegreeDistribution(n, lo, "exact", numerators=num, denominator=den)


def _forward_float(initial: DegreeDistribution, n: int) -> DegreeDistribution:
    t0 = initial.time
    lo = initial.support_min
    steps = n - t0
    p = np.zeros(len(initial.dense) + steps)
    p[: len(initial.dense)] = initial.dense
    xval = np.arange(lo, lo + len(p), dtype=np.float64)
    cur = len(initial.dense)
    clamp_total = float(initial.clamp_total)
    since_renorm = 0
    for t in range(t0 + 1, n + 1):
        w = float(2 * t - 1)
        up = p[:cur] * (xval[:cur] / w)
        p[:cur] -= up
        p[1: cur + 1] += up
        cur += 1
        since_renorm += 1
        if since_renorm >= _RENORM_EVERY or t == n:
            seg = p[:cur]
            total = float(seg.sum())
            drift = abs(total - 1.0)
            if drift > FLOAT_DRIFT_LIMIT:
                raise RuntimeError(
                    f"float DP drift {drift:.3e} exceeds {FLOAT_DRIFT_LIMIT} at time {t}")
            logger.debug("float DP drift %.3e at time %d", drift, t)
            seg /= total
            tiny = (seg != 0.0) & (seg < FLOAT_CLAMP)
            if tiny.any():
                clamp_total += float(seg[tiny].sum())
                seg[tiny] = 0.0
            since_renorm = 0
    return DegreeDistribution(n, lo, "float", dense=p, clamp_total=clamp_total)


def vertex_dist(t: int, n: int, mode: str = "exact") -> DegreeDistribution:
    """Law of the degree of vertex v_t at time n >= t."""
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    return forward_dp(birth_law(t, mode), n)


def conditional_dist(t: int, d: int, n: int, mode: str = "exact") -> DegreeDistribution:
    """Law of a set's degree at time n given degree d at time t."""
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    if not 1 <= d <= 2 * t:
        raise ValueError(f"need 1 <= d <= 2t = {2 * t}, got d={d}")
    return forward_dp(point_mass(d, t, mode), n)


def tail_prob(dist: DegreeDistribution, threshold):
    """P[D > threshold] for a real threshold."""
    kmin = math.floor(threshold) + 1
    if kmin <= dist.support_min:
        return dist.total()
    i = kmin - dist.support_min
    if dist.mode == "exact":
        return Fraction(sum(dist.numerators[i:]), dist.denominator)
    return float(dist.dense[i:].sum())


def moments(dist: DegreeDistribution):
    """(mean, variance); Fractions in exact mode, floats in float mode."""
    if dist.mode == "exact":
        ks = range(dist.support_min, dist.support_max + 1)
        m1 = Fraction(sum(k * v for k, v in zip(ks, dist.numerators)), dist.denominator)
        m2 = Fraction(sum(k * k * v for k, v in zip(ks, dist.numerators)),
                      dist.denominator)
        return m1, m2 - m1 * m1
    ks = np.arange(dist.support_min, dist.support_max + 1, dtype=np.float64)
    m1 = float(np.dot(ks, dist.dense))
    m2 = float(np.dot(ks * ks, dist.dense))
    return m1, m2 - m1 * m1


def to_csv(dist: DegreeDistribution, fh) -> None:
    """Write 'degree,probability' rows; exact rationals rendered as num/den."""
    fh.write("degree,probability\n")
    if dist.mode == "exact":
        for k, p in zip(range(dist.support_min, dist.support_max + 1),
                        dist.probabilities):
            fh.write(f"{k},{p.numerator}/{p.denominator}\n")
    else:
        for k, p in zip(range(dist.support_min, dist.support_max + 1), dist.dense):
            fh.write(f"{k},{p:.17g}\n")
