"""Two-color urn models: simulation, exact enumeration, and closed-form laws.

A draw picks a ball uniformly at random; color A comes back with alpha extra
A-balls and beta B-balls, color B with gamma and delta (replacement matrix
[alpha, beta; gamma, delta]).  Balanced urns grow by the same total sigma on
every draw, so the A-count is a Markov chain on a single integer -- the same
chain a vertex degree follows in the attachment process once (a0, b0) encode
the birth time; degree_pmf and conditional_degree_pmf spell out that map.

Closed forms evaluate exactly (Fraction) or in log-Gamma space (float).
Every Gamma ratio here reduces to a rising factorial, so the exact path
never materializes the sqrt(pi) carried by half-integer Gamma values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from pa_lab import rng
from pa_lab._backend import kernels
from pa_lab.binomial import gbinom, log_comb, log_gbinom, log_rising, rising

MODES = ("exact", "float")
STATE_CAP = 5000
NEGATIVE_SUMMAND_RTOL = 1e-12
_LOG2 = math.log(2.0)


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def _zero(mode: str):
    return Fraction(0) if mode == "exact" else 0.0


def _one(mode: str):
    return Fraction(1) if mode == "exact" else 1.0


@dataclass(frozen=True)
class ReplacementMatrix:
    """Ball replacement rule [alpha, beta; gamma, delta]; row = drawn color."""

    alpha: int
    beta: int
    gamma: int
    delta: int

    @classmethod
    def from_flat(cls, text: str) -> "ReplacementMatrix":
        """Parse 'alpha,beta,gamma,delta', the form printed in CSV headers."""
        parts = [p.strip() for p in str(text).split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected 4 comma-separated entries, got {text!r}")
        return cls(*(int(p) for p in parts))

    def flat(self) -> str:
        return f"{self.alpha},{self.beta},{self.gamma},{self.delta}"

    @property
    def is_additive(self) -> bool:
        """No draw ever removes balls."""
        return min(self.alpha, self.beta, self.gamma, self.delta) >= 0

    @property
    def is_balanced(self) -> bool:
        """Both rows add the same number of balls."""
        return self.alpha + self.beta == self.gamma + self.delta

    @property
    def is_triangular(self) -> bool:
        """Color B never produces color A."""
        return self.gamma == 0

    @property
    def sigma(self) -> int:
        """Per-draw growth of the total, defined for balanced matrices."""
        if not self.is_balanced:
            raise ValueError(f"{self} is not balanced")
        return self.alpha + self.beta


#: Degree urn: A tracks a vertex set's degree, B the rest of the half-edges.
#: An edge into the set adds one endpoint to each side; any other edge adds
#: two half-edges to the rest.
DEGREE_MATRIX = ReplacementMatrix(1, 1, 0, 2)

#: Classical two-per-draw Polya urn; diagonal, so the two colors never mix.
POLYA_MATRIX = ReplacementMatrix(2, 0, 0, 2)


@dataclass(frozen=True)
class UrnSpec:
    """A two-color urn: replacement matrix plus initial counts (a0, b0)."""

    matrix: ReplacementMatrix
    a0: int
    b0: int

    def __post_init__(self):
        if self.a0 < 0 or self.b0 < 0:
            raise ValueError(
                f"initial counts must be non-negative, got ({self.a0}, {self.b0})"
            )
        if self.a0 + self.b0 < 1:
            raise ValueError("the urn must start with at least one ball")

    @property
    def total0(self) -> int:
        return self.a0 + self.b0


@dataclass
class UrnPmf:
    """Law of the A-count after `draws` draws, dense over the support.

    Exact mode: probabilities[i] = numerators[i] / denominator, with the
    denominator the product of the totals seen by each draw, never reduced
    -- two DPs over the same draw schedule share it term by term.  Float
    mode: probabilities[i] = dense[i] in linear space.
    """

    spec: UrnSpec
    draws: int
    support_min: int
    mode: str
    numerators: tuple = None
    denominator: int = 1
    dense: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        _check_mode(self.mode)
        if self.draws < 0:
            raise ValueError(f"draws must be >= 0, got {self.draws}")
        if self.support_min < 0:
            raise ValueError("support_min must be >= 0")
        if self.mode == "exact":
            if self.numerators is None or self.denominator < 1:
                raise ValueError("exact mode needs numerators over a positive denominator")
        elif self.dense is None:
            raise ValueError("float mode needs a dense probability array")

    @classmethod
    def from_values(cls, spec, draws, support_min, values, mode) -> "UrnPmf":
        """Wrap already-computed probabilities (closed-form output) for export."""
        values = list(values)
        if not values:
            raise ValueError("at least one probability is required")
        if _check_mode(mode) == "exact":
            fracs = [Fraction(v) for v in values]
            den = math.lcm(*(f.denominator for f in fracs))
            nums = tuple(int(f * den) for f in fracs)
            return cls(spec, draws, support_min, mode, nums, den)
        return cls(spec, draws, support_min, mode, dense=np.asarray(values, float))

    @property
    def _raw(self):
        return self.numerators if self.mode == "exact" else self.dense

    @property
    def support_max(self) -> int:
        return self.support_min + len(self._raw) - 1

    @property
    def probabilities(self):
        """Tuple of Fractions (exact) or a float array (float mode)."""
        if self.mode == "exact":
            return tuple(Fraction(v, self.denominator) for v in self.numerators)
        return self.dense

    def prob(self, a: int):
        """P[A = a]; zero outside the stored support."""
        if not self.support_min <= a <= self.support_max:
            return _zero(self.mode)
        i = a - self.support_min
        if self.mode == "exact":
            return Fraction(self.numerators[i], self.denominator)
        return float(self.dense[i])

    def total(self):
        """Sum of all stored probabilities (1 up to float drift)."""
        if self.mode == "exact":
            return Fraction(sum(self.numerators), self.denominator)
        return float(np.sum(self.dense))

    def to_csv(self, f) -> None:
        """Write 'k,probability' rows after a comment header with the urn."""
        s = self.spec
        f.write(
            f"# urn matrix=[{s.matrix.flat()}] a0={s.a0} b0={s.b0} "
            f"n={self.draws} mode={self.mode}\n"
        )
        f.write("k,probability\n")
        for i, a in enumerate(range(self.support_min, self.support_max + 1)):
            if self.mode == "exact":
                p = Fraction(self.numerators[i], self.denominator)
                f.write(f"{a},{p.numerator}/{p.denominator}\n")
            else:
                f.write(f"{a},{self.dense[i]:.17g}\n")


def simulate(spec: UrnSpec, n: int, seed: int) -> tuple:
    """One urn trajectory of n draws; returns the final (a, b).

    Consumes one uniform double per draw from the Philox stream keyed by
    (seed,), so compiled and python backends agree bit for bit.
    """
    m = spec.matrix
    if not m.is_additive:
        raise ValueError(f"subtractive urns are unsupported: {m}")
    if n < 0:
        raise ValueError(f"draw count must be >= 0, got {n}")
    rng.check_seed(seed)
    bg = rng.bit_generator(seed)
    return kernels.urn_simulate(
        spec.a0, spec.b0, m.alpha, m.beta, m.gamma, m.delta, n, bg
    )


def enumerate_exact_steps(spec: UrnSpec, n: int):
    """Yield the exact law of the A-count after 0, 1, ..., n draws.

    One forward sweep serves every intermediate draw count, which is what
    the whole-range equivalence checks want.  Balanced additive urns only:
    balance pins the total at total0 + i*sigma before draw i, so the state
    is the A-count alone and P[draw A] = a / (total0 + i*sigma).
    """
    m = spec.matrix
    if not m.is_balanced:
        raise ValueError(f"enumerate_exact needs a balanced urn, got {m}")
    if not m.is_additive:
        raise ValueError(f"subtractive urns are unsupported: {m}")
    if n < 0:
        raise ValueError(f"draw count must be >= 0, got {n}")
    lo, hi = sorted((m.alpha, m.gamma))
    if n * (hi - lo) + 1 > STATE_CAP:
        raise ValueError(
            f"dense DP over {n * (hi - lo) + 1} A-values exceeds the cap {STATE_CAP}"
        )
    sigma = m.sigma
    shift_a = m.alpha - lo
    shift_b = m.gamma - lo
    nums = [1]
    den = 1
    yield UrnPmf(spec, 0, spec.a0, "exact", (1,), 1)
    for i in range(n):
        s = spec.total0 + i * sigma
        amin = spec.a0 + i * lo
        new = [0] * (len(nums) + hi - lo)
        for j, w in enumerate(nums):
            if not w:
                continue
            a = amin + j
            new[j + shift_a] += w * a
            new[j + shift_b] += w * (s - a)
        nums = new
        den *= s
        yield UrnPmf(spec, i + 1, spec.a0 + (i + 1) * lo, "exact", tuple(nums), den)


def enumerate_exact(spec: UrnSpec, n: int) -> UrnPmf:
    """Exact law of the A-count after n draws (dense DP oracle)."""
    pmf = None
    for pmf in enumerate_exact_steps(spec, n):
        pass
    return pmf


def easy_case_pmf(n: int, k: int, mode: str = "exact"):
    """P[A_n = k] for the degree urn grown from a single A ball: ([1,1,0,2],1,0).

    Closed form (k-1)/n * 2^(k-1) * C(2n-k, n-1) / C(2n, n), supported on
    [2, n+1]; float mode assembles it from log-Gamma terms.
    """
    _check_mode(mode)
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not 2 <= k <= n + 1:
        return _zero(mode)
    if mode == "exact":
        return (
            Fraction(k - 1, n)
            * 2 ** (k - 1)
            * gbinom(2 * n - k, n - 1)
            / gbinom(2 * n, n)
        )
    return math.exp(
        math.log(k - 1)
        - math.log(n)
        + (k - 1) * _LOG2
        + log_comb(2 * n - k, n - 1)
        - log_comb(2 * n, n)
    )


def arbitrary_a0_pmf(n: int, a0: int, k_offset: int, mode: str = "exact"):
    """P[A_n = a0 + k_offset] for the pure-A-start degree urn ([1,1,0,2], a0, 0).

    The Gamma-ratio prefactor reduces to rising(1/2, n) / rising(a0/2, n);
    a0 = 1 recovers easy_case_pmf(n, 1 + k_offset).  Support: the first draw
    is forced onto color A, so k_offset runs over [1, n] (n >= 1).
    """
    _check_mode(mode)
    if a0 < 1:
        raise ValueError(f"need a0 >= 1, got {a0}")
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    k = k_offset
    if n == 0:
        return _one(mode) if k == 0 else _zero(mode)
    if not 1 <= k <= n:
        return _zero(mode)
    if mode == "exact":
        pre = rising(Fraction(1, 2), n) / rising(Fraction(a0, 2), n)
        return (
            pre
            * gbinom(k + a0 - 1, k)
            * Fraction(k, n)
            * 2**k
            * gbinom(2 * n - k - 1, n - 1)
            / gbinom(2 * n, n)
        )
    return math.exp(
        log_rising(0.5, n)
        - log_rising(a0 / 2.0, n)
        + log_comb(k + a0 - 1, k)
        + math.log(k)
        - math.log(n)
        + k * _LOG2
        + log_comb(2 * n - k - 1, n - 1)
        - log_comb(2 * n, n)
    )


def polya_2002_pmf(n: int, a0: int, b0: int, k: int, mode: str = "exact"):
    """P[A_n = a0 + 2k] for the diagonal urn ([2,0,0,2], a0, b0).

    Binomial-ratio form C(a0/2+k-1, k) C(b0/2+n-k-1, n-k) / C((a0+b0)/2+n-1, n);
    odd counts put half-integers in the upper indices, which reduce to exact
    rising factorials.  b0 = 0 degenerates to a point mass at k = n.
    """
    _check_mode(mode)
    if a0 < 1 or b0 < 0:
        raise ValueError(f"need a0 >= 1 and b0 >= 0, got a0={a0}, b0={b0}")
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    if not 0 <= k <= n:
        return _zero(mode)
    s0 = a0 + b0
    if mode == "exact":
        half = Fraction(1, 2)
        return (
            gbinom(half * a0 + k - 1, k)
            * gbinom(half * b0 + n - k - 1, n - k)
            / gbinom(half * s0 + n - 1, n)
        )
    return math.exp(
        log_gbinom(a0 / 2.0 + k - 1, k)
        + log_gbinom(b0 / 2.0 + n - k - 1, n - k)
        - log_gbinom(s0 / 2.0 + n - 1, n)
    )


def general_triangular_pmf(
    spec: UrnSpec, n: int, k: int, mode: str = "exact"
) -> Fraction:
    """P[A_n = a0 + k*alpha] for any balanced additive triangular urn, exactly.

    Alternating-sum form: n! / rising(total0/sigma, n) * C(k + a0/alpha - 1, k)
    * sum_i (-1)^i C(k, i) C(n + (b0 - alpha*i)/sigma - 1, n).  Consecutive
    terms cancel almost completely, so float evaluation is refused instead of
    silently losing every significant digit.
    """
    if _check_mode(mode) != "exact":
        raise ValueError("general_triangular_pmf is exact-only (alternating sum)")
    m = spec.matrix
    if not (m.is_balanced and m.is_triangular and m.is_additive):
        raise ValueError(f"need a balanced additive triangular matrix, got {m}")
    if m.alpha < 1 or m.sigma < 1:
        raise ValueError(f"need alpha >= 1 and sigma >= 1, got {m}")
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    if not 0 <= k <= n:
        return Fraction(0)
    sigma = m.sigma
    pre = Fraction(math.factorial(n)) / rising(Fraction(spec.total0, sigma), n)
    head = gbinom(k + Fraction(spec.a0, m.alpha) - 1, k)
    acc = Fraction(0)
    for i in range(k + 1):
        term = gbinom(k, i) * gbinom(n + Fraction(spec.b0 - m.alpha * i, sigma) - 1, n)
        acc = acc - term if i % 2 else acc + term
    return pre * head * acc


def nonalternating_summand(
    n: int, a0: int, b0: int, k_offset: int, i: int, mode: str = "exact"
):
    """Term i of nonalternating_pmf: a product of two probabilities.

    The diagonal urn ([2,0,0,2], a0, b0) decides that i of the n draws land
    on the A side (polya_2002_pmf factor); those i draws then grow a pure
    degree urn ([1,1,0,2], a0, 0) by k_offset (arbitrary_a0_pmf factor).
    """
    return arbitrary_a0_pmf(i, a0, k_offset, mode) * polya_2002_pmf(n, a0, b0, i, mode)


def nonalternating_pmf(n: int, a0: int, b0: int, k_offset: int, mode: str = "exact"):
    """P[A_n = a0 + k_offset] for ([1,1,0,2], a0, b0), summing non-negative terms.

    Splitting the urn into an A-side degree urn inside a diagonal urn turns
    the alternating sum into a mixture, so each summand is a probability
    product and must be >= 0: a negative one (beyond -1e-12 relative, float
    mode) is a transcription bug and raises rather than returning garbage.
    b0 = 0 collapses to arbitrary_a0_pmf: every draw lands on the A side.
    """
    _check_mode(mode)
    if a0 < 1 or b0 < 0:
        raise ValueError(f"need a0 >= 1 and b0 >= 0, got a0={a0}, b0={b0}")
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    k = k_offset
    if n == 0:
        return _one(mode) if k == 0 else _zero(mode)
    if b0 == 0:
        return arbitrary_a0_pmf(n, a0, k, mode)
    if not 0 <= k <= n:
        return _zero(mode)
    indices = (0,) if k == 0 else range(k, n + 1)
    total = _zero(mode)
    peak = 0.0
    for i in indices:
        term = nonalternating_summand(n, a0, b0, k, i, mode)
        if mode == "exact":
            if term < 0:
                raise RuntimeError(
                    f"negative summand {term} at i={i}: formula transcription bug"
                )
        else:
            peak = max(peak, abs(term))
            if term < -NEGATIVE_SUMMAND_RTOL * max(peak, 1e-300):
                raise RuntimeError(
                    f"negative summand {term:g} at i={i}: formula transcription bug"
                )
            term = max(term, 0.0)
        total += term
    return total


def degree_pmf(n: int, t: int, k: int, mode: str = "exact"):
    """P[d_1^n(v_t) = k]: the degree of v_t at time n via the urn embedding.

    From its birth step on, the degree of v_t moves exactly like the A-count
    of ([1,1,0,2], 1, 2t-2) -- the birth draw happens at total 2t-1 -- so
    this is nonalternating_pmf(n-t+1, 1, 2t-2, k-1).
    """
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    return nonalternating_pmf(n - t + 1, 1, 2 * t - 2, k - 1, mode)


def conditional_degree_pmf(n: int, t: int, d: int, k: int, mode: str = "exact"):
    """P[D(n) = k | D(t) = d] for a set holding total degree d at time t.

    Conditioning at time t leaves the urn ([1,1,0,2], d, 2t+1-d) run for
    n-t draws: its first draw happens at total 2t+1 = 2(t+1)-1, which is
    the chain's transition into time t+1.
    """
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    if not 1 <= d <= 2 * t - 1:
        raise ValueError(f"need 1 <= d <= 2t-1 = {2 * t - 1}, got d={d}")
    return nonalternating_pmf(n - t, d, 2 * t + 1 - d, k - d, mode)
