"""Tail and concentration checks for the degree chain, exact and Monte Carlo.

Every check returns a BoundReport pairing a measured probability with its
theoretical bound.  Exact probabilities come from the degree-chain DP;
Monte Carlo ones from independent conditional-chain trials, each trial on
its own Philox stream keyed by (seed, trial index), so aggregates are
bit-identical under any job count or completion order.  Monte Carlo
verdicts are one-sided conservative: holds means measured is within the
bound after adding a 99% Wilson half-width.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

from pa_lab import rng
from pa_lab._backend import kernels
from pa_lab.binomial import gbinom, log_comb
from pa_lab.distributions import tail_prob, vertex_dist

#: Normal quantile for a 99% two-sided Wilson interval.
Z99 = 2.5758293035489004


@dataclass(frozen=True)
class BoundReport:
    """One measured-versus-bound comparison.

    For upper-bound checks holds means measured <= bound + ci_halfwidth;
    small_degree_prob reverses the direction (and says so in note).
    ci_halfwidth and trials are 0 for exact methods.
    """

    name: str
    measured: float
    bound: float
    holds: bool
    method: str
    trials: int = 0
    ci_halfwidth: float = 0.0
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def wilson_interval(successes: int, trials: int, z: float = Z99) -> tuple:
    """Wilson score interval for a binomial proportion, clamped to [0, 1]."""
    if not 0 <= successes <= trials or trials < 1:
        raise ValueError(f"need 0 <= successes <= trials, got {successes}/{trials}")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def wilson_halfwidth(successes: int, trials: int, z: float = Z99) -> float:
    """Half-width of the (unclamped) Wilson interval."""
    p = successes / trials
    denom = 1.0 + z * z / trials
    return z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom


def _run_trials(trial_fn, trials: int, seed: int, jobs: int = 1) -> tuple:
    """Componentwise sums of trial_fn(bitgen) over per-trial streams.

    Trial i draws from the Philox stream keyed by (seed, i) and returns a
    tuple of integers; summing integers keeps the aggregate identical for
    any job count or completion order.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng.check_seed(seed)

    def run_range(lo, hi):
        acc = None
        for i in range(lo, hi):
            out = trial_fn(rng.bit_generator(seed, i))
            acc = out if acc is None else tuple(x + y for x, y in zip(acc, out))
        return acc

    jobs = max(1, min(int(jobs), trials))
    if jobs == 1:
        return run_range(0, trials)
    edges = [trials * j // jobs for j in range(jobs + 1)]
    acc = None
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        for part in ex.map(run_range, edges[:-1], edges[1:]):
            acc = part if acc is None else tuple(x + y for x, y in zip(acc, part))
    return acc


def first_vertex_tail(c: float, n: int, mode: str = "float") -> BoundReport:
    """Compare the exact tail P[d_1^n(v_1) > c*sqrt(n)] against e^(-c^2/4).

    The DP gives the exact tail (to float precision in float mode); the
    bound is the claimed n-free ceiling of that tail.
    """
    if c <= 0:
        raise ValueError(f"c must be > 0, got {c}")
    dist = vertex_dist(1, n, mode)
    measured = float(tail_prob(dist, c * math.sqrt(n)))
    bound = math.exp(-c * c / 4.0)
    return BoundReport(
        name=f"first_vertex_tail(c={c}, n={n})",
        measured=measured,
        bound=bound,
        holds=measured <= bound,
        method="exact",
        note=f"dp={mode}",
    )


def small_degree_prob(n: int, epsilon: float, mode: str = "float") -> BoundReport:
    """Check the lower bound P[d_1^n(v_1) <= epsilon*sqrt(n)] >= 1/n.

    Direction is reversed relative to the other reports: the claim is that
    small degrees are not too unlikely, so holds means measured >= bound.
    The claim is asymptotic (valid above some threshold depending on
    epsilon); callers sweeping n keep the smallest n where it holds.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    dist = vertex_dist(1, n, mode)
    measured = 1.0 - float(tail_prob(dist, epsilon * math.sqrt(n)))
    bound = 1.0 / n
    return BoundReport(
        name=f"small_degree_prob(eps={epsilon}, n={n})",
        measured=measured,
        bound=bound,
        holds=measured >= bound,
        method="exact",
        note=f"direction=lower-bound; dp={mode}",
    )


def _check_short_term(t: int, delta: float, d0: int, upper: bool) -> None:
    if upper:
        if not 0.0 < delta <= math.exp(-2):
            raise ValueError(f"need 0 < delta <= e^-2, got {delta}")
    elif not 0.0 < delta < 1.0:
        raise ValueError(f"need 0 < delta < 1, got {delta}")
    if t < 2.0 / (delta * delta):
        raise ValueError(f"need t >= 2/delta^2 = {2.0 / (delta * delta):.6g}, got {t}")
    if not 1 <= d0 <= 2 * t:
        raise ValueError(f"need 1 <= d0 <= 2t = {2 * t}, got {d0}")


def short_term_lower(
    t: int, delta: float, d0: int, trials: int, seed: int, jobs: int = 1
) -> BoundReport:
    """Frequency of D((1+delta)t) <= (1 + delta/2 - 2 delta^2) d0 vs e^(-delta^3 d0/16).

    Trials run the conditional chain from D(t) = d0 to floor((1+delta)t);
    the event is the short-horizon lower escape the claimed bound covers.
    """
    _check_short_term(t, delta, d0, upper=False)
    n_end = math.floor((1.0 + delta) * t)
    threshold = (1.0 + delta / 2.0 - 2.0 * delta * delta) * d0
    (hits,) = _run_trials(
        lambda bg: (int(kernels.chain_final(d0, t, n_end, bg) <= threshold),),
        trials,
        seed,
        jobs,
    )
    measured = hits / trials
    bound = math.exp(-(delta**3) * d0 / 16.0)
    ci = wilson_halfwidth(hits, trials)
    return BoundReport(
        name=f"short_term_lower(t={t}, delta={delta}, d0={d0})",
        measured=measured,
        bound=bound,
        holds=measured <= bound + ci,
        method="monte-carlo",
        trials=trials,
        ci_halfwidth=ci,
    )


def short_term_upper(
    t: int, delta: float, d0: int, trials: int, seed: int, jobs: int = 1
) -> BoundReport:
    """Frequency of D((1+delta)t) >= (1 + delta/2 + 2 delta^2) d0 vs ln(2et) e^(-delta^3 d0/8).

    Mirror of short_term_lower for the upper escape; the bound carries the
    claimed ln(2et) factor, which often exceeds 1 at desk scale.
    """
    _check_short_term(t, delta, d0, upper=True)
    n_end = math.floor((1.0 + delta) * t)
    threshold = (1.0 + delta / 2.0 + 2.0 * delta * delta) * d0
    (hits,) = _run_trials(
        lambda bg: (int(kernels.chain_final(d0, t, n_end, bg) >= threshold),),
        trials,
        seed,
        jobs,
    )
    measured = hits / trials
    bound = (1.0 + math.log(2.0 * t)) * math.exp(-(delta**3) * d0 / 8.0)
    ci = wilson_halfwidth(hits, trials)
    note = "bound exceeds 1 (vacuous at this scale)" if bound >= 1.0 else ""
    return BoundReport(
        name=f"short_term_upper(t={t}, delta={delta}, d0={d0})",
        measured=measured,
        bound=bound,
        holds=measured <= bound + ci,
        method="monte-carlo",
        trials=trials,
        ci_halfwidth=ci,
        note=note,
    )


@dataclass(frozen=True)
class BandCheckSpec:
    """Parameters of one multiplicative-band concentration experiment.

    The experiment conditions on D(t) = d0 and watches whether the chain
    stays strictly inside (1 +- epsilon) sqrt(n/t) d0 for every n up to the
    horizon.
    """

    t: int
    epsilon: float
    d0: int
    horizon: int
    trials: int
    seed: int

    def __post_init__(self):
        if self.t < 1:
            raise ValueError(f"t must be >= 1, got {self.t}")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if not 1 <= self.d0 <= 2 * self.t:
            raise ValueError(f"need 1 <= d0 <= 2t = {2 * self.t}, got {self.d0}")
        if self.horizon < self.t:
            raise ValueError(f"horizon must be >= t, got {self.horizon} < {self.t}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        rng.check_seed(self.seed)

    @property
    def meets_precondition(self) -> bool:
        """True when (epsilon, t) sit in the claimed bound's stated range."""
        return self.epsilon <= 1.0 / 40.0 and self.t > self.epsilon**-6


def band_check(spec: BandCheckSpec, jobs: int = 1) -> BoundReport:
    """Fraction of conditional runs that leave the band by the horizon.

    measured is the violation frequency (the event the claimed bound covers);
    in-band frequency is 1 - measured.  The claimed failure bound
    2 ln(2et) eps^-6 exp(-eps^15 1e-24 d0) is reported as context only --
    at desk scale it is vacuous, so the meaningful signal is how the
    violation frequency falls as d0 grows.
    """
    (violations,) = _run_trials(
        lambda bg: (
            int(
                kernels.chain_band(spec.d0, spec.t, spec.horizon, spec.epsilon, bg) != 0
            ),
        ),
        spec.trials,
        spec.seed,
        jobs,
    )
    measured = violations / spec.trials
    bound = (
        2.0
        * math.log(2.0 * math.e * spec.t)
        * spec.epsilon**-6
        * math.exp(-(spec.epsilon**15) * 1e-24 * spec.d0)
    )
    ci = wilson_halfwidth(violations, spec.trials)
    notes = []
    if not spec.meets_precondition:
        notes.append("precondition relaxed: the claimed range is epsilon <= 1/40, t > epsilon^-6")
    if bound >= 1.0:
        notes.append("bound exceeds 1 (vacuous at this scale)")
    return BoundReport(
        name=(
            f"band_check(t={spec.t}, eps={spec.epsilon}, d0={spec.d0}, "
            f"horizon={spec.horizon})"
        ),
        measured=measured,
        bound=bound,
        holds=measured <= bound + ci,
        method="monte-carlo",
        trials=spec.trials,
        ci_halfwidth=ci,
        note="; ".join(notes),
    )


def mean_oracle(n: int) -> float:
    """E[d_1^n(v_1)] = 4^n / C(2n, n), evaluated in log space.

    Independent of the DP: the chain's one-step conditional mean multiplies
    by (2t)/(2t-1), and the product telescopes.  Grows like sqrt(pi n).
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return math.exp(n * math.log(4.0) - log_comb(2 * n, n))


def mean_oracle_exact(n: int) -> Fraction:
    """Exact rational value of mean_oracle, for small n."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return Fraction(4**n) / gbinom(2 * n, n)


def mc_first_vertex_mean(n: int, trials: int, seed: int, jobs: int = 1) -> tuple:
    """Monte Carlo (mean, stderr) of d_1^n(v_1) over independent chain runs."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")

    def trial(bg):
        d = kernels.chain_final(2, 1, n, bg)
        return d, d * d

    s1, s2 = _run_trials(trial, trials, seed, jobs)
    mean = s1 / trials
    if trials == 1:
        return mean, float("inf")
    var = (s2 - s1 * s1 / trials) / (trials - 1)
    return mean, math.sqrt(max(var, 0.0) / trials)


def write_reports_json(reports, f) -> None:
    """JSON array of report objects (all fields)."""
    json.dump([r.to_dict() for r in reports], f, indent=2)
    f.write("\n")


def write_reports_csv(reports, f) -> None:
    """One-line-per-report CSV summary."""
    writer = csv.writer(f)
    writer.writerow(
        ["name", "measured", "bound", "holds", "method", "trials", "ci_halfwidth", "note"]
    )
    for r in reports:
        writer.writerow(
            [r.name, f"{r.measured:.10g}", f"{r.bound:.10g}", r.holds, r.method,
             r.trials, f"{r.ci_halfwidth:.6g}", r.note]
        )
