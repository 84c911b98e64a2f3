"""Two-color urns: DP vs brute force, closed forms, simulation, export."""

import io
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from oracles import dist_to_dict, urn_brute
from pa_lab import rng
from pa_lab.urns import (
    DEGREE_MATRIX,
    POLYA_MATRIX,
    STATE_CAP,
    ReplacementMatrix,
    UrnPmf,
    UrnSpec,
    arbitrary_a0_pmf,
    conditional_degree_pmf,
    degree_pmf,
    easy_case_pmf,
    enumerate_exact,
    enumerate_exact_steps,
    general_triangular_pmf,
    nonalternating_pmf,
    nonalternating_summand,
    polya_2002_pmf,
    simulate,
)
from pa_lab.distributions import conditional_dist, vertex_dist

BALANCED_MATRICES = [
    (1, 1, 0, 2),
    (2, 0, 0, 2),
    (1, 0, 0, 1),
    (3, 1, 2, 2),
    (0, 1, 1, 0),
]


def test_replacement_matrix_parsing_and_flags():
    m = ReplacementMatrix.from_flat("1,1,0,2")
    assert m == DEGREE_MATRIX
    assert m.flat() == "1,1,0,2"
    assert m.is_additive and m.is_balanced and m.is_triangular
    assert m.sigma == 2
    assert POLYA_MATRIX.is_balanced
    with pytest.raises(ValueError):
        ReplacementMatrix.from_flat("1,1,0")
    with pytest.raises(ValueError):
        ReplacementMatrix.from_flat("1,1,0,x")


def test_urn_spec_validation():
    with pytest.raises(ValueError):
        UrnSpec(DEGREE_MATRIX, -1, 2)
    with pytest.raises(ValueError):
        UrnSpec(DEGREE_MATRIX, 0, 0)
    assert UrnSpec(DEGREE_MATRIX, 2, 1).total0 == 3


@pytest.mark.parametrize("matrix", BALANCED_MATRICES)
def test_enumerate_matches_brute_force(matrix):
    spec = UrnSpec(ReplacementMatrix(*matrix), 2, 1)
    for n in (0, 1, 4, 8):
        got = dist_to_dict(enumerate_exact(spec, n))
        assert got == urn_brute(matrix, 2, 1, n), (matrix, n)


@settings(max_examples=60, deadline=None)
@given(
    matrix=st.sampled_from(BALANCED_MATRICES),
    a0=st.integers(min_value=0, max_value=3),
    b0=st.integers(min_value=0, max_value=3),
    n=st.integers(min_value=0, max_value=8),
)
def test_enumerate_matches_brute_force_property(matrix, a0, b0, n):
    if a0 + b0 == 0:
        a0 = 1
    spec = UrnSpec(ReplacementMatrix(*matrix), a0, b0)
    assert dist_to_dict(enumerate_exact(spec, n)) == urn_brute(matrix, a0, b0, n)


def test_enumerate_steps_yields_every_draw_count():
    spec = UrnSpec(DEGREE_MATRIX, 1, 0)
    steps = list(enumerate_exact_steps(spec, 5))
    assert [p.draws for p in steps] == list(range(6))
    for p in steps:
        assert p.total() == 1


def test_enumerate_rejects_unbalanced_subtractive_and_capped():
    with pytest.raises(ValueError):
        enumerate_exact(UrnSpec(ReplacementMatrix(1, 1, 0, 1), 1, 1), 3)
    with pytest.raises(ValueError):
        enumerate_exact(UrnSpec(ReplacementMatrix(-1, 3, 0, 2), 1, 1), 3)
    with pytest.raises(ValueError):
        enumerate_exact(UrnSpec(DEGREE_MATRIX, 1, 0), STATE_CAP)


def test_easy_case_matches_enumeration():
    spec = UrnSpec(DEGREE_MATRIX, 1, 0)
    for n in (1, 2, 7, 20):
        law = dist_to_dict(enumerate_exact(spec, n))
        for k in range(1, n + 3):
            assert easy_case_pmf(n, k) == law.get(k, 0), (n, k)


def test_easy_case_float_tracks_exact():
    for n, k in ((5, 3), (40, 17), (200, 100)):
        assert easy_case_pmf(n, k, "float") == pytest.approx(
            float(easy_case_pmf(n, k)), rel=1e-11
        )


def test_arbitrary_a0_matches_enumeration():
    for a0 in (1, 2, 4):
        spec = UrnSpec(DEGREE_MATRIX, a0, 0)
        for n in (0, 1, 5, 10):
            law = dist_to_dict(enumerate_exact(spec, n))
            got = {
                a0 + k: arbitrary_a0_pmf(n, a0, k)
                for k in range(n + 1)
                if arbitrary_a0_pmf(n, a0, k)
            }
            assert got == law, (a0, n)


def test_polya_2002_matches_enumeration():
    for a0, b0 in ((2, 2), (4, 2), (2, 6), (1, 1)):
        spec = UrnSpec(POLYA_MATRIX, a0, b0)
        for n in (0, 1, 4, 9):
            law = dist_to_dict(enumerate_exact(spec, n))
            got = {
                a0 + 2 * k: polya_2002_pmf(n, a0, b0, k)
                for k in range(n + 1)
                if polya_2002_pmf(n, a0, b0, k)
            }
            assert got == law, (a0, b0, n)


def test_polya_2002_pure_a_urn_is_point_mass():
    assert polya_2002_pmf(6, 2, 0, 6) == 1
    assert polya_2002_pmf(6, 2, 0, 3) == 0


@pytest.mark.parametrize("a0,b0", [(1, 0), (1, 2), (2, 1), (3, 4), (2, 5)])
def test_general_triangular_matches_enumeration_degree_matrix(a0, b0):
    spec = UrnSpec(DEGREE_MATRIX, a0, b0)
    for n in (0, 1, 6, 10):
        law = dist_to_dict(enumerate_exact(spec, n))
        got = {
            a0 + k: general_triangular_pmf(spec, n, k)
            for k in range(n + 1)
            if general_triangular_pmf(spec, n, k)
        }
        assert got == law, (a0, b0, n)


def test_general_triangular_matches_enumeration_diagonal():
    spec = UrnSpec(POLYA_MATRIX, 2, 4)
    law = dist_to_dict(enumerate_exact(spec, 7))
    got = {
        2 + 2 * k: general_triangular_pmf(spec, 7, k)
        for k in range(8)
        if general_triangular_pmf(spec, 7, k)
    }
    assert got == law


def test_general_triangular_is_exact_only():
    with pytest.raises(ValueError):
        general_triangular_pmf(UrnSpec(DEGREE_MATRIX, 1, 0), 3, 1, mode="float")


@pytest.mark.parametrize("a0,b0", [(1, 0), (1, 2), (2, 3), (4, 1)])
def test_nonalternating_matches_enumeration(a0, b0):
    spec = UrnSpec(DEGREE_MATRIX, a0, b0)
    for n in (0, 1, 5, 9):
        law = dist_to_dict(enumerate_exact(spec, n))
        got = {
            a0 + k: nonalternating_pmf(n, a0, b0, k)
            for k in range(n + 1)
            if nonalternating_pmf(n, a0, b0, k)
        }
        assert got == law, (a0, b0, n)


def test_nonalternating_summand_recombines():
    n, a0, b0, k = 7, 2, 3, 3
    total = sum(
        nonalternating_summand(n, a0, b0, k, i) for i in range(k, n + 1)
    )
    assert total == nonalternating_pmf(n, a0, b0, k)


def test_nonalternating_float_close_and_normalized():
    n, a0, b0 = 60, 3, 2
    total = 0.0
    for k in range(n + 1):
        f = nonalternating_pmf(n, a0, b0, k, mode="float")
        e = nonalternating_pmf(n, a0, b0, k)
        assert f == pytest.approx(float(e), rel=1e-10, abs=1e-280)
        total += f
    assert total == pytest.approx(1.0, abs=1e-11)


@pytest.mark.parametrize("t,n", [(1, 1), (1, 6), (3, 9), (7, 7), (5, 12)])
def test_degree_pmf_equals_distribution_dp(t, n):
    law = dist_to_dict(vertex_dist(t, n))
    for k in range(1, n - t + 4):
        assert degree_pmf(n, t, k) == law.get(k, 0), (t, n, k)


@pytest.mark.parametrize("t,d,n", [(1, 1, 5), (3, 2, 9), (4, 7, 10), (5, 9, 11)])
def test_conditional_degree_pmf_equals_distribution_dp(t, d, n):
    law = dist_to_dict(conditional_dist(t, d, n))
    for k in range(d, d + (n - t) + 1):
        assert conditional_degree_pmf(n, t, d, k) == law.get(k, 0), (t, d, n, k)


def test_conditional_degree_pmf_rejects_saturated_start():
    # the urn correspondence needs d <= 2t-1 (the DP itself allows d = 2t)
    with pytest.raises(ValueError):
        conditional_degree_pmf(5, 2, 4, 4)


def test_simulate_deterministic_and_additive_total():
    spec = UrnSpec(DEGREE_MATRIX, 2, 1)
    a1, b1 = simulate(spec, 100, seed=6)
    a2, b2 = simulate(spec, 100, seed=6)
    assert (a1, b1) == (a2, b2)
    assert a1 + b1 == 3 + 100 * 2  # balanced: total grows by sigma per draw
    assert simulate(spec, 0, seed=6) == (2, 1)


def test_simulate_rejects_subtractive():
    spec = UrnSpec(ReplacementMatrix(-1, 3, 0, 2), 2, 1)
    with pytest.raises(ValueError):
        simulate(spec, 5, seed=0)


def test_simulate_frequencies_match_exact_law():
    spec = UrnSpec(DEGREE_MATRIX, 1, 0)
    n, trials = 3, 4000
    law = dist_to_dict(enumerate_exact(spec, n))
    counts = {}
    for i in range(trials):
        a, _ = simulate(spec, n, rng.derive_seed(0, i))
        counts[a] = counts.get(a, 0) + 1
    ks = sorted(law)
    observed = [counts.get(k, 0) for k in ks]
    expected = [float(law[k]) * trials for k in ks]
    assert stats.chisquare(observed, expected).pvalue > 1e-3


def test_from_values_builds_common_denominator():
    spec = UrnSpec(DEGREE_MATRIX, 1, 0)
    pmf = UrnPmf.from_values(
        spec, 2, 2, [Fraction(1, 3), Fraction(1, 2), Fraction(1, 6)], "exact"
    )
    assert pmf.denominator == 6
    assert pmf.numerators == (2, 3, 1)
    assert pmf.prob(3) == Fraction(1, 2)
    assert pmf.prob(99) == 0
    assert pmf.total() == 1


def test_to_csv_exact_and_float():
    spec = UrnSpec(DEGREE_MATRIX, 1, 0)
    buf = io.StringIO()
    enumerate_exact(spec, 2).to_csv(buf)
    assert buf.getvalue() == (
        "# urn matrix=[1,1,0,2] a0=1 b0=0 n=2 mode=exact\n"
        "k,probability\n"
        "1,0/1\n2,1/3\n3,2/3\n"
    )
    fl = UrnPmf.from_values(spec, 1, 2, [0.25, 0.75], "float")
    buf = io.StringIO()
    fl.to_csv(buf)
    assert "2,0.25\n3,0.75\n" in buf.getvalue()
