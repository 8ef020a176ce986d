"""Statistics tests: paper-anchored goldens plus exact-enumeration oracles.

The Fisher oracle enumerates every table with the observed margins using
integer binomial coefficients and exact fractions; the z-test oracle uses
an independently coded normal CDF.
"""
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgascene.stats import (
    ContingencySummary, achieved_power, effect_sizes, fisher_exact_two_sided,
    odds_ratio, power_two_prop, relative_risk, sign_test, two_prop_ztest,
    wilson_ci,
)


def oracle_fisher_two_sided(a, n_a, b, n_b):
    """Exact rational probability-mass Fisher p for small tables."""
    m = a + b
    total = n_a + n_b
    denom = math.comb(total, m)
    pmf = {}
    for k in range(max(0, m - n_b), min(n_a, m) + 1):
        pmf[k] = Fraction(math.comb(n_a, k) * math.comb(n_b, m - k), denom)
    observed = pmf[a]
    return float(sum(p for p in pmf.values() if p <= observed))


def oracle_normal_cdf(x):
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


# -- Wilson -----------------------------------------------------------------

def test_wilson_paper_goldens():
    lo, hi = wilson_ci(108, 120)
    assert (100 * lo, 100 * hi) == pytest.approx((83.3, 94.2), abs=0.1)
    lo, hi = wilson_ci(100, 100)
    assert (100 * lo, 100 * hi) == pytest.approx((96.3, 100.0), abs=0.1)
    lo, hi = wilson_ci(117, 120)
    assert (100 * lo, 100 * hi) == pytest.approx((92.9, 99.1), abs=0.1)
    lo, hi = wilson_ci(120, 120)
    assert (100 * lo, 100 * hi) == pytest.approx((96.9, 100.0), abs=0.1)
    lo, hi = wilson_ci(18, 18)
    assert (100 * lo, 100 * hi) == pytest.approx((82.4, 100.0), abs=0.1)


def test_wilson_boundaries():
    lo, hi = wilson_ci(0, 1)
    assert lo == 0.0
    lo, hi = wilson_ci(1, 1)
    assert hi == 1.0
    with pytest.raises(ValueError):
        wilson_ci(1, 0)
    with pytest.raises(ValueError):
        wilson_ci(5, 3)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 200), st.integers(1, 200))
def test_wilson_contains_point_estimate(successes, n):
    successes = min(successes, n)
    lo, hi = wilson_ci(successes, n)
    assert 0.0 <= lo <= successes / n <= hi <= 1.0


# -- Fisher -----------------------------------------------------------------

@pytest.mark.parametrize("a,na,b,nb,expected", [
    (45, 100, 24, 100, 0.0028),
    (42, 100, 24, 100, 0.0103),
    (44, 100, 24, 100, 0.0044),
    (45, 100, 42, 100, 0.7755),
    (9, 20, 5, 20, 0.3203),
])
def test_fisher_paper_goldens(a, na, b, nb, expected):
    p = fisher_exact_two_sided(ContingencySummary(a, na, b, nb))
    assert p == pytest.approx(expected, abs=0.0005)


def test_fisher_identical_rates_is_one():
    assert fisher_exact_two_sided(ContingencySummary(9, 20, 9, 20)) == pytest.approx(1.0)


def test_fisher_ablation_golden():
    # 100% vs 80% on 50 per arm
    p = fisher_exact_two_sided(ContingencySummary(50, 50, 40, 50))
    assert p == pytest.approx(0.0012, abs=0.0005)


def test_fisher_in_unit_interval():
    assert 0 < fisher_exact_two_sided(ContingencySummary(0, 5, 5, 5)) <= 1.0


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 30), st.integers(1, 30), st.data())
def test_fisher_matches_exact_enumeration(n_a, n_b, data):
    a = data.draw(st.integers(0, n_a))
    b = data.draw(st.integers(0, n_b))
    got = fisher_exact_two_sided(ContingencySummary(a, n_a, b, n_b))
    want = oracle_fisher_two_sided(a, n_a, b, n_b)
    assert got == pytest.approx(want, abs=1e-9)


def test_contingency_validation():
    with pytest.raises(ValueError):
        ContingencySummary(5, 0, 1, 10)
    with pytest.raises(ValueError):
        ContingencySummary(11, 10, 1, 10)
    with pytest.raises(ValueError):
        ContingencySummary(-1, 10, 1, 10)


# -- two-proportion z -----------------------------------------------------------

def test_ztest_sequence_fidelity_golden():
    result = two_prop_ztest(ContingencySummary(117, 120, 108, 120))
    assert result.p_two_sided == pytest.approx(0.016, abs=0.001)
    assert result.diff_pp == pytest.approx(7.5, abs=1e-9)
    assert result.ci_pp[0] == pytest.approx(1.4, abs=0.1)
    assert result.ci_pp[1] == pytest.approx(13.6, abs=0.1)


def test_ztest_identical_counts():
    result = two_prop_ztest(ContingencySummary(40, 100, 40, 100))
    assert result.diff_pp == 0.0
    assert result.p_two_sided == pytest.approx(1.0)


def test_ztest_symmetry():
    ab = two_prop_ztest(ContingencySummary(50, 100, 40, 100))
    ba = two_prop_ztest(ContingencySummary(40, 100, 50, 100))
    assert ab.p_two_sided == pytest.approx(ba.p_two_sided, abs=1e-12)
    assert ab.diff_pp == pytest.approx(-ba.diff_pp, abs=1e-12)


def test_ztest_matches_cdf_oracle():
    result = two_prop_ztest(ContingencySummary(50, 100, 40, 100))
    pooled = 90 / 200
    se = math.sqrt(pooled * (1 - pooled) * (2 / 100))
    z = (0.5 - 0.4) / se
    want = 2 * (1 - oracle_normal_cdf(abs(z)))
    assert result.p_two_sided == pytest.approx(want, abs=1e-12)


def test_ztest_degenerate_rejected():
    with pytest.raises(ValueError):
        two_prop_ztest(ContingencySummary(10, 10, 10, 10))


# -- effect sizes ------------------------------------------------------------------

def test_effect_sizes_powered_golden():
    es = effect_sizes(ContingencySummary(45, 100, 24, 100))
    assert es.risk_diff_pp == pytest.approx(21.0, abs=0.1)
    assert es.risk_diff_ci_pp[0] == pytest.approx(8.1, abs=0.1)
    assert es.risk_diff_ci_pp[1] == pytest.approx(33.9, abs=0.1)
    assert es.relative_risk == pytest.approx(1.88, abs=0.01)
    assert es.relative_risk_ci[0] == pytest.approx(1.24, abs=0.01)
    assert es.relative_risk_ci[1] == pytest.approx(2.83, abs=0.01)
    assert es.p_fisher == pytest.approx(0.0028, abs=0.0005)


def test_effect_sizes_hard_pack_golden():
    es = effect_sizes(ContingencySummary(9, 20, 5, 20))
    assert es.risk_diff_pp == pytest.approx(20.0, abs=0.1)
    assert es.risk_diff_ci_pp[0] == pytest.approx(-8.9, abs=0.1)
    assert es.risk_diff_ci_pp[1] == pytest.approx(48.9, abs=0.1)
    assert es.relative_risk == pytest.approx(1.80, abs=0.01)
    assert es.relative_risk_ci[0] == pytest.approx(0.73, abs=0.01)
    assert es.relative_risk_ci[1] == pytest.approx(4.43, abs=0.01)


def test_effect_sizes_equal_rates():
    es = effect_sizes(ContingencySummary(9, 20, 9, 20))
    assert es.risk_diff_pp == 0.0
    assert es.relative_risk == pytest.approx(1.0)
    assert es.odds_ratio == pytest.approx(1.0)


def test_odds_ratio_zero_cell_correction():
    # 50/50 vs 40/50 has a zero cell; correction keeps it finite.
    assert odds_ratio(ContingencySummary(50, 50, 40, 50)) == pytest.approx(26.185, abs=0.001)


def test_haldane_pairwise_convention():
    # Inverse-orientation hard-pack row: 5/20 vs 9/20.
    c = ContingencySummary(5, 20, 9, 20)
    assert odds_ratio(c, haldane=True) == pytest.approx(0.430, abs=0.001)
    assert relative_risk(c, haldane=True) == pytest.approx(0.579, abs=0.001)
    c = ContingencySummary(50, 50, 40, 50)
    assert relative_risk(c, haldane=True) == pytest.approx(1.247, abs=0.001)


def test_effect_size_cis_contain_point():
    es = effect_sizes(ContingencySummary(30, 80, 20, 90))
    assert es.risk_diff_ci_pp[0] <= es.risk_diff_pp <= es.risk_diff_ci_pp[1]
    assert es.relative_risk_ci[0] <= es.relative_risk <= es.relative_risk_ci[1]


# -- power --------------------------------------------------------------------------

def test_achieved_power_paper_golden():
    assert achieved_power(0.24, 0.45, 0.05, 100) == pytest.approx(0.88, abs=0.01)


def test_power_required_n_band():
    n = power_two_prop(0.25, 0.45, 0.05, 0.80)
    assert 80 <= n <= 95


def test_power_monotone_in_n():
    p_small = achieved_power(0.25, 0.45, 0.05, 30)
    p_big = achieved_power(0.25, 0.45, 0.05, 400)
    assert p_small < p_big
    assert achieved_power(0.25, 0.45, 0.05, 100_000) > 0.9999


def test_power_validation():
    with pytest.raises(ValueError):
        achieved_power(0.0, 0.5, 0.05, 10)
    with pytest.raises(ValueError):
        achieved_power(0.4, 0.4, 0.05, 10)
    with pytest.raises(ValueError):
        power_two_prop(0.2, 0.4, 0.05, 1.5)


# -- sign test ------------------------------------------------------------------------

def test_sign_test_small_cases():
    assert sign_test(2, 1) == pytest.approx(1.0)
    assert sign_test(3, 0) == pytest.approx(0.25)
    assert sign_test(0, 0) == 1.0
    assert sign_test(10, 0) == pytest.approx(2 / 1024)
