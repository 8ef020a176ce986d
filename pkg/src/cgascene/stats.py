"""Exact and approximate inferential statistics for the benchmark reports.

Wilson score intervals, two-sided Fisher exact tests (probability-mass
rule, log-space hypergeometric), two-proportion z-tests (pooled SE for the
test statistic, unpooled SE for the CI), effect sizes, and normal-
approximation power for two proportions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

_NORMAL = NormalDist()


@dataclass(frozen=True)
class ContingencySummary:
    """Success counts for two arms of a binary-outcome comparison."""

    successes_a: int
    n_a: int
    successes_b: int
    n_b: int

    def __post_init__(self):
        for successes, n, arm in (
            (self.successes_a, self.n_a, "a"),
            (self.successes_b, self.n_b, "b"),
        ):
            if n <= 0:
                raise ValueError(f"arm {arm}: n must be > 0")
            if not 0 <= successes <= n:
                raise ValueError(f"arm {arm}: successes must be in [0, n]")

    @property
    def rate_a(self) -> float:
        return self.successes_a / self.n_a

    @property
    def rate_b(self) -> float:
        return self.successes_b / self.n_b


def wilson_ci(successes: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        raise ValueError("n must be > 0")
    if not 0 <= successes <= n:
        raise ValueError("successes must be in [0, n]")
    z = _NORMAL.inv_cdf(0.5 + confidence / 2.0)
    p_hat = successes / n
    denom = 1.0 + z * z / n
    center = (p_hat + z * z / (2 * n)) / denom
    spread = z * math.sqrt((p_hat * (1 - p_hat) + z * z / (4 * n)) / n) / denom
    # The bound at an empty/full count is exact; keep FP noise out of it.
    lo = 0.0 if successes == 0 else max(0.0, center - spread)
    hi = 1.0 if successes == n else min(1.0, center + spread)
    return lo, hi


# -- Fisher exact ------------------------------------------------------------

def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def fisher_exact_two_sided(c: ContingencySummary) -> float:
    """Two-sided Fisher exact p by the probability-mass rule.

    Sums hypergeometric probabilities of every table with the observed
    margins whose point probability does not exceed the observed table's
    (with a 1e-7 relative slack for floating-point ties).
    """
    m = c.successes_a + c.successes_b  # total successes (column margin)
    total = c.n_a + c.n_b
    log_denom = _log_comb(total, m)

    def log_pmf(k: int) -> float:
        return _log_comb(c.n_a, k) + _log_comb(c.n_b, m - k) - log_denom

    k_min = max(0, m - c.n_b)
    k_max = min(c.n_a, m)
    observed = log_pmf(c.successes_a)
    threshold = observed + math.log1p(1e-7)
    p = 0.0
    for k in range(k_min, k_max + 1):
        lp = log_pmf(k)
        if lp <= threshold:
            p += math.exp(lp)
    return min(p, 1.0)


# -- two-proportion z-test -----------------------------------------------------

@dataclass(frozen=True)
class ZTestResult:
    p_two_sided: float
    diff_pp: float  # rate_a - rate_b in percentage points
    ci_pp: tuple[float, float]
    z: float


def two_prop_ztest(c: ContingencySummary, confidence: float = 0.95) -> ZTestResult:
    """z from the pooled standard error; CI from the unpooled one."""
    p1, p2 = c.rate_a, c.rate_b
    pooled = (c.successes_a + c.successes_b) / (c.n_a + c.n_b)
    se_pooled = math.sqrt(pooled * (1 - pooled) * (1 / c.n_a + 1 / c.n_b))
    if se_pooled == 0.0:
        raise ValueError("z undefined: both arms are all-success or all-failure")
    z = (p1 - p2) / se_pooled
    p_value = 2.0 * (1.0 - _NORMAL.cdf(abs(z)))
    z_crit = _NORMAL.inv_cdf(0.5 + confidence / 2.0)
    se_unpooled = math.sqrt(p1 * (1 - p1) / c.n_a + p2 * (1 - p2) / c.n_b)
    diff = p1 - p2
    ci = (100 * (diff - z_crit * se_unpooled), 100 * (diff + z_crit * se_unpooled))
    return ZTestResult(p_two_sided=p_value, diff_pp=100 * diff, ci_pp=ci, z=z)


# -- effect sizes ----------------------------------------------------------------

@dataclass(frozen=True)
class EffectSizes:
    risk_diff_pp: float
    risk_diff_ci_pp: tuple[float, float]
    relative_risk: float
    relative_risk_ci: tuple[float, float]
    odds_ratio: float
    p_fisher: float


def odds_ratio(c: ContingencySummary, haldane: bool = False) -> float:
    """(a*d)/(b*c); with haldane=True every cell gets +0.5 unconditionally,
    otherwise the correction is applied only when a cell is zero."""
    a = c.successes_a
    b = c.n_a - c.successes_a
    d2 = c.successes_b
    e = c.n_b - c.successes_b
    if haldane or 0 in (a, b, d2, e):
        a, b, d2, e = a + 0.5, b + 0.5, d2 + 0.5, e + 0.5
    return (a * e) / (b * d2)


def relative_risk(c: ContingencySummary, haldane: bool = False) -> float:
    if haldane:
        return ((c.successes_a + 0.5) / (c.n_a + 1)) / ((c.successes_b + 0.5) / (c.n_b + 1))
    if c.successes_b == 0:
        return math.inf if c.successes_a > 0 else math.nan
    return c.rate_a / c.rate_b


def effect_sizes(c: ContingencySummary, confidence: float = 0.95) -> EffectSizes:
    """Risk difference with Wald CI, relative risk with log-scale CI, odds
    ratio (0.5 correction on zero cells), and the Fisher p-value."""
    z = _NORMAL.inv_cdf(0.5 + confidence / 2.0)
    p1, p2 = c.rate_a, c.rate_b
    rd = p1 - p2
    se_rd = math.sqrt(p1 * (1 - p1) / c.n_a + p2 * (1 - p2) / c.n_b)
    rd_ci = (100 * (rd - z * se_rd), 100 * (rd + z * se_rd))
    rr = relative_risk(c)
    if c.successes_a > 0 and c.successes_b > 0:
        se_log = math.sqrt(
            (1 - p1) / c.successes_a + (1 - p2) / c.successes_b
        )
        rr_ci = (rr * math.exp(-z * se_log), rr * math.exp(z * se_log))
    else:
        rr_ci = (math.nan, math.nan)
    return EffectSizes(
        risk_diff_pp=100 * rd,
        risk_diff_ci_pp=rd_ci,
        relative_risk=rr,
        relative_risk_ci=rr_ci,
        odds_ratio=odds_ratio(c),
        p_fisher=fisher_exact_two_sided(c),
    )


# -- power -------------------------------------------------------------------------

def achieved_power(p1: float, p2: float, alpha: float, n: int) -> float:
    """Normal-approximation power of the two-sided two-proportion test at
    n per arm (pooled SE under the null, unpooled under the alternative)."""
    _validate_rates(p1, p2)
    if n <= 0:
        raise ValueError("n must be > 0")
    z_alpha = _NORMAL.inv_cdf(1.0 - alpha / 2.0)
    p_bar = (p1 + p2) / 2.0
    se0 = math.sqrt(2.0 * p_bar * (1 - p_bar) / n)
    se1 = math.sqrt(p1 * (1 - p1) / n + p2 * (1 - p2) / n)
    delta = abs(p1 - p2)
    return _NORMAL.cdf((delta - z_alpha * se0) / se1) + _NORMAL.cdf((-delta - z_alpha * se0) / se1)


def power_two_prop(p1: float, p2: float, alpha: float, target_power: float) -> int:
    """Smallest per-arm n whose achieved power reaches the target."""
    _validate_rates(p1, p2)
    if not 0 < target_power < 1:
        raise ValueError("target power must be in (0, 1)")
    n = 2
    while achieved_power(p1, p2, alpha, n) < target_power:
        n += 1
        if n > 10_000_000:
            raise RuntimeError("required n exceeds search bound")
    return n


def _validate_rates(p1: float, p2: float) -> None:
    if not (0 < p1 < 1 and 0 < p2 < 1):
        raise ValueError("rates must be strictly inside (0, 1)")
    if p1 == p2:
        raise ValueError("rates must differ")


def sign_test(positives: int, negatives: int) -> float:
    """Two-sided exact binomial sign test on non-tied pairs (ties dropped
    by the caller)."""
    n = positives + negatives
    if n == 0:
        return 1.0
    k = min(positives, negatives)
    tail = sum(math.comb(n, i) for i in range(0, k + 1)) / 2.0 ** n
    return min(1.0, 2.0 * tail)
