"""Pearson correlation, chi-square homogeneity and paired t tests.

Tail probabilities come from the regularized incomplete gamma and beta
functions, evaluated by power series or Lentz continued fractions and kept in
log space so that very small p-values are reported instead of rounding to 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 10000
SMALLEST_P = math.ulp(0.0)


class UndefinedCorrelation(ValueError):
    pass


@dataclass(frozen=True)
class TestResult:
    statistic: float
    df: int
    p_value: float
    underflow: bool = False
    log_p: float = 0.0

    __test__ = False  # not a pytest class

    def to_dict(self, test: str) -> dict:
        return {
            "test": test,
            "statistic": self.statistic,
            "df": self.df,
            "p_value": self.p_value,
            "underflow": self.underflow,
        }


def _lentz(coef, max_iter: int = _MAX_ITER) -> float:
    # Modified Lentz evaluation of b0 + a1/(b1 + a2/(b2 + ...)); coef(m) -> (a_m, b_m).
    _, b0 = coef(0)
    f = b0 if abs(b0) > _TINY else _TINY
    c, d = f, 0.0
    for m in range(1, max_iter):
        a, b = coef(m)
        d = b + a * d
        d = _TINY if abs(d) < _TINY else d
        c = b + a / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < _EPS:
            return f
    raise ArithmeticError("continued fraction did not converge")


def log_gamma_q(a: float, x: float) -> float:
    """log of the regularized upper incomplete gamma ``Q(a, x)``."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x <= 0:
        return 0.0
    log_prefix = -x + a * math.log(x) - math.lgamma(a)
    if x < a + 1.0:
        term = total = 1.0 / a
        ap = a
        for _ in range(_MAX_ITER):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * _EPS:
                break
        lower = math.exp(log_prefix) * total
        return math.log1p(-lower) if lower < 1 else -math.inf
    # Q = prefix / (x + 1 - a - 1(1-a)/(x + 3 - a - ...))
    def coef(m):
        if m == 0:
            return 0.0, x + 1.0 - a
        return -m * (m - a), x + 2.0 * m + 1.0 - a

    return log_prefix - math.log(_lentz(coef))


def gamma_q(a: float, x: float) -> float:
    return math.exp(log_gamma_q(a, x))


def _beta_cf(a: float, b: float, x: float) -> float:
    # 1 / (1 + d1/(1 + d2/(1 + ...)))
    def coef(m):
        if m == 0:
            return 0.0, 1.0
        if m % 2 == 0:
            h = m // 2
            num = h * (b - h) * x / ((a + 2 * h - 1) * (a + 2 * h))
        else:
            h = (m - 1) // 2
            num = -(a + h) * (a + b + h) * x / ((a + 2 * h) * (a + 2 * h + 1))
        return num, 1.0

    return 1.0 / _lentz(coef)


def log_beta_inc(a: float, b: float, x: float) -> float:
    """log of the regularized incomplete beta ``I_x(a, b)``."""
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")
    if x == 0:
        return -math.inf
    if x == 1:
        return 0.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    if x < (a + 1.0) / (a + b + 2.0):
        return log_front + math.log(_beta_cf(a, b, x)) - math.log(a)
    tail = math.exp(log_front + math.log(_beta_cf(b, a, 1.0 - x)) - math.log(b))
    return math.log1p(-tail) if tail < 1 else -math.inf


def beta_inc(a: float, b: float, x: float) -> float:
    return math.exp(log_beta_inc(a, b, x))


def chi2_sf(stat: float, df: int) -> float:
    return gamma_q(df / 2.0, stat / 2.0)


def t_two_sided(t: float, df: int) -> float:
    return beta_inc(df / 2.0, 0.5, df / (df + t * t))


def _result(statistic: float, df: int, log_p: float) -> TestResult:
    log_p = min(log_p, 0.0)
    p = math.exp(log_p)
    underflow = p == 0.0 or p < 2.2250738585072014e-308
    if p == 0.0:
        p = SMALLEST_P
    return TestResult(float(statistic), int(df), p, underflow, log_p)


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation of two equal-length sequences."""
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    n = len(x)
    if n != len(y):
        raise ValueError("sequences differ in length")
    if n < 2:
        raise ValueError("need at least two observations")
    mx, my = math.fsum(x) / n, math.fsum(y) / n
    dx = [v - mx for v in x]
    dy = [v - my for v in y]
    sxx = math.fsum(v * v for v in dx)
    syy = math.fsum(v * v for v in dy)
    if sxx == 0 or syy == 0:
        raise UndefinedCorrelation("correlation is undefined for a constant sequence")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def chi_square_homogeneity(counts_a: Sequence[int], counts_b: Sequence[int], empty: str = "error") -> TestResult:
    """Homogeneity test of two count vectors over the same categories.

    With 8 score categories the statistic has 7 degrees of freedom.

    Parameters
    ----------
    counts_a, counts_b : sequence of int
        Counts per category for the two groups.
    empty : {"error", "drop"}
        What to do with a category that neither group used (its expected
        count is zero).  ``"drop"`` removes such categories and lowers the
        degrees of freedom to match.

    Raises
    ------
    ValueError
        On negative counts, an empty group, or (with ``empty="error"``) an
        unused category; the message lists the offending categories.
    """
    table = np.array([counts_a, counts_b], dtype=float)
    if table.ndim != 2 or table.shape[1] < 2:
        raise ValueError("need two count vectors with at least two categories each")
    if (table < 0).any():
        raise ValueError("counts must be non-negative")
    rows = table.sum(axis=1)
    if (rows <= 0).any():
        raise ValueError("both groups need a positive total")
    cols = table.sum(axis=0)
    unused = [int(c) for c in np.flatnonzero(cols == 0)]
    if unused:
        if empty == "error":
            raise ValueError(f"zero expected count in categories {unused}")
        if empty != "drop":
            raise ValueError(f"unknown empty-category policy {empty!r}")
        table, cols = table[:, cols > 0], cols[cols > 0]
        if table.shape[1] < 2:
            raise ValueError("fewer than two categories are in use")
    expected = np.outer(rows, cols) / rows.sum()
    stat = math.fsum(((table - expected) ** 2 / expected).ravel())
    df = table.shape[1] - 1
    return _result(stat, df, log_gamma_q(df / 2.0, stat / 2.0))


def paired_t_test(x: Sequence[float], y: Sequence[float]) -> TestResult:
    """Two-sided paired t test on ``x - y`` with ``n - 1`` degrees of freedom."""
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    if np.shape(x) != np.shape(y):
        raise ValueError("sequences differ in length")
    n = len(d)
    if n < 2:
        raise ValueError("need at least two pairs")
    mean = math.fsum(d) / n
    var = math.fsum((d - mean) ** 2) / (n - 1)
    if var == 0:
        raise ValueError("differences have zero variance")
    t = mean / math.sqrt(var / n)
    df = n - 1
    return _result(t, df, log_beta_inc(df / 2.0, 0.5, df / (df + t * t)))


def score_histogram(sessions: Iterable, categories: int = 8) -> np.ndarray:
    """Counts of normal-question responses per score value."""
    hist = np.zeros(categories, dtype=np.int64)
    for s in sessions:
        for r in s.records:
            if r.kind == "normal" and r.score is not None:
                hist[r.score] += 1
    return hist
