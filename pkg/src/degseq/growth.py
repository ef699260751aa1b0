"""Growth classification of degree sequences and the exact counting bounds.

A finite window cannot compute a limsup, so the polynomial growth order is
estimated by least-squares on log(deg) against log(n) over the tail half of
the window, with the fit residual reported alongside.  Classification
order: bounded (constant or exactly periodic tail, or a certified period
upstream), then exponential versus polynomial decided by the N-th root
estimate together with which regression actually fits better: a root above
the threshold with a clearly better power-law fit is still polynomial
(linearly growing degrees at short windows look exponential by the root
test alone).

The counting bounds are evaluated in exact rational/integer arithmetic:
C_d = (1+d)^d/(d−1)!, the iterate count bound C_d·K^d, the dimension count
d·binom(d+K,K) it dominates, and the finite-field census q^((d+1)·binom(d+K,K)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

EPS_EXP_DEFAULT = 0.05


@dataclass(frozen=True)
class GrowthReport:
    label: str  # bounded | polynomial | exponential | indeterminate
    dpol_estimate: float | None
    lambda_estimate: float | None
    fit_residual: float
    window_used: tuple
    dim2_category: str | None


@dataclass(frozen=True)
class BoundReport:
    """The count bound C_d*K^d versus the space dimension d*binom(d+K,K)."""

    d: int
    K: int
    c_d: Fraction
    bound: Fraction
    dim_check: int
    strict: bool  # dim_check < bound; fails only at the d = 1 boundary


@dataclass(frozen=True)
class ThresholdRow:
    n: int
    value: int
    below_poly_threshold: bool
    below_log_threshold: bool | None


@dataclass(frozen=True)
class ThresholdReport:
    d: int
    q: int | None
    c_d: Fraction
    c_dq: float | None
    derivation: str
    rows: tuple
    predicts_bounded_poly: bool
    predicts_bounded_log: bool | None


def _degrees_of(seq) -> list:
    degrees = getattr(seq, "degrees", seq)
    return list(degrees)


def _fit_line(xs: list, ys: list) -> tuple[float, float, float]:
    """Least squares y = a + b·x; returns (b, a, rms residual)."""
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0.0:
        return 0.0, my, 0.0
    b = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    a = my - b * mx
    rss = sum((y - (a + b * x)) ** 2 for x, y in zip(xs, ys))
    return b, a, math.sqrt(rss / n)


def _tail_window(n_terms: int) -> tuple[int, int]:
    """1-based inclusive tail window [N/2, N]."""
    return max(1, n_terms // 2), n_terms


def dpol_estimate(seq) -> tuple[float, float]:
    """Log-log tail slope of the degree sequence and its RMS fit residual."""
    degrees = _degrees_of(seq)
    if len(degrees) < 8:
        raise ValueError("need at least 8 terms to estimate growth order")
    lo, hi = _tail_window(len(degrees))
    xs = [math.log(n) for n in range(lo, hi + 1)]
    ys = [math.log(degrees[n - 1]) for n in range(lo, hi + 1)]
    slope, _, res = _fit_line(xs, ys)
    return slope, res


def lambda_estimate(seq) -> tuple[float, float]:
    """(degrees[N]^(1/N), degrees[N]/degrees[N−1])."""
    degrees = _degrees_of(seq)
    if len(degrees) < 8:
        raise ValueError("need at least 8 terms to estimate a growth rate")
    if any(v < 1 for v in degrees):
        raise ValueError("degree sequences are positive")
    N = len(degrees)
    root = degrees[-1] ** (1.0 / N)
    ratio = degrees[-1] / degrees[-2]
    return root, ratio


def _tail_is_periodic(values: list, max_period: int) -> bool:
    for p in range(1, max_period + 1):
        if all(values[i] == values[i - p] for i in range(p, len(values))):
            return True
    return False


def _dim2_category(label: str, dpol: float | None) -> str:
    if label == "bounded":
        return "bounded"
    if label == "exponential":
        return "exponential: growth rate a Pisot or Salem number"
    if label == "polynomial" and dpol is not None:
        if dpol < 1.5:
            return "linear: preserves a rational fibration"
        return "quadratic: preserves a genus-one fibration"
    return "unclassified"


def classify_growth(
    seq,
    *,
    eps_exp: float = EPS_EXP_DEFAULT,
    period_certified: bool = False,
    dim: int | None = None,
) -> GrowthReport:
    """Label a degree sequence bounded / polynomial / exponential.

    period_certified lets the caller pass in an upstream periodicity proof
    (which makes the sequence bounded regardless of the window shape).
    """
    degrees = _degrees_of(seq)
    if len(degrees) < 8:
        raise ValueError("need at least 8 terms to classify")
    if dim is None:
        dim = getattr(seq, "dim", None)
    lo, hi = _tail_window(len(degrees))
    window = (lo, hi)

    tail_len = max(4, (dim or 0) + 2)
    tail = degrees[-tail_len:]
    if period_certified or _tail_is_periodic(tail, max(1, tail_len // 2)):
        report_label = "bounded"
        cat = _dim2_category(report_label, None) if dim == 2 else None
        return GrowthReport(report_label, None, None, 0.0, window, cat)

    root, ratio = lambda_estimate(degrees)
    dpol, poly_res = dpol_estimate(degrees)
    xs = list(range(lo, hi + 1))
    ys = [math.log(degrees[n - 1]) for n in xs]
    _, _, exp_res = _fit_line([float(x) for x in xs], ys)

    if root >= 1.0 + eps_exp and exp_res <= poly_res:
        # the two root diagnostics must agree for an exponential verdict
        if ratio < 1.0 + eps_exp / 2:
            label, dpol_out, lam = "indeterminate", dpol, root
            residual = min(poly_res, exp_res)
        else:
            label, dpol_out, lam = "exponential", None, root
            residual = exp_res
    elif poly_res > 0.5 and exp_res > 0.5:
        label, dpol_out, lam = "indeterminate", dpol, root
        residual = min(poly_res, exp_res)
    else:
        label, dpol_out, lam = "polynomial", dpol, None
        residual = poly_res
    cat = _dim2_category(label, dpol_out) if dim == 2 else None
    return GrowthReport(label, dpol_out, lam, residual, window, cat)


def degaut_bound(d: int, K: int) -> BoundReport:
    """C_d = (1+d)^d/(d−1)! and the count bound C_d·K^d, exactly.

    Also evaluates the dimension d·binom(d+K,K) that the bound dominates in
    the underlying linear-independence argument; strictness fails only at
    the d = 1 boundary, which is flagged rather than asserted.
    """
    if d < 1 or K < 1:
        raise ValueError("need d >= 1 and K >= 1")
    c_d = Fraction((1 + d) ** d, math.factorial(d - 1))
    bound = c_d * K**d
    dim_check = d * math.comb(d + K, K)
    return BoundReport(d, K, c_d, bound, dim_check, dim_check < bound)


def count_low_degree_iterates(seq, K: int) -> int:
    """#{m in the computed window : deg(f^m) <= K}."""
    return sum(1 for v in _degrees_of(seq) if v <= K)


def finite_field_count_bound(q: int, d: int, K: int) -> int:
    """q^((d+1)·binom(d+K,K)): maps of P^d over F_q with degree <= K."""
    if q < 2 or d < 1 or K < 0:
        raise ValueError("need q >= 2, d >= 1, K >= 0")
    return q ** ((d + 1) * math.comb(d + K, K))


def _invert_census(q: int, d: int, count: int) -> int:
    """Smallest K >= 1 whose degree-<=K census can hold `count` maps."""
    K = 1
    while finite_field_count_bound(q, d, K) < count:
        K += 1
    return K


def threshold_check(ds, d: int, q: int | None = None) -> ThresholdReport:
    """Check D_S(n) against C_d·n^(1/d), and optionally C_{d,q}·log(n)^(1/d).

    The polynomial comparison is exact: D_S(n) < C_d·n^(1/d) iff
    (D_S(n)/C_d)^d < n in rational arithmetic.  The logarithmic constant has
    no closed form; it is derived by inverting the finite-field census at
    the window end (smallest K able to hold N+1 distinct maps, scaled
    against log(N)^(1/d)) and the derivation is recorded in the report.
    """
    values = _degrees_of(ds)
    c_d = Fraction((1 + d) ** d, math.factorial(d - 1))
    c_dq = None
    derivation = "polynomial threshold exact; no finite-field constant requested"
    if q is not None and len(values) >= 2:
        N = len(values)
        k_star = _invert_census(q, d, N + 1)
        c_dq = k_star / (math.log(N) ** (1.0 / d))
        derivation = (
            f"c_dq = K*/log(N)^(1/d) with K* = {k_star} the smallest K whose "
            f"census q^((d+1)*binom(d+K,K)) holds N+1 = {N + 1} maps over F_{q}"
        )
    elif q is not None:
        derivation = "window too short to derive a finite-field constant"

    rows = []
    all_poly = bool(values)
    all_log = bool(values) if c_dq is not None else None
    for i, v in enumerate(values):
        n = i + 1
        # v < c_d * n^(1/d)  <=>  (v/c_d)^d < n, all quantities positive
        below_poly = (Fraction(v) / c_d) ** d < n
        below_log: bool | None = None
        if c_dq is not None and n >= 2:  # log(1) = 0 makes n = 1 vacuous
            below_log = v < c_dq * math.log(n) ** (1.0 / d)
            if not below_log:
                all_log = False
        if not below_poly:
            all_poly = False
        rows.append(ThresholdRow(n, v, below_poly, below_log))
    if not values:
        all_poly = False
        all_log = None if c_dq is None else False
    return ThresholdReport(
        d=d,
        q=q,
        c_d=c_d,
        c_dq=c_dq,
        derivation=derivation,
        rows=tuple(rows),
        predicts_bounded_poly=all_poly,
        predicts_bounded_log=all_log,
    )
