from fractions import Fraction

import pytest

from degseq.dynamics import iterate_degrees
from degseq.gallery import gallery_entry
from degseq.growth import (
    classify_growth,
    count_low_degree_iterates,
    degaut_bound,
    dpol_estimate,
    finite_field_count_bound,
    lambda_estimate,
    threshold_check,
)

from oracles import binomial_growth, power_law


# --- dpol_estimate ---


def test_dpol_exact_square_law():
    slope, residual = dpol_estimate(power_law(2, 40))
    assert abs(slope - 2.0) < 1e-6
    assert residual < 1e-9


def test_dpol_affine_law_near_one():
    slope, _ = dpol_estimate([2 * n + 1 for n in range(1, 41)])
    assert 0.9 <= slope <= 1.1


def test_dpol_binomial_near_two():
    slope, _ = dpol_estimate(binomial_growth(40))
    assert 1.8 <= slope <= 2.1


def test_dpol_needs_eight_terms():
    with pytest.raises(ValueError, match="8 terms"):
        dpol_estimate([1, 2, 3, 4, 5, 6, 7])


# --- lambda_estimate ---


def test_lambda_doubling_is_exact():
    root, ratio = lambda_estimate([2**n for n in range(1, 21)])
    assert root == pytest.approx(2.0)
    assert ratio == pytest.approx(2.0)


def test_lambda_of_linear_growth_stays_near_one():
    root, ratio = lambda_estimate([2 * n + 1 for n in range(1, 41)])
    assert 1.0 <= root <= 1.15
    assert ratio < 1.05


def test_lambda_rejects_bad_input():
    with pytest.raises(ValueError):
        lambda_estimate([2, 4, 8])
    with pytest.raises(ValueError, match="positive"):
        lambda_estimate([1, 1, 1, 1, 0, 1, 1, 1])


# --- classify_growth ---


def test_constant_sequence_is_bounded():
    report = classify_growth([1] * 12)
    assert report.label == "bounded"
    assert report.dpol_estimate is None and report.lambda_estimate is None


def test_alternating_sequence_is_bounded():
    degs = iterate_degrees(gallery_entry("sigma-3").projective, 12).degrees
    report = classify_growth(degs)
    assert report.label == "bounded"


def test_period_certificate_forces_bounded():
    # an upstream periodicity proof overrides the window heuristics
    report = classify_growth([3, 1, 4, 3, 1, 4, 3, 1, 4, 5], period_certified=True)
    assert report.label == "bounded"


def test_linearex_polynomial_degree_one():
    seq = iterate_degrees(gallery_entry("linearex").projective, 40)
    report = classify_growth(seq)
    assert report.label == "polynomial"
    assert abs(report.dpol_estimate - 1.0) < 0.1


def test_doubling_is_exponential_rate_two():
    report = classify_growth([2**n for n in range(1, 31)], dim=2)
    assert report.label == "exponential"
    assert abs(report.lambda_estimate - 2.0) < 0.05
    assert report.dim2_category.startswith("exponential")


def test_power_law_grid():
    # constant -> bounded; n^k for k = 1..4 -> polynomial with dpol near k
    assert classify_growth(power_law(0, 60)).label == "bounded"
    for k in range(1, 5):
        report = classify_growth(power_law(k, 60))
        assert report.label == "polynomial"
        assert abs(report.dpol_estimate - k) < 0.1


def test_classification_is_scale_invariant():
    for base in (power_law(2, 40), [2**n for n in range(1, 21)], [1] * 12):
        want = classify_growth(base).label
        for c in (2, 5):
            assert classify_growth([c * v for v in base]).label == want


def test_conflicting_diagnostics_are_indeterminate():
    # geometric rise then a flat tail: the root says exponential, the
    # last-ratio check refuses to confirm
    degs = [2**n for n in range(1, 20)] + [2**19]
    report = classify_growth(degs)
    assert report.label == "indeterminate"


def test_dim2_categories():
    lin = classify_growth([2 * n + 1 for n in range(1, 41)], dim=2)
    assert lin.dim2_category == "linear: preserves a rational fibration"
    quad = classify_growth(power_law(2, 40), dim=2)
    assert quad.dim2_category == "quadratic: preserves a genus-one fibration"
    flat = classify_growth([1] * 12, dim=2)
    assert flat.dim2_category == "bounded"
    assert classify_growth(power_law(2, 40), dim=3).dim2_category is None


def test_classify_needs_eight_terms():
    with pytest.raises(ValueError):
        classify_growth([1, 2, 3])


# --- degaut_bound ---


def test_bound_report_d3_k2():
    r = degaut_bound(3, 2)
    assert r.c_d == Fraction(32)
    assert r.bound == Fraction(256)
    assert r.dim_check == 30
    assert r.strict


def test_bound_report_d2_k1():
    r = degaut_bound(2, 1)
    assert (r.c_d, r.bound, r.dim_check, r.strict) == (9, 9, 6, True)


def test_bound_boundary_d1_k1_flagged():
    r = degaut_bound(1, 1)
    assert (r.c_d, r.bound, r.dim_check) == (2, 2, 2)
    assert not r.strict  # 2 < 2 fails; the lone boundary case


def test_bound_suite_exact_rational():
    failures = [
        (d, K)
        for d in range(1, 7)
        for K in range(1, 51)
        if not degaut_bound(d, K).strict
    ]
    assert failures == [(1, 1)]
    r = degaut_bound(6, 50)
    assert isinstance(r.c_d, Fraction) and isinstance(r.bound, Fraction)
    assert r.bound == Fraction(7**6, 120) * 50**6


def test_bound_rejects_bad_args():
    with pytest.raises(ValueError):
        degaut_bound(0, 1)
    with pytest.raises(ValueError):
        degaut_bound(2, 0)


# --- counting ---


def test_count_low_degree_iterates():
    seq = iterate_degrees(gallery_entry("linearex").projective, 10)
    assert count_low_degree_iterates(seq, 7) == 3  # 3, 5, 7
    assert count_low_degree_iterates([1] * 6, 0) == 0
    assert count_low_degree_iterates([2**n for n in range(1, 11)], 8) == 3


def test_count_under_bound_for_unbounded_sequences():
    for name in ("linearex", "monomial-triangular-3", "henon-control"):
        entry = gallery_entry(name)
        f = entry.projective
        seq = iterate_degrees(f, 10)
        for K in (1, 2, 5):
            assert count_low_degree_iterates(seq, K) < degaut_bound(f.dim, K).bound


def test_finite_field_count_bound():
    assert finite_field_count_bound(2, 1, 1) == 16
    assert finite_field_count_bound(2, 2, 1) == 512
    assert finite_field_count_bound(3, 1, 0) == 9
    with pytest.raises(ValueError):
        finite_field_count_bound(1, 1, 1)
    with pytest.raises(ValueError):
        finite_field_count_bound(2, 0, 1)
    with pytest.raises(ValueError):
        finite_field_count_bound(2, 1, -1)


# --- threshold_check ---


def test_threshold_ones_stays_below():
    report = threshold_check([1] * 20, 3)
    assert report.c_d == Fraction(32)
    assert report.predicts_bounded_poly
    assert report.predicts_bounded_log is None  # no q requested
    assert all(r.below_poly_threshold for r in report.rows)


def test_threshold_linear_growth_crosses_at_large_n():
    values = [2 * n + 1 for n in range(1, 101)]
    report = threshold_check(values, 3)
    assert not report.predicts_bounded_poly  # (2n+1)^3 outruns 32^3 * n near n = 64
    crossing = next(r.n for r in report.rows if not r.below_poly_threshold)
    assert crossing == 64
    # a short window never sees the crossing: no prediction should be read
    # into the first forty terms
    assert threshold_check(values[:40], 3).predicts_bounded_poly


def test_threshold_log_variant():
    report = threshold_check([1] * 30, 1, q=2)
    assert report.c_dq is not None and report.c_dq > 0
    assert "census" in report.derivation
    assert report.rows[0].below_log_threshold is None  # log(1) = 0 row is vacuous
    assert isinstance(report.predicts_bounded_log, bool)


def test_threshold_empty_window():
    report = threshold_check([], 2)
    assert report.rows == ()
    assert not report.predicts_bounded_poly
