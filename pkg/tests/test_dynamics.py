import pytest

from degseq.budget import term_budget
from degseq.dynamics import (
    affine_iterate_component_degrees,
    aut1_certificate,
    iterate_degrees,
    monoid_ball_degrees,
    period_detect,
)
from degseq.fields import QQ, PrimeField
from degseq.gallery import gallery_entry
from degseq.maps import (
    AffineEndomorphism,
    ProjectiveRationalMap,
    compose_maps,
    homogenize,
    projective_identity,
)
from degseq.parsing import expression_to_map, parse_map
from degseq.polynomials import Polynomial

from oracles import matrix_power_max_rowsum, triangular_exponent_matrix

F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)


# --- iterate_degrees ---


def test_linearex_degrees_two_n_plus_one():
    f = gallery_entry("linearex").projective
    seq = iterate_degrees(f, 10)
    assert seq.degrees == tuple(2 * n + 1 for n in range(1, 11))
    assert not seq.truncated
    assert seq.strategy == "left-multiply"
    assert seq.dim == 3


def test_identity_degrees_all_one():
    seq = iterate_degrees(projective_identity(QQ, 2), 4)
    assert seq.degrees == (1, 1, 1, 1)
    assert seq.drops == (0, 0, 0)


def test_monomial_triangular_matches_exponent_matrix_oracle():
    f = gallery_entry("monomial-triangular-3").projective
    seq = iterate_degrees(f, 8)
    M = triangular_exponent_matrix(3)
    assert list(seq.degrees) == [matrix_power_max_rowsum(M, n) for n in range(1, 9)]
    assert seq.degrees[:4] == (3, 6, 10, 15)


def test_drops_reconcile_with_degrees():
    for name in ("linearex", "sigma-3", "henon-control"):
        f = gallery_entry(name).projective
        seq = iterate_degrees(f, 8)
        d1 = seq.degrees[0]
        for i, drop in enumerate(seq.drops):
            assert drop == d1 * seq.degrees[i] - seq.degrees[i + 1]
            assert drop >= 0


def test_sigma_drop_pattern():
    seq = iterate_degrees(gallery_entry("sigma-3").projective, 6)
    assert seq.degrees == (3, 1, 3, 1, 3, 1)
    assert seq.drops == (8, 0, 8, 0, 8)


def test_degree_sequence_submultiplicative():
    for name in ("linearex", "sigma-2", "monomial-triangular-2"):
        degs = iterate_degrees(gallery_entry(name).projective, 10).degrees
        padded = (1,) + degs  # deg(f^0) = 1
        for m in range(11):
            for n in range(11 - m):
                assert padded[m + n] <= padded[m] * padded[n]


def test_left_multiply_agrees_with_explicit_composition():
    for name in ("linearex", "sigma-2"):
        f = gallery_entry(name).projective
        seq = iterate_degrees(f, 6)
        cur = f
        for n in range(2, 7):
            cur, _ = compose_maps(f, cur)
            assert cur.degree() == seq.degrees[n - 1]


def test_iterate_rejects_empty_run():
    with pytest.raises(ValueError):
        iterate_degrees(gallery_entry("linearex").projective, 0)


def test_budget_truncation_keeps_exact_prefix():
    hen = gallery_entry("henon-control").projective
    full = iterate_degrees(hen, 7).degrees
    with term_budget(500):
        seq = iterate_degrees(hen, 12)
    assert seq.truncated
    assert 1 <= len(seq.degrees) < 12
    assert seq.degrees == full[: len(seq.degrees)]


def test_affine_component_degrees_linearex():
    f = gallery_entry("linearex").affine
    per = affine_iterate_component_degrees(f, 5)
    assert per[0] == (3, 2, 1)
    for n, row in enumerate(per, start=1):
        assert max(row) == row[0] == 2 * n + 1  # first coordinate on top


# --- aut1_certificate ---


def test_henon_certified_and_predicts_two():
    hen = gallery_entry("henon-control").affine
    cert = aut1_certificate(hen, asserted_automorphism=True)
    assert cert.certified
    assert cert.degrees == (2, 4)
    assert cert.predicted_growth == 2


def test_certificate_needs_the_assertion_for_a_prediction():
    hen = gallery_entry("henon-control").affine
    cert = aut1_certificate(hen)
    assert cert.certified and cert.predicted_growth is None
    assert not cert.asserted_automorphism


def test_linear_swap_trivially_certified():
    x = Polynomial.variable(QQ, 2, 0)
    y = Polynomial.variable(QQ, 2, 1)
    cert = aut1_certificate(AffineEndomorphism(2, (y, x)), asserted_automorphism=True)
    assert cert.certified
    assert cert.degrees == (1, 1)
    assert cert.predicted_growth == 1


def test_triangular_shear_not_certified():
    x = Polynomial.variable(QQ, 2, 0)
    y = Polynomial.variable(QQ, 2, 1)
    f = AffineEndomorphism(2, (x + y * y, y))  # f^2 = (x + 2y^2, y), degree 2 != 4
    cert = aut1_certificate(f)
    assert not cert.certified
    assert cert.degrees == (2, 2)


def test_linearex_not_certified():
    f = gallery_entry("linearex").affine
    cert = aut1_certificate(f, asserted_automorphism=True)
    assert not cert.certified
    assert cert.degrees == (3, 5, 7)  # 7 != 27
    assert cert.predicted_growth is None


# --- monoid_ball_degrees ---


def test_identity_ball_is_flat():
    ball, ds = monoid_ball_degrees([projective_identity(QQ, 2)], 5)
    assert ds == [1, 1, 1, 1, 1]
    assert len(ball.representatives) == 1
    assert not ball.truncated


def test_single_generator_ball_is_running_max_of_iterates():
    f = gallery_entry("linearex").projective
    seq = iterate_degrees(f, 5).degrees
    _, ds = monoid_ball_degrees([f], 5)
    running = []
    best = 1
    for d in seq:
        best = max(best, d)
        running.append(best)
    assert ds == running


def test_two_generator_ball_small_radii():
    entry = gallery_entry("linearex")
    g, h = entry.factors
    S = [homogenize(g), homogenize(h)]
    ball, ds = monoid_ball_degrees(S, 2)
    assert ds == [2, 3]
    assert len(ball.representatives) == 7  # id, g, h, gg, gh, hg, hh all distinct
    assert ds == sorted(ds)  # D_S is nondecreasing


def test_ball_radius_monotone_containment():
    entry = gallery_entry("linearex")
    g, h = entry.factors
    S = [homogenize(g), homogenize(h)]
    small, _ = monoid_ball_degrees(S, 2)
    big, _ = monoid_ball_degrees(S, 3)
    small_maps = {r[0] for r in small.representatives}
    big_maps = {r[0] for r in big.representatives}
    assert small_maps <= big_maps


def test_ball_representatives_record_word_length_and_degree():
    f = gallery_entry("linearex").projective
    ball, _ = monoid_ball_degrees([f], 3)
    by_len = {length: deg for _, length, deg in ball.representatives}
    assert by_len == {0: 1, 1: 3, 2: 5, 3: 7}


def test_ball_input_validation():
    f = gallery_entry("linearex").projective
    with pytest.raises(ValueError):
        monoid_ball_degrees([], 3)
    with pytest.raises(ValueError):
        monoid_ball_degrees([f], 0)
    with pytest.raises(ValueError):
        monoid_ball_degrees([f, gallery_entry("sigma-2").projective], 2)


def test_ball_budget_truncation():
    hen = gallery_entry("henon-control").projective
    with term_budget(40):
        ball, ds = monoid_ball_degrees([hen], 6)
    assert ball.truncated
    assert len(ds) < 6


# --- period_detect ---


def cyclic_shift_f2():
    expr = parse_map("P2 [x1 : x2 : x0]", F2)
    return expression_to_map(expr)


def test_identity_period_one():
    report = period_detect(projective_identity(F2, 2), 8)
    assert report is not None
    assert (report.preperiod, report.period) == (1, 1)


def test_coordinate_cycle_period_three():
    report = period_detect(cyclic_shift_f2(), 10)
    assert (report.preperiod, report.period) == (1, 3)


def test_sigma_period_two_over_f3():
    expr = parse_map("P2 [x1*x2 : x0*x2 : x0*x1]", F3)
    sigma = expression_to_map(expr)
    report = period_detect(sigma, 10)
    assert (report.preperiod, report.period) == (1, 2)


def test_period_requires_prime_field():
    with pytest.raises(ValueError, match="prime field"):
        period_detect(gallery_entry("sigma-2").projective, 10)
    with pytest.raises(ValueError):
        period_detect(projective_identity(F2, 1), 1)


def test_growing_map_reports_no_period():
    # Henon over F_5 keeps doubling; no repeat inside the window
    expr = parse_map("P2 [x0^2 : x2*x0 : x2^2 + x1*x0]", F5)
    assert period_detect(expression_to_map(expr), 6) is None


def test_shear_has_order_p_in_char_p():
    # (x + y^2, y) iterates to (x + n*y^2, y); the coefficient dies mod 5
    expr = parse_map("P2 [x0^2 : x2^2 + x1*x0 : x2*x0]", F5)
    report = period_detect(expression_to_map(expr), 8)
    assert (report.preperiod, report.period) == (1, 5)


def test_period_implies_bounded_degrees():
    expr = parse_map("P2 [x1*x2 : x0*x2 : x0*x1]", F3)
    sigma = expression_to_map(expr)
    report = period_detect(sigma, 10)
    window = report.preperiod + report.period
    degs = iterate_degrees(sigma, 2 * window).degrees
    assert max(degs) == max(degs[:window])  # no growth past one full period
