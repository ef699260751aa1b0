import random
from fractions import Fraction

import pytest

from degseq.dynamics import iterate_degrees
from degseq.fields import QQ, PrimeField
from degseq.gallery import gallery_entry
from degseq.maps import (
    AffineEndomorphism,
    ProjectiveRationalMap,
    affine_identity,
    compose_maps,
    dehomogenize,
    homogenize,
    jacobian_dominance_hint,
    maps_equal,
    projective_identity,
    reduce_map,
)
from degseq.parsing import expression_to_map, map_to_text, parse_map
from degseq.polynomials import Polynomial

F7 = PrimeField(7)


def P(field, nvars, terms):
    return Polynomial(field, nvars, {e: field.coerce(c) for e, c in terms.items()})


def rand_projective(rng, field, d, deg, max_terms=4):
    """Random reduced self-map of P^d: homogeneous degree-deg components."""
    while True:
        comps = []
        for _ in range(d + 1):
            terms = {}
            for _ in range(rng.randrange(1, max_terms + 1)):
                cuts = sorted(rng.randrange(0, deg + 1) for _ in range(d))
                e = tuple(b - a for a, b in zip([0] + cuts, cuts + [deg]))
                c = rng.randrange(1, field.p) if hasattr(field, "p") else rng.randrange(-9, 10)
                if c:
                    terms[e] = c
            comps.append(P(field, d + 1, terms))
        if all(not c.is_zero() for c in comps):
            f, _ = reduce_map(comps)
            if f.degree() == deg:
                return f


# --- reduce_map ---


def test_reduce_strips_collective_factor():
    # every component shares x0*x1*x2: the sigma self-composition shape
    comps = [P(QQ, 3, {(2, 1, 1): 1}), P(QQ, 3, {(1, 2, 1): 1}), P(QQ, 3, {(1, 1, 2): 1})]
    f, removed = reduce_map(comps)
    assert removed == 3
    assert f.degree() == 1
    assert maps_equal(f, projective_identity(QQ, 2))


def test_reduce_rejects_mixed_degrees():
    with pytest.raises(ValueError, match="mixed degrees"):
        reduce_map([P(QQ, 2, {(1, 0): 1}), P(QQ, 2, {(2, 0): 1})])


def test_reduce_rejects_inhomogeneous():
    with pytest.raises(ValueError, match="not homogeneous"):
        reduce_map([P(QQ, 2, {(1, 0): 1, (0, 0): 1}), P(QQ, 2, {(0, 1): 1})])


def test_reduce_rejects_all_zero():
    with pytest.raises(ValueError, match="zero"):
        reduce_map([Polynomial.zero(QQ, 2), Polynomial.zero(QQ, 2)])


def test_reduce_canonical_scaling():
    a = [P(QQ, 2, {(1, 0): 3}), P(QQ, 2, {(0, 1): 3})]
    b = [P(QQ, 2, {(1, 0): -7}), P(QQ, 2, {(0, 1): -7})]
    fa, _ = reduce_map(a)
    fb, _ = reduce_map(b)
    assert maps_equal(fa, fb)
    assert fa.components[0].leading()[1] == QQ.one


# --- compose_maps ---


def test_sigma_squared_is_identity_with_drop():
    s = gallery_entry("sigma-3").projective
    comp, drop = compose_maps(s, s)
    assert drop == 3 * 3 - 1 == 8
    assert maps_equal(comp, projective_identity(QQ, 3))


def test_sigma2_squared_drop_three():
    s = gallery_entry("sigma-2").projective
    comp, drop = compose_maps(s, s)
    assert comp.degree() == 1 and drop == 3
    assert maps_equal(comp, projective_identity(QQ, 2))


def test_compose_with_identity_no_drop():
    f = gallery_entry("linearex").projective
    ident = projective_identity(QQ, f.dim)
    for left, right in ((f, ident), (ident, f)):
        comp, drop = compose_maps(left, right)
        assert drop == 0
        assert maps_equal(comp, f)


def test_linearex_self_composition_drop_four():
    f = gallery_entry("linearex").projective
    comp, drop = compose_maps(f, f)
    assert f.degree() == 3
    assert comp.degree() == 5
    assert drop == 4


def test_compose_dimension_and_field_mismatch():
    f = gallery_entry("sigma-2").projective
    g = gallery_entry("sigma-3").projective
    with pytest.raises(ValueError, match="dimension"):
        compose_maps(f, g)
    h = rand_projective(random.Random(0), F7, 2, 1)
    with pytest.raises(ValueError, match="field"):
        compose_maps(f, h)


def test_compose_associative():
    rng = random.Random(31)
    for _ in range(8):
        f = rand_projective(rng, F7, 2, 2)
        g = rand_projective(rng, F7, 2, 2)
        h = rand_projective(rng, F7, 2, 2)
        left, _ = compose_maps(compose_maps(f, g)[0], h)
        right, _ = compose_maps(f, compose_maps(g, h)[0])
        assert maps_equal(left, right)


def test_random_drops_submultiplicative_and_reconcile():
    # the acceptance suite runs the 200-pair version; keep a fast sentinel here
    rng = random.Random(32)
    for _ in range(40):
        f = rand_projective(rng, F7, 2, rng.randrange(1, 4))
        g = rand_projective(rng, F7, 2, rng.randrange(1, 4))
        comp, drop = compose_maps(f, g)
        assert 0 <= drop
        assert comp.degree() == f.degree() * g.degree() - drop


# --- homogenize / dehomogenize ---


def test_homogenize_dehomogenize_round_trip():
    for name in ("linearex", "henon-control", "exaut-3", "monomial-triangular-2"):
        entry = gallery_entry(name)
        if entry.affine is None:
            continue
        F = homogenize(entry.affine)
        back = dehomogenize(F)
        assert back.components == entry.affine.components


def test_homogenize_known_form():
    # (y, y^2 + x) -> [x0^2 : x2*x0 : x2^2 + x1*x0]
    hen = gallery_entry("henon-control").affine
    F = homogenize(hen)
    assert F.degree() == 2
    assert F.components[0].terms == {(2, 0, 0): Fraction(1)}


def test_dehomogenize_rejects_non_chart_maps():
    with pytest.raises(ValueError, match="vanishes"):
        dehomogenize(
            ProjectiveRationalMap(
                1, (Polynomial.zero(QQ, 2), P(QQ, 2, {(0, 1): 1}))
            )
        )
    with pytest.raises(ValueError, match="not polynomial"):
        dehomogenize(
            ProjectiveRationalMap(
                1, (P(QQ, 2, {(0, 2): 1}), P(QQ, 2, {(1, 1): 1}))
            )
        )


# --- equality, dominance ---


def test_maps_equal_mod_scaling_via_reduce():
    f = gallery_entry("linearex").projective
    scaled, removed = reduce_map(tuple(c.scale(Fraction(5, 3)) for c in f.components))
    assert removed == 0
    assert maps_equal(scaled, f)


def test_jacobian_hint():
    hen = gallery_entry("henon-control").affine
    assert jacobian_dominance_hint(hen) == "dominant"
    x = Polynomial.variable(QQ, 2, 0)
    collapse = AffineEndomorphism(2, (x, x))
    assert jacobian_dominance_hint(collapse) == "notDominant"
    x7 = Polynomial.variable(F7, 2, 0)
    y7 = Polynomial.variable(F7, 2, 1)
    assert jacobian_dominance_hint(AffineEndomorphism(2, (x7, y7))) == "unknown"


def test_identity_helpers():
    assert affine_identity(QQ, 3).max_degree() == 1
    ident = projective_identity(F7, 2)
    assert ident.degree() == 1 and ident.dim == 2


# --- field independence of the degree sequence ---


def test_linearex_degrees_stable_q_vs_f101():
    entry = gallery_entry("linearex")
    over_q = iterate_degrees(entry.projective, 10).degrees
    f101 = expression_to_map(parse_map(map_to_text(entry.projective), PrimeField(101)))
    over_p = iterate_degrees(f101, 10).degrees
    assert over_q == over_p == tuple(2 * n + 1 for n in range(1, 11))
