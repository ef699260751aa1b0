from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degseq.fields import QQ, PrimeField
from degseq.polynomials import NEG_INF, Polynomial, poly_sum

from oracles import o_add, o_mul, o_subst

F7 = PrimeField(7)


def dict_of(p: Polynomial) -> dict:
    return dict(p.terms)


@st.composite
def polys(draw, field=QQ, nvars=3, max_deg=4, max_terms=6):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(nvars))
        c = draw(st.integers(-9, 9))
        if c:
            terms[e] = field.coerce(c)
    return Polynomial(field, nvars, terms)


def test_constructors():
    z = Polynomial.zero(QQ, 2)
    assert z.is_zero() and z.total_degree() == NEG_INF
    one = Polynomial.one(QQ, 2)
    assert one.terms == {(0, 0): 1}
    x = Polynomial.variable(QQ, 3, 0)
    assert x.terms == {(1, 0, 0): 1}
    m = Polynomial.monomial(QQ, 2, (2, 1), Fraction(3, 4))
    assert m.terms == {(2, 1): Fraction(3, 4)}
    c = Polynomial.constant(F7, 2, 9)
    assert c.terms == {(0, 0): 2}


def test_zero_coefficients_dropped():
    p = Polynomial(QQ, 2, {(1, 0): Fraction(0), (0, 1): Fraction(2)})
    assert p.terms == {(0, 1): 2}


def test_total_degree_and_homogeneous():
    p = Polynomial(QQ, 3, {(2, 1, 0): 1, (0, 0, 3): -1})
    assert p.total_degree() == 3 and p.is_homogeneous()
    q = Polynomial(QQ, 3, {(1, 0, 0): 1, (0, 0, 3): 1})
    assert not q.is_homogeneous()
    assert Polynomial.zero(QQ, 3).is_homogeneous()


def test_arithmetic_small_cases():
    x = Polynomial.variable(QQ, 2, 0)
    y = Polynomial.variable(QQ, 2, 1)
    assert ((x + y) * (x - y)).terms == {(2, 0): 1, (0, 2): -1}
    assert (x - x).is_zero()
    assert ((x + y) ** 2).terms == {(2, 0): 1, (1, 1): 2, (0, 2): 1}


def test_binomial_char_p_collapse():
    x = Polynomial.variable(F7, 2, 0)
    y = Polynomial.variable(F7, 2, 1)
    p = (x + y) ** 7  # freshman's dream in F_7
    assert p.terms == {(7, 0): 1, (0, 7): 1}


@settings(max_examples=120, deadline=None)
@given(polys(), polys(), polys())
def test_mul_matches_oracle_and_ring_axioms(a, b, c):
    assert dict_of(a * b) == o_mul(dict_of(a), dict_of(b), QQ)
    assert dict_of(a * (b + c)) == dict_of(a * b + a * c)
    assert dict_of((a * b) * c) == dict_of(a * (b * c))


@settings(max_examples=60, deadline=None)
@given(polys(field=F7), polys(field=F7))
def test_mul_matches_oracle_mod_p(a, b):
    assert dict_of(a * b) == o_mul(dict_of(a), dict_of(b), F7)


@settings(max_examples=40, deadline=None)
@given(polys(max_deg=2, max_terms=4), st.lists(polys(max_deg=2, max_terms=3), min_size=3, max_size=3))
def test_substitute_matches_oracle(p, args):
    got = p.substitute(tuple(args))
    want = o_subst(dict_of(p), [dict_of(g) for g in args], 3, QQ)
    assert dict_of(got) == want


def test_substitute_identity():
    p = Polynomial(QQ, 2, {(2, 1): Fraction(5), (0, 0): Fraction(-1)})
    xs = tuple(Polynomial.variable(QQ, 2, i) for i in range(2))
    assert p.substitute(xs).terms == p.terms


def test_evaluate():
    p = Polynomial(QQ, 2, {(2, 0): 1, (0, 1): 3})
    assert p.evaluate((Fraction(2), Fraction(5))) == 4 + 15


def test_divide_exact():
    x = Polynomial.variable(QQ, 2, 0)
    y = Polynomial.variable(QQ, 2, 1)
    prod = (x + y) * (x - y)
    assert prod.divide_exact(x + y).terms == (x - y).terms
    with pytest.raises(ValueError):
        (x * x + y).divide_exact(x + y)
    assert prod.divisible_by(x - y)
    assert not prod.divisible_by(x + y + Polynomial.one(QQ, 2))


@settings(max_examples=60, deadline=None)
@given(polys(max_terms=4), polys(max_terms=4))
def test_divide_exact_inverts_mul(a, b):
    if a.is_zero() or b.is_zero():
        return
    assert dict_of((a * b).divide_exact(b)) == dict_of(a)


def test_derivative():
    p = Polynomial(QQ, 2, {(3, 1): Fraction(2), (0, 2): Fraction(1)})
    assert p.derivative(0).terms == {(2, 1): 6}
    assert p.derivative(1).terms == {(3, 0): 2, (0, 1): 2}
    # in F_3 the x^3 term dies under d/dx
    q = Polynomial(PrimeField(3), 1, {(3,): 1, (1,): 1})
    assert q.derivative(0).terms == {(0,): 1}


def test_sorted_terms_grlex_descending():
    p = Polynomial(QQ, 2, {(0, 2): 1, (1, 0): 1, (2, 0): 1, (1, 1): 1})
    exps = [e for e, _ in p.sorted_terms()]
    assert exps == [(2, 0), (1, 1), (0, 2), (1, 0)]


def test_leading_term():
    p = Polynomial(QQ, 2, {(2, 0): Fraction(4), (0, 1): Fraction(1)})
    assert p.leading() == ((2, 0), 4)


def test_poly_sum():
    xs = [Polynomial.variable(QQ, 2, 0) for _ in range(5)]
    assert poly_sum(xs, QQ, 2).terms == {(1, 0): 5}
    assert poly_sum([], QQ, 2).is_zero()
    # mismatched fields refuse to combine
    with pytest.raises(ValueError):
        Polynomial.one(QQ, 2) + Polynomial.one(F7, 2)


def test_scale_and_shift():
    p = Polynomial(QQ, 2, {(1, 1): Fraction(3)})
    assert p.scale(Fraction(1, 3)).terms == {(1, 1): 1}
    assert p.scale(0).is_zero()
    assert p.shift((2, 0)).terms == {(3, 1): 3}


def test_hash_eq_consistency():
    a = Polynomial(QQ, 2, {(1, 0): Fraction(2)})
    b = Polynomial(QQ, 2, {(1, 0): Fraction(4, 2)})
    assert a == b and hash(a) == hash(b)
    assert a != Polynomial(QQ, 2, {(1, 0): Fraction(3)})
