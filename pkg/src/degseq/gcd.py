"""Multivariate polynomial GCD over exact fields.

Strategy: recurse on the last variable present, splitting each input into
content (GCD of its coefficients, themselves polynomials in the remaining
variables) and primitive part, then run a primitive pseudo-remainder
sequence on the primitive parts.  Monomial inputs short-circuit to per-
variable minimum exponents, which is the only path the degree-iteration hot
loop ever needs (compositions of homogenized affine maps share a pure power
of x0).

Results are always monic in the graded-lex leading coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd, lcm as int_lcm
from typing import Iterable, Sequence

from .fields import QQ
from .polynomials import Polynomial


def _deg_in(p: Polynomial, v: int) -> int:
    if not p.terms:
        raise ValueError("zero polynomial")
    return max(e[v] for e in p.terms)


def _min_exponents(p: Polynomial) -> tuple[int, ...]:
    its = iter(p.terms)
    lo = list(next(its))
    for e in its:
        for i, k in enumerate(e):
            if k < lo[i]:
                lo[i] = k
    return tuple(lo)


def _monomial_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    exps = tuple(min(x, y) for x, y in zip(_min_exponents(a), _min_exponents(b)))
    return Polynomial.monomial(a.field, a.nvars, exps, a.field.one)


def _coefficient_in(p: Polynomial, v: int, k: int) -> Polynomial:
    out = {}
    for exps, coeff in p.terms.items():
        if exps[v] == k:
            e = list(exps)
            e[v] = 0
            out[tuple(e)] = coeff
    return Polynomial(p.field, p.nvars, out, _clean=True)


def _only_variable(p: Polynomial, v: int) -> bool:
    return all(all(k == 0 for i, k in enumerate(e) if i != v) for e in p.terms)


def _normalize(p: Polynomial) -> Polynomial:
    """Unit-normalize: integer-primitive with positive leading coefficient
    over Q (keeps PRS coefficients integral), monic over F_p."""
    if p.is_zero():
        return p
    if p.field is not QQ:
        return p.monic()
    num = 0
    den = 1
    for c in p.terms.values():
        num = int_gcd(num, c.numerator)
        den = int_lcm(den, c.denominator)
    scalar = Fraction(den, num)
    if p.leading()[1] < 0:
        scalar = -scalar
    return p.scale(scalar)


def _euclid_univariate(a: Polynomial, b: Polynomial, v: int) -> Polynomial:
    field = a.field
    fa = {e[v]: c for e, c in a.terms.items()}
    fb = {e[v]: c for e, c in b.terms.items()}

    def mod(r: dict, g: dict) -> dict:
        dg = max(g)
        ginv = field.inv(g[dg])
        r = dict(r)
        while r and max(r) >= dg:
            dr = max(r)
            scale = field.mul(r[dr], ginv)
            for e, c in g.items():
                idx = dr - dg + e
                s = field.sub(r.get(idx, field.zero), field.mul(scale, c))
                if s == field.zero:
                    r.pop(idx, None)
                else:
                    r[idx] = s
            r.pop(dr, None)  # guaranteed eliminated; guard against inexact fields
        return r

    while fb:
        fa, fb = fb, mod(fa, fb)
    exps = [0] * a.nvars
    out = {}
    for k, c in fa.items():
        exps[v] = k
        out[tuple(exps)] = c
    return Polynomial(field, a.nvars, out, _clean=True)


def _pseudo_remainder(f: Polynomial, g: Polynomial, v: int) -> Polynomial:
    """prem(f, g) wrt x_v: remainder of lc(g)^k * f under division by g."""
    dg = _deg_in(g, v)
    lc_g = _coefficient_in(g, v, dg)
    r = f
    while r.terms and _deg_in(r, v) >= dg:
        dr = _deg_in(r, v)
        lc_r = _coefficient_in(r, v, dr)
        shift = [0] * r.nvars
        shift[v] = dr - dg
        r = r * lc_g - (lc_r * g).shift(shift)
    return r


def _content_in(p: Polynomial, v: int) -> Polynomial:
    coeffs = [_coefficient_in(p, v, k) for k in range(_deg_in(p, v) + 1)]
    content: Polynomial | None = None
    for c in coeffs:
        if c.is_zero():
            continue
        content = c if content is None else _gcd_rec(content, c)
        if content.is_constant():
            break
    assert content is not None
    return _normalize(content)


def _gcd_rec(a: Polynomial, b: Polynomial) -> Polynomial:
    """GCD of nonzero inputs, unit-normalized."""
    if a.is_monomial() or b.is_monomial():
        return _monomial_gcd(a, b)
    if a.is_constant() or b.is_constant():
        return Polynomial.one(a.field, a.nvars)

    v = a.nvars - 1
    while _deg_in(a, v) == 0 and _deg_in(b, v) == 0:
        v -= 1
    if _deg_in(a, v) == 0:
        return _gcd_rec(a, _content_in(b, v))
    if _deg_in(b, v) == 0:
        return _gcd_rec(_content_in(a, v), b)

    if _only_variable(a, v) and _only_variable(b, v):
        return _normalize(_euclid_univariate(a, b, v))

    ca = _content_in(a, v)
    cb = _content_in(b, v)
    f = _normalize(a.divide_exact(ca))
    g = _normalize(b.divide_exact(cb))
    cg = _gcd_rec(ca, cb) if not (ca.is_constant() and cb.is_constant()) \
        else Polynomial.one(a.field, a.nvars)

    if _deg_in(f, v) < _deg_in(g, v):
        f, g = g, f
    while True:
        r = _pseudo_remainder(f, g, v)
        if r.is_zero():
            part = g.divide_exact(_content_in(g, v))
            break
        if _deg_in(r, v) == 0:
            part = Polynomial.one(a.field, a.nvars)
            break
        f, g = g, _normalize(r.divide_exact(_content_in(r, v)))
    return _normalize(cg * part)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor.  Errors when both inputs are zero."""
    if a.field != b.field:
        raise ValueError(f"field mismatch: {a.field} vs {b.field}")
    if a.nvars != b.nvars:
        raise ValueError(f"arity mismatch: {a.nvars} vs {b.nvars}")
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.field is QQ:
        a = _normalize(a)
        b = _normalize(b)
    return _gcd_rec(a, b).monic()


def common_factor(polys: Sequence[Polynomial] | Iterable[Polynomial]) -> Polynomial:
    """Monic GCD of a family (zero members ignored); errors if all are zero."""
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        raise ValueError("all polynomials are zero")
    # starting from a monomial (when present) keeps everything on the cheap path
    nonzero.sort(key=lambda p: (not p.is_monomial(), len(p.terms)))
    g = nonzero[0].monic()
    for p in nonzero[1:]:
        if g.is_constant():
            break
        g = poly_gcd(g, p)
    if g.is_constant():
        return Polynomial.one(g.field, g.nvars)
    return g
