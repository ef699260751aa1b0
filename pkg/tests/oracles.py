"""Independent reference implementations used to cross-check the library.

Everything here is deliberately naive: dict-of-tuples polynomials driven by
plain Fraction / modular-int arithmetic, integer matrix powers by repeated
multiplication, and word enumeration without deduplication.  No imports
from degseq internals beyond field objects (coerce/add/mul only).
"""

from __future__ import annotations

from itertools import product


def o_add(a: dict, b: dict, field) -> dict:
    out = dict(a)
    for e, c in b.items():
        s = field.add(out.get(e, field.zero), c)
        if s == field.zero:
            out.pop(e, None)
        else:
            out[e] = s
    return out


def o_mul(a: dict, b: dict, field) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            s = field.add(out.get(e, field.zero), field.mul(ca, cb))
            if s == field.zero:
                out.pop(e, None)
            else:
                out[e] = s
    return out


def o_pow(a: dict, k: int, nvars: int, field) -> dict:
    out = {(0,) * nvars: field.one}
    for _ in range(k):
        out = o_mul(out, a, field)
    return out


def o_subst(poly: dict, args: list, nvars: int, field) -> dict:
    out: dict = {}
    for exps, coeff in poly.items():
        term = {(0,) * nvars: coeff}
        for var, k in enumerate(exps):
            if k:
                term = o_mul(term, o_pow(args[var], k, nvars, field), field)
        out = o_add(out, term, field)
    return out


def o_total_degree(poly: dict):
    if not poly:
        return None
    return max(sum(e) for e in poly)


def monomial_content(polys: list) -> tuple:
    """Elementwise-min exponent vector over every term of every dict."""
    mins = None
    for p in polys:
        for e in p:
            mins = e if mins is None else tuple(map(min, mins, e))
    return mins


def strip_monomial(poly: dict, mins: tuple) -> dict:
    return {tuple(a - b for a, b in zip(e, mins)): c for e, c in poly.items()}


# --- exponent-matrix degree oracle for monomial self-maps ------------------


def matrix_power_max_rowsum(matrix: list, n: int) -> int:
    """deg(f^n) for an affine monomial map with exponent matrix `matrix`."""
    size = len(matrix)
    power = [row[:] for row in matrix]
    for _ in range(n - 1):
        power = [
            [sum(power[i][k] * matrix[k][j] for k in range(size)) for j in range(size)]
            for i in range(size)
        ]
    return max(sum(row) for row in power)


def triangular_exponent_matrix(d: int) -> list:
    return [[1 if j <= i else 0 for j in range(d)] for i in range(d)]


# --- brute-force ball enumeration (no deduplication) ------------------------


def brute_ball_degrees(generators: list, radius: int, compose) -> list:
    """max deg over ALL words of length <= m, enumerated exhaustively.

    `compose` is the pairwise composition (the thing under test supplies it);
    independence lies in enumerating every word instead of deduplicating.
    """
    best = []
    running = 1  # the empty word is the identity
    for m in range(1, radius + 1):
        for word in product(range(len(generators)), repeat=m):
            current = generators[word[0]]
            for idx in word[1:]:
                current = compose(current, generators[idx])
            running = max(running, current.degree())
        best.append(running)
    return best


# --- synthetic sequences -----------------------------------------------------


def power_law(k: int, n_terms: int) -> list:
    return [n**k for n in range(1, n_terms + 1)]


def binomial_growth(n_terms: int) -> list:
    from math import comb

    return [comb(n + 2, 2) for n in range(1, n_terms + 1)]
