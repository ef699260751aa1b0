"""The built-in example maps: ground truth for tests and the CLI.

Each entry records what is actually known about its degree sequence: an
exact law where one is certain on the validation window, the polynomial
growth order where only the order is known, and the provenance of both.
All entries live over Q so they can be recomposed over any prime field by
coefficient reduction.

The recursive triangular family (`make_exaut`) steps by two dimensions:
the base is the 3-variable map with degrees 2n+1, and each step couples two
new leading variables to the previous first coordinate, raising the
polynomial growth order by one.  Even dimensions embed the next-lower odd
case with an untouched final coordinate; that embedding preserves the
degree sequence, so the recorded growth order for dimension d is
floor(d/2) for odd d and d/2 - 1 for even d: the honest value, not the
odd-case formula extended blindly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .fields import QQ
from .maps import AffineEndomorphism, ProjectiveRationalMap, homogenize, reduce_map
from .polynomials import Polynomial


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    dim: int
    kind: str  # "affine" | "projective"
    affine: AffineEndomorphism | None
    projective: ProjectiveRationalMap
    expected_law: str | None
    expected_degree_fn: Callable | None  # n -> deg(f^n), exact on the window
    expected_dpol: float | None
    expected_lambda: float | None
    provenance: str
    notes: str = ""
    factors: tuple | None = None


def _affine(d: int, term_dicts: list) -> AffineEndomorphism:
    comps = tuple(Polynomial(QQ, d, dict(t)) for t in term_dicts)
    return AffineEndomorphism(d, comps)


def _entry_from_affine(name, aff, **kw) -> GalleryEntry:
    return GalleryEntry(
        name=name,
        dim=aff.dim,
        kind="affine",
        affine=aff,
        projective=homogenize(aff),
        **kw,
    )


def make_linearex() -> GalleryEntry:
    """The 3-variable triangular automorphism with deg(f^n) = 2n+1."""
    f = _affine(
        3,
        [
            {(1, 0, 0): 1, (0, 1, 1): 1, (1, 0, 2): 1},  # x + z(y + xz)
            {(0, 1, 0): 1, (1, 0, 1): 1},  # y + xz
            {(0, 0, 1): 1},  # z
        ],
    )
    g = _affine(3, [{(1, 0, 0): 1, (0, 1, 1): 1}, {(0, 1, 0): 1}, {(0, 0, 1): 1}])
    h = _affine(3, [{(1, 0, 0): 1}, {(0, 1, 0): 1, (1, 0, 1): 1}, {(0, 0, 1): 1}])
    return _entry_from_affine(
        "linearex",
        f,
        expected_law="2n+1",
        expected_degree_fn=lambda n: 2 * n + 1,
        expected_dpol=1.0,
        expected_lambda=None,
        provenance=(
            "composition of two quadratic triangular automorphisms of affine "
            "3-space; the iterates gain exactly two in degree per step"
        ),
        notes="first coordinate of f^n carries the top degree",
        factors=(g, h),
    )


def _exaut_term_dicts(d: int) -> list:
    """Term dicts of the recursive family on d variables (d >= 3)."""
    if d == 3:
        return [
            {(1, 0, 0): 1, (0, 1, 1): 1, (1, 0, 2): 1},
            {(0, 1, 0): 1, (1, 0, 1): 1},
            {(0, 0, 1): 1},
        ]
    if d % 2 == 0:
        sub = _exaut_term_dicts(d - 1)
        padded = [{e + (0,): c for e, c in t.items()} for t in sub]
        padded.append({(0,) * (d - 1) + (1,): 1})
        return padded

    def lift(t: dict) -> dict:  # reindex a (d-2)-variable dict to x3..xd
        return {(0, 0) + e: c for e, c in t.items()}

    e1 = [0] * d
    e1[0] = 1
    top1 = {tuple(e1): 1}  # x1
    e = [0] * d
    e[1], e[2] = 1, 1
    top1[tuple(e)] = 1  # x3*x2
    e = [0] * d
    e[0], e[2] = 1, 2
    top1[tuple(e)] = 1  # x1*x3^2
    top2 = {}
    e = [0] * d
    e[1] = 1
    top2[tuple(e)] = 1  # x2
    e = [0] * d
    e[0], e[2] = 1, 1
    top2[tuple(e)] = 1  # x1*x3
    return [top1, top2] + [lift(t) for t in _exaut_term_dicts(d - 2)]


def make_exaut(d: int) -> GalleryEntry:
    """Triangular automorphism of A^d with polynomial degree growth.

    Odd d: growth order floor(d/2); d = 3 degrees are 2n+1 and d = 5
    degrees are 2n^2+1 (exact on the validated window).  Even d embeds the
    (d−1)-dimensional map with an inert last coordinate, so it inherits the
    lower order d/2 − 1.
    """
    if d < 3:
        raise ValueError("the recursive family starts at dimension 3")
    aff = _affine(d, _exaut_term_dicts(d))
    odd = d if d % 2 else d - 1
    dpol = odd // 2
    if odd == 3:
        law, fn = "2n+1", lambda n: 2 * n + 1
    elif odd == 5:
        law, fn = "2n^2+1", lambda n: 2 * n * n + 1
    else:
        law, fn = None, None
    return _entry_from_affine(
        f"exaut-{d}",
        aff,
        expected_law=law,
        expected_degree_fn=fn,
        expected_dpol=float(dpol),
        expected_lambda=None,
        provenance=(
            "recursive triangular family: each two-variable step couples the "
            "new leading pair to the previous first coordinate, raising the "
            "polynomial growth order by one over the 3-variable base"
            + ("; even dimension embeds the odd case below it" if d % 2 == 0 else "")
        ),
        notes="first coordinate of f^n carries the top degree",
    )


def _triangular_matrix_law(d: int) -> Callable:
    """Exact degree law of the triangular monomial map from its exponent
    matrix: deg(f^n) is the maximal row sum of M^n (reduction never fires
    because component 0 of the homogenization stays x0-free of content)."""

    def law(n: int) -> int:
        M = [[1 if j <= i else 0 for j in range(d)] for i in range(d)]
        P = [row[:] for row in M]
        for _ in range(n - 1):
            P = [
                [sum(P[i][k] * M[k][j] for k in range(d)) for j in range(d)]
                for i in range(d)
            ]
        return max(sum(row) for row in P)

    return law


def make_monomial_triangular(d: int) -> GalleryEntry:
    """f = (x1, x1x2, ..., x1x2...xd): growth order d-1.

    The recorded exact values come from powers of the exponent matrix, not
    from the closed-form n^(d-1) sometimes quoted for this family; direct
    reduced composition gives e.g. 3,6,10,15 for d = 3 (binomials, same
    order, different values).
    """
    if d < 2:
        raise ValueError("need at least two variables")
    dicts = []
    for i in range(d):
        e = tuple(1 if j <= i else 0 for j in range(d))
        dicts.append({e: 1})
    aff = _affine(d, dicts)
    return _entry_from_affine(
        f"monomial-triangular-{d}",
        aff,
        expected_law="max row sum of the n-th exponent-matrix power",
        expected_degree_fn=_triangular_matrix_law(d),
        expected_dpol=float(d - 1),
        expected_lambda=None,
        provenance=(
            "triangular monomial endomorphism; iteration composes exponent "
            "matrices, so the degree law is the maximal row sum of the n-th "
            "matrix power"
        ),
    )


def make_henon_control() -> GalleryEntry:
    """h = (y, y^2 + x): the exponential-growth control, deg(h^n) = 2^n."""
    aff = _affine(2, [{(0, 1): 1}, {(0, 2): 1, (1, 0): 1}])
    return _entry_from_affine(
        "henon-control",
        aff,
        expected_law="2^n",
        expected_degree_fn=lambda n: 2**n,
        expected_dpol=None,
        expected_lambda=2.0,
        provenance=(
            "control: quadratic plane automorphism whose iterate degrees "
            "double every step"
        ),
    )


def make_sigma_involution(d: int) -> GalleryEntry:
    """The standard involution of P^d: i-th component is prod_{j != i} x_j."""
    if d < 2:
        raise ValueError("the involution needs projective dimension >= 2")
    comps = []
    for i in range(d + 1):
        e = tuple(0 if j == i else 1 for j in range(d + 1))
        comps.append(Polynomial(QQ, d + 1, {e: 1}))
    proj, _ = reduce_map(comps)
    return GalleryEntry(
        name=f"sigma-{d}",
        dim=d,
        kind="projective",
        affine=None,
        projective=proj,
        expected_law="alternating d, 1",
        expected_degree_fn=lambda n, d=d: d if n % 2 else 1,
        expected_dpol=None,
        expected_lambda=None,
        provenance=(
            "control: degree-d involution (squares to the identity), so the "
            "degree sequence alternates and every second composition drops "
            "maximally"
        ),
        notes="expected period 2 over any field",
    )


def list_gallery() -> list:
    """All built-in entries, deterministically ordered."""
    return [
        make_linearex(),
        make_exaut(3),
        make_exaut(4),
        make_exaut(5),
        make_exaut(6),
        make_monomial_triangular(2),
        make_monomial_triangular(3),
        make_henon_control(),
        make_sigma_involution(2),
        make_sigma_involution(3),
    ]


def gallery_entry(name: str) -> GalleryEntry:
    for entry in list_gallery():
        if entry.name == name:
            return entry
    known = ", ".join(e.name for e in list_gallery())
    raise KeyError(f"no gallery entry named {name!r}; known: {known}")
