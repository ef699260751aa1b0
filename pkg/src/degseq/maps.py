"""Rational self-maps of P^d and endomorphisms of A^d.

A projective map is d+1 homogeneous components of one common degree in
x_0..x_d with no common factor.  Reduction happens at construction:
`reduce_map` strips the collective GCD, applies the canonical scaling (first
nonzero component monic in its graded-lex leading term), and reports the
degree it removed.  Composition then accounts degree drops exactly:
deg(f)·deg(g) minus the reduced degree equals the degree of the common
factor the substitution produced, which is the algebraic face of "g
contracts a hypersurface into the indeterminacy locus of f".

Affine endomorphisms are d unconstrained polynomial components in x_1..x_d;
`homogenize` embeds them into P^d via the hyperplane at infinity and
`dehomogenize` inverts that on the chart x_0 != 0 (rejecting maps whose
chart restriction is not polynomial).
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import PrimeField
from .gcd import common_factor
from .polynomials import Polynomial


@dataclass(frozen=True)
class ProjectiveRationalMap:
    """Reduced, canonically scaled self-map of P^dim.

    components: dim+1 homogeneous polynomials in x_0..x_dim of one common
    degree, collective GCD constant, first nonzero component monic.  Build
    through reduce_map; the constructor checks the cheap invariants only.
    """

    dim: int
    components: tuple

    def __post_init__(self):
        d = self.dim
        comps = self.components
        if d < 1:
            raise ValueError("projective dimension must be >= 1")
        if len(comps) != d + 1:
            raise ValueError(f"expected {d + 1} components, got {len(comps)}")
        fld = comps[0].field
        degree = None
        for c in comps:
            if c.field != fld or c.nvars != d + 1:
                raise ValueError("components must share the field and live in x_0..x_d")
            if not c.is_homogeneous():
                raise ValueError("components must be homogeneous")
            if not c.is_zero():
                if degree is None:
                    degree = c.total_degree()
                elif c.total_degree() != degree:
                    raise ValueError("components must share one degree")
        if degree is None:
            raise ValueError("all components are zero")

    @property
    def field(self):
        return self.components[0].field

    def degree(self) -> int:
        for c in self.components:
            if not c.is_zero():
                return c.total_degree()
        raise AssertionError("unreachable: all-zero map")

    def __repr__(self):
        return f"ProjectiveRationalMap(P^{self.dim}, degree {self.degree()})"


@dataclass(frozen=True)
class AffineEndomorphism:
    """Polynomial self-map of A^dim; components in x_1..x_dim, any degrees."""

    dim: int
    components: tuple

    def __post_init__(self):
        d = self.dim
        if d < 1:
            raise ValueError("affine dimension must be >= 1")
        if len(self.components) != d:
            raise ValueError(f"expected {d} components, got {len(self.components)}")
        fld = self.components[0].field
        for c in self.components:
            if c.field != fld or c.nvars != d:
                raise ValueError("components must share the field and live in x_1..x_d")

    @property
    def field(self):
        return self.components[0].field

    def max_degree(self) -> int:
        degs = [c.total_degree() for c in self.components if not c.is_zero()]
        if not degs:
            raise ValueError("zero map has no degree")
        return max(degs)

    def __repr__(self):
        return f"AffineEndomorphism(A^{self.dim})"


def reduce_map(raw_components) -> tuple[ProjectiveRationalMap, int]:
    """Strip the collective GCD and canonicalize; return (map, removed degree)."""
    comps = tuple(raw_components)
    if not comps:
        raise ValueError("no components")
    d = len(comps) - 1
    nonzero = [c for c in comps if not c.is_zero()]
    if not nonzero:
        raise ValueError("all components are zero")
    for c in comps:
        if not c.is_homogeneous():
            raise ValueError(f"component {c!r} is not homogeneous")
    degs = {c.total_degree() for c in nonzero}
    if len(degs) > 1:
        raise ValueError(f"components have mixed degrees {sorted(degs)}")

    g = common_factor(nonzero)
    removed = g.total_degree()
    if removed > 0:
        comps = tuple(c if c.is_zero() else c.divide_exact(g) for c in comps)
    # canonical scaling: first nonzero component monic in its grlex leading term
    fld = comps[0].field
    for c in comps:
        if not c.is_zero():
            inv = fld.inv(c.leading()[1])
            if inv != fld.one:
                comps = tuple(p.scale(inv) for p in comps)
            break
    return ProjectiveRationalMap(d, comps), int(removed)


def map_degree(f: ProjectiveRationalMap) -> int:
    return f.degree()


def projective_identity(fld, d: int) -> ProjectiveRationalMap:
    comps = tuple(Polynomial.variable(fld, d + 1, i) for i in range(d + 1))
    return ProjectiveRationalMap(d, comps)


def affine_identity(fld, d: int) -> AffineEndomorphism:
    comps = tuple(Polynomial.variable(fld, d, i) for i in range(d))
    return AffineEndomorphism(d, comps)


def compose_maps(
    f: ProjectiveRationalMap, g: ProjectiveRationalMap
) -> tuple[ProjectiveRationalMap, int]:
    """Reduced f∘g plus the degree drop deg(f)·deg(g) − deg(f∘g)."""
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")
    if f.field != g.field:
        raise ValueError(f"field mismatch: {f.field} vs {g.field}")
    images = list(g.components)
    raw = [c.substitute(images) for c in f.components]
    composed, removed = reduce_map(raw)
    drop = f.degree() * g.degree() - composed.degree()
    assert drop == removed, "drop must equal the removed common-factor degree"
    return composed, drop


def homogenize(f: AffineEndomorphism) -> ProjectiveRationalMap:
    """View an affine endomorphism as a rational self-map of P^d.

    With D the max component degree, the components become
    [x_0^D, x_0^{D-deg f_1}·f_1^h, ..., x_0^{D-deg f_d}·f_d^h] and are then
    reduced (reduction is trivial whenever some f_i has a term of degree D
    not divisible by every other component's terms; in particular for all
    the gallery maps).
    """
    d = f.dim
    fld = f.field
    D = f.max_degree()
    if D < 0:
        raise ValueError("cannot homogenize the zero map")
    out = [Polynomial.monomial(fld, d + 1, (D,) + (0,) * d)]
    for comp in f.components:
        terms = {}
        for e, c in comp.terms.items():
            terms[(D - sum(e),) + e] = c
        out.append(Polynomial(fld, d + 1, terms, _clean=True))
    return reduce_map(out)[0]


def _set_chart_coordinate(p: Polynomial) -> Polynomial:
    """Evaluate x_0 = 1: drop the first exponent and merge collisions."""
    fld = p.field
    out: dict = {}
    for e, c in p.terms.items():
        key = e[1:]
        if key in out:
            s = fld.add(out[key], c)
            if s == fld.zero:
                del out[key]
            else:
                out[key] = s
        else:
            out[key] = c
    return Polynomial(fld, p.nvars - 1, out, _clean=True)


def dehomogenize(F: ProjectiveRationalMap) -> AffineEndomorphism:
    """Restrict to the affine chart x_0 != 0; components F_i/F_0 at x_0 = 1.

    Raises when F_0 is identically zero or some quotient is not polynomial
    (the map is not an endomorphism of the chart).
    """
    if F.components[0].is_zero():
        raise ValueError("component 0 vanishes identically; no affine chart")
    denom = _set_chart_coordinate(F.components[0])
    if denom.is_zero():
        raise ValueError("component 0 vanishes on the chart x_0 = 1")
    comps = []
    for c in F.components[1:]:
        numer = _set_chart_coordinate(c)
        try:
            comps.append(numer.divide_exact(denom))
        except ValueError as exc:
            raise ValueError(
                "map is not polynomial on the affine chart x_0 != 0"
            ) from exc
    return AffineEndomorphism(F.dim, tuple(comps))


def maps_equal(f: ProjectiveRationalMap, g: ProjectiveRationalMap) -> bool:
    """Syntactic equality of the canonical reduced scaled forms."""
    return f.dim == g.dim and f.field == g.field and f.components == g.components


def _poly_det(rows: list, fld, nvars: int) -> Polynomial:
    """Determinant of a square polynomial matrix by Laplace expansion with a
    minor cache keyed on column subsets (fine for the d <= 6 desk scale)."""
    n = len(rows)
    cache: dict = {}

    def minor(i: int, cols: tuple) -> Polynomial:
        if i == n:
            return Polynomial.one(fld, nvars)
        got = cache.get((i, cols))
        if got is not None:
            return got
        acc = Polynomial.zero(fld, nvars)
        for pos, j in enumerate(cols):
            p = rows[i][j]
            if p.is_zero():
                continue
            sub = minor(i + 1, cols[:pos] + cols[pos + 1 :])
            term = p * sub
            acc = acc + term if pos % 2 == 0 else acc - term
        cache[(i, cols)] = acc
        return acc

    return minor(0, tuple(range(n)))


def jacobian_dominance_hint(f: AffineEndomorphism) -> str:
    """Best-effort dominance check via the Jacobian determinant.

    Over characteristic 0 a nonzero Jacobian determinant certifies
    dominance and a zero one certifies its failure.  Over F_p the Frobenius
    (x -> x^p has zero derivative) breaks both directions, so the answer is
    always "unknown" there.  A hint, never a gate.
    """
    if isinstance(f.field, PrimeField):
        return "unknown"
    rows = [
        [comp.derivative(j) for j in range(f.dim)] for comp in f.components
    ]
    det = _poly_det(rows, f.field, f.dim)
    return "notDominant" if det.is_zero() else "dominant"
