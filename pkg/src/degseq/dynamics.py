"""Iterate-degree sequences, monoid balls, the deg(f^d) = deg(f)^d
certificate, and finite-field periodicity detection.

Iteration is left multiplication with reduction at every step: the whole
sequence is wanted anyway, and per-step reduction keeps intermediate term
counts minimal.  The iterate itself lives in engine form (integer-content
arrays); the map's coefficients are cleared to integers by one global
denominator so the projective class never changes, and the common integer
content that clearing injects is stripped again each step.

Reduction is exact and cheap on the maps that matter: after dividing out
the collective monomial content (always part of the GCD), any component
that is itself a monomial forces the remaining GCD to be constant, and
homogenized affine maps keep component 0 a pure power of x_0.  Only when no
component is a monomial does the full polynomial GCD run, on the dict
representation (such maps stay desk-scale here).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

import numpy as np

from .budget import BudgetExceeded, check_terms
from .fields import QQ, PrimeField
from .gcd import common_factor
from .maps import (
    AffineEndomorphism,
    ProjectiveRationalMap,
    compose_maps,
    homogenize,
    map_degree,
    projective_identity,
)
from .multiply import (
    ArrayPoly,
    _ints_to_limbs,
    _limbs_to_ints,
    eval_component,
    to_polynomial,
    zero_array,
)


@dataclass(frozen=True)
class DegreeSequence:
    """degrees[k] = deg(f^(k+1)); drops[k] = deg(f)·degrees[k] − degrees[k+1].

    truncated marks a run cut short by the term budget: what is present is
    exact, the tail is simply missing.
    """

    degrees: tuple
    drops: tuple
    strategy: str
    source_description: str
    dim: int
    truncated: bool

    def __len__(self):
        return len(self.degrees)

    def degree_at(self, n: int) -> int:
        """deg(f^n), 1-based."""
        return self.degrees[n - 1]


@dataclass(frozen=True)
class Aut1Certificate:
    """Outcome of the deg(f^d) = deg(f)^d test on an affine endomorphism."""

    certified: bool
    degrees: tuple
    predicted_growth: int | None  # base λ with deg(f^n) = λ^n, when applicable
    asserted_automorphism: bool


@dataclass(frozen=True)
class WordBall:
    """All distinct reduced maps of word length <= radius in the generators,
    each with its minimal word length and degree, in discovery order."""

    radius: int
    representatives: tuple  # of (map, min_word_length, degree)
    truncated: bool


@dataclass(frozen=True)
class PeriodReport:
    preperiod: int
    period: int


def _integer_items(f: ProjectiveRationalMap) -> list:
    """Component term lists with one global denominator cleared.

    The same constant must scale every component: per-component scaling
    would change the projective map.
    """
    if f.field is QQ:
        den = 1
        for comp in f.components:
            for c in comp.terms.values():
                den = lcm(den, c.denominator)
        return [
            [(e, int(c * den)) for e, c in comp.sorted_terms()]
            for comp in f.components
        ]
    return [
        [(e, int(c)) for e, c in comp.sorted_terms()] for comp in f.components
    ]


def _arrays_from_items(items: list, nvars: int) -> list:
    out = []
    for comp in items:
        if not comp:
            out.append(zero_array(nvars))
            continue
        exps = np.array([e for e, _ in comp], dtype=np.int64).reshape(len(comp), nvars)
        mags, negs = _ints_to_limbs([w for _, w in comp])
        out.append(ArrayPoly(nvars, exps, mags, negs))
    return out


def _integer_content(comps: list) -> int:
    g = 0
    for c in comps:
        if c.is_zero():
            continue
        mags = c.mags
        for i in range(mags.shape[0]):
            g = gcd(g, int.from_bytes(mags[i].tobytes(), "little"))
            if g == 1:
                return 1
    return g


def _divide_content(c: ArrayPoly, g: int) -> ArrayPoly:
    if c.is_zero():
        return c
    values = [v // g for v in _limbs_to_ints(c.mags, c.negs)]
    mags, negs = _ints_to_limbs(values)
    return ArrayPoly(c.nvars, c.exps, mags, negs)


def _reduce_arrays(comps: list, fld) -> tuple[list, int]:
    """Divide out the collective GCD in engine form; return the removed degree."""
    nonzero = [c for c in comps if not c.is_zero()]
    if not nonzero:
        raise ArithmeticError("iterate collapsed to the zero tuple")
    nvars = nonzero[0].nvars
    removed = 0

    mins = np.min([c.exps.min(axis=0) for c in nonzero], axis=0)
    if mins.any():
        comps = [
            c if c.is_zero() else ArrayPoly(nvars, c.exps - mins, c.mags, c.negs)
            for c in comps
        ]
        nonzero = [c for c in comps if not c.is_zero()]
        removed += int(mins.sum())

    # the collective per-variable minimum is now 0; if some component is a
    # monomial, the GCD divides it yet shares no variable with the whole
    # tuple, so it is constant and we are done
    if not any(len(c) == 1 for c in nonzero):
        polys = [to_polynomial(c, fld) for c in comps]
        g = common_factor([p for p in polys if not p.is_zero()])
        if g.total_degree() > 0:
            quots = [p if p.is_zero() else p.divide_exact(g) for p in polys]
            # one global clearing constant: per-component scaling would
            # change the projective class
            den = 1
            if fld is QQ:
                for p in quots:
                    for c in p.terms.values():
                        den = lcm(den, c.denominator)
            items = [[(e, int(c * den)) for e, c in p.terms.items()] for p in quots]
            comps = _arrays_from_items(items, nvars)
            removed += int(g.total_degree())

    if fld is QQ:
        content = _integer_content(comps)
        if content > 1:
            comps = [_divide_content(c, content) for c in comps]
    return comps, removed


def iterate_degrees(
    f: ProjectiveRationalMap, N: int, *, source_description: str = ""
) -> DegreeSequence:
    """deg(f^n) for n = 1..N with per-step drop accounting.

    Stops early with truncated=True when the term budget is exceeded; the
    prefix returned is exact.
    """
    if N < 1:
        raise ValueError("need at least one iterate")
    fld = f.field
    nvars = f.dim + 1
    d1 = map_degree(f)
    degrees = [d1]
    drops: list = []
    truncated = False
    if N > 1:
        items = _integer_items(f)
        current = _arrays_from_items(items, nvars)
        for _ in range(2, N + 1):
            try:
                cache: dict = {}
                new = [
                    eval_component(comp, current, fld, cache) if comp else zero_array(nvars)
                    for comp in items
                ]
                new, _ = _reduce_arrays(new, fld)
                for c in new:
                    if not c.is_zero():
                        check_terms(len(c))
            except BudgetExceeded:
                truncated = True
                break
            degs = {c.degree() for c in new if not c.is_zero()}
            assert len(degs) == 1, "reduced components must share one degree"
            deg = degs.pop()
            drops.append(d1 * degrees[-1] - deg)
            degrees.append(deg)
            current = new
    return DegreeSequence(
        degrees=tuple(degrees),
        drops=tuple(drops),
        strategy="left-multiply",
        source_description=source_description or repr(f),
        dim=f.dim,
        truncated=truncated,
    )


def aut1_certificate(
    f: AffineEndomorphism, *, asserted_automorphism: bool = False
) -> Aut1Certificate:
    """Test deg(f^d) = deg(f)^d on A^d.

    For polynomial automorphisms this certifies deg(f^n) = deg(f)^n for all
    n; invertibility itself is not checked, only recorded as the caller's
    assertion, so the prediction is emitted only when both hold.
    """
    d = f.dim
    seq = iterate_degrees(homogenize(f), d, source_description="aut1 probe")
    if seq.truncated or len(seq.degrees) < d:
        return Aut1Certificate(False, seq.degrees, None, asserted_automorphism)
    certified = seq.degrees[d - 1] == seq.degrees[0] ** d
    predicted = seq.degrees[0] if certified and asserted_automorphism else None
    return Aut1Certificate(certified, seq.degrees, predicted, asserted_automorphism)


def monoid_ball_degrees(S: list, n: int) -> tuple[WordBall, list]:
    """Breadth-first closure of words of length <= n in the generators S.

    Returns the deduplicated ball and D_S(m) = max degree over the radius-m
    ball for m = 1..n.  The identity (empty word) is in every ball.  S is
    used as given: callers wanting group balls pass inverses explicitly.
    """
    if not S:
        raise ValueError("need at least one generator")
    if n < 1:
        raise ValueError("ball radius must be >= 1")
    dim = S[0].dim
    fld = S[0].field
    for g in S:
        if g.dim != dim or g.field != fld:
            raise ValueError("generators must share dimension and field")

    ident = projective_identity(fld, dim)
    reps: dict = {ident: (0, 1)}
    order = [ident]
    frontier = [ident]
    ds: list = []
    best = 1
    truncated = False
    for m in range(1, n + 1):
        if not frontier:  # ball stabilized; D_S stays constant
            ds.append(best)
            continue
        fresh = []
        try:
            for g in S:
                for w in frontier:
                    composed, _ = compose_maps(g, w)
                    if composed not in reps:
                        reps[composed] = (m, map_degree(composed))
                        order.append(composed)
                        fresh.append(composed)
        except BudgetExceeded:
            truncated = True
            break
        frontier = fresh
        if fresh:
            best = max(best, max(reps[w][1] for w in fresh))
        ds.append(best)
    ball = WordBall(
        radius=len(ds),
        representatives=tuple((w,) + reps[w] for w in order),
        truncated=truncated,
    )
    return ball, ds


def period_detect(
    f: ProjectiveRationalMap, max_steps: int
) -> PeriodReport | None:
    """Find i < j <= max_steps with f^i = f^j; report (preperiod i, period j−i).

    Only meaningful over a finite field, where the iterates live in a finite
    set whenever their degrees stay bounded.
    """
    if not isinstance(f.field, PrimeField):
        raise ValueError("periodicity detection requires a prime field F_p")
    if max_steps < 2:
        raise ValueError("need at least two steps to see a repeat")
    seen = {f: 1}
    cur = f
    for j in range(2, max_steps + 1):
        cur, _ = compose_maps(f, cur)
        got = seen.get(cur)
        if got is not None:
            return PeriodReport(preperiod=got, period=j - got)
        seen[cur] = j
    return None


def affine_iterate_component_degrees(f: AffineEndomorphism, N: int) -> list:
    """Per-coordinate total degrees of f^n, n = 1..N, by direct composition.

    Desk-scale helper (used to check which coordinate carries the top
    degree along the iteration).
    """
    cur = f.components
    out = [tuple(c.total_degree() for c in cur)]
    for _ in range(N - 1):
        images = list(cur)
        cur = tuple(c.substitute(images) for c in f.components)
        out.append(tuple(c.total_degree() for c in cur))
    return out
