"""Exact degree sequences of rational self-maps of projective space.

The library computes deg(f^n) for rational self-maps of P^d (and
endomorphisms of A^d via homogenization) over Q and prime fields, with the
common-factor cancellation done exactly, then classifies the growth and
checks the counting bounds the growth orders must satisfy.
"""

from .budget import BudgetExceeded, DEFAULT_TERM_BUDGET, current_budget, term_budget
from .dynamics import (
    Aut1Certificate,
    DegreeSequence,
    PeriodReport,
    WordBall,
    affine_iterate_component_degrees,
    aut1_certificate,
    iterate_degrees,
    monoid_ball_degrees,
    period_detect,
)
from .fields import QQ, PrimeField, Rationals
from .gallery import (
    GalleryEntry,
    gallery_entry,
    list_gallery,
    make_exaut,
    make_henon_control,
    make_linearex,
    make_monomial_triangular,
    make_sigma_involution,
)
from .gcd import common_factor, poly_gcd
from .growth import (
    BoundReport,
    GrowthReport,
    ThresholdReport,
    ThresholdRow,
    classify_growth,
    count_low_degree_iterates,
    degaut_bound,
    dpol_estimate,
    finite_field_count_bound,
    lambda_estimate,
    threshold_check,
)
from .maps import (
    AffineEndomorphism,
    ProjectiveRationalMap,
    affine_identity,
    compose_maps,
    dehomogenize,
    homogenize,
    jacobian_dominance_hint,
    map_degree,
    maps_equal,
    projective_identity,
    reduce_map,
)
from .parsing import (
    MapExpression,
    ParseError,
    expression_to_map,
    map_to_text,
    parse_map,
    parse_polynomial,
)
from .polynomials import Polynomial, poly_sum

__version__ = "0.1.0"

__all__ = [
    "AffineEndomorphism",
    "Aut1Certificate",
    "BoundReport",
    "BudgetExceeded",
    "DEFAULT_TERM_BUDGET",
    "DegreeSequence",
    "GalleryEntry",
    "GrowthReport",
    "MapExpression",
    "ParseError",
    "PeriodReport",
    "PrimeField",
    "Polynomial",
    "ProjectiveRationalMap",
    "QQ",
    "Rationals",
    "ThresholdReport",
    "ThresholdRow",
    "WordBall",
    "affine_identity",
    "affine_iterate_component_degrees",
    "aut1_certificate",
    "classify_growth",
    "common_factor",
    "compose_maps",
    "count_low_degree_iterates",
    "current_budget",
    "degaut_bound",
    "dehomogenize",
    "dpol_estimate",
    "expression_to_map",
    "finite_field_count_bound",
    "gallery_entry",
    "homogenize",
    "iterate_degrees",
    "jacobian_dominance_hint",
    "lambda_estimate",
    "list_gallery",
    "make_exaut",
    "make_henon_control",
    "make_linearex",
    "make_monomial_triangular",
    "make_sigma_involution",
    "map_degree",
    "map_to_text",
    "maps_equal",
    "monoid_ball_degrees",
    "parse_map",
    "parse_polynomial",
    "period_detect",
    "poly_gcd",
    "poly_sum",
    "projective_identity",
    "reduce_map",
    "term_budget",
    "threshold_check",
]
