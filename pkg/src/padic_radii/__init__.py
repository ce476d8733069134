"""Exact subsidiary-radius profiles, Dwork and Artin-Schreier calculus,
a Berkovich unit-disc model and valuation invariants."""
from .scalars import INF, FiniteField, HahnElement, LogValue, hahn_pth_root, hahn_val, logvalue_cmp
from .plfun import Interval, PLFun, pl_combine, pl_eval, pl_is_convex, pl_reparam, pl_slopes
from .newton import BivariatePoly, ParamHull, PolygonSlopes, ValuedPoly, gauss_val, gauss_val2, newton_polygon, parametric_hull
from .diffmod import (
    CyclicOperator,
    RadiiProfile,
    RadiusMultiset,
    antecedent_exists,
    antecedent_inverse,
    antecedent_transform,
    check_subharmonicity,
    check_variation,
    descendant_multiset,
    descendant_sum_check,
    direct_sum_profile,
    dwork_operator,
    dwork_profile,
    frobenius_pullback_datum,
    is_separated,
    profile_from_csv,
    profile_to_csv,
    radii_profile,
    robba_condition,
    tame_pullback_datum,
    tame_transform,
)
from .dwork import ASParameter, PathProfile, as_combine, as_is_trivial, as_prepare, as_pullback_tame, as_translate, b1_along_path, b1_profile
from .berkovich import Disc, DiscSet, SeqPrefix, check_disjoint_discs, classify, dominates, meet, path_point, union_discs
from .valuation import InvariantTuple, WeightVector, extend_invariants, monomial_invariants, zariski_matrix

__version__ = "0.1.0"
