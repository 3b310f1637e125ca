"""Exact-arithmetic engine for egalitarian and competitive fair division."""

from .axioms import (
    envy_report,
    ete_check,
    fair_share_report,
    ilb_probe,
    rm_probe,
    rule_handle,
)
from .competitive import (
    CompetitiveDivision,
    competitive_goods,
    enumerate_competitive,
    nash_product,
    verify_competitive,
)
from .corpus import build as build_instance
from .ef_geometry import count_ef_components
from .efficiency import is_efficient
from .egalitarian import EgalitarianDivision, egalitarian
from .model import (
    BADS,
    GOODS,
    Allocation,
    Problem,
    allocation,
    as_fraction,
    equal_split,
    normalize,
    problem_from_json,
    problem_to_json,
    utility_profile,
    validate_problem,
)

__all__ = [
    "BADS",
    "GOODS",
    "Allocation",
    "CompetitiveDivision",
    "EgalitarianDivision",
    "Problem",
    "allocation",
    "as_fraction",
    "build_instance",
    "competitive_goods",
    "count_ef_components",
    "egalitarian",
    "enumerate_competitive",
    "envy_report",
    "equal_split",
    "ete_check",
    "fair_share_report",
    "ilb_probe",
    "is_efficient",
    "nash_product",
    "normalize",
    "problem_from_json",
    "problem_to_json",
    "rm_probe",
    "rule_handle",
    "utility_profile",
    "validate_problem",
    "verify_competitive",
]

__version__ = "0.1.0"
