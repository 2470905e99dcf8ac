"""Finite dual Ramsey workbench.

Structures, morphism classes and their enumeration, exhaustive dual arrow
checks with certificates, expansion fibers and bound reports, the edge-chain
maps for digraphs, tournament inflation search, and metric constructions.
"""

from .arrows import (
    Coloring,
    DualArrowInstance,
    Verdict,
    canonical_order_coloring,
    coloring_floor,
    dual_arrow_check,
    find_arrow_size,
    min_t,
    rescore,
    verify_cover,
)
from .config import Budget
from .errors import (
    BudgetExceeded,
    DoubleMatchError,
    InternalCheckError,
    ParameterError,
    PreconditionError,
    RamseyForgeError,
)
from .expansions import ExpansionKind, bound_report, dual_reasonable_witness, fibers
from .morphisms import Morphism, MorphismKind, check, compose, enumerate_morphisms, induced_dual_restriction
from .structures import (
    Chain,
    EdgeOrder,
    LinearOrder,
    MetricSpace,
    ReflexiveDigraph,
    build_canonical,
    classify,
)

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "BudgetExceeded",
    "Chain",
    "Coloring",
    "DoubleMatchError",
    "DualArrowInstance",
    "EdgeOrder",
    "ExpansionKind",
    "InternalCheckError",
    "LinearOrder",
    "MetricSpace",
    "Morphism",
    "MorphismKind",
    "ParameterError",
    "PreconditionError",
    "RamseyForgeError",
    "ReflexiveDigraph",
    "Verdict",
    "bound_report",
    "build_canonical",
    "canonical_order_coloring",
    "check",
    "classify",
    "coloring_floor",
    "compose",
    "dual_arrow_check",
    "dual_reasonable_witness",
    "enumerate_morphisms",
    "fibers",
    "find_arrow_size",
    "induced_dual_restriction",
    "min_t",
    "rescore",
    "verify_cover",
]
