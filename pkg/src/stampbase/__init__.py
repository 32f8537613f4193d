"""Additive bases for the 2-stamp postage stamp problem.

The package computes ranges of h = 2 bases, enumerates p-bases, decides
extensibility and symmetricisability, builds symmetric closures, and
reproduces the census and extremal tables at desk scale.
"""

from .basis import (
    Basis,
    BasisError,
    PreconditionError,
    RangeResult,
    ReachSet,
    ResidueProfile,
    basis_range,
    extend_reach,
    is_p_basis,
    is_symmetric,
    residue_profile,
    symmetrize,
)
from .extension import (
    ExtensionReport,
    PeriodReport,
    StohrSequence,
    extend_arithmetic,
    extensible_completion,
    extension_range_identity,
    extension_threshold,
    is_extensible,
    period_bound,
    periodic_scan,
    stohr_sequence,
)
from .optimize import (
    BestSegments,
    MaximalBasisSet,
    RangeTable,
    best_segments,
    maximal_symmetricisable,
    range_table,
)
from .search import (
    BudgetExceededError,
    ClassStats,
    MaximaRecord,
    PBasisRecord,
    PlusBasisRecord,
    RangeComparison,
    TailDistribution,
    classify,
    classify_basis,
    enumerate_p_bases,
    enumerate_p_plus,
    iter_classified,
    iter_p_bases,
    iter_p_plus,
    maxima_record,
    plus_depth_search,
    range_comparison_stats,
    run_enumeration,
    tail_distribution,
)
from .symmetric import (
    SymmetricClosure,
    SymmetricisabilityReport,
    build_symmetric_closure,
    closure_profile,
    closure_range,
    is_symmetricisable,
    is_symmetricisable_plus,
    m_zero,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
