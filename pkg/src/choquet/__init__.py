"""Exact Choquet theory on finite lattices, with random-set samplers.

The package splits into lattice structure (:mod:`choquet.lattice`), set
functions and their difference operators (:mod:`choquet.setfun`),
measure representations (:mod:`choquet.representation`), compact-set
models on the line (:mod:`choquet.intervals`), samplers
(:mod:`choquet.random_sets`) and locally-finite-valuation certificates
(:mod:`choquet.lfv`).
"""

from .exceptions import (
    ChoquetError,
    ClassificationFailed,
    ConfigError,
    EmptyIndexSet,
    EvaluatorNotExact,
    InvalidMeasure,
    InvalidSetFunction,
    NoTop,
    NonUniqueSolution,
    NotALattice,
    NotAnAntichain,
    NotAPartialOrder,
    NotDistributive,
    PrerequisiteClassFailed,
    SizeExceeded,
    UnsupportedClassForDirection,
)
from .expsum import ExpSum
from .intervals import (
    EMPTY,
    IntervalUnion,
    MeasureModel,
    ProductCompact,
    iu_intersect,
    iu_union,
    iu_way_below,
    measure_of,
    projection_capacity,
    projection_nabla_identity,
)
from .lattice import (
    FiniteLattice,
    StructureReport,
    antichains_of,
    boundary_antichain,
    build_lattice,
    powerset_lattice,
    structure_report,
    sublattice_generated,
)
from .lfv import (
    CompoundPoissonAvoidance,
    Covering,
    FiniteLawAvoidance,
    LfvCertificate,
    PoissonIntervalAvoidance,
    SolidGrainAvoidance,
    lfv_bound_sum,
    lfv_certificate,
    lfv_diagnostic,
    lfv_lhs,
    opening_of,
    validate_cover,
)
from .measure import DiscreteMeasure
from .random_sets import (
    CompoundSetSampler,
    PoissonSampler,
    SimReport,
    estimate_functional,
    sample_compound_set,
    sample_poisson,
    z_compare,
)
from .representation import (
    ADJOINED_BOTTOM,
    FiniteSpaceModel,
    choquet_represent,
    enumerate_filters,
    forward_evaluate,
    partition_classes,
    support_order,
    vapprox_bound,
)
from .setfun import (
    ClassReport,
    LevyReport,
    SetFunction,
    classify,
    delta,
    is_exponential_valuation,
    is_k_valuation,
    is_valuation,
    levy_divisibility,
    mobius_inverse,
    nabla,
)

__version__ = "0.1.0"
