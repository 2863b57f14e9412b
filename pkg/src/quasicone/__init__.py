"""Exact best approximations on finite quasi-cone metric instances.

Distances take values in a rational vector space ordered by a pointed
polyhedral cone; every predicate in the library is exact, so best sets,
witness certificates, and classifications are decided, not estimated.
"""

from .approximation import (
    BACKWARD,
    FORWARD,
    ApproximationResult,
    DominanceStats,
    MinimalFrontFallback,
    Query,
    best_approximation_set,
    directed_distance,
    duality_check,
    minimal_front_dnc,
    minimal_front_naive,
)
from .chebyshev import (
    CensusEntry,
    ChebyshevReport,
    QueryFamily,
    classify,
    counterexample_to_theorem_form,
)
from .cones import (
    OrderedSpace,
    PolyhedralCone,
    Vec,
    as_rational,
    check_cone_axioms,
    exact_rank,
    format_rational,
    kernel_vector,
)
from .errors import (
    ConeNotPointed,
    ConeNotSolid,
    DimensionMismatch,
    DuplicateLabel,
    EmbeddingRequired,
    InstanceFileError,
    NotARational,
    QuasiConeError,
    UnknownLabel,
)
from .files import (
    LoadedInstance,
    instance_json,
    load_instance_file,
    load_witness_file,
    parse_instance,
    parse_witness,
    witness_json,
)
from .metric import (
    Provenance,
    QcmInstance,
    alpha_distance,
    build_example3,
    build_example4,
    direction_distance,
    transpose,
    verify_axioms,
)
from .reports import AxiomCheck, AxiomReport
from .witnesses import (
    ANCHOR_EQUALITY,
    GAP_NOT_IN_CONE,
    SHIFT_NOT_IN_CONE,
    WitnessTable,
    WitnessVerdict,
    canonical_witness,
    default_witness_pool,
    search_counterexample_witness,
    verify_witness_for_element,
    verify_witness_for_set,
)

__version__ = "0.1.0"
