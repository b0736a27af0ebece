"""Multiplicative/additive metric duality, axiom certification, and
fixed-point solvers with verifiable convergence certificates."""

from .core import (
    AxiomReport,
    DistanceTable,
    DomainError,
    Flavor,
    Interval,
    MetricFn,
    StructureError,
    VectorSpace,
    Verdict,
    abs_metric,
    check_metric_axioms,
    check_metric_like_axioms,
    check_multiplicative_axioms,
    check_sampled_axioms,
    check_table_axioms,
    exp_abs_metric,
    parse_flavor,
    read_table_csv,
    replay_witness,
    shortest_path_closure,
    write_table_csv,
)
from .duality import (
    SequenceSample,
    cauchy_equivalence_check,
    exp_transform,
    is_eps_cauchy_tail,
    log_transform,
)
from .banach import (
    ContractionCertificate,
    FixedPointResult,
    IterationTrace,
    NotAContraction,
    NumericError,
    StopReason,
    estimate_multiplicative_lambda,
    solve_fixed_point,
    verify_fixed_point,
)
from .common import (
    CheckOutcome,
    CommonFixedPointResult,
    ContractiveModulus,
    FiniteDomain,
    FourMapSystem,
    MixedMax,
    MultiplicativeReduction,
    SolverError,
    UnsupportedDomainError,
    brute_force_common_fixed_points,
    check_contractive_condition,
    check_range_inclusion,
    check_weak_commutative,
    check_weakly_compatible,
    mixed_max,
    reduce_multiplicative_system,
    solve_common_fixed_point,
)
from .manifest import ManifestError, load_system_manifest, parse_numeric_map
from .enumeration import SystemSurvey, all_self_maps, survey_systems

__version__ = "0.1.0"
