"""Dimension estimation for time-varying graph directed contraction systems.

The package estimates the Hausdorff dimension of the limit set of a
schedule of conformal contractions along a time-indexed multigraph: it
evaluates partition functions over admissible words, brackets the
zero-crossing of the finite-horizon pressure in the exponent t, checks the
structural hypotheses under which that crossing equals the dimension, and
cross-validates against an independent box-counting estimate.
"""

from .errors import (
    BowendimError,
    BracketingError,
    BudgetError,
    BuildError,
    CertificationError,
    ConfigurationError,
    InputError,
    IntegrityError,
    SchemaError,
    UnsupportedError,
)
from .geometry import (
    BoxCountFit,
    DiameterReport,
    LevelCover,
    LimitPoint,
    OscReport,
    PointCloud,
    box_counting_dim,
    diameter_diagnostics,
    level_cover,
    project_point,
    sample_limit_set,
    verify_osc,
)
from .maps import (
    ComposedMap,
    Contraction,
    MoebiusInverse,
    NormBracket,
    Similarity,
    Space,
    TabulatedInterval,
    compose_norm,
    contraction_eta,
    continuants,
    disk,
    distortion_constant,
    image_region,
    interval,
)
from .symbolic import (
    GraphSchedule,
    GrowthStats,
    Letter,
    PrimitivityCertificate,
    Word,
    certify_primitivity,
    count_words,
    enumerate_words,
    find_primitivity,
    follower_set,
    growth_stats,
    is_admissible,
    ncifs_schedule,
    subexp_diagnostic,
)
from .system import SystemSpec, validate_system
from .systems import (
    AscendingSpec,
    BlockSubsystem,
    EdgeSpec,
    EllipticModelReport,
    autonomous_closure,
    build_ascending,
    build_cf_system,
    build_gdms,
    build_similarity_system,
    elliptic_lower_bound,
    extract_subsystem_g_bounded,
    gaussian_lattice_poles,
    reblock_one_primitive,
    reblock_pinched,
    system_certify,
    system_primitivity,
)
from .thermo import (
    ABDimensionBounds,
    BalancingReport,
    DimensionResult,
    HypothesisReport,
    LowerBoundDiagnostics,
    MeasureTrendReport,
    PartitionValue,
    PressureEstimate,
    PSeriesTail,
    ThetaBounds,
    ab_dimension_bounds,
    balancing_class,
    bowen_dimension,
    classify_rho,
    evenly_varying_check,
    hausdorff_measure_trend,
    hypothesis_report,
    lower_bound_diagnostics,
    partition,
    partition_by_root,
    pressure_estimate,
    system_theta,
    theta_bounds,
)

__version__ = "0.1.0"
