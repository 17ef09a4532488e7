"""Priority vectors, inconsistency and EVM/GMM divergence bounds for pairwise comparison matrices."""

from .bounds import (
    BoundCheckReport,
    BoundEnvelope,
    check_bounds,
    check_corollaries,
    check_theorem1,
    check_theorem2,
    envelope,
    lemma1_check,
)
from .errors import (
    ConvergenceError,
    DomainError,
    MatrixSyntaxError,
    PCRankError,
    ReciprocityError,
    RILookupError,
    ShapeError,
)
from .inconsistency import (
    DEFAULT_RI,
    InconsistencyReport,
    RITable,
    Triad,
    consistency_ratio,
    estimate_ri,
    inconsistency_report,
    koczkodaj_ki,
    koczkodaj_local,
    saaty_ci,
)
from .matrix import (
    PCMatrix,
    PriorityVector,
    Tolerance,
    build_matrix,
    induced_matrix,
    is_consistent,
    parse_matrix,
    read_matrix,
    serialize_matrix,
)
from .montecarlo import (
    ExperimentConfig,
    ExperimentRecord,
    GeneratorConfig,
    disturb,
    generate_matrix,
    random_weight_vector,
    run_experiment,
    summarize,
)
from .priority import EvmOptions, EvmResult, evm, gmm
from .similarity import (
    BetaGrid,
    CompatibilityReport,
    beta_grid,
    chebyshev,
    comp_lower_matrices,
    comp_matrices,
    comp_max_matrices,
    comp_upper_matrices,
    comp_vectors,
    compatibility,
    kendall_distance,
    manhattan,
)

__version__ = "0.1.0"
