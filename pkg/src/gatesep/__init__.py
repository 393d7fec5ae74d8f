"""Decide and construct tensor-product factorizations of quantum gates."""

__version__ = "0.1.0"

from .criteria import (
    CriterionReport,
    Reason,
    SeparationResult,
    TensorDecomposition,
    TensorTerm,
    check_commuting_sum,
    check_rank_one,
    delta,
    separate_by_regrouping,
    synthesize_commuting_sum,
    synthesize_rank_one,
)
from .errors import (
    BorderlineError,
    ContractError,
    CriterionViolation,
    GateSepError,
    NotSeparableError,
    ParseError,
    ShapeError,
)
from .linalg import (
    BranchCutWarning,
    Tolerances,
    dist_up_to_phase,
    expm_i_hermitian,
    is_scalar_matrix,
    kron,
    principal_log_unitary,
)
from .pauli import PauliSum, decompose, synthesize, to_tensor_decomposition
from .separator import (
    Alg21Mode,
    Alg21Report,
    SchmidtSpectrum,
    algorithm21_check,
    nearest_local_unitary,
    operator_schmidt,
    realign,
    separate_full,
    split_bipartite,
)
from .zassenhaus import (
    commutator,
    multi_term_scalar_tail_check,
    truncated_product_residual,
    zassenhaus_terms,
)
