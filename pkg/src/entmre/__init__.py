"""Two-qubit entanglement measures built on explicitly constructed separable
reference states, with closed forms for Bell-diagonal and departure families,
a decomposition search for general mixed states, local-measurement channels,
and a separable-state estimator for the relative entropy of entanglement.
"""

from .channels import (
    BranchOutcome,
    ChannelSurvey,
    KrausPair,
    KrausSet,
    PureBranch,
    apply_mixed,
    apply_pure,
    check_monotone_mixed,
    check_monotone_pure,
    random_kraus_set,
    random_proportional_kraus_set,
    random_unitary,
    schmidt_shifted,
    survey_channel,
    xi_after_lgm,
)
from .entropy import (
    binary_entropy,
    relative_entropy_direct,
    relative_entropy_lemma1,
    von_neumann,
)
from .errors import (
    AnnihilatedBranchError,
    CompletenessError,
    DecompositionError,
    DomainError,
    FormatError,
    ParametrizationError,
    RegimeError,
    RestrictionError,
    StateError,
    ToolkitError,
)
from .mixed import (
    MreResult,
    SearchConfig,
    bell_mixture_ef_closed,
    bell_mixture_mpsd,
    bell_mixture_mre_closed,
    bell_mixture_relative_matrix,
    bell_mixture_state,
    concurrence_mixed,
    departure_avg_reduced_entropy,
    departure_ef_closed,
    departure_mpsd,
    departure_mre_closed,
    departure_relative_matrix,
    departure_state,
    is_ppt,
    mre_for_decomposition,
    mre_search,
    total_relative_matrix,
    werner_ef_closed,
    werner_mre_closed,
    werner_state,
    wootters_ef,
)
from .pure import (
    RelativeMatrixParts,
    concurrence_pure,
    ef_pure,
    mre_pure,
    omega_spectrum,
    relative_matrix_pure,
    xi_norm,
)
from .re_oracle import (
    BoundChainReport,
    ReConfig,
    SeparableCandidate,
    candidate_from_ensemble,
    re_estimate,
    verify_bound_chain,
)
from .states import (
    BELL_PHI_MINUS,
    BELL_PHI_PLUS,
    BELL_PSI_MINUS,
    BELL_PSI_PLUS,
    BELL_STATES,
    Ensemble,
    PAULI,
    ensemble_to_density,
    hjw_ensemble,
    lemma_two_residual,
    normalized,
    pauli_expand,
    pauli_reconstruct,
    polarized_vectors,
    pure_state,
    pure_to_density,
    random_density,
    random_product_state,
    random_pure_state,
    random_separable_density,
    reduced,
    validate_density,
)

__version__ = "0.1.0"
