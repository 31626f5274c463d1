"""Renyi-entropy uncertainty relations for two successive projective measurements on a qubit."""

from .bounds import (
    BoundReport,
    conditional_min_entropy_bound,
    creur_bound,
    improved_mu_bound,
    lhs_reur,
    maassen_uffink_bound,
    min_entropy_bound,
    report,
    reur_bound,
    shannon_reur_bound,
)
from .entropy import (
    COLLISION,
    MIN_ENTROPY,
    SHANNON,
    ZERO,
    EntropyOrder,
    conditional_renyi,
    renyi_entropy,
    shannon_entropy,
)
from .errors import ValidationError
from .qubit import (
    Observable,
    QubitState,
    matrix_to_state,
    overlap_c,
    projectors,
    state_renyi,
    state_spectrum,
    state_to_matrix,
)
from .successive import (
    MeasurementPair,
    SuccessiveOutcome,
    conditional_probs,
    conditional_renyi_qp,
    erased_state,
    first_probs,
    measure,
    second_probs,
)

__version__ = "0.1.0"
