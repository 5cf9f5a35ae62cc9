"""State-vector core: operators, entanglers and measurement."""
from .operators import (
    I_SIGMA_X,
    IDENTITY,
    SingleQubitOp,
    build_operator,
    build_operator_in_pi_units,
    exact_operator,
)
from .state import (
    Direction,
    OutcomeDistribution,
    StateVector,
    apply_full_entangler,
    apply_local,
    apply_pair_entanglers,
    basis_state,
    bits_to_string,
    measurement_distribution,
    parse_bits,
    zero_state,
)

__all__ = [
    "I_SIGMA_X",
    "IDENTITY",
    "SingleQubitOp",
    "build_operator",
    "build_operator_in_pi_units",
    "exact_operator",
    "Direction",
    "OutcomeDistribution",
    "StateVector",
    "apply_full_entangler",
    "apply_local",
    "apply_pair_entanglers",
    "basis_state",
    "bits_to_string",
    "measurement_distribution",
    "parse_bits",
    "zero_state",
]
