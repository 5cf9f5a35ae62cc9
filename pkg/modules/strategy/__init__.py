"""Player strategies: operator assignments and finite mixtures."""
from .mixtures import (
    U_ONE,
    U_ZERO,
    MixedStrategy,
    PureStrategy,
    canonical_u,
    classical_operator,
    classical_profile,
    degenerate,
    paper_mixture,
    player_streams,
    pure_profile,
    sample,
    sample_indices,
    uniform_pure,
    validate_mixed_profile,
    validate_pure_profile,
)

__all__ = [
    "U_ONE",
    "U_ZERO",
    "MixedStrategy",
    "PureStrategy",
    "canonical_u",
    "classical_operator",
    "classical_profile",
    "degenerate",
    "paper_mixture",
    "player_streams",
    "pure_profile",
    "sample",
    "sample_indices",
    "uniform_pure",
    "validate_mixed_profile",
    "validate_pure_profile",
]
