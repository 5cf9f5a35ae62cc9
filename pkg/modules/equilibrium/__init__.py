"""Closed-form equilibrium payoffs and deviation searches."""
from .closed_form import closed_form_payoff, covered_configurations, is_covered
from .deviation import (
    DEFAULT_MAX_GRID_POINTS,
    DEVIATION_TOLERANCE,
    DeviationReport,
    PureEquilibriumReport,
    SearchConfig,
    SearchSpace,
    best_response,
    best_response_gap,
    deviation_candidates,
    deviation_payoff,
    product_grid,
    pure_equilibrium_search,
    verify_deviation_independence,
)

__all__ = [
    "closed_form_payoff",
    "covered_configurations",
    "is_covered",
    "DEFAULT_MAX_GRID_POINTS",
    "DEVIATION_TOLERANCE",
    "DeviationReport",
    "PureEquilibriumReport",
    "SearchConfig",
    "SearchSpace",
    "best_response",
    "best_response_gap",
    "deviation_candidates",
    "deviation_payoff",
    "product_grid",
    "pure_equilibrium_search",
    "verify_deviation_independence",
]
