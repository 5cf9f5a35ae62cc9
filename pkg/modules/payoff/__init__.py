"""Public goods payoffs, interpretation rules and contribution planning."""
from .game import (
    ClassicalRegime,
    GameSpec,
    Interpretation,
    classical_payoff_table,
    classify_classical,
    contribution_matrix,
    contribution_of,
    payoff_matrix,
    payoff_vector,
)
from .planner import (
    ContributionPlan,
    VoluntaryCheck,
    capped_spec,
    check_voluntary,
    one_rich_player_contribution,
    plan_heterogeneous,
    voluntary_margins,
)

__all__ = [
    "ClassicalRegime",
    "GameSpec",
    "Interpretation",
    "classical_payoff_table",
    "classify_classical",
    "contribution_matrix",
    "contribution_of",
    "payoff_matrix",
    "payoff_vector",
    "ContributionPlan",
    "VoluntaryCheck",
    "capped_spec",
    "check_voluntary",
    "one_rich_player_contribution",
    "plan_heterogeneous",
    "voluntary_margins",
]
