"""Quantum public goods simulation modules."""

# Import main functions for easier access
from .cost.trials import expected_trials
from .engine.simulator import expected_payoffs, pair_final_state, run_pure
from .equilibrium.closed_form import closed_form_payoff
from .equilibrium.deviation import best_response_gap, verify_deviation_independence
from .layout.builder import build_layout
from .payoff.game import classical_payoff_table, contribution_of, payoff_vector
from .payoff.planner import check_voluntary, plan_heterogeneous
from .qcore.operators import build_operator
from .strategy.mixtures import canonical_u, paper_mixture, sample

__all__ = [
    "expected_trials",
    "expected_payoffs",
    "pair_final_state",
    "run_pure",
    "closed_form_payoff",
    "best_response_gap",
    "verify_deviation_independence",
    "build_layout",
    "classical_payoff_table",
    "contribution_of",
    "payoff_vector",
    "check_voluntary",
    "plan_heterogeneous",
    "build_operator",
    "canonical_u",
    "paper_mixture",
    "sample",
]
