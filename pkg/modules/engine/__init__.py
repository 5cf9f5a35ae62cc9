"""Protocol execution, exact and Monte Carlo expected payoffs."""
from modules.qcore.state import OutcomeDistribution

from .simulator import (
    DEFAULT_MAX_AMPLITUDES,
    DEFAULT_MAX_WORK,
    EngineLimits,
    ExactEnumeration,
    ExecutionPath,
    MonteCarlo,
    PayoffMethod,
    PayoffReport,
    default_workers,
    expected_payoffs,
    pair_final_state,
    pure_expected_payoffs,
    run_pure,
)

__all__ = [
    "DEFAULT_MAX_AMPLITUDES",
    "DEFAULT_MAX_WORK",
    "EngineLimits",
    "ExactEnumeration",
    "ExecutionPath",
    "MonteCarlo",
    "OutcomeDistribution",
    "PayoffMethod",
    "PayoffReport",
    "default_workers",
    "expected_payoffs",
    "pair_final_state",
    "pure_expected_payoffs",
    "run_pure",
]
