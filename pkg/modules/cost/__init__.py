"""Entanglement distribution cost model."""
from .trials import CostQuery, compare_schemes, expected_trials, pairs_required

__all__ = ["CostQuery", "compare_schemes", "expected_trials", "pairs_required"]
