"""Expected number of trials needed to distribute each scheme's entanglement.

Each entangled resource is created successfully with probability beta per
trial. Full entanglement needs all n qubits in one shot, which scales no
better than beta^-n; pair schemes create their pairs independently.
"""

import logging
import math
from dataclasses import dataclass
from typing import Union

import pandas as pd

from modules.errors import InvalidArgumentError
from modules.layout import EntanglementScheme

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CostQuery:
    scheme: EntanglementScheme
    n: int
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "scheme", EntanglementScheme(self.scheme))
        if not isinstance(self.n, int) or self.n < 2:
            raise InvalidArgumentError(f"At least 2 players are required, got {self.n}")
        if not math.isfinite(self.beta) or not 0.0 < self.beta <= 1.0:
            raise InvalidArgumentError(f"beta must lie in (0, 1], got {self.beta}")


def pairs_required(scheme: Union[EntanglementScheme, str], n: int) -> int:
    """Entangled resources per play: one n-qubit state, n(n-1)/2 pairs or n pairs."""
    scheme = EntanglementScheme(scheme)
    if scheme is EntanglementScheme.FULL:
        return 1
    if scheme is EntanglementScheme.ALL_PAIRS:
        return n * (n - 1) // 2
    return n


def expected_trials(query: CostQuery) -> float:
    """Mean trial count for one play of the game."""
    if query.scheme is EntanglementScheme.FULL:
        return query.beta ** (-query.n)
    return pairs_required(query.scheme, query.n) / query.beta


def compare_schemes(n: int, beta: float) -> pd.DataFrame:
    """
    Trials for all three schemes, most expensive first.

    Returns:
        DataFrame with columns scheme, resources, expected_trials
    """
    rows = []
    for scheme in EntanglementScheme:
        query = CostQuery(scheme, n, beta)
        rows.append({
            "scheme": scheme.value,
            "resources": pairs_required(scheme, n),
            "expected_trials": expected_trials(query),
        })
    table = pd.DataFrame(rows).sort_values("expected_trials", ascending=False, kind="stable")
    logger.info(f"Compared entanglement costs for n={n}, beta={beta}")
    return table.reset_index(drop=True)
