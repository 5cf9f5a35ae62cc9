"""Closed-form expected payoffs of the canonical mixture."""

import logging
import math
from typing import Tuple, Union

from modules.errors import InvalidArgumentError, NoClosedFormError, UnsupportedConfigurationError
from modules.layout import EntanglementScheme
from modules.payoff import Interpretation

logger = logging.getLogger(__name__)

_COVERED = (
    (EntanglementScheme.FULL, Interpretation.DIRECT),
    (EntanglementScheme.ALL_PAIRS, Interpretation.PARTIAL),
    (EntanglementScheme.ALL_PAIRS, Interpretation.ALL_OR_NONE),
    (EntanglementScheme.NEIGHBOR_RING, Interpretation.PARTIAL),
    (EntanglementScheme.NEIGHBOR_RING, Interpretation.ALL_OR_NONE),
)


def covered_configurations() -> Tuple[Tuple[EntanglementScheme, Interpretation], ...]:
    """(scheme, interpretation) combinations that have a closed-form payoff."""
    return _COVERED


def is_covered(scheme: Union[EntanglementScheme, str], interpretation: Union[Interpretation, str]) -> bool:
    return (EntanglementScheme(scheme), Interpretation(interpretation)) in _COVERED


def closed_form_payoff(
    scheme: Union[EntanglementScheme, str],
    interpretation: Union[Interpretation, str],
    n: int,
    a: float,
) -> float:
    """
    Expected payoff of every player when all play the canonical mixture.

    Args:
        scheme: Entanglement scheme
        interpretation: Bit interpretation rule
        n: Number of players
        a: Multiplier, strictly between 1 and n

    Returns:
        The common expected payoff

    Raises:
        InvalidArgumentError: If a is outside (1, n) or n < 2
        UnsupportedConfigurationError: For a ring of two players
        NoClosedFormError: If the combination has no closed form; use the engine instead
    """
    scheme = EntanglementScheme(scheme)
    interpretation = Interpretation(interpretation)
    if not isinstance(n, int) or n < 2:
        raise InvalidArgumentError(f"At least 2 players are required, got {n}")
    if not math.isfinite(a) or not 1.0 < a < n:
        raise InvalidArgumentError(f"Closed forms need 1 < a < n, got a={a}, n={n}")
    if scheme is EntanglementScheme.NEIGHBOR_RING and n < 3:
        raise UnsupportedConfigurationError("A neighbor ring needs at least 3 players")
    if (scheme, interpretation) not in _COVERED:
        raise NoClosedFormError(
            f"No closed form for {scheme.value}/{interpretation.value}; "
            "compute it with engine.expected_payoffs"
        )

    if interpretation is not Interpretation.ALL_OR_NONE:
        return (1.0 + a) / 2.0
    if scheme is EntanglementScheme.ALL_PAIRS:
        return a - (a - 1.0) / 2.0 ** (n - 1)
    return (1.0 + 3.0 * a) / 4.0
