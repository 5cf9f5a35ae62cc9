"""Classical public goods model and bit interpretation rules.

Each player k holds y_k units of private good and contributes c_k of it.
With C the total contribution the payoff is P_k = (a/n) C + y_k - c_k.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from modules.errors import InvalidArgumentError, UnsupportedConfigurationError
from modules.layout import EntanglementScheme, QubitLayout, build_layout
from modules.qcore.state import BitsLike, bits_to_string, index_to_bits, parse_bits

logger = logging.getLogger(__name__)


class Interpretation(Enum):
    """How a player's measured bits turn into a contribution (0 = cooperate)."""
    DIRECT = "direct"
    PARTIAL = "partial"
    ALL_OR_NONE = "all_or_none"
    MAJORITY = "majority"


class ClassicalRegime(Enum):
    NO_CONTRIBUTION_EFFICIENT = "no_contribution_efficient"
    SOCIAL_DILEMMA = "social_dilemma"
    FULL_CONTRIBUTION_EFFICIENT = "full_contribution_efficient"
    BOUNDARY = "boundary"


def _as_amounts(values: Sequence[float], n: int, name: str) -> Tuple[float, ...]:
    amounts = tuple(float(v) for v in values)
    if len(amounts) != n:
        raise InvalidArgumentError(f"{name} must have one entry per player ({n}), got {len(amounts)}")
    if not all(math.isfinite(v) for v in amounts):
        raise InvalidArgumentError(f"{name} must be finite")
    return amounts


@dataclass(frozen=True)
class GameSpec:
    """Parameters of one public goods game.

    Attributes:
        n: Number of players
        a: Public good multiplier
        endowments: Private good y_k per player (all 1 when omitted)
        interpretation: Bit interpretation rule
        scheme: Entanglement scheme
        contribution_caps: Pre-agreed contribution per player, replacing y_k
            as the all-or-none contribution amount
    """
    n: int
    a: float
    endowments: Optional[Tuple[float, ...]] = None
    interpretation: Interpretation = Interpretation.DIRECT
    scheme: EntanglementScheme = EntanglementScheme.FULL
    contribution_caps: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise InvalidArgumentError(f"At least 2 players are required, got {self.n}")
        if not math.isfinite(self.a) or self.a <= 0:
            raise InvalidArgumentError(f"Multiplier a must be positive and finite, got {self.a}")

        interpretation = Interpretation(self.interpretation)
        scheme = EntanglementScheme(self.scheme)
        object.__setattr__(self, "interpretation", interpretation)
        object.__setattr__(self, "scheme", scheme)
        object.__setattr__(self, "a", float(self.a))

        endowments = (1.0,) * self.n if self.endowments is None else self.endowments
        endowments = _as_amounts(endowments, self.n, "endowments")
        if min(endowments) <= 0:
            raise InvalidArgumentError(f"Endowments must be positive, got {endowments}")
        object.__setattr__(self, "endowments", endowments)

        if interpretation is Interpretation.DIRECT and scheme.is_pair_based:
            raise UnsupportedConfigurationError(
                f"The direct interpretation needs one qubit per player (full scheme), not {scheme.value}"
            )
        if interpretation is not Interpretation.DIRECT and not scheme.is_pair_based:
            raise UnsupportedConfigurationError(
                f"The {interpretation.value} interpretation needs a pair-based scheme"
            )

        if self.contribution_caps is not None:
            caps = _as_amounts(self.contribution_caps, self.n, "contribution_caps")
            if any(c < 0 or c > y + 1e-12 for c, y in zip(caps, endowments)):
                raise InvalidArgumentError("Each contribution cap must lie in [0, y_k]")
            if interpretation is not Interpretation.ALL_OR_NONE:
                raise UnsupportedConfigurationError(
                    "Contribution caps are only defined for the all_or_none interpretation"
                )
            object.__setattr__(self, "contribution_caps", caps)

    @property
    def contribution_amounts(self) -> np.ndarray:
        """Amount each player gives when its bits say "contribute"."""
        source = self.contribution_caps if self.contribution_caps is not None else self.endowments
        return np.asarray(source, dtype=np.float64)

    def layout(self, ring_order: Optional[Sequence[int]] = None) -> QubitLayout:
        return build_layout(self.scheme, self.n, ring_order=ring_order)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "a": self.a,
            "endowments": list(self.endowments),
            "interpretation": self.interpretation.value,
            "scheme": self.scheme.value,
            "contribution_caps": None if self.contribution_caps is None else list(self.contribution_caps),
        }


def _check_layout(spec: GameSpec, layout: QubitLayout):
    if layout.n != spec.n or layout.scheme is not spec.scheme:
        raise InvalidArgumentError(
            f"Layout ({layout.scheme.value}, n={layout.n}) does not match game "
            f"({spec.scheme.value}, n={spec.n})"
        )


def _as_bit_matrix(bits, total_qubits: int) -> np.ndarray:
    if isinstance(bits, str):
        return parse_bits(bits, total_qubits)[None, :]
    matrix = np.asarray(bits, dtype=np.uint8)
    if matrix.ndim == 1:
        matrix = matrix[None, :]
    if matrix.ndim != 2 or matrix.shape[1] != total_qubits:
        raise InvalidArgumentError(
            f"Expected outcomes of {total_qubits} bits, got shape {matrix.shape}"
        )
    if matrix.size and matrix.max() > 1:
        raise InvalidArgumentError("Outcome bits must be 0 or 1")
    return matrix


def contribution_matrix(bits, spec: GameSpec, layout: QubitLayout) -> np.ndarray:
    """
    Contributions for many outcomes at once.

    Args:
        bits: Outcome rows (K x total_qubits) or a single outcome
        spec: Game parameters
        layout: Register layout matching the game

    Returns:
        Array of shape (K, n) with c_k per outcome row
    """
    _check_layout(spec, layout)
    matrix = _as_bit_matrix(bits, layout.total_qubits)

    owned = np.asarray(layout.ownership, dtype=np.int64)
    per_player = owned.shape[1]
    zeros = (matrix[:, owned] == 0).sum(axis=2)

    rule = spec.interpretation
    if rule is Interpretation.DIRECT or rule is Interpretation.PARTIAL:
        share = zeros / per_player
    elif rule is Interpretation.ALL_OR_NONE:
        share = (zeros > 0).astype(np.float64)
    elif rule is Interpretation.MAJORITY:
        # strict majority; a tie contributes nothing
        share = (2 * zeros > per_player).astype(np.float64)
    else:
        raise InvalidArgumentError(f"Unknown interpretation: {rule}")

    return share * spec.contribution_amounts[None, :]


def contribution_of(player: int, bits: BitsLike, spec: GameSpec, layout: QubitLayout) -> float:
    """Contribution of one player for one measured outcome."""
    if not 0 <= player < spec.n:
        raise InvalidArgumentError(f"Player {player} out of range for {spec.n} players")
    return float(contribution_matrix(_as_bit_matrix(bits, layout.total_qubits), spec, layout)[0, player])


def payoff_matrix(bits, spec: GameSpec, layout: QubitLayout) -> np.ndarray:
    """Payoffs P_k = (a/n) C + y_k - c_k, one row per outcome."""
    contributions = contribution_matrix(bits, spec, layout)
    public = (spec.a / spec.n) * contributions.sum(axis=1, keepdims=True)
    return public + np.asarray(spec.endowments)[None, :] - contributions


def payoff_vector(bits: BitsLike, spec: GameSpec, layout: QubitLayout) -> np.ndarray:
    """Per-player payoffs for one measured outcome."""
    return payoff_matrix(_as_bit_matrix(bits, layout.total_qubits), spec, layout)[0]


def classify_classical(a: float, n: int) -> ClassicalRegime:
    """
    Classify the classical game by its multiplier.

    a < 1: nobody contributing is both the equilibrium and efficient.
    1 < a < n: free riding; C = 0 is the equilibrium but inefficient.
    a > n: contributing everything is efficient (and individually rational).
    a = 1 and a = n sit on the boundary between regimes.
    """
    if not math.isfinite(a) or a <= 0:
        raise InvalidArgumentError(f"Multiplier a must be positive and finite, got {a}")
    if n < 2:
        raise InvalidArgumentError(f"At least 2 players are required, got {n}")
    if math.isclose(a, 1.0, rel_tol=1e-12) or math.isclose(a, float(n), rel_tol=1e-12):
        return ClassicalRegime.BOUNDARY
    if a < 1.0:
        return ClassicalRegime.NO_CONTRIBUTION_EFFICIENT
    if a < n:
        return ClassicalRegime.SOCIAL_DILEMMA
    return ClassicalRegime.FULL_CONTRIBUTION_EFFICIENT


def classical_payoff_table(
    n: int,
    a: float,
    endowments: Optional[Sequence[float]] = None,
) -> pd.DataFrame:
    """
    Payoffs of all 2^n classical outcomes (bit 0 = cooperate).

    Returns:
        DataFrame with an `outcome` column and one `P<k>` column per player
        (1-based), rows ordered 00...0 to 11...1
    """
    spec = GameSpec(n=n, a=a, endowments=endowments)
    layout = build_layout(EntanglementScheme.FULL, n)
    bits = index_to_bits(np.arange(2 ** n), n)
    payoffs = payoff_matrix(bits, spec, layout)

    table = pd.DataFrame(payoffs, columns=[f"P{k + 1}" for k in range(n)])
    table.insert(0, "outcome", [bits_to_string(row) for row in bits])
    logger.info(f"Built classical payoff table: n={n}, a={a}, {len(table)} rows")
    return table
