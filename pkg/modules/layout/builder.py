"""Qubit registers and ownership maps for the entanglement schemes.

Pair-based registers are pair-major: the two qubits of pair p sit at
positions 2p and 2p+1, the first of them owned by the first player listed
for the pair. For three players with all pairs this reproduces the
six-qubit picture where player 1 holds qubits 1 and 3, player 2 holds 2
and 5 and player 3 holds 4 and 6 (counting from 1).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Optional, Sequence, Tuple

from modules.errors import InvalidArgumentError, UnsupportedConfigurationError

logger = logging.getLogger(__name__)


class EntanglementScheme(Enum):
    FULL = "full"
    ALL_PAIRS = "all_pairs"
    NEIGHBOR_RING = "neighbor_ring"

    @property
    def is_pair_based(self) -> bool:
        return self is not EntanglementScheme.FULL


@dataclass(frozen=True)
class QubitLayout:
    """Register description for one scheme and player count.

    Attributes:
        scheme: Entanglement scheme
        n: Number of players
        total_qubits: Register size
        pairs: Qubit index pairs, in register order (empty for FULL)
        pair_players: Player pair behind each entry of `pairs`
        ownership: For each player, the owned qubit indices in ascending order
    """
    scheme: EntanglementScheme
    n: int
    total_qubits: int
    pairs: Tuple[Tuple[int, int], ...]
    pair_players: Tuple[Tuple[int, int], ...]
    ownership: Tuple[Tuple[int, ...], ...]

    @property
    def is_pair_based(self) -> bool:
        return self.scheme.is_pair_based

    def owner_of(self, qubit: int) -> int:
        for player, owned in enumerate(self.ownership):
            if qubit in owned:
                return player
        raise InvalidArgumentError(f"Qubit {qubit} is not part of this layout")

    def local_index(self, qubit: int) -> int:
        """Position of a qubit within its owner's list."""
        return self.ownership[self.owner_of(qubit)].index(qubit)

    def owned_count(self, player: int) -> int:
        return len(self.ownership[player])


def _ring_pairs(order: Sequence[int]) -> Tuple[Tuple[int, int], ...]:
    n = len(order)
    return tuple((order[i], order[(i + 1) % n]) for i in range(n))


def build_layout(
    scheme: EntanglementScheme,
    n: int,
    ring_order: Optional[Sequence[int]] = None,
) -> QubitLayout:
    """
    Build the register layout for a scheme.

    Args:
        scheme: Entanglement scheme (or its string value)
        n: Number of players
        ring_order: Player order around the ring, 0-based (NEIGHBOR_RING only;
            identity order when None)

    Returns:
        The layout

    Raises:
        InvalidArgumentError: If n < 2 or ring_order is not a permutation
        UnsupportedConfigurationError: For a ring of two players
    """
    scheme = EntanglementScheme(scheme)
    if not isinstance(n, int) or n < 2:
        raise InvalidArgumentError(f"At least 2 players are required, got {n}")

    if scheme is EntanglementScheme.FULL:
        if ring_order is not None:
            raise InvalidArgumentError("ring_order only applies to the neighbor_ring scheme")
        return QubitLayout(
            scheme=scheme,
            n=n,
            total_qubits=n,
            pairs=(),
            pair_players=(),
            ownership=tuple((k,) for k in range(n)),
        )

    if scheme is EntanglementScheme.ALL_PAIRS:
        if ring_order is not None:
            raise InvalidArgumentError("ring_order only applies to the neighbor_ring scheme")
        pair_players = tuple(combinations(range(n), 2))
    else:
        if n == 2:
            raise UnsupportedConfigurationError(
                "A neighbor ring of 2 players degenerates to a doubled pair; use all_pairs"
            )
        order = list(range(n)) if ring_order is None else [int(p) for p in ring_order]
        if sorted(order) != list(range(n)):
            raise InvalidArgumentError(f"ring_order must be a permutation of 0..{n - 1}, got {ring_order}")
        pair_players = _ring_pairs(order)

    owned = [[] for _ in range(n)]
    pairs = []
    for index, (first, second) in enumerate(pair_players):
        qubits = (2 * index, 2 * index + 1)
        pairs.append(qubits)
        owned[first].append(qubits[0])
        owned[second].append(qubits[1])

    layout = QubitLayout(
        scheme=scheme,
        n=n,
        total_qubits=2 * len(pair_players),
        pairs=tuple(pairs),
        pair_players=tuple(pair_players),
        ownership=tuple(tuple(sorted(q)) for q in owned),
    )
    logger.debug(f"Built {scheme.value} layout for {n} players: {layout.total_qubits} qubits")
    return layout
