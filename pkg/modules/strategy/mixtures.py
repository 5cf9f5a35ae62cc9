"""Pure and finite mixed strategies over single-qubit operators.

Random draws use numpy's PCG64 generator (numpy.random.default_rng); a run
seed is split with SeedSequence.spawn into one independent stream per
player, so results are reproducible across platforms.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from modules.errors import InvalidArgumentError
from modules.layout import QubitLayout
from modules.qcore.operators import I_SIGMA_X, IDENTITY, SingleQubitOp, exact_operator

logger = logging.getLogger(__name__)

PROBABILITY_TOLERANCE = 1e-12

U_ZERO = IDENTITY
U_ONE = exact_operator(0.0, math.pi / 2.0, 0.0, [[1j, 0], [0, -1j]])


@dataclass(frozen=True)
class PureStrategy:
    """One operator per owned qubit, in the owner's qubit order."""
    ops: Tuple[SingleQubitOp, ...]

    def __post_init__(self):
        ops = tuple(self.ops)
        if not ops:
            raise InvalidArgumentError("A pure strategy needs at least one operator")
        if not all(isinstance(op, SingleQubitOp) for op in ops):
            raise InvalidArgumentError("Pure strategy entries must be SingleQubitOp instances")
        object.__setattr__(self, "ops", ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[SingleQubitOp]:
        return iter(self.ops)

    def __getitem__(self, index: int) -> SingleQubitOp:
        return self.ops[index]


@dataclass(frozen=True)
class MixedStrategy:
    """Finite probability mixture of pure strategies for one player."""
    support: Tuple[PureStrategy, ...]
    probabilities: Tuple[float, ...]

    def __post_init__(self):
        support = tuple(self.support)
        probabilities = tuple(float(p) for p in self.probabilities)
        if not support:
            raise InvalidArgumentError("A mixed strategy needs a non-empty support")
        if len(support) != len(probabilities):
            raise InvalidArgumentError(
                f"Support has {len(support)} entries but {len(probabilities)} probabilities were given"
            )
        if any(not math.isfinite(p) or p < 0 for p in probabilities):
            raise InvalidArgumentError(f"Probabilities must be non-negative, got {probabilities}")
        if abs(math.fsum(probabilities) - 1.0) > PROBABILITY_TOLERANCE:
            raise InvalidArgumentError(f"Probabilities must sum to 1, got {math.fsum(probabilities)}")
        if len({len(s) for s in support}) != 1:
            raise InvalidArgumentError("All support entries must cover the same number of qubits")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probabilities", probabilities)

    @property
    def num_ops(self) -> int:
        return len(self.support[0])

    @property
    def is_pure(self) -> bool:
        return len(self.support) == 1


def canonical_u(b: int) -> SingleQubitOp:
    """u(0) = U(0, 0, 0) = I and u(1) = U(0, pi/2, 0) = diag(i, -i)."""
    if b not in (0, 1):
        raise InvalidArgumentError(f"canonical_u takes 0 or 1, got {b}")
    return U_ONE if b else U_ZERO


def classical_operator(bit: int) -> SingleQubitOp:
    """Identity keeps a bit (cooperate); i*sigma_x flips it (defect)."""
    if bit not in (0, 1):
        raise InvalidArgumentError(f"Classical choice must be 0 or 1, got {bit}")
    return I_SIGMA_X if bit else IDENTITY


def uniform_pure(op: SingleQubitOp, count: int) -> PureStrategy:
    """The same operator on every one of `count` qubits."""
    return PureStrategy((op,) * count)


def degenerate(pure: PureStrategy) -> MixedStrategy:
    return MixedStrategy((pure,), (1.0,))


def paper_mixture(layout: QubitLayout) -> Tuple[MixedStrategy, ...]:
    """
    Each player plays u(0) on all owned qubits or u(1) on all, with probability 1/2 each.
    """
    return tuple(
        MixedStrategy(
            support=(uniform_pure(U_ZERO, len(owned)), uniform_pure(U_ONE, len(owned))),
            probabilities=(0.5, 0.5),
        )
        for owned in layout.ownership
    )


def pure_profile(ops_per_player: Sequence[Sequence[SingleQubitOp]], layout: QubitLayout) -> Tuple[PureStrategy, ...]:
    """Wrap explicit operator lists and check them against the layout."""
    profile = tuple(PureStrategy(tuple(ops)) for ops in ops_per_player)
    validate_pure_profile(profile, layout)
    return profile


def classical_profile(bits: Sequence[int], layout: QubitLayout) -> Tuple[PureStrategy, ...]:
    """Every qubit of player k gets the classical operator for bits[k]."""
    if len(bits) != layout.n:
        raise InvalidArgumentError(f"Need one classical choice per player ({layout.n}), got {len(bits)}")
    return tuple(
        uniform_pure(classical_operator(int(bit)), len(owned))
        for bit, owned in zip(bits, layout.ownership)
    )


def validate_pure_profile(profile: Sequence[PureStrategy], layout: QubitLayout):
    if len(profile) != layout.n:
        raise InvalidArgumentError(f"Profile has {len(profile)} players, layout has {layout.n}")
    for player, (strategy, owned) in enumerate(zip(profile, layout.ownership)):
        if len(strategy) != len(owned):
            raise InvalidArgumentError(
                f"Player {player} owns {len(owned)} qubits but was given {len(strategy)} operators"
            )


def validate_mixed_profile(profile: Sequence[MixedStrategy], layout: QubitLayout):
    if len(profile) != layout.n:
        raise InvalidArgumentError(f"Profile has {len(profile)} players, layout has {layout.n}")
    for player, (mixed, owned) in enumerate(zip(profile, layout.ownership)):
        if mixed.num_ops != len(owned):
            raise InvalidArgumentError(
                f"Player {player} owns {len(owned)} qubits but its strategy covers {mixed.num_ops}"
            )


def player_streams(seed: Optional[int], n: int) -> List[np.random.Generator]:
    """One independent PCG64 generator per player, spawned from a single seed."""
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(n)]


def sample(mixed: MixedStrategy, rng: np.random.Generator) -> PureStrategy:
    """Draw one support entry with its mixture probability."""
    if mixed.is_pure:
        return mixed.support[0]
    index = rng.choice(len(mixed.support), p=np.asarray(mixed.probabilities))
    return mixed.support[int(index)]


def sample_indices(mixed: MixedStrategy, rng: np.random.Generator, size: int) -> np.ndarray:
    """Vectorized draws of support indices."""
    if mixed.is_pure:
        return np.zeros(size, dtype=np.int64)
    return rng.choice(len(mixed.support), size=size, p=np.asarray(mixed.probabilities)).astype(np.int64)
