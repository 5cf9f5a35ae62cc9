"""Numerical search for profitable unilateral deviations.

A deviator's expected payoff is affine in its own mixture weights, so it is
enough to search over pure deviations: one operator per owned qubit.
Candidates are the per-qubit assignments of the canonical operators and the
product of a regular (theta, phi, alpha) grid over the owned qubits, both
evenly thinned to the same cap, followed by scrambled Sobol draws with an
independent operator per owned qubit.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import qmc

from modules.engine import EngineLimits, ExactEnumeration, default_workers, expected_payoffs
from modules.errors import InvalidArgumentError
from modules.layout import QubitLayout
from modules.payoff import GameSpec
from modules.qcore.operators import I_SIGMA_X, IDENTITY, SingleQubitOp, build_operator
from modules.strategy import U_ONE, MixedStrategy, PureStrategy, degenerate, paper_mixture, uniform_pure

logger = logging.getLogger(__name__)

DEVIATION_TOLERANCE = 1e-9
DEFAULT_MAX_GRID_POINTS = 4096

ANCHOR_OPERATORS = (IDENTITY, U_ONE, I_SIGMA_X)


class SearchSpace(Enum):
    FULL = "full"
    CLASSICAL = "classical"


@dataclass(frozen=True)
class SearchConfig:
    """Resolution of a deviation search.

    Attributes:
        grid: Points per angle; each owned qubit ranges over grid^3 operators
        random_samples: Sobol draws with independent per-qubit operators
        seed: Seed of the scrambled Sobol sequence
        space: FULL searches U(theta, phi, alpha); CLASSICAL searches
            {I, i sigma_x} on every owned qubit
        max_grid_points: Cap on the anchor and grid products, reached by even
            thinning (None keeps the whole product)
    """
    grid: int = 9
    random_samples: int = 200
    seed: int = 0
    space: SearchSpace = SearchSpace.FULL
    max_grid_points: Optional[int] = DEFAULT_MAX_GRID_POINTS

    def __post_init__(self):
        object.__setattr__(self, "space", SearchSpace(self.space))
        if self.grid < 1:
            raise InvalidArgumentError(f"grid must be at least 1, got {self.grid}")
        if self.random_samples < 0:
            raise InvalidArgumentError(f"random_samples must be non-negative, got {self.random_samples}")
        if self.max_grid_points is not None and self.max_grid_points < 1:
            raise InvalidArgumentError(f"max_grid_points must be at least 1, got {self.max_grid_points}")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["space"] = self.space.value
        return data


@dataclass(frozen=True)
class DeviationReport:
    """Outcome of searching one player's deviations against a fixed profile."""
    player: int
    baseline: float
    max_gain: float
    max_abs_deviation: float
    argmax_ops: Tuple[SingleQubitOp, ...]
    candidates: int
    search: SearchConfig

    @property
    def payoff_is_constant(self) -> bool:
        return self.max_abs_deviation <= DEVIATION_TOLERANCE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "player": self.player,
            "baseline": self.baseline,
            "max_gain": self.max_gain,
            "max_abs_deviation": self.max_abs_deviation,
            "argmax_ops": [op.to_dict(in_units_of_pi=True) for op in self.argmax_ops],
            "candidates": self.candidates,
            "search": self.search.to_dict(),
        }


@dataclass(frozen=True)
class PureEquilibriumReport:
    """Best-effort scan of symmetric pure profiles for a pure equilibrium."""
    profiles_checked: int
    best_gain: float
    best_op: SingleQubitOp
    found: bool
    search: SearchConfig

    def to_dict(self) -> Dict[str, Any]:
        return {
            "profiles_checked": self.profiles_checked,
            "best_gain": self.best_gain,
            "best_op": self.best_op.to_dict(in_units_of_pi=True),
            "found": self.found,
            "search": self.search.to_dict(),
        }


def _even_indices(total: int, limit: Optional[int]) -> List[int]:
    """`limit` evenly spaced indices of range(total), both ends included."""
    if limit is None or total <= limit:
        return list(range(total))
    if limit == 1:
        return [0]
    # exact integer arithmetic; total can exceed float precision
    return [k * (total - 1) // (limit - 1) for k in range(limit)]


def _thin(items: List, limit: Optional[int]) -> List:
    return [items[i] for i in _even_indices(len(items), limit)]


def grid_operators(grid: int, max_points: Optional[int] = None) -> List[SingleQubitOp]:
    """theta over [0, pi] inclusive, phi and alpha over [0, 2 pi) with `grid` points each."""
    thetas = np.linspace(0.0, math.pi, grid)
    phases = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    ops = [build_operator(t, p, q) for t, p, q in product(thetas, phases, phases)]
    return _thin(ops, max_points)


def product_grid(
    ops: Sequence[SingleQubitOp],
    owned: int,
    max_points: Optional[int] = None,
) -> List[Tuple[SingleQubitOp, ...]]:
    """
    Per-qubit assignments from ops^owned, evenly thinned to `max_points`.

    Assignments are indexed in lexicographic order (first owned qubit most
    significant) and decoded lazily, so only the kept points are built.
    """
    base = len(ops)
    assignments = []
    for index in _even_indices(base ** owned, max_points):
        digits = []
        for _ in range(owned):
            index, digit = divmod(index, base)
            digits.append(ops[digit])
        assignments.append(tuple(reversed(digits)))
    return assignments


def random_operators(count: int, owned: int, seed: int) -> List[Tuple[SingleQubitOp, ...]]:
    """Scrambled Sobol draws mapped to one independent operator per owned qubit."""
    if count == 0:
        return []
    sampler = qmc.Sobol(d=3 * owned, scramble=True, seed=seed)
    points = sampler.random_base2(m=max(1, math.ceil(math.log2(count))))[:count]
    draws = []
    for row in points:
        draws.append(tuple(
            build_operator(math.pi * row[3 * q], 2.0 * math.pi * row[3 * q + 1], 2.0 * math.pi * row[3 * q + 2])
            for q in range(owned)
        ))
    return draws


def deviation_candidates(owned: int, search: SearchConfig) -> List[PureStrategy]:
    """All pure deviations a player with `owned` qubits is tested with."""
    if owned < 1:
        raise InvalidArgumentError(f"A player owns at least one qubit, got {owned}")
    if search.space is SearchSpace.CLASSICAL:
        return [PureStrategy(ops) for ops in product((IDENTITY, I_SIGMA_X), repeat=owned)]

    candidates = [PureStrategy(ops) for ops in product_grid(ANCHOR_OPERATORS, owned, search.max_grid_points)]
    grid = product_grid(grid_operators(search.grid), owned, search.max_grid_points)
    candidates.extend(PureStrategy(ops) for ops in grid)
    candidates.extend(PureStrategy(ops) for ops in random_operators(search.random_samples, owned, search.seed))
    return candidates


def deviation_payoff(
    spec: GameSpec,
    layout: QubitLayout,
    profile: Sequence[MixedStrategy],
    player: int,
    deviation,
    limits: Optional[EngineLimits] = None,
) -> float:
    """Exact expected payoff of `player` when it alone switches to `deviation`."""
    if not 0 <= player < spec.n:
        raise InvalidArgumentError(f"Player {player} out of range for {spec.n} players")
    if isinstance(deviation, PureStrategy):
        deviation = degenerate(deviation)
    deviated = list(profile)
    deviated[player] = deviation
    report = expected_payoffs(deviated, spec, layout, method=ExactEnumeration(), limits=limits, workers=1)
    return report.expected[player]


def best_response(
    spec: GameSpec,
    layout: QubitLayout,
    profile: Sequence[MixedStrategy],
    player: int,
    search: Optional[SearchConfig] = None,
    limits: Optional[EngineLimits] = None,
    workers: Optional[int] = None,
) -> DeviationReport:
    """
    Search `player`'s pure deviations against a fixed profile.

    Args:
        spec: Game parameters
        layout: Register layout matching the game
        profile: One MixedStrategy per player; entry `player` is the baseline
        player: Index of the deviating player
        search: Search resolution (defaults to SearchConfig())
        limits: Engine size limits
        workers: Threads evaluating candidates; results do not depend on it

    Returns:
        DeviationReport with the largest gain and the operators achieving it

    Raises:
        CapacityError: Propagated from the engine
    """
    if not 0 <= player < spec.n:
        raise InvalidArgumentError(f"Player {player} out of range for {spec.n} players")
    search = search or SearchConfig()
    workers = default_workers() if workers is None else workers
    profile = tuple(profile)

    baseline = expected_payoffs(profile, spec, layout, method=ExactEnumeration(), limits=limits).expected[player]
    candidates = deviation_candidates(layout.owned_count(player), search)
    logger.info(
        f"Deviation search for player {player}: {len(candidates)} candidates "
        f"({search.space.value} space, grid {search.grid})"
    )

    def evaluate(candidate: PureStrategy) -> float:
        return deviation_payoff(spec, layout, profile, player, candidate, limits=limits)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            payoffs = list(executor.map(evaluate, candidates))
    else:
        payoffs = [evaluate(c) for c in candidates]

    gains = np.asarray(payoffs) - baseline
    best = int(np.argmax(gains))
    return DeviationReport(
        player=player,
        baseline=float(baseline),
        max_gain=float(gains[best]),
        max_abs_deviation=float(np.max(np.abs(gains))),
        argmax_ops=tuple(candidates[best]),
        candidates=len(candidates),
        search=search,
    )


def verify_deviation_independence(
    spec: GameSpec,
    layout: QubitLayout,
    player: int,
    search: Optional[SearchConfig] = None,
    limits: Optional[EngineLimits] = None,
    workers: Optional[int] = None,
) -> DeviationReport:
    """Deviation search with every other player on the canonical mixture.

    On configurations with a closed form the deviator's payoff is constant,
    so `max_abs_deviation` stays below DEVIATION_TOLERANCE.
    """
    return best_response(spec, layout, paper_mixture(layout), player, search, limits, workers)


def best_response_gap(
    spec: GameSpec,
    layout: QubitLayout,
    profile: Sequence[MixedStrategy],
    player: int,
    search: Optional[SearchConfig] = None,
    limits: Optional[EngineLimits] = None,
    workers: Optional[int] = None,
) -> float:
    """Largest profitable deviation found, clipped below at 0."""
    report = best_response(spec, layout, profile, player, search, limits, workers)
    return max(0.0, report.max_gain)


def pure_equilibrium_search(
    spec: GameSpec,
    layout: QubitLayout,
    search: Optional[SearchConfig] = None,
    limits: Optional[EngineLimits] = None,
    workers: Optional[int] = None,
) -> PureEquilibriumReport:
    """
    Scan symmetric pure profiles for one no player can improve on.

    Every player applies the same grid operator to all of its qubits; each
    player's best deviation is searched with `search`. A profile whose
    largest gain stays within DEVIATION_TOLERANCE would be a pure
    equilibrium at this resolution. This is evidence, not proof.
    """
    search = search or SearchConfig(grid=3, random_samples=16)
    profiles = list(ANCHOR_OPERATORS) + grid_operators(search.grid, search.max_grid_points)

    best_gain = math.inf
    best_op = profiles[0]
    for op in profiles:
        profile = tuple(degenerate(uniform_pure(op, len(owned))) for owned in layout.ownership)
        gain = max(
            best_response_gap(spec, layout, profile, player, search, limits, workers)
            for player in range(spec.n)
        )
        logger.debug(f"Symmetric profile {op.to_dict(in_units_of_pi=True)}: largest gain {gain}")
        if gain < best_gain:
            best_gain, best_op = gain, op

    found = best_gain <= DEVIATION_TOLERANCE
    logger.info(f"Pure equilibrium scan over {len(profiles)} profiles: smallest gain {best_gain}, found={found}")
    return PureEquilibriumReport(
        profiles_checked=len(profiles),
        best_gain=float(best_gain),
        best_op=best_op,
        found=found,
        search=search,
    )
