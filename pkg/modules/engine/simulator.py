"""Protocol execution and expected payoffs.

One play of the game prepares v = |0...0>, entangles it with J, applies
each player's local operators, undoes the entanglement with J^dagger and
measures. For pair-based schemes J is a product of independent two-qubit
factors, so the final state is a product of 4-component pair states and
the outcome distribution is the product of their distributions.
"""

import logging
import math
import os
import threading
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from modules.errors import CapacityError, InvalidArgumentError, UnsupportedConfigurationError
from modules.layout import QubitLayout
from modules.payoff import GameSpec, payoff_matrix
from modules.qcore.operators import SingleQubitOp
from modules.qcore.state import (
    PRUNE_AMPLITUDE,
    SQRT2,
    Direction,
    OutcomeDistribution,
    StateVector,
    apply_full_entangler,
    apply_local,
    apply_pair_entanglers,
    index_to_bits,
    measurement_distribution,
    zero_state,
)
from modules.strategy import (
    MixedStrategy,
    PureStrategy,
    degenerate,
    sample_indices,
    validate_mixed_profile,
    validate_pure_profile,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_AMPLITUDES = 2 ** 22
DEFAULT_MAX_WORK = 2 ** 24

# Fixed block sizes; the random substream of a block depends only on its position.
EXACT_BLOCK = 64
MC_CHUNK = 8192
MC_MIN_SAMPLES = 100

THREADS_ENV = "QPGSIM_THREADS"

PAIR_INITIAL = np.array([1.0, 0.0, 0.0, 1.0j], dtype=np.complex128) / SQRT2


@dataclass(frozen=True)
class EngineLimits:
    """Size limits: dense register amplitudes and weighted outcomes enumerated."""
    max_amplitudes: int = DEFAULT_MAX_AMPLITUDES
    max_work: int = DEFAULT_MAX_WORK

    def __post_init__(self):
        if self.max_amplitudes < 2 or self.max_work < 1:
            raise InvalidArgumentError(f"Engine limits must be positive, got {self}")


class ExecutionPath(Enum):
    AUTO = "auto"
    DENSE = "dense"
    FACTORIZED = "factorized"


class PayoffMethod(Enum):
    EXACT = "exact"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class ExactEnumeration:
    """Average over every combination of the players' supports."""


@dataclass(frozen=True)
class MonteCarlo:
    """Sample strategy draws and measurement outcomes."""
    samples: int
    seed: int = 0

    def __post_init__(self):
        if self.samples < 2:
            raise InvalidArgumentError(f"Monte Carlo needs at least 2 samples, got {self.samples}")


@dataclass(frozen=True)
class PayoffReport:
    """Expected payoffs per player with how they were obtained."""
    expected: Tuple[float, ...]
    method: PayoffMethod
    samples: Optional[int] = None
    std_error: Optional[Tuple[float, ...]] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.method is PayoffMethod.EXACT and (
            self.samples is not None or self.std_error is not None or self.seed is not None
        ):
            raise InvalidArgumentError("Exact reports carry no sampling fields")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "expected": list(self.expected),
            "method": self.method.value,
            "samples": self.samples,
            "std_error": None if self.std_error is None else list(self.std_error),
            "seed": self.seed,
        }


def default_workers() -> int:
    """Worker count from the QPGSIM_THREADS environment variable (1 when unset)."""
    value = os.environ.get(THREADS_ENV)
    if not value:
        return 1
    try:
        workers = int(value)
    except ValueError:
        raise InvalidArgumentError(f"{THREADS_ENV} must be an integer, got '{value}'")
    if workers < 1:
        raise InvalidArgumentError(f"{THREADS_ENV} must be at least 1, got {workers}")
    return workers


def _map_ordered(func: Callable, items: Sequence, workers: int) -> List:
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def pair_final_state(op_a: SingleQubitOp, op_b: SingleQubitOp) -> np.ndarray:
    """
    Final 4-component state J_2^dagger (A x B) (1, 0, 0, i)/sqrt(2) of one pair.

    Components are ordered |00>, |01>, |10>, |11>, the first qubit acted on by A.
    """
    evolved = np.kron(op_a.matrix, op_b.matrix) @ PAIR_INITIAL
    # X (x) X reverses the 4-vector
    return (evolved - 1j * evolved[::-1]) / SQRT2


def _check_game(spec: GameSpec, layout: QubitLayout):
    if layout.n != spec.n or layout.scheme is not spec.scheme:
        raise InvalidArgumentError(
            f"Layout ({layout.scheme.value}, n={layout.n}) does not match game "
            f"({spec.scheme.value}, n={spec.n})"
        )


def _as_pure_profile(profile: Sequence) -> Tuple[PureStrategy, ...]:
    return tuple(p if isinstance(p, PureStrategy) else PureStrategy(tuple(p)) for p in profile)


def _entangle(state: StateVector, layout: QubitLayout, direction: Direction) -> StateVector:
    if layout.is_pair_based:
        return apply_pair_entanglers(state, layout.pairs, direction)
    return apply_full_entangler(state, direction)


def _uses_dense(layout: QubitLayout, path: ExecutionPath) -> bool:
    return not layout.is_pair_based or path is ExecutionPath.DENSE


def _run_dense(profile: Sequence[PureStrategy], layout: QubitLayout, limits: EngineLimits) -> OutcomeDistribution:
    dimension = 2 ** layout.total_qubits
    if dimension > limits.max_amplitudes:
        raise CapacityError(
            f"Dense register needs 2^{layout.total_qubits} amplitudes, limit is {limits.max_amplitudes}"
            + ("" if layout.is_pair_based else "; full entanglement cannot be factorized"),
            limit=limits.max_amplitudes,
            requested=dimension,
        )
    state = _entangle(zero_state(layout.total_qubits), layout, Direction.FORWARD)
    for strategy, owned in zip(profile, layout.ownership):
        for op, qubit in zip(strategy, owned):
            state = apply_local(state, op, qubit)
    state = _entangle(state, layout, Direction.ADJOINT)
    return measurement_distribution(state)


def _run_factorized(profile: Sequence[PureStrategy], layout: QubitLayout, limits: EngineLimits) -> OutcomeDistribution:
    slot = {}
    for player, owned in enumerate(layout.ownership):
        for position, qubit in enumerate(owned):
            slot[qubit] = (player, position)

    bits = np.zeros((1, 0), dtype=np.uint8)
    probabilities = np.ones(1)
    for qubit_a, qubit_b in layout.pairs:
        player_a, position_a = slot[qubit_a]
        player_b, position_b = slot[qubit_b]
        amplitudes = pair_final_state(profile[player_a][position_a], profile[player_b][position_b])

        keep = np.flatnonzero(np.abs(amplitudes) >= PRUNE_AMPLITUDE)
        size = probabilities.size * keep.size
        if size > limits.max_work:
            raise CapacityError(
                f"Factorized outcome enumeration exceeds {limits.max_work} outcomes",
                limit=limits.max_work,
                requested=size,
            )
        pair_bits = index_to_bits(keep, 2)
        pair_probabilities = np.abs(amplitudes[keep]) ** 2

        bits = np.hstack([
            np.repeat(bits, keep.size, axis=0),
            np.tile(pair_bits, (probabilities.size, 1)),
        ])
        probabilities = np.repeat(probabilities, keep.size) * np.tile(pair_probabilities, probabilities.size)

    return OutcomeDistribution(bits, probabilities)


def run_pure(
    profile: Sequence,
    spec: GameSpec,
    layout: QubitLayout,
    path: Union[ExecutionPath, str] = ExecutionPath.AUTO,
    limits: Optional[EngineLimits] = None,
) -> OutcomeDistribution:
    """
    Outcome distribution of J^dagger (U_1 x ... x U_n) J |0...0>.

    Args:
        profile: One PureStrategy (or operator list) per player
        spec: Game parameters
        layout: Register layout matching the game
        path: AUTO uses the dense register for the full scheme and the
            per-pair product for pair-based schemes; DENSE forces the
            register simulation
        limits: Size limits

    Raises:
        CapacityError: If the chosen path exceeds the limits
        UnsupportedConfigurationError: If factorization is requested for the full scheme
    """
    _check_game(spec, layout)
    profile = _as_pure_profile(profile)
    validate_pure_profile(profile, layout)
    limits = limits or EngineLimits()
    path = ExecutionPath(path)

    if not layout.is_pair_based and path is ExecutionPath.FACTORIZED:
        raise UnsupportedConfigurationError("Full entanglement has no pair factorization")
    if _uses_dense(layout, path):
        return _run_dense(profile, layout, limits)
    return _run_factorized(profile, layout, limits)


def pure_expected_payoffs(
    profile: Sequence,
    spec: GameSpec,
    layout: QubitLayout,
    path: Union[ExecutionPath, str] = ExecutionPath.AUTO,
    limits: Optional[EngineLimits] = None,
) -> np.ndarray:
    """Exact expected payoffs of one pure profile."""
    distribution = run_pure(profile, spec, layout, path=path, limits=limits)
    return distribution.probabilities @ payoff_matrix(distribution.bits, spec, layout)


def _as_mixed_profile(profile: Sequence) -> Tuple[MixedStrategy, ...]:
    mixed = []
    for entry in profile:
        if isinstance(entry, MixedStrategy):
            mixed.append(entry)
        elif isinstance(entry, PureStrategy):
            mixed.append(degenerate(entry))
        else:
            mixed.append(degenerate(PureStrategy(tuple(entry))))
    return tuple(mixed)


class _WorkCounter:
    """Shared tally of enumerated outcomes across worker threads."""

    def __init__(self, limit: int):
        self.limit = limit
        self.total = 0
        self._lock = threading.Lock()

    def add(self, amount: int):
        with self._lock:
            self.total += amount
            total = self.total
        if total > self.limit:
            raise CapacityError(
                f"Exact enumeration exceeds {self.limit} weighted outcomes; use Monte Carlo",
                limit=self.limit,
                requested=total,
            )


def _exact_payoffs(profile, spec, layout, path, limits, workers) -> PayoffReport:
    sizes = [len(m.support) for m in profile]
    combinations = math.prod(sizes)
    if combinations > limits.max_work:
        raise CapacityError(
            f"{combinations} support combinations exceed the work limit {limits.max_work}; use Monte Carlo",
            limit=limits.max_work,
            requested=combinations,
        )
    if _uses_dense(layout, path):
        # every dense run enumerates the whole 2^m basis
        dense_work = combinations * 2 ** layout.total_qubits
        if dense_work > limits.max_work:
            raise CapacityError(
                f"{combinations} dense runs over 2^{layout.total_qubits} basis states exceed "
                f"the work limit {limits.max_work}; use Monte Carlo",
                limit=limits.max_work,
                requested=dense_work,
            )
    logger.info(f"Exact enumeration over {combinations} support combinations")

    combos = list(product(*(range(s) for s in sizes)))
    blocks = [combos[i:i + EXACT_BLOCK] for i in range(0, len(combos), EXACT_BLOCK)]
    counter = _WorkCounter(limits.max_work)

    def evaluate(block):
        accumulated = np.zeros(spec.n)
        for combo in block:
            weight = math.prod(profile[k].probabilities[i] for k, i in enumerate(combo))
            if weight == 0.0:
                continue
            pure = [profile[k].support[i] for k, i in enumerate(combo)]
            distribution = run_pure(pure, spec, layout, path=path, limits=limits)
            counter.add(len(distribution))
            accumulated += weight * (distribution.probabilities @ payoff_matrix(distribution.bits, spec, layout))
        return accumulated

    expected = np.zeros(spec.n)
    for partial in _map_ordered(evaluate, blocks, workers):
        expected += partial
    return PayoffReport(expected=tuple(expected.tolist()), method=PayoffMethod.EXACT)


def _monte_carlo_payoffs(profile, spec, layout, method: MonteCarlo, path, limits, workers) -> PayoffReport:
    samples = int(method.samples)
    if samples < MC_MIN_SAMPLES:
        warnings.warn(f"Monte Carlo with {samples} samples; the standard error is unreliable")

    chunks = [MC_CHUNK] * (samples // MC_CHUNK)
    if samples % MC_CHUNK:
        chunks.append(samples % MC_CHUNK)
    sequences = np.random.SeedSequence(method.seed).spawn(len(chunks))
    logger.info(f"Monte Carlo: {samples} samples in {len(chunks)} chunks, seed {method.seed}")

    cache: Dict[Tuple[int, ...], Tuple[np.ndarray, np.ndarray]] = {}
    cache_lock = threading.Lock()

    def outcome_table(combo: Tuple[int, ...]):
        with cache_lock:
            hit = cache.get(combo)
        if hit is not None:
            return hit
        pure = [profile[k].support[i] for k, i in enumerate(combo)]
        distribution = run_pure(pure, spec, layout, path=path, limits=limits)
        entry = (
            payoff_matrix(distribution.bits, spec, layout),
            distribution.probabilities / distribution.probabilities.sum(),
        )
        with cache_lock:
            cache[combo] = entry
        return entry

    def run_chunk(task):
        size, sequence = task
        streams = sequence.spawn(spec.n + 1)
        draws = np.column_stack([
            sample_indices(profile[k], np.random.default_rng(streams[k]), size)
            for k in range(spec.n)
        ])
        outcome_rng = np.random.default_rng(streams[spec.n])
        combos, inverse = np.unique(draws, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)

        sums = np.zeros(spec.n)
        squares = np.zeros(spec.n)
        for index, combo in enumerate(combos):
            members = int(np.count_nonzero(inverse == index))
            payoffs, probabilities = outcome_table(tuple(int(c) for c in combo))
            picks = outcome_rng.choice(probabilities.size, size=members, p=probabilities)
            values = payoffs[picks]
            sums += values.sum(axis=0)
            squares += (values ** 2).sum(axis=0)
        return sums, squares

    total = np.zeros(spec.n)
    total_squares = np.zeros(spec.n)
    for sums, squares in _map_ordered(run_chunk, list(zip(chunks, sequences)), workers):
        total += sums
        total_squares += squares

    mean = total / samples
    variance = np.maximum(total_squares - samples * mean ** 2, 0.0) / (samples - 1)
    return PayoffReport(
        expected=tuple(mean.tolist()),
        method=PayoffMethod.MONTE_CARLO,
        samples=samples,
        std_error=tuple(np.sqrt(variance / samples).tolist()),
        seed=method.seed,
    )


def expected_payoffs(
    profile: Sequence,
    spec: GameSpec,
    layout: QubitLayout,
    method: Union[ExactEnumeration, MonteCarlo, None] = None,
    path: Union[ExecutionPath, str] = ExecutionPath.AUTO,
    limits: Optional[EngineLimits] = None,
    workers: Optional[int] = None,
) -> PayoffReport:
    """
    Expected payoff of every player when each plays a finite mixture.

    Args:
        profile: One MixedStrategy (or PureStrategy) per player
        spec: Game parameters
        layout: Register layout matching the game
        method: ExactEnumeration (default) or MonteCarlo(samples, seed)
        path: Execution path handed to run_pure
        limits: Size limits
        workers: Threads; QPGSIM_THREADS or 1 when None. Results do not
            depend on this value.

    Raises:
        CapacityError: If exact enumeration exceeds the work limit
    """
    _check_game(spec, layout)
    profile = _as_mixed_profile(profile)
    validate_mixed_profile(profile, layout)
    limits = limits or EngineLimits()
    path = ExecutionPath(path)
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise InvalidArgumentError(f"workers must be at least 1, got {workers}")

    if method is None or isinstance(method, ExactEnumeration):
        return _exact_payoffs(profile, spec, layout, path, limits, workers)
    if isinstance(method, MonteCarlo):
        return _monte_carlo_payoffs(profile, spec, layout, method, path, limits, workers)
    raise InvalidArgumentError(f"Unknown payoff method: {method!r}")
