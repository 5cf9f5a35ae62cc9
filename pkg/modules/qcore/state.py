"""State vectors, structured entanglers and measurement distributions.

Basis convention: qubit 0 is the most significant bit of the basis index,
so amplitude k of an m-qubit register belongs to the bitstring of k written
with m digits, qubit 0 first.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from modules.errors import InvalidArgumentError, InvalidStateError
from modules.qcore.operators import SingleQubitOp

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)

# Amplitudes smaller than this never reach an OutcomeDistribution.
PRUNE_AMPLITUDE = 1e-15
NORM_TOLERANCE = 1e-9

BitsLike = Union[str, Sequence[int], np.ndarray]


class Direction(Enum):
    FORWARD = "forward"
    ADJOINT = "adjoint"


def parse_bits(bits: BitsLike, length: Optional[int] = None) -> np.ndarray:
    """
    Convert a bitstring ("0110") or a sequence of 0/1 values to a uint8 array.

    Raises:
        InvalidArgumentError: On characters other than 0/1 or a length mismatch
    """
    if isinstance(bits, str):
        if any(ch not in "01" for ch in bits):
            raise InvalidArgumentError(f"Bitstring may only contain 0 and 1, got '{bits}'")
        array = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    else:
        array = np.asarray(bits)
        if array.ndim != 1 or (array.size and not np.isin(array, (0, 1)).all()):
            raise InvalidArgumentError(f"Bits must be a flat sequence of 0/1 values, got {bits!r}")
        array = array.astype(np.uint8)

    if length is not None and array.size != length:
        raise InvalidArgumentError(f"Expected {length} bits, got {array.size}")
    return array.astype(np.uint8)


def bits_to_string(bits: Iterable[int]) -> str:
    return "".join(str(int(b)) for b in bits)


def index_to_bits(indices: np.ndarray, num_qubits: int) -> np.ndarray:
    """Rows of bits (qubit 0 first) for an array of basis indices."""
    shifts = np.arange(num_qubits - 1, -1, -1, dtype=np.int64)
    return ((np.asarray(indices, dtype=np.int64)[:, None] >> shifts) & 1).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Amplitudes of an m-qubit register; immutable after construction."""
    amplitudes: np.ndarray
    num_qubits: int = field(init=False)

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        size = amplitudes.size
        if size < 2 or size & (size - 1):
            raise InvalidArgumentError(f"State length must be 2^m with m >= 1, got {size}")
        if not np.isfinite(amplitudes).all():
            raise InvalidStateError("State contains non-finite amplitudes")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)
        object.__setattr__(self, "num_qubits", size.bit_length() - 1)

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def tensor(self) -> np.ndarray:
        """Amplitudes viewed with one axis per qubit, axis q = qubit q."""
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def equal_up_to_global_phase(self, other: "StateVector", atol: float = 1e-12) -> bool:
        if other.num_qubits != self.num_qubits:
            return False
        pivot = int(np.argmax(np.abs(self.amplitudes)))
        if abs(other.amplitudes[pivot]) < atol:
            return bool(np.allclose(self.amplitudes, other.amplitudes, atol=atol))
        phase = other.amplitudes[pivot] / self.amplitudes[pivot]
        phase /= abs(phase)
        return bool(np.allclose(self.amplitudes * phase, other.amplitudes, atol=atol))

    def fidelity(self, other: "StateVector") -> float:
        """|<self|other>|^2, insensitive to global phase."""
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)


def zero_state(num_qubits: int) -> StateVector:
    """|0...0> on the given number of qubits."""
    if num_qubits < 1:
        raise InvalidArgumentError(f"A register needs at least one qubit, got {num_qubits}")
    amplitudes = np.zeros(2 ** num_qubits, dtype=np.complex128)
    amplitudes[0] = 1.0
    return StateVector(amplitudes)


def basis_state(bits: BitsLike) -> StateVector:
    """The computational basis state |bits>."""
    array = parse_bits(bits)
    if array.size < 1:
        raise InvalidArgumentError("A basis state needs at least one bit")
    index = int(bits_to_string(array), 2)
    amplitudes = np.zeros(2 ** array.size, dtype=np.complex128)
    amplitudes[index] = 1.0
    return StateVector(amplitudes)


def _check_qubit(qubit: int, num_qubits: int):
    if not isinstance(qubit, (int, np.integer)) or not 0 <= qubit < num_qubits:
        raise InvalidArgumentError(f"Qubit index {qubit} out of range for {num_qubits} qubits")


def apply_local(state: StateVector, op: SingleQubitOp, qubit: int) -> StateVector:
    """
    Apply a single-qubit operator to one qubit, identity elsewhere.

    Raises:
        InvalidArgumentError: If the qubit index is out of range
    """
    _check_qubit(qubit, state.num_qubits)
    updated = np.tensordot(op.matrix, state.tensor(), axes=([1], [qubit]))
    updated = np.moveaxis(updated, 0, qubit)
    return StateVector(updated.reshape(-1))


def apply_full_entangler(
    state: StateVector,
    direction: Union[Direction, str] = Direction.FORWARD,
) -> StateVector:
    """
    Apply J_m = (I + i X^{(x)m}) / sqrt(2) or its adjoint.

    X on every qubit complements every bit of the basis index, which for
    qubit-0-first indexing is a reversal of the amplitude array.
    """
    sign = 1.0 if Direction(direction) is Direction.FORWARD else -1.0
    psi = state.amplitudes
    return StateVector((psi + sign * 1j * psi[::-1]) / SQRT2)


def validate_pairs(pairs: Sequence[Tuple[int, int]], num_qubits: int) -> List[Tuple[int, int]]:
    """
    Check that qubit pairs are in range and pairwise disjoint.

    Raises:
        InvalidArgumentError: On out-of-range, repeated or overlapping indices
    """
    seen = set()
    checked = []
    for pair in pairs:
        if len(pair) != 2:
            raise InvalidArgumentError(f"Each pair needs exactly two qubits, got {pair!r}")
        first, second = int(pair[0]), int(pair[1])
        _check_qubit(first, num_qubits)
        _check_qubit(second, num_qubits)
        if first == second or first in seen or second in seen:
            raise InvalidArgumentError(f"Pairs must be disjoint, qubit reused in {pair!r}")
        seen.update((first, second))
        checked.append((first, second))
    return checked


def apply_pair_entanglers(
    state: StateVector,
    pairs: Sequence[Tuple[int, int]],
    direction: Union[Direction, str] = Direction.FORWARD,
) -> StateVector:
    """
    Apply J_2 (or its adjoint) to each listed qubit pair.

    Each factor is applied as psi -> (psi +/- i X_a X_b psi) / sqrt(2), the
    double flip being an axis reversal of the per-qubit tensor view.

    Raises:
        InvalidArgumentError: If pairs overlap or indices are out of range
    """
    checked = validate_pairs(pairs, state.num_qubits)
    sign = 1.0 if Direction(direction) is Direction.FORWARD else -1.0
    tensor = state.tensor()
    for first, second in checked:
        tensor = (tensor + sign * 1j * np.flip(tensor, axis=(first, second))) / SQRT2
    return StateVector(tensor.reshape(-1))


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Measurement outcomes with nonzero probability.

    Attributes:
        bits: One row per outcome, one column per qubit (uint8)
        probabilities: Probability of each row
    """
    bits: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        bits = np.array(self.bits, dtype=np.uint8)
        probabilities = np.array(self.probabilities, dtype=np.float64).reshape(-1)
        if bits.ndim != 2 or bits.shape[0] != probabilities.size:
            raise InvalidArgumentError(
                f"Outcome rows ({bits.shape}) do not match probabilities ({probabilities.size})"
            )
        if probabilities.size and (probabilities.min() <= 0.0 or probabilities.max() > 1.0 + 1e-12):
            raise InvalidArgumentError("Outcome probabilities must lie in (0, 1]")
        if abs(probabilities.sum() - 1.0) > NORM_TOLERANCE:
            raise InvalidStateError(f"Outcome probabilities sum to {probabilities.sum()}, not 1")
        bits.setflags(write=False)
        probabilities.setflags(write=False)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "probabilities", probabilities)

    def __len__(self) -> int:
        return self.probabilities.size

    @property
    def num_qubits(self) -> int:
        return self.bits.shape[1]

    @property
    def entries(self) -> Dict[str, float]:
        return {
            bits_to_string(row): float(p)
            for row, p in zip(self.bits, self.probabilities)
        }

    def probability_of(self, bits: BitsLike) -> float:
        target = parse_bits(bits, self.num_qubits)
        matches = np.all(self.bits == target, axis=1)
        return float(self.probabilities[matches].sum())

    def is_deterministic(self, atol: float = 1e-12) -> bool:
        return bool(len(self) and self.probabilities.max() >= 1.0 - atol)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "outcome": [bits_to_string(row) for row in self.bits],
            "probability": self.probabilities,
        })


def measurement_distribution(state: StateVector) -> OutcomeDistribution:
    """
    Probabilities |psi_s|^2 of every basis outcome s with nonzero amplitude.

    Raises:
        InvalidStateError: If the state is not normalized within 1e-9
    """
    norm = state.norm_squared
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise InvalidStateError(f"State is not normalized (squared norm {norm})")

    keep = np.flatnonzero(np.abs(state.amplitudes) >= PRUNE_AMPLITUDE)
    probabilities = np.abs(state.amplitudes[keep]) ** 2
    logger.debug(f"Measured {state.num_qubits}-qubit state: {keep.size} outcomes kept")
    return OutcomeDistribution(index_to_bits(keep, state.num_qubits), probabilities)
