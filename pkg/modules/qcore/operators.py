"""Single-qubit operators available to the players."""

import math
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from modules.errors import InvalidArgumentError

TWO_PI = 2.0 * math.pi

# Slack on the theta range for values produced by float arithmetic on pi.
THETA_SLACK = 1e-12


@dataclass(frozen=True)
class SingleQubitOp:
    """A 2x2 unitary U(theta, phi, alpha).

    Equality and hashing use the three angles only; the matrix is derived
    from them once and stored read-only.
    """
    theta: float
    phi: float
    alpha: float
    matrix: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=np.complex128)
        if matrix.shape != (2, 2):
            raise InvalidArgumentError(f"Operator matrix must be 2x2, got {matrix.shape}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def adjoint(self) -> np.ndarray:
        return self.matrix.conj().T

    def unitarity_error(self) -> float:
        """Largest entrywise deviation of U^dagger U from the identity."""
        return float(np.max(np.abs(self.adjoint @ self.matrix - np.eye(2))))

    def to_dict(self, in_units_of_pi: bool = False) -> Dict[str, float]:
        scale = 1.0 / math.pi if in_units_of_pi else 1.0
        return {
            "theta": self.theta * scale,
            "phi": self.phi * scale,
            "alpha": self.alpha * scale,
        }


def operator_matrix(theta: float, phi: float, alpha: float) -> np.ndarray:
    """Matrix of U(theta, phi, alpha).

    The diagonal carries e^{+i phi} top-left so that U(0, pi/2, 0) is
    diag(i, -i), the defect-side operator of the canonical mixture.
    """
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return np.array(
        [
            [np.exp(1j * phi) * c, np.exp(1j * alpha) * s],
            [-np.exp(-1j * alpha) * s, np.exp(-1j * phi) * c],
        ],
        dtype=np.complex128,
    )


def build_operator(theta: float, phi: float, alpha: float) -> SingleQubitOp:
    """
    Build the single-qubit operator U(theta, phi, alpha).

    Args:
        theta: Rotation angle in radians, within [0, pi]
        phi: Phase angle in radians, reduced modulo 2*pi
        alpha: Phase angle in radians, reduced modulo 2*pi

    Returns:
        The operator with its matrix

    Raises:
        InvalidArgumentError: If a parameter is not finite or theta is
            outside [0, pi]
    """
    for name, value in (("theta", theta), ("phi", phi), ("alpha", alpha)):
        if not math.isfinite(value):
            raise InvalidArgumentError(f"Operator parameter {name} must be finite, got {value}")

    if theta < -THETA_SLACK or theta > math.pi + THETA_SLACK:
        raise InvalidArgumentError(f"theta must lie in [0, pi], got {theta}")
    theta = min(max(float(theta), 0.0), math.pi)
    phi = float(phi) % TWO_PI
    alpha = float(alpha) % TWO_PI

    return SingleQubitOp(theta, phi, alpha, operator_matrix(theta, phi, alpha))


def build_operator_in_pi_units(theta: float, phi: float, alpha: float) -> SingleQubitOp:
    """Same as build_operator with angles given as multiples of pi."""
    return build_operator(theta * math.pi, phi * math.pi, alpha * math.pi)


def exact_operator(theta: float, phi: float, alpha: float, matrix) -> SingleQubitOp:
    """Operator with a hand-written matrix for parameters whose trig values are exact.

    Raises:
        InvalidArgumentError: If the matrix disagrees with U(theta, phi, alpha)
    """
    op = SingleQubitOp(theta, phi, alpha, np.asarray(matrix, dtype=np.complex128))
    if not np.allclose(op.matrix, operator_matrix(theta, phi, alpha), atol=1e-15):
        raise InvalidArgumentError(f"Matrix does not match U({theta}, {phi}, {alpha})")
    return op


IDENTITY = exact_operator(0.0, 0.0, 0.0, [[1, 0], [0, 1]])

# Classical "flip": U(pi, 0, pi/2) = i * sigma_x.
I_SIGMA_X = exact_operator(math.pi, 0.0, math.pi / 2.0, [[0, 1j], [1j, 0]])
