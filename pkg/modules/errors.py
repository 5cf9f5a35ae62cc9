"""Exception hierarchy shared by the simulation modules."""

from typing import Any, Dict, List, Optional


class QpgError(Exception):
    """Base class for all qpgsim errors."""


class InvalidArgumentError(QpgError, ValueError):
    """An argument is outside the domain an operation accepts."""


class InvalidStateError(QpgError, ValueError):
    """A state vector violates its invariants (e.g. it is not normalized)."""


class UnsupportedConfigurationError(QpgError, ValueError):
    """The combination of options is well formed but not supported."""


class NoClosedFormError(QpgError, LookupError):
    """No closed-form payoff is known for the requested configuration."""


class InfeasiblePlanError(QpgError, ValueError):
    """No contribution plan satisfies the voluntary participation constraint.

    Attributes:
        trail: One diagnostic entry per candidate that was rejected.
    """

    def __init__(self, message: str, trail: Optional[List[Dict[str, Any]]] = None):
        super().__init__(message)
        self.trail = list(trail or [])


class CapacityError(QpgError, RuntimeError):
    """A computation would exceed a configured size limit.

    Attributes:
        limit: The configured limit.
        requested: The size the computation asked for.
    """

    def __init__(self, message: str, limit: int, requested: int):
        super().__init__(message)
        self.limit = limit
        self.requested = requested
