"""Contribution planning for players of unequal wealth.

A plan is acceptable when every player is at least as well off as with no
contribution at all: (a/n) * sum_j c_j >= c_k for every k.
"""

import dataclasses
import logging
import math
import warnings
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from modules.errors import InfeasiblePlanError, InvalidArgumentError
from modules.payoff.game import GameSpec, Interpretation

logger = logging.getLogger(__name__)

VOLUNTARY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ContributionPlan:
    """Voluntary-participation contribution profile.

    Attributes:
        endowments: y_k in original player order
        contributions: c_k in original player order
        cutoff: C*, or None when wealth is narrow and everyone gives everything
        m: Number of players contributing their whole endowment below the cutoff
            (n when nobody is capped)
        sorted_order: sorted_order[i] is the original index of the i-th poorest player
        narrow: True when a * mean(y) >= y_k for every k
    """
    endowments: Tuple[float, ...]
    contributions: Tuple[float, ...]
    cutoff: Optional[float]
    m: int
    sorted_order: Tuple[int, ...]
    narrow: bool

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class VoluntaryCheck:
    satisfied: bool
    margins: Tuple[float, ...]


def _validate_endowments(endowments: Sequence[float]) -> np.ndarray:
    y = np.asarray(endowments, dtype=np.float64).reshape(-1)
    if y.size < 2:
        raise InvalidArgumentError(f"At least 2 players are required, got {y.size}")
    if not np.isfinite(y).all() or (y <= 0).any():
        raise InvalidArgumentError(f"Endowments must be positive and finite, got {list(endowments)}")
    return y


def plan_heterogeneous(endowments: Sequence[float], a: float) -> ContributionPlan:
    """
    Efficient contribution plan that keeps participation voluntary.

    With narrow wealth everyone contributes everything. Otherwise the
    players sorted by wealth are split at a cutoff
    C* = a / (n - a n + a m) * sum_{j<=m} y_j: the m poorest give all they
    have, everyone richer gives exactly C*. m is the largest value below n
    for which C* is at least the m-th poorest endowment.

    Args:
        endowments: y_k per player
        a: Multiplier, 1 < a < n

    Returns:
        The contribution plan

    Raises:
        InvalidArgumentError: On non-positive endowments or a outside (1, n)
        InfeasiblePlanError: If no cutoff satisfies the constraint
    """
    y = _validate_endowments(endowments)
    n = y.size
    if not math.isfinite(a) or not 1.0 < a < n:
        raise InvalidArgumentError(f"Planning needs 1 < a < n (n={n}), got a={a}")

    order = np.argsort(y, kind="stable")
    ys = y[order]
    scale = float(ys[-1])

    if a * y.mean() >= ys[-1] - 1e-12 * scale:
        logger.info(f"Narrow wealth distribution (a*mean={a * y.mean():.6g}); full contribution")
        return ContributionPlan(
            endowments=tuple(y.tolist()),
            contributions=tuple(y.tolist()),
            cutoff=None,
            m=n,
            sorted_order=tuple(int(i) for i in order),
            narrow=True,
        )

    trail: List[Dict[str, Any]] = []
    cutoff = None
    chosen_m = None
    for m in range(n - 1, 0, -1):
        denominator = n - a * n + a * m
        if denominator <= 0:
            trail.append({"m": m, "denominator": denominator, "reason": "non-positive denominator"})
            continue
        candidate = a / denominator * float(ys[:m].sum())
        if candidate >= ys[m - 1] - 1e-12 * scale:
            cutoff, chosen_m = candidate, m
            break
        trail.append({
            "m": m,
            "denominator": denominator,
            "cutoff": candidate,
            "reason": f"cutoff below endowment {ys[m - 1]:.6g} of player ranked {m}",
        })

    if cutoff is None:
        raise InfeasiblePlanError(f"No feasible cutoff for endowments {y.tolist()} and a={a}", trail)

    at_cutoff = int(np.sum(np.abs(ys - cutoff) <= 1e-12 * scale))
    if at_cutoff > 1:
        warnings.warn(
            f"{at_cutoff} players hold exactly the cutoff C*={cutoff:.6g}; "
            f"resolved with m={chosen_m} from the downward scan"
        )

    sorted_contributions = np.minimum(ys, cutoff)
    contributions = np.empty(n)
    contributions[order] = sorted_contributions

    plan = ContributionPlan(
        endowments=tuple(y.tolist()),
        contributions=tuple(contributions.tolist()),
        cutoff=float(cutoff),
        m=chosen_m,
        sorted_order=tuple(int(i) for i in order),
        narrow=False,
    )

    margins = voluntary_margins(contributions, a)
    if margins.min() < -VOLUNTARY_TOLERANCE:
        trail.append({"m": chosen_m, "cutoff": cutoff, "reason": "voluntary constraint violated"})
        raise InfeasiblePlanError(f"Plan with cutoff {cutoff:.6g} violates voluntary participation", trail)

    logger.info(f"Heterogeneous plan: C*={cutoff:.6g}, m={chosen_m}, contributions={plan.contributions}")
    return plan


def voluntary_margins(contributions: Sequence[float], a: float) -> np.ndarray:
    """(a/n) * sum_j c_j - c_k for every k."""
    c = np.asarray(contributions, dtype=np.float64)
    return (a / c.size) * c.sum() - c


def check_voluntary(
    plan: Union[ContributionPlan, Sequence[float]],
    spec: GameSpec,
) -> VoluntaryCheck:
    """
    Check the voluntary participation constraint for a plan.

    Args:
        plan: A ContributionPlan or the bare contributions c_k
        spec: Game whose n and a apply

    Returns:
        Whether every margin is >= 0 (within 1e-9), and the margins
    """
    contributions = plan.contributions if isinstance(plan, ContributionPlan) else plan
    contributions = np.asarray(contributions, dtype=np.float64).reshape(-1)
    if contributions.size != spec.n:
        raise InvalidArgumentError(
            f"Plan has {contributions.size} contributions but the game has {spec.n} players"
        )
    margins = voluntary_margins(contributions, spec.a)
    return VoluntaryCheck(
        satisfied=bool(margins.min() >= -VOLUNTARY_TOLERANCE),
        margins=tuple(margins.tolist()),
    )


def one_rich_player_contribution(n: int, a: float, y: float, alpha: float) -> float:
    """
    Contribution of the single rich player (wealth alpha*y) among n-1 players of wealth y.

    The rich player gives everything up to a*y*(n-1)/(n-a) and exactly that
    amount beyond it.
    """
    if not 1.0 < a < n:
        raise InvalidArgumentError(f"Needs 1 < a < n (n={n}), got a={a}")
    return min(alpha * y, a * y * (n - 1) / (n - a))


def capped_spec(spec: GameSpec, plan: ContributionPlan) -> GameSpec:
    """
    Game in which a player whose bits say "contribute" gives its planned amount.

    The quantum game is then played unchanged with the all-or-none rule.
    """
    if len(plan.contributions) != spec.n:
        raise InvalidArgumentError("Plan and game disagree on the number of players")
    return dataclasses.replace(
        spec,
        endowments=plan.endowments,
        interpretation=Interpretation.ALL_OR_NONE,
        contribution_caps=plan.contributions,
    )
