"""Run configuration: one JSON document per CLI invocation."""

import dataclasses
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from modules.engine import (
    DEFAULT_MAX_AMPLITUDES,
    DEFAULT_MAX_WORK,
    EngineLimits,
    ExactEnumeration,
    ExecutionPath,
    MonteCarlo,
)
from modules.equilibrium import DEFAULT_MAX_GRID_POINTS, SearchConfig
from modules.errors import InvalidArgumentError
from modules.layout import QubitLayout
from modules.payoff import GameSpec
from modules.qcore.operators import I_SIGMA_X, IDENTITY, SingleQubitOp, build_operator_in_pi_units
from modules.strategy import (
    U_ONE,
    MixedStrategy,
    PureStrategy,
    classical_profile,
    degenerate,
    paper_mixture,
    pure_profile,
)

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")
STRATEGY_KINDS = ("paper_mixture", "classical", "operators", "mixed")

# Angles (in units of pi) whose operators are built from exact matrices.
_EXACT_OPS = {
    (0.0, 0.0, 0.0): IDENTITY,
    (0.0, 0.5, 0.0): U_ONE,
    (1.0, 0.0, 0.5): I_SIGMA_X,
}


def _default_caps() -> Dict[str, int]:
    return {"amplitudes": DEFAULT_MAX_AMPLITUDES, "work": DEFAULT_MAX_WORK}


def parse_operator(entry: Dict[str, Any]) -> SingleQubitOp:
    """{"theta", "phi", "alpha"} in units of pi; missing angles are 0."""
    if not isinstance(entry, dict):
        raise InvalidArgumentError(f"Operator must be an object with theta/phi/alpha, got {entry!r}")
    unknown = set(entry) - {"theta", "phi", "alpha"}
    if unknown:
        raise InvalidArgumentError(f"Unknown operator keys: {sorted(unknown)}")
    angles = tuple(float(entry.get(k, 0.0)) for k in ("theta", "phi", "alpha"))
    exact = _EXACT_OPS.get(angles)
    return exact if exact is not None else build_operator_in_pi_units(*angles)


def _parse_ops(entries: Sequence[Dict[str, Any]]) -> Tuple[SingleQubitOp, ...]:
    return tuple(parse_operator(e) for e in entries)


@dataclass
class RunConfig:
    """Parsed run configuration with its defaults.

    Strategy documents:
        {"kind": "paper_mixture"}
        {"kind": "classical", "bits": [0, 1, ...]}
        {"kind": "operators", "players": [[op, ...], ...]}
        {"kind": "mixed", "players": [{"support": [[op, ...], ...], "probabilities": [...]}, ...]}
    Method documents:
        {"kind": "exact"}
        {"kind": "mc", "samples": N, "seed": S}
    """
    n: int
    a: float
    endowments: Optional[List[float]] = None
    scheme: str = "full"
    interpretation: str = "direct"
    contribution_caps: Optional[List[float]] = None
    strategy: Dict[str, Any] = field(default_factory=lambda: {"kind": "paper_mixture"})
    method: Dict[str, Any] = field(default_factory=lambda: {"kind": "exact"})
    format: str = "json"
    caps: Dict[str, int] = field(default_factory=_default_caps)
    seed: int = 0
    threads: int = 1
    player: int = 0
    grid: int = 9
    random_samples: int = 200
    max_grid_points: Optional[int] = DEFAULT_MAX_GRID_POINTS
    pure_scan: bool = False
    beta: float = 1.0
    path: str = "auto"
    ring_order: Optional[List[int]] = None

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise InvalidArgumentError(f"n must be an integer, got {self.n!r}")
        self.a = float(self.a)
        if self.format not in FORMATS:
            raise InvalidArgumentError(f"format must be one of {FORMATS}, got '{self.format}'")
        if self.strategy.get("kind") not in STRATEGY_KINDS:
            raise InvalidArgumentError(f"strategy kind must be one of {STRATEGY_KINDS}, got {self.strategy!r}")
        if self.method.get("kind") not in ("exact", "mc"):
            raise InvalidArgumentError(f"method kind must be 'exact' or 'mc', got {self.method!r}")
        if set(self.caps) - {"amplitudes", "work"}:
            raise InvalidArgumentError(f"caps accepts 'amplitudes' and 'work', got {sorted(self.caps)}")
        self.caps = {**_default_caps(), **{k: int(v) for k, v in self.caps.items()}}
        if self.threads < 1:
            raise InvalidArgumentError(f"threads must be at least 1, got {self.threads}")
        ExecutionPath(self.path)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        if not isinstance(data, dict):
            raise InvalidArgumentError("Config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidArgumentError(f"Unknown config keys: {sorted(unknown)}")
        missing = {"n", "a"} - set(data)
        if missing:
            raise InvalidArgumentError(f"Config is missing required keys: {sorted(missing)}")
        return cls(**data)

    @classmethod
    def load(cls, source: Union[str, Path], stdin_text: Optional[str] = None) -> "RunConfig":
        """Read a config file, or standard input when source is '-'.

        Raises:
            InvalidArgumentError: On malformed JSON
        """
        try:
            if str(source) == "-":
                data = json.loads(stdin_text or "")
            else:
                with open(source, "r", encoding="utf-8") as f:
                    data = json.load(f)
        except json.JSONDecodeError as e:
            raise InvalidArgumentError(f"Config is not valid JSON: {e}")
        except OSError as e:
            raise InvalidArgumentError(f"Cannot read config '{source}': {e}")
        return cls.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    def with_overrides(
        self,
        format: Optional[str] = None,
        seed: Optional[int] = None,
        samples: Optional[int] = None,
        threads: Optional[int] = None,
        caps: Optional[Tuple[int, int]] = None,
    ) -> "RunConfig":
        """Apply command-line flags on top of the document."""
        changes: Dict[str, Any] = {}
        method = dict(self.method)
        if format is not None:
            changes["format"] = format
        if seed is not None:
            changes["seed"] = seed
            if method["kind"] == "mc":
                method["seed"] = seed
        if samples is not None:
            method = {"kind": "mc", "samples": samples, "seed": changes.get("seed", method.get("seed", self.seed))}
        changes["method"] = method
        if threads is not None:
            changes["threads"] = threads
        if caps is not None:
            changes["caps"] = {"amplitudes": int(caps[0]), "work": int(caps[1])}
        return dataclasses.replace(self, **changes)

    def game_spec(self) -> GameSpec:
        return GameSpec(
            n=self.n,
            a=self.a,
            endowments=None if self.endowments is None else tuple(self.endowments),
            interpretation=self.interpretation,
            scheme=self.scheme,
            contribution_caps=None if self.contribution_caps is None else tuple(self.contribution_caps),
        )

    def layout(self, spec: Optional[GameSpec] = None) -> QubitLayout:
        return (spec or self.game_spec()).layout(ring_order=self.ring_order)

    def engine_limits(self) -> EngineLimits:
        return EngineLimits(max_amplitudes=self.caps["amplitudes"], max_work=self.caps["work"])

    def payoff_method(self) -> Union[ExactEnumeration, MonteCarlo]:
        if self.method["kind"] == "exact":
            return ExactEnumeration()
        if "samples" not in self.method:
            raise InvalidArgumentError("Monte Carlo method needs 'samples'")
        return MonteCarlo(samples=int(self.method["samples"]), seed=int(self.method.get("seed", self.seed)))

    def search_config(self) -> SearchConfig:
        return SearchConfig(
            grid=self.grid,
            random_samples=self.random_samples,
            seed=self.seed,
            max_grid_points=self.max_grid_points,
        )

    @property
    def is_pure_strategy(self) -> bool:
        return self.strategy["kind"] in ("classical", "operators")

    def build_profile(self, layout: QubitLayout) -> Tuple[MixedStrategy, ...]:
        """Strategy document turned into one MixedStrategy per player."""
        kind = self.strategy["kind"]
        if kind == "paper_mixture":
            return paper_mixture(layout)
        if kind == "classical":
            return tuple(degenerate(p) for p in classical_profile(self.strategy.get("bits", []), layout))
        players = self.strategy.get("players", [])
        if kind == "operators":
            return tuple(degenerate(p) for p in pure_profile([_parse_ops(ops) for ops in players], layout))
        mixed = []
        for entry in players:
            support = tuple(PureStrategy(_parse_ops(ops)) for ops in entry.get("support", []))
            mixed.append(MixedStrategy(support, tuple(entry.get("probabilities", []))))
        return tuple(mixed)
