"""Core orchestrator for dispatching simulation runs."""

import json
import logging
import traceback
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple

import pandas as pd

from app import __version__
from app.core.run_config import RunConfig
from app.core.run_ledger import ACTION_RUN_END, ACTION_RUN_START, log_run_event
from modules.cost import CostQuery, compare_schemes, expected_trials
from modules.engine import expected_payoffs, run_pure
from modules.equilibrium import (
    best_response,
    closed_form_payoff,
    is_covered,
    pure_equilibrium_search,
    verify_deviation_independence,
)
from modules.errors import CapacityError
from modules.payoff import (
    check_voluntary,
    classical_payoff_table,
    classify_classical,
    plan_heterogeneous,
)

TOOL_NAME = "qpgsim"

EXIT_OK = 0
EXIT_INTERNAL_ERROR = 1
EXIT_VALIDATION_ERROR = 2
EXIT_CAPACITY_ERROR = 3


@dataclass
class RunReport:
    """Outcome of one subcommand run."""
    subcommand: str
    exit_code: int
    result: Optional[Dict[str, Any]] = None
    table: Optional[pd.DataFrame] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.exit_code == EXIT_OK


class Orchestrator:
    """Validates a run configuration and dispatches it to the simulation modules."""

    def __init__(self, ledger_path=None):
        self.ledger_path = ledger_path
        self.logger = logging.getLogger(__name__)
        self.handlers: Dict[str, Callable[[RunConfig], Tuple[Dict[str, Any], pd.DataFrame]]] = {
            "payoff-table": self._payoff_table,
            "simulate": self._simulate,
            "equilibrium": self._equilibrium,
            "plan": self._plan,
            "cost": self._cost,
        }

    @property
    def subcommands(self) -> Tuple[str, ...]:
        return tuple(self.handlers)

    def run(self, subcommand: str, config: RunConfig) -> RunReport:
        """
        Execute one subcommand.

        Args:
            subcommand: One of `subcommands`
            config: Run configuration with command-line overrides applied

        Returns:
            RunReport with exit code 0 on success, 2 on validation errors,
            3 on capacity errors
        """
        log_run_event(
            self.ledger_path, subcommand, ACTION_RUN_START, "INFO",
            details={"config": config.to_dict(), "seed": config.seed},
        )

        handler = self.handlers.get(subcommand)
        try:
            if handler is None:
                raise ValueError(f"Unknown subcommand '{subcommand}'")
            self.logger.info(f"Executing {subcommand} (n={config.n}, a={config.a}, scheme={config.scheme})")
            result, table = handler(config)
            report = RunReport(subcommand, EXIT_OK, result=result, table=table)
        except CapacityError as e:
            self.logger.info(f"Capacity exceeded in {subcommand}: {e}")
            report = RunReport(subcommand, EXIT_CAPACITY_ERROR, error=str(e))
        except (ValueError, LookupError) as e:
            self.logger.info(f"Invalid configuration for {subcommand}: {e}")
            report = RunReport(subcommand, EXIT_VALIDATION_ERROR, error=str(e))
        except Exception as e:
            self.logger.error(f"Error in {subcommand}: {e}\n{traceback.format_exc()}")
            report = RunReport(subcommand, EXIT_INTERNAL_ERROR, error=str(e))

        log_run_event(
            self.ledger_path, subcommand, ACTION_RUN_END,
            "SUCCESS" if report.ok else "FAILURE",
            details={"exit_code": report.exit_code, "seed": config.seed, "error": report.error},
        )
        return report

    def render(self, report: RunReport, config: RunConfig) -> str:
        """Serialize a successful report in the configured format."""
        if config.format == "csv":
            return report.table.to_csv(index=False)
        document = {
            "tool": TOOL_NAME,
            "version": __version__,
            "subcommand": report.subcommand,
            "seed": config.seed,
            "config": config.to_dict(),
            "result": report.result,
        }
        return json.dumps(document, sort_keys=True, indent=2) + "\n"

    def _payoff_table(self, config: RunConfig):
        table = classical_payoff_table(config.n, config.a, config.endowments)
        result = {
            "regime": classify_classical(config.a, config.n).value,
            "rows": table.to_dict(orient="records"),
        }
        return result, table

    def _simulate(self, config: RunConfig):
        spec = config.game_spec()
        layout = config.layout(spec)
        limits = config.engine_limits()
        profile = config.build_profile(layout)

        report = expected_payoffs(
            profile, spec, layout,
            method=config.payoff_method(),
            path=config.path,
            limits=limits,
            workers=config.threads,
        )
        result: Dict[str, Any] = {"payoffs": report.to_dict()}
        if config.is_pure_strategy:
            pure = [mixed.support[0] for mixed in profile]
            distribution = run_pure(pure, spec, layout, path=config.path, limits=limits)
            result["outcomes"] = distribution.entries

        table = pd.DataFrame({
            "player": range(spec.n),
            "expected_payoff": report.expected,
        })
        if report.std_error is not None:
            table["std_error"] = report.std_error
        return result, table

    def _equilibrium(self, config: RunConfig):
        spec = config.game_spec()
        layout = config.layout(spec)
        covered = is_covered(spec.scheme, spec.interpretation)
        closed_form = closed_form_payoff(spec.scheme, spec.interpretation, spec.n, spec.a) if covered else None
        if not covered:
            self.logger.warning(f"No closed form for {spec.scheme.value}/{spec.interpretation.value}")

        search = config.search_config()
        limits = config.engine_limits()
        if config.strategy["kind"] == "paper_mixture":
            deviation = verify_deviation_independence(
                spec, layout, config.player, search=search, limits=limits, workers=config.threads,
            )
        else:
            # closed forms describe the canonical mixture; other profiles get a best-response search
            deviation = best_response(
                spec, layout, config.build_profile(layout), config.player,
                search=search, limits=limits, workers=config.threads,
            )
        result = {
            "covered": covered,
            "closed_form": closed_form,
            "strategy": config.strategy["kind"],
            "deviation": deviation.to_dict(),
            "gap": max(0.0, deviation.max_gain),
        }
        if config.pure_scan:
            scan = pure_equilibrium_search(spec, layout, search=search, limits=limits, workers=config.threads)
            result["pure_scan"] = scan.to_dict()
        table = pd.DataFrame([{
            "player": deviation.player,
            "closed_form": closed_form,
            "baseline": deviation.baseline,
            "max_gain": deviation.max_gain,
            "max_abs_deviation": deviation.max_abs_deviation,
            "candidates": deviation.candidates,
        }])
        return result, table

    def _plan(self, config: RunConfig):
        spec = config.game_spec()
        plan = plan_heterogeneous(spec.endowments, spec.a)
        check = check_voluntary(plan, spec)
        result = {
            "plan": plan.to_dict(),
            "voluntary": {"satisfied": check.satisfied, "margins": list(check.margins)},
        }
        table = pd.DataFrame({
            "player": range(spec.n),
            "endowment": plan.endowments,
            "contribution": plan.contributions,
            "margin": check.margins,
        })
        return result, table

    def _cost(self, config: RunConfig):
        query = CostQuery(config.scheme, config.n, config.beta)
        table = compare_schemes(config.n, config.beta)
        result = {
            "scheme": query.scheme.value,
            "expected_trials": expected_trials(query),
            "schemes": table.to_dict(orient="records"),
        }
        return result, table
