"""Command-line interface for qpgsim."""

import logging
import sys

import click

from app import __version__
from app.core.orchestrator import EXIT_VALIDATION_ERROR, Orchestrator
from app.core.run_config import FORMATS, RunConfig
from app.core.run_ledger import LEDGER_ENV
from modules.engine.simulator import THREADS_ENV

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def parse_caps(ctx, param, value):
    """Parse 'amplitudes,work' into two integers."""
    if value is None:
        return None
    try:
        amplitudes, work = (int(part) for part in value.split(','))
    except ValueError:
        raise click.BadParameter("expected two integers as AMPLITUDES,WORK")
    if amplitudes < 2 or work < 1:
        raise click.BadParameter("caps must be positive")
    return amplitudes, work


def common_options(func):
    """Options shared by every subcommand."""
    options = [
        click.option('--config', '-c', 'config_path', default='-', show_default=True,
                     help='JSON config file path, or - for standard input'),
        click.option('--format', '-f', 'output_format', type=click.Choice(FORMATS),
                     help='Report format (overrides the config)'),
        click.option('--seed', type=click.IntRange(min=0), help='Run seed'),
        click.option('--samples', type=click.IntRange(min=2), help='Monte Carlo samples (switches to sampling)'),
        click.option('--threads', type=click.IntRange(min=1), envvar=THREADS_ENV, help='Worker threads'),
        click.option('--caps', callback=parse_caps, help='Engine limits as AMPLITUDES,WORK'),
        click.option('--ledger', type=click.Path(dir_okay=False), envvar=LEDGER_ENV,
                     help='Append run events to this sqlite ledger'),
        click.option('--verbose', '-v', is_flag=True, help='Log progress to stderr'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def execute(subcommand, config_path, output_format, seed, samples, threads, caps, ledger, verbose):
    """Load the config, run one subcommand and write its report once."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
    ctx = click.get_current_context()

    try:
        stdin_text = click.get_text_stream('stdin').read() if config_path == '-' else None
        config = RunConfig.load(config_path, stdin_text=stdin_text).with_overrides(
            format=output_format, seed=seed, samples=samples, threads=threads, caps=caps,
        )
    except (ValueError, TypeError) as e:
        click.echo(f"Error: {e}", err=True)
        ctx.exit(EXIT_VALIDATION_ERROR)

    orchestrator = Orchestrator(ledger_path=ledger)
    report = orchestrator.run(subcommand, config)
    if not report.ok:
        click.echo(f"Error: {report.error}", err=True)
        ctx.exit(report.exit_code)

    click.echo(orchestrator.render(report, config), nl=False)


@click.group()
@click.version_option(version=__version__, prog_name='qpgsim')
def cli():
    """Quantum public goods game simulator."""
    pass


@cli.command(name="payoff-table")
@common_options
def payoff_table(**options):
    """Classical payoffs of all 2^n contribution outcomes."""
    execute("payoff-table", **options)


@cli.command(name="simulate")
@common_options
def simulate(**options):
    """Expected payoffs of the configured strategy profile."""
    execute("simulate", **options)


@cli.command(name="equilibrium")
@common_options
def equilibrium(**options):
    """Closed-form payoff and deviation search against the canonical mixture."""
    execute("equilibrium", **options)


@cli.command(name="plan")
@common_options
def plan(**options):
    """Voluntary contribution plan for heterogeneous endowments."""
    execute("plan", **options)


@cli.command(name="cost")
@common_options
def cost(**options):
    """Expected entanglement distribution trials per scheme."""
    execute("cost", **options)


def main():
    cli(prog_name='qpgsim')


if __name__ == '__main__':
    main()
