"""Command-line entry point ``supermarket-ph``."""

import argparse
import logging
import sys

from collections.abc import Callable, Sequence
from pathlib import Path

from supermarket.cli import commands
from supermarket.cli.error_handlers import EXIT_OK, cli_error_handler
from supermarket.cli.output import OutputFormat, render
from supermarket.repro.reference import REFERENCE_TABLES, RESPONSE_TIME_TABLE, RESPONSE_TIMES
from supermarket.types import ResultsDocument
from supermarket.utils.constants import (
    DEFAULT_MAX_LEVEL,
    DEFAULT_SIGNIFICANT_DIGITS,
    DEFAULT_SIM_HORIZON,
    DEFAULT_STEP_SCALE,
)


logger = logging.getLogger(__name__)

Command = Callable[[argparse.Namespace], ResultsDocument]


def _format_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_mutually_exclusive_group()
    group.add_argument(
        '--csv', dest='output_format', action='store_const', const=OutputFormat.CSV
    )
    group.add_argument(
        '--json', dest='output_format', action='store_const', const=OutputFormat.JSON
    )
    parent.set_defaults(output_format=OutputFormat.TEXT)
    return parent


def _model_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument('--dist', required=True, help='service law, e.g. exp:1, erlang:2,4, T1')
    parent.add_argument('--lambda', dest='lam', type=float, required=True, help='per-server arrival rate')
    parent.add_argument('--d', type=int, default=2, help='probe count (default 2)')
    return parent


def _sim_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument('--n', type=int, default=100, help='number of servers')
    parent.add_argument('--horizon', type=float, default=DEFAULT_SIM_HORIZON)
    parent.add_argument('--warmup', type=float, default=None, help='default: 10%% of the horizon')
    parent.add_argument('--seed', type=int, default=0)
    parent.add_argument('--reps', type=int, default=10, help='independent replications')
    parent.add_argument('--workers', type=int, default=1, help='worker processes')
    parent.add_argument('--max-level', type=int, default=DEFAULT_MAX_LEVEL)
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='supermarket-ph',
        description='Supermarket model with phase-type service: fixed points, '
        'mean-field dynamics, PH(2) fitting and simulation.',
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    verbosity.add_argument('--quiet', action='store_true', help='errors only')
    parser.add_argument(
        '--no-timestamp', action='store_true', help='omit the timestamp for byte-identical output'
    )
    parser.add_argument('--output', type=Path, default=None, help='write to a file instead of stdout')
    parser.add_argument('--digits', type=int, default=DEFAULT_SIGNIFICANT_DIGITS)

    fmt = _format_parent()
    model = _model_parent()
    sim = _sim_parent()
    sub = parser.add_subparsers(dest='command', required=True)

    fit = sub.add_parser('fit', parents=[fmt], help='fit a canonical PH(2) to three moments')
    fit.add_argument('--m1', type=float, required=True)
    fit.add_argument('--m2', type=float, required=True)
    fit.add_argument('--m3', type=float, required=True)
    fit.set_defaults(handler=commands.cmd_fit)

    fixed = sub.add_parser('fixed-point', parents=[fmt, model], help='closed-form fixed point')
    fixed.add_argument('--kmax', type=int, default=None)
    fixed.add_argument('--tail-eps', type=float, default=None)
    fixed.set_defaults(handler=commands.cmd_fixed_point)

    sojourn = sub.add_parser('sojourn', parents=[fmt, model], help='mean sojourn time')
    sojourn.set_defaults(handler=commands.cmd_sojourn)

    ode = sub.add_parser('ode', parents=[fmt, model], help='integrate the mean-field equations')
    ode.add_argument('--horizon', type=float, default=None)
    ode.add_argument('--kmax', type=int, default=None)
    ode.add_argument(
        '--init', default='empty', help='empty, fixed-point or a state JSON document'
    )
    ode.add_argument('--samples', type=int, default=200)
    ode.add_argument('--step-scale', type=float, default=DEFAULT_STEP_SCALE)
    ode.set_defaults(handler=commands.cmd_ode)

    simulate = sub.add_parser('simulate', parents=[fmt, model, sim], help='discrete-event simulation')
    simulate.set_defaults(handler=commands.cmd_simulate)

    compare = sub.add_parser(
        'compare', parents=[fmt, model, sim], help='closed form vs mean field vs simulation'
    )
    compare.add_argument('--no-sim', action='store_true', help='skip the simulation')
    compare.set_defaults(handler=commands.cmd_compare)

    repro = sub.add_parser('repro', parents=[fmt], help='recompute a published table')
    repro.add_argument(
        '--table', required=True, choices=[*sorted(REFERENCE_TABLES), RESPONSE_TIME_TABLE]
    )
    response = repro.add_argument_group(f'{RESPONSE_TIME_TABLE} options')
    response.add_argument(
        '--dist',
        action='append',
        choices=list(RESPONSE_TIMES),
        default=None,
        help='restrict to one service law (repeatable)',
    )
    response.add_argument('--horizon', type=float, default=DEFAULT_SIM_HORIZON)
    response.add_argument('--warmup', type=float, default=None, help='default: 10%% of the horizon')
    response.add_argument('--seed', type=int, default=0)
    response.add_argument('--reps', type=int, default=10, help='independent replications')
    response.add_argument('--workers', type=int, default=1, help='worker processes')
    repro.set_defaults(handler=commands.cmd_repro)
    return parser


def configure_logging(args: argparse.Namespace) -> None:
    level = logging.WARNING
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.ERROR
    logging.basicConfig(
        level=level, format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr, force=True
    )


@cli_error_handler
def _dispatch(args: argparse.Namespace) -> int:
    handler: Command = args.handler
    document = handler(args)
    text = render(document, args.output_format, args.digits)
    if args.output is not None:
        args.output.write_text(text)
        logger.debug('Wrote %s', args.output)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    """Parses `argv` and runs one subcommand; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args)
    return _dispatch(args)


if __name__ == '__main__':
    raise SystemExit(main())
