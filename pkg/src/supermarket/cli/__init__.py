"""Command-line front end."""

from supermarket.cli.dist_spec import parse_dist_spec
from supermarket.cli.error_handlers import EXIT_CODES, cli_error_handler, exit_code_for
from supermarket.cli.main import build_parser, main


__all__ = [
    'EXIT_CODES',
    'build_parser',
    'cli_error_handler',
    'exit_code_for',
    'main',
    'parse_dist_spec',
]
