"""
Command line front end.

Usage:
    python -m src.cli spectrum --config data/configs/paper.cfg --out output/paper
    python -m src.cli roots --power "0 mW, 1 mW, 5 mW, 15 mW"
    python -m src.cli features --equal-frequencies --format json
"""

import argparse
import sys
from typing import List, Optional

from .simulation import COMMANDS, RingCavitySimulation
from .utils.config import EXIT_CODES, settings
from .utils.errors import ConfigError, RingCavityError
from .utils.logging_config import get_logger, setup_logging
from .utils.run_config import RunConfig, load_run_config, parse_power_list
from .utils.units import UnitError

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='ringcavity',
        description="Steady-state probe response of a ring cavity with two movable mirrors",
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    help_text = {
        'spectrum': "probe quadrature and output field per pump power",
        'stokes': "Stokes (four-wave mixing) intensity per pump power",
        'roots': "roots of the response denominator across the pump powers",
        'features': "peaks, dips and widths compared with analytic formulas",
    }
    for command in COMMANDS:
        sub = subparsers.add_parser(command, help=help_text[command])
        sub.add_argument('--config', help="config file (defaults to the built-in reproduction parameters)")
        sub.add_argument('--out', help="output directory")
        sub.add_argument('--format', action='append', choices=['csv', 'json'],
                         help="output format, may be repeated")
        sub.add_argument('--power', help="comma separated pump powers, e.g. '0 mW, 2 mW, 15 mW'")
        sub.add_argument('--equal-frequencies', action='store_true',
                         help="set omega_1 = omega_2 = omega_m")
        sub.add_argument('--verbose', action='store_true', help="debug logging and tracebacks")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Load the config file and apply command line overrides."""
    config = load_run_config(args.config) if args.config else RunConfig()

    overrides = {}
    if args.out:
        overrides['output_dir'] = args.out
    if args.format:
        overrides['formats'] = args.format
    if args.power is not None:
        try:
            overrides['powers'] = parse_power_list(args.power)
        except UnitError as e:
            raise ConfigError(str(e), field='power') from e
    if args.equal_frequencies:
        overrides['equal_frequencies'] = True
    return config.with_overrides(**overrides) if overrides else config


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    setup_logging('DEBUG' if args.verbose else None)
    if settings.LOG_TO_FILE:
        settings.create_directories()

    try:
        config = resolve_config(args)
        simulation = RingCavitySimulation(config, config_source=args.config)
    except RingCavityError as e:
        logger.error(f"{args.command}: {e}", exc_info=args.verbose)
        return e.exit_code

    summary = simulation.run(args.command, verbose=args.verbose)
    if summary['success']:
        for path in summary['files']:
            print(path)
        return EXIT_CODES['success']
    return summary['exit_code']


if __name__ == '__main__':
    sys.exit(main())
