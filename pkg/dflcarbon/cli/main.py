"""Main CLI entry point for the simulator."""

import argparse
import logging
import sys
from typing import List, Optional

from dflcarbon import __version__
from dflcarbon.cli.cli import CLI, EXIT_RUNTIME, EXIT_USAGE, run_commands


class UsageError(Exception):
    """Raised by the parser instead of exiting."""


class SimulatorArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 64 and full help."""

    def error(self, message: str):
        self.print_help(sys.stderr)
        print(f"\nerror: {message}", file=sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = SimulatorArgumentParser(
        prog='dflcarbon',
        description='Energy and carbon simulator for decentralized federated learning',
        epilog='''
Examples:
  dflcarbon validate --scenario paper_10node_fc.json
  dflcarbon run --scenario paper_10node_fc.json --out runs/fc --format json
  dflcarbon report --ledger runs/fc/ledger.json --compare runs/ring/ledger.json
  dflcarbon sweep --scenario paper_10node_fc.json --vary medium=wired,optical,mobile

Exit codes: 0 success, 1 invalid configuration, 2 runtime error, 64 usage error
Error Codes: See docs/ERROR_CODES.md
        ''',
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument('--version', action='version', version=f'dflcarbon {__version__}')
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='Log per-round progress to stderr')

    subparsers = parser.add_subparsers(dest='command', parser_class=SimulatorArgumentParser,
                                       help='Available commands')

    run_parser = subparsers.add_parser(
        'run',
        help='Run a scenario and write its ledger',
        description='Simulate a scenario and write ledger.<format> plus summary.json'
    )
    run_parser.add_argument('--scenario', required=True, help='Scenario JSON file')
    run_parser.add_argument('--out', help='Output directory (default: current directory)')
    run_parser.add_argument('--format', choices=['csv', 'json'], default='csv',
                            help='Ledger format (default: csv)')

    validate_parser = subparsers.add_parser(
        'validate',
        help='Check a scenario file without running it',
    )
    validate_parser.add_argument('--scenario', required=True, help='Scenario JSON file')

    report_parser = subparsers.add_parser(
        'report',
        help='Print summary tables for ledgers',
        description='Summarize a ledger, optionally side by side with others'
    )
    report_parser.add_argument('--ledger', required=True, help='Ledger file (.csv or .json)')
    report_parser.add_argument('--compare', nargs='+', metavar='LEDGER',
                               help='Further ledgers to compare against')
    report_parser.add_argument('--force', action='store_true',
                               help='Compare runs even if K or round counts differ')

    sweep_parser = subparsers.add_parser(
        'sweep',
        help='Run a one-dimensional parameter sweep',
        description='Vary one parameter (medium, region, renewable_ratio, topology, nodes, '
                    'aggregation, selection, partition, rounds, local_epochs, seed)'
    )
    sweep_parser.add_argument('--scenario', required=True, help='Base scenario JSON file')
    sweep_parser.add_argument('--vary', required=True, metavar='PARAM=V1,V2,...',
                              help='Parameter and comma-separated values')
    sweep_parser.add_argument('--out', help='Directory for per-variant ledgers')
    sweep_parser.add_argument('--format', choices=['csv', 'json'], default='csv')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the dflcarbon CLI."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return EXIT_USAGE

    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, format='%(levelname)s %(name)s: %(message)s')

    cli = CLI()
    try:
        return run_commands(cli, args.command, args)
    except KeyboardInterrupt:
        print("\nInterrupted by user")
        return 130
    except Exception as e:
        cli.log_error(f"Unexpected error: {e}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
