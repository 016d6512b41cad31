"""CLI class for the dflcarbon simulator."""

import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from dflcarbon import __version__
from dflcarbon.config import apply_override, load_scenario, parse_vary
from dflcarbon.core.exceptions import ConfigError, DflCarbonError
from dflcarbon.engine import run_scenario
from dflcarbon.error import DiagnosticReporter
from dflcarbon.reporting import (
    LedgerFormat,
    RunLedger,
    check_comparable,
    export_ledger,
    format_summary_table,
    load_ledger,
    summarize,
    summary_to_dict,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_USAGE = 64


class Colors:
    """ANSI color codes for terminal output."""
    RESET = '\033[0m'
    BOLD = '\033[1m'
    DIM = '\033[2m'

    RED = '\033[31m'
    YELLOW = '\033[33m'
    WHITE = '\033[37m'

    BRIGHT_RED = '\033[91m'
    BRIGHT_GREEN = '\033[92m'
    BRIGHT_YELLOW = '\033[93m'
    BRIGHT_CYAN = '\033[96m'
    BRIGHT_WHITE = '\033[97m'


def exit_code_for(error: DflCarbonError) -> int:
    """1 for configuration problems, 2 for everything that fails at run time."""
    return EXIT_CONFIG if isinstance(error, ConfigError) else EXIT_RUNTIME


class CLI:
    """Command-line interface for the simulator."""

    def __init__(self):
        self.use_color = sys.stdout.isatty()  # Only use colors in terminal

    def print_banner(self):
        """Print the CLI banner."""
        if not self.use_color:
            print(f"dflcarbon v{__version__} | decentralized FL energy & carbon simulator\n")
            return
        c = Colors
        print(f"{c.BRIGHT_CYAN}{c.BOLD}dflcarbon{c.RESET} {c.BRIGHT_GREEN}v{__version__}{c.RESET} "
              f"{c.DIM}| decentralized FL energy & carbon simulator{c.RESET}\n")

    def log_success(self, message: str):
        """Print a success message with styling."""
        if self.use_color:
            print(f"{Colors.BRIGHT_GREEN}✓{Colors.RESET} {Colors.BRIGHT_WHITE}{message}{Colors.RESET}")
        else:
            print(f"✓ {message}")

    def log_info(self, message: str):
        """Print an info message with styling."""
        if self.use_color:
            print(f"{Colors.BRIGHT_CYAN}•{Colors.RESET} {Colors.WHITE}{message}{Colors.RESET}")
        else:
            print(f"• {message}")

    def log_error(self, message: str):
        """Print an error message with styling."""
        if self.use_color:
            print(f"{Colors.BRIGHT_RED}✗{Colors.RESET} {Colors.RED}{message}{Colors.RESET}",
                  file=sys.stderr)
        else:
            print(f"✗ {message}", file=sys.stderr)

    def log_warning(self, message: str):
        """Print a warning message with styling."""
        if self.use_color:
            print(f"{Colors.BRIGHT_YELLOW}⚠{Colors.RESET} {Colors.YELLOW}{message}{Colors.RESET}")
        else:
            print(f"⚠ {message}")

    def _report_error(self, error: DflCarbonError) -> int:
        code = f"[{error.error_code}] " if error.error_code else ""
        self.log_error(f"{code}{error}")
        return exit_code_for(error)

    # ----------------------------------------------------------------------
    # Commands
    # ----------------------------------------------------------------------

    def validate(self, scenario_path: str) -> int:
        """Load and validate a scenario without running it."""
        try:
            config = load_scenario(scenario_path)
        except DflCarbonError as e:
            return self._report_error(e)
        self.log_success(f"{scenario_path} is valid: K={config.k}, topology={config.topology}, "
                         f"aggregation={config.aggregation}, rounds={config.rounds}")
        return EXIT_OK

    def run(self, scenario_path: str, out_dir: Optional[str] = None,
            fmt: str = "csv", show_banner: bool = True) -> int:
        """Run a scenario and write its ledger and summary to `out_dir`."""
        if show_banner:
            self.print_banner()
        try:
            config = load_scenario(scenario_path)
            self.log_info(f"Running {config.name}: K={config.k}, {config.rounds} round(s), "
                          f"{config.aggregation}, selection={config.selection.value}")
            diagnostics = DiagnosticReporter()
            result = run_scenario(config, diagnostics)
            ledger = RunLedger.from_result(result)

            out = Path(out_dir) if out_dir else Path(".")
            out.mkdir(parents=True, exist_ok=True)
            ledger_path = out / f"ledger.{LedgerFormat(fmt).value}"
            export_ledger(ledger, fmt, ledger_path)
            summary = summarize(ledger)
            (out / "summary.json").write_text(
                json.dumps(summary_to_dict(summary), indent=2) + "\n", encoding="utf-8")
        except DflCarbonError as e:
            return self._report_error(e)
        except OSError as e:
            self.log_error(f"Cannot write results: {e}")
            return EXIT_RUNTIME

        if diagnostics.has_warnings():
            self.log_warning(f"{diagnostics.warning_count()} warning(s) recorded; "
                             f"'dflcarbon report --ledger {ledger_path}' lists them")
        if result.stopped_early:
            self.log_info(f"Early stopping after round {result.rounds_executed}")
        print(format_summary_table([summary]))
        self.log_success(f"Ledger written to {ledger_path} (fingerprint {ledger.fingerprint})")
        return EXIT_OK

    def report(self, ledger_path: str, compare: Sequence[str] = (), force: bool = False) -> int:
        """Print summary tables for one or more ledgers."""
        try:
            paths = [ledger_path, *compare]
            summaries = []
            notes = []
            for path in paths:
                ledger = load_ledger(path)
                summaries.append(summarize(ledger, label=ledger.metadata.get("name", Path(path).stem)))
                notes.append((summaries[-1].label, ledger.diagnostics()))
            check_comparable(summaries, force)
        except DflCarbonError as e:
            return self._report_error(e)
        print(format_summary_table(summaries))
        for summary in summaries:
            if summary.fingerprint:
                self.log_info(f"{summary.label}: {summary.fingerprint[:16]}")
        for label, diagnostics in notes:
            if diagnostics.get_all():
                print(f"\nDiagnostics for {label}:")
                print(diagnostics.format_all())
        return EXIT_OK

    def sweep(self, scenario_path: str, vary: str, out_dir: Optional[str] = None,
              fmt: str = "csv") -> int:
        """Run one scenario per value of a single parameter and compare them."""
        self.print_banner()
        try:
            base = load_scenario(scenario_path)
            param, values = parse_vary(vary)
            variants = [(f"{param}={value}", apply_override(base, param, value))
                        for value in values]
            summaries = []
            for label, config in variants:
                self.log_info(f"Running {label}")
                ledger = RunLedger.from_result(run_scenario(config))
                if out_dir:
                    target = Path(out_dir) / label.replace("=", "_").replace(":", "_")
                    target.mkdir(parents=True, exist_ok=True)
                    export_ledger(ledger, fmt, target / f"ledger.{LedgerFormat(fmt).value}")
                summaries.append(summarize(ledger, label=label))
        except DflCarbonError as e:
            return self._report_error(e)
        except OSError as e:
            self.log_error(f"Cannot write results: {e}")
            return EXIT_RUNTIME
        print(format_summary_table(summaries))
        self.log_success(f"Swept {param} over {len(summaries)} value(s)")
        return EXIT_OK


def run_commands(cli: CLI, command: str, args) -> int:
    """Dispatch a parsed subcommand."""
    if command == "validate":
        return cli.validate(args.scenario)
    if command == "run":
        return cli.run(args.scenario, args.out, args.format)
    if command == "report":
        return cli.report(args.ledger, args.compare or [], args.force)
    if command == "sweep":
        return cli.sweep(args.scenario, args.vary, args.out, args.format)
    raise ValueError(f"Unknown command {command}")
