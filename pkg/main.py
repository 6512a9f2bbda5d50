"""
Channel Kappa - Main Application.

Command-line front end: reads channels, runs the analyses and prints
reports.
"""

import argparse
import sys
from pathlib import Path
from typing import Any, List, Optional, Sequence

import config

from src.analyzer import ChannelAnalyzer
from src.batch_runner import BatchAnalyzer, BatchResult
from src.builders import build_channel
from src.errors import (ChannelError, ChannelParseError, ConsistencyError, NumericError,
                        PreconditionError, ResourceError, ShapeError)
from src.linalg import Tolerance
from src.reproduce import format_table, run_suite
from src.spectrum_plot import save_spectrum_plot
from src.wire import dumps, dumps_channel, read_input, read_spec
from utils.list_builtins import list_builtins

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USER_ERROR = 2
EXIT_INTERNAL_ERROR = 3


def exit_code_for(error: BaseException) -> int:
    """
    Map an exception to the process exit code.

    :param error: Raised exception
    :return: 2 for user errors, 3 for numerical or consistency failures, 1 otherwise
    """
    if isinstance(error, (PreconditionError, ChannelParseError, ResourceError, ShapeError)):
        return EXIT_USER_ERROR
    if isinstance(error, (ConsistencyError, NumericError)):
        return EXIT_INTERNAL_ERROR
    return EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    """
    Argument parser with one subcommand per operation.

    :return: Parser
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=('json', 'table'), default=None,
                        help=f"output format (default {config.DEFAULT_FORMAT})")
    common.add_argument('--rank-eps', type=float, default=None, help="relative singular-value cutoff")
    common.add_argument('--eig-eps', type=float, default=None, help="eigenvalue comparison threshold")
    common.add_argument('--residual-eps', type=float, default=None, help="identity-check residual")
    common.add_argument('--seed', type=int, default=None, help="seed for randomized steps")
    common.add_argument('--debug', action='store_true', help="print diagnostics")

    parser = argparse.ArgumentParser(prog='channel-kappa',
                                     description="Multiplicative domains of unital quantum channels")
    sub = parser.add_subparsers(dest='command', required=True)

    analyze = sub.add_parser('analyze', parents=[common], help="full report")
    analyze.add_argument('inputs', nargs='+', help="wire JSON file or builtin:<name>")

    gen = sub.add_parser('gen', parents=[common], help="emit Kraus data for a channel spec")
    gen.add_argument('spec', help='JSON {"family": ..., "params": {...}}, a spec file or builtin:<name>')
    gen.add_argument('--out', default=None, help="write to this file instead of stdout")

    reproduce = sub.add_parser('reproduce', parents=[common], help="run the example suite")
    reproduce.add_argument('--only', default=None, help="run a single row")

    spectrum = sub.add_parser('spectrum', parents=[common], help="peripheral data only")
    spectrum.add_argument('inputs', nargs='+', help="wire JSON file or builtin:<name>")
    spectrum.add_argument('--plot', default=None, help="write a spectrum figure (single input)")

    qec = sub.add_parser('qec', parents=[common], help="code structures only")
    qec.add_argument('inputs', nargs='+', help="wire JSON file or builtin:<name>")

    sub.add_parser('list', help="builtin channels and reproduction rows")
    return parser


class ChannelKappaApp:
    """
    Main Channel Kappa application.

    Parses arguments, resolves tolerances and dispatches subcommands.
    """

    def __init__(self, argv: Optional[Sequence[str]] = None) -> None:
        """
        :param argv: Arguments without the program name (sys.argv[1:] when omitted)
        """
        self.args: argparse.Namespace = build_parser().parse_args(argv)
        if getattr(self.args, 'debug', False):
            config.DEBUG = True
        self.format: str = getattr(self.args, 'format', None) or config.DEFAULT_FORMAT

    def tolerance(self) -> Tolerance:
        """
        Tolerances from config (environment included), overridden by flags.

        :return: Tolerance
        """
        base = Tolerance.from_config()
        return Tolerance(
            rank_eps=self.args.rank_eps if self.args.rank_eps is not None else base.rank_eps,
            eig_eps=self.args.eig_eps if self.args.eig_eps is not None else base.eig_eps,
            residual_eps=self.args.residual_eps if self.args.residual_eps is not None else base.residual_eps,
        )

    def analyzer(self) -> ChannelAnalyzer:
        return ChannelAnalyzer(self.tolerance(), self.args.seed)

    def emit(self, data: Any, table: Optional[str] = None) -> None:
        if self.format == 'table' and table is not None:
            print(table)
        else:
            print(dumps(data))

    def _emit_batch(self, results: List[BatchResult]) -> int:
        payload = []
        tables = []
        code = EXIT_OK
        for result in results:
            if result.exception is not None:
                payload.append({'input': result.source, 'error': str(result.exception),
                                'error_type': type(result.exception).__name__})
                tables.append(f"❌ {result.source}: {result.exception}")
                code = max(code, exit_code_for(result.exception))
                continue
            report = result.report
            payload.append(report.to_dict())
            tables.append(report.table())
            if report.error is not None:
                code = max(code, EXIT_USER_ERROR)
        data = payload[0] if len(payload) == 1 else payload
        self.emit(data, "\n\n".join(tables))
        return code

    def _run_batch(self, mode: str) -> int:
        return self._emit_batch(BatchAnalyzer(self.analyzer(), mode).run(self.args.inputs))

    def cmd_analyze(self) -> int:
        return self._run_batch('analyze')

    def cmd_qec(self) -> int:
        return self._run_batch('codes')

    def cmd_spectrum(self) -> int:
        if self.args.plot:
            if len(self.args.inputs) != 1:
                raise PreconditionError("--plot needs exactly one input", residual_name='inputs')
            ch, _ = read_input(self.args.inputs[0], self.tolerance())
            save_spectrum_plot(ch, self.args.plot, self.tolerance())
        return self._run_batch('spectrum')

    def cmd_gen(self) -> int:
        ch = build_channel(read_spec(self.args.spec), self.tolerance())
        text = dumps_channel(ch)
        if self.args.out:
            Path(self.args.out).write_text(text + "\n", encoding='utf-8')
            if config.DEBUG:
                print(f"✅ Wrote {ch.n_kraus} Kraus operators to {self.args.out}")
        else:
            print(text)
        return EXIT_OK

    def cmd_reproduce(self) -> int:
        rows = run_suite(self.tolerance(), self.args.only)
        if (self.args.format or 'table') == 'json':
            print(dumps([r.to_dict() for r in rows]))
        else:
            print(format_table(rows))
        return EXIT_OK if all(r.passed for r in rows) else EXIT_FAILURE

    def cmd_list(self) -> int:
        list_builtins()
        return EXIT_OK

    def start(self) -> int:
        """
        Run the selected subcommand.

        :return: Exit code (0 success, 2 user error, 3 internal check failure, 1 other)
        """
        handler = getattr(self, f"cmd_{self.args.command}")
        try:
            return handler()
        except ChannelError as e:
            print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
            diagnostics = getattr(e, 'diagnostics', None)
            if diagnostics:
                print(f"   {diagnostics}", file=sys.stderr)
            return exit_code_for(e)
        except Exception as e:  # pylint: disable=broad-except
            print(f"\n❌ Critical error: {e}", file=sys.stderr)
            if config.DEBUG:
                import traceback  # pylint: disable=import-outside-toplevel
                traceback.print_exc()
            return EXIT_FAILURE


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Application entry point.

    :param argv: Arguments (sys.argv[1:] when omitted)
    :return: Exit code
    """
    app = ChannelKappaApp(argv)
    return app.start()


if __name__ == "__main__":
    sys.exit(main())
