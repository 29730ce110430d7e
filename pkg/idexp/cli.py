"""
Command line front end.

    python -m idexp poly problem.json
    python -m idexp prepare --fixture delta-five-z
    cat problem.json | python -m idexp delta --degree-bound 32

Reports go to stdout as JSON with sorted keys. Exit status: 0 on success,
1 on input errors, 2 when a search budget runs out or the characteristic is
not supported.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional, TextIO

from . import config
from .errors import IdexpError, InputError
from .fixtures import fixture_data, fixture_names
from .logs import setup_logging
from .problemService import ProblemService, is_honest_failure

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_HONEST_FAILURE = 2

COMMANDS = sorted(ProblemService().commands) + ["fixtures"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="idexp", description="Invariants of pairs (J, b): orders, cones, polyhedra, delta.")
    parser.add_argument("command", choices=COMMANDS, help="operation to run")
    parser.add_argument("document", nargs="?", default=None,
                        help="problem document (JSON file); standard input when omitted")
    parser.add_argument("--fixture", default=None, help="run on a built-in fixture instead of a document")
    parser.add_argument("--degree-bound", type=int, default=None,
                        help=f"truncation degree for preparation and series (default {config.DEFAULT_DEGREE_BOUND})")
    parser.add_argument("--search-depth", type=int, default=None,
                        help=f"blow-up depth for probe-equiv (default {config.DEFAULT_SEARCH_DEPTH})")
    parser.add_argument("--svg", default=config.DEFAULT_SVG_PATH, help="output path of the plot command")
    parser.add_argument("--log-level", default=None, help=f"logging level (default {config.LOG_LEVEL})")
    return parser


def _read_document(args, stdin: TextIO):
    if args.fixture is not None:
        if args.document is not None:
            raise InputError("Give either a document or --fixture, not both")
        return fixture_data(args.fixture)
    try:
        if args.document is None:
            text = stdin.read()
        else:
            with open(args.document, encoding="utf-8") as handle:
                text = handle.read()
    except OSError as e:
        raise InputError(f"Cannot read document: {e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"Document is not valid JSON: {e}") from e


def _emit(report: dict, stdout: TextIO) -> None:
    stdout.write(json.dumps(report, sort_keys=True, indent=2))
    stdout.write("\n")


def main(argv: Optional[List[str]] = None, stdin: TextIO = None, stdout: TextIO = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    for flag in ("degree_bound", "search_depth"):
        value = getattr(args, flag)
        if value is not None and value < (1 if flag == "degree_bound" else 0):
            _emit({"success": False, "reason": InputError.reason,
                   "message": f"--{flag.replace('_', '-')} is out of range: {value}"}, stdout)
            return EXIT_INPUT

    if args.command == "fixtures":
        _emit({"success": True, "fixtures": fixture_names()}, stdout)
        return EXIT_OK

    try:
        document = _read_document(args, stdin)
    except IdexpError as e:
        _emit({"success": False, "command": args.command, "reason": e.reason, "message": e.message}, stdout)
        return EXIT_INPUT

    service = ProblemService(svg_path=args.svg)
    report = service.run(args.command, document, degree_bound=args.degree_bound, search_depth=args.search_depth)
    _emit(report, stdout)
    if report["success"]:
        return EXIT_OK
    if is_honest_failure(report):
        logger.warning("%s: %s", report["reason"], report["message"])
        return EXIT_HONEST_FAILURE
    logger.error("%s", report["message"])
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
