"""
Command-line application
Builds the argument parser from the command groups and maps outcomes to exit codes
"""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from config import config
from models.report import Report
from cli.commands import GROUPS
from cli.context import CommandContext, CommandResult, violation_report
from utils.exceptions import DocumentError, FanifoldMirrorError, FanValidationError
from utils.logger import get_logger, setup_logger

logger = get_logger(__name__)

PROG = "fanifold-mirror"
FORMATS = ("text", "json")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
GLOBAL_OPTIONS = ("--format", "--jobs", "--log-level")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _global_options() -> argparse.ArgumentParser:
    # SUPPRESS keeps a flag given before the group from being reset by the leaf parser
    options = argparse.ArgumentParser(add_help=False)
    options.add_argument(
        "--format", dest="output_format", choices=FORMATS, default=argparse.SUPPRESS,
        help="Output format (default from FANIFOLD_OUTPUT_FORMAT)",
    )
    options.add_argument(
        "--jobs", type=positive_int, default=argparse.SUPPRESS,
        help="Worker threads for independent checks",
    )
    options.add_argument(
        "--log-level", type=str.upper, choices=LOG_LEVELS, default=argparse.SUPPRESS,
        help="Logging level for this invocation",
    )
    return options


def build_parser() -> argparse.ArgumentParser:
    """Top-level parser with one sub-parser per command group"""
    options = _global_options()
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Fans, FLTZ skeleta, fanifolds and their toric mirrors",
        parents=[options],
    )
    groups = parser.add_subparsers(dest="group", metavar="<group>")
    groups.required = True
    for group in GROUPS:
        group.register(groups, [options])
    return parser


def command_echo(argv: Sequence[str]) -> str:
    """The invocation without global options, so output does not depend on them"""
    words: List[str] = []
    skip = False
    for token in argv:
        if skip:
            skip = False
            continue
        name = token.split("=", 1)[0]
        if name in GLOBAL_OPTIONS:
            skip = "=" not in token
            continue
        words.append(Path(token).name if token.endswith((".fan", ".fanifold")) else token)
    return " ".join(words)


def render(result: CommandResult, output_format: str) -> str:
    if output_format == "json":
        payload = json.dumps(result.report.to_dict(), indent=config.json_indent, sort_keys=True, ensure_ascii=False)
        return payload + "\n"
    text = result.text if result.text is not None else result.report.to_text()
    return text if text.endswith("\n") else text + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        0 on success, 1 when a check failed, 2 on parse or usage errors
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    log_level = getattr(args, "log_level", None)
    config.ensure_directories()
    setup_logger(
        log_level=log_level or config.log_level,
        console_level=log_level or config.console_log_level,
        log_file=config.get_log_file(),
        to_file=config.log_to_file,
    )

    ctx = CommandContext(
        command=command_echo(argv),
        output_format=getattr(args, "output_format", None) or config.output_format,
        jobs=getattr(args, "jobs", None) or config.jobs,
        max_rank=config.iso_search_max_rank,
        max_rays=config.iso_search_max_rays,
    )
    logger.debug(f"Running '{ctx.command}' with {ctx.jobs} job(s)")

    try:
        result = args.handler(args, ctx)
    except DocumentError as exc:
        logger.debug(f"'{ctx.command}' rejected its input: {exc}")
        sys.stderr.write(f"{PROG}: error: {exc}\n")
        return EXIT_USAGE
    except FanValidationError as exc:
        result = CommandResult(violation_report(ctx.command, exc.violations))
    except FanifoldMirrorError as exc:
        report = Report(command=ctx.command)
        report.add("input", False, type(exc).__name__, [str(exc)])
        result = CommandResult(report)

    sys.stdout.write(render(result, ctx.output_format))
    if result.exit_code != EXIT_OK:
        logger.warning(f"'{ctx.command}' failed: {', '.join(c.name for c in result.report.failing())}")
    return result.exit_code
