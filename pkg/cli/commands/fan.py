"""
Fan commands: check, quotient, complete
"""

import argparse

from core.fans import completeness_test_directions, is_complete, quotient_fan, validate_fan
from models.report import Report
from services.fan_document import FanDocument, FanDocumentCodec
from cli.context import (
    CommandContext,
    CommandResult,
    load_fan_input,
    require_cone,
    violation_report,
)
from utils.logger import get_logger

logger = get_logger(__name__)


def register(groups, parents) -> None:
    parser = groups.add_parser("fan", help="Fan documents")
    commands = parser.add_subparsers(dest="command", metavar="<command>")
    commands.required = True

    check = commands.add_parser("check", parents=parents, help="Validate the fan axioms")
    check.add_argument("file", help="Fan document")
    check.set_defaults(handler=run_check)

    quotient = commands.add_parser("quotient", parents=parents, help="Emit the quotient fan by a cone")
    quotient.add_argument(
        "--cone",
        type=cone_indices,
        default=(),
        metavar="INDICES",
        help="Ray indices of the cone, comma separated (omit for the zero cone)",
    )
    quotient.add_argument("file", help="Fan document")
    quotient.set_defaults(handler=run_quotient)

    complete = commands.add_parser("complete", parents=parents, help="Decide whether the fan covers the whole space")
    complete.add_argument("file", help="Fan document")
    complete.set_defaults(handler=run_complete)


def cone_indices(text: str):
    """Parse "0,2" or "0 2" into ray indices"""
    try:
        return tuple(int(token) for token in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of ray indices: '{text}'")


def run_check(args, ctx: CommandContext) -> CommandResult:
    f = load_fan_input(args.file, validate=False)
    violations = validate_fan(f)
    body = {"fan": f.to_dict(), "cones": len(f.cones)}
    report = violation_report(ctx.command, violations, body)
    if violations:
        logger.warning(f"{args.file}: {len(violations)} fan violation(s)")
    return CommandResult(report)


def run_quotient(args, ctx: CommandContext) -> CommandResult:
    f = load_fan_input(args.file)
    sigma = require_cone(f, args.cone)
    qf = quotient_fan(f, sigma)
    name = f"{f.name}_{'_'.join(str(i) for i in sigma.ray_indices)}" if f.name and not sigma.is_zero else f.name
    document = FanDocument.from_fan(qf.g, name=name)

    report = Report(command=ctx.command)
    report.add("quotient", True, f"{f.name or 'fan'} / {sigma.label} has rank {qf.g.rank}")
    report.body = {
        "cone": sigma.label,
        "projection": qf.q.to_dict(),
        "cone_map": {tau.label: image.label for tau, image in sorted(qf.cone_map.items(), key=lambda kv: kv[0].sort_key)},
        "fan": document.model_dump(),
    }
    return CommandResult(report, text=FanDocumentCodec().emit(document))


def run_complete(args, ctx: CommandContext) -> CommandResult:
    f = load_fan_input(args.file)
    directions = completeness_test_directions(f)
    complete = is_complete(f)
    report = Report(command=ctx.command)
    report.add("complete", complete, f"{len(directions)} test directions")
    report.body = {"complete": complete, "directions": [list(d) for d in directions]}
    return CommandResult(report)
