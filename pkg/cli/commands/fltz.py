"""
FLTZ skeleton commands: strata, boundary, cover-check, pants
"""

from core.fltz import boundary_strata, check_cover, check_pants, fltz_strata
from models.report import Report
from cli.context import CommandContext, CommandResult, load_fan_input


def register(groups, parents) -> None:
    parser = groups.add_parser("fltz", help="FLTZ skeleton of a fan")
    commands = parser.add_subparsers(dest="command", metavar="<command>")
    commands.required = True

    for name, handler, help_text in (
        ("strata", run_strata, "List the pieces σ^⊥ × σ"),
        ("boundary", run_boundary, "List the strata at infinity"),
        ("cover-check", run_cover_check, "Check the open cover of the boundary at infinity"),
        ("pants", run_pants, "Check the pants decomposition"),
    ):
        command = commands.add_parser(name, parents=parents, help=help_text)
        command.add_argument("file", help="Fan document")
        command.set_defaults(handler=handler)


def run_strata(args, ctx: CommandContext) -> CommandResult:
    f = load_fan_input(args.file)
    strata = fltz_strata(f)
    report = Report(command=ctx.command)
    report.add_witnessed(
        "half_dimensional",
        [f"{s.cone.label} has dim {s.dim}" for s in strata if s.dim != f.rank],
        f"{len(strata)} strata of dim {f.rank}",
    )
    report.body = {"rank": f.rank, "strata": [s.to_dict() for s in strata]}
    return CommandResult(report)


def run_boundary(args, ctx: CommandContext) -> CommandResult:
    f = load_fan_input(args.file)
    strata = boundary_strata(f)
    report = Report(command=ctx.command)
    report.add_witnessed(
        "direction_in_ambient",
        [s.label for s in strata if s.direction_cone.is_zero or not s.direction_cone.is_face_of(s.ambient_cone)],
        f"{len(strata)} strata",
    )
    report.body = {"strata": [s.to_dict() for s in strata]}
    return CommandResult(report)


def run_cover_check(args, ctx: CommandContext) -> CommandResult:
    report = check_cover(load_fan_input(args.file), ctx.jobs)
    report.command = ctx.command
    return CommandResult(report)


def run_pants(args, ctx: CommandContext) -> CommandResult:
    report = check_pants(load_fan_input(args.file))
    report.command = ctx.command
    return CommandResult(report)
