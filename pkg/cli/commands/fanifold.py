"""
Fanifold commands: check, sphere, filtration
"""

from core.fanifold import filtration, replay_schedule, sphere_fanifold, validate_fanifold
from models.report import Report
from services.fanifold_document import FanifoldDocument, FanifoldDocumentCodec
from cli.context import CommandContext, CommandResult, load_fan_input, load_fanifold_input


def register(groups, parents) -> None:
    parser = groups.add_parser("fanifold", help="Fanifolds")
    commands = parser.add_subparsers(dest="command", metavar="<command>")
    commands.required = True

    check = commands.add_parser("check", parents=parents, help="Validate a fanifold")
    check.add_argument("file", help="Fanifold document, or a complete fan for its sphere")
    check.set_defaults(handler=run_check)

    sphere = commands.add_parser("sphere", parents=parents, help="Emit the sphere fanifold of a complete fan")
    sphere.add_argument("file", help="Fan document")
    sphere.set_defaults(handler=run_sphere)

    levels = commands.add_parser("filtration", parents=parents, help="Dimension filtration and handle schedule")
    levels.add_argument("file", help="Fanifold document, or a complete fan for its sphere")
    levels.set_defaults(handler=run_filtration)


def run_check(args, ctx: CommandContext) -> CommandResult:
    report = validate_fanifold(load_fanifold_input(args.file, ctx), ctx.jobs)
    report.command = ctx.command
    return CommandResult(report)


def run_sphere(args, ctx: CommandContext) -> CommandResult:
    F = sphere_fanifold(load_fan_input(args.file))
    report = validate_fanifold(F, ctx.jobs)
    report.command = ctx.command
    document = FanifoldDocument.from_fanifold(F)
    report.body["document"] = document.model_dump()
    return CommandResult(report, text=FanifoldDocumentCodec().emit(document))


def run_filtration(args, ctx: CommandContext) -> CommandResult:
    F = load_fanifold_input(args.file, ctx)
    filt = filtration(F)
    strata, arrows = replay_schedule(filt.schedule)

    report = Report(command=ctx.command)
    missing = sorted(set(F.strata) ^ strata) + [f"{s} -> {t}" for s, t in sorted(set(F.arrows) ^ arrows)]
    report.add_witnessed("replay", missing, f"{len(filt.schedule)} handles")
    nested = [
        f"{lower.name} is not contained in {upper.name}"
        for lower, upper in zip(filt.levels, filt.levels[1:])
        if not set(lower.strata) <= set(upper.strata)
    ]
    report.add_witnessed("nested", nested, f"{len(filt.levels)} levels")
    report.body = {
        "level_sizes": [len(level.strata) for level in filt.levels],
        **filt.to_dict(),
    }
    return CommandResult(report)
