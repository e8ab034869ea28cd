"""
Mirror commands: boundary diagram and end-to-end verification
"""

import itertools

from core.mirror import boundary_diagram, check_arrow_coherence, orbit_intersection, verify_mirror
from models.report import Report
from cli.context import CommandContext, CommandResult, load_fan_input


def register(groups, parents) -> None:
    parser = groups.add_parser("mirror", help="Toric boundary and the mirror checks")
    commands = parser.add_subparsers(dest="command", metavar="<command>")
    commands.required = True

    boundary = commands.add_parser("boundary", parents=parents, help="Orbit-closure diagram of the toric boundary")
    boundary.add_argument("file", help="Fan document")
    boundary.set_defaults(handler=run_boundary)

    verify = commands.add_parser("verify", parents=parents, help="All mirror checks from one complete fan")
    verify.add_argument("file", help="Fan document")
    verify.set_defaults(handler=run_verify)


def run_boundary(args, ctx: CommandContext) -> CommandResult:
    d = boundary_diagram(load_fan_input(args.file))
    report = Report(command=ctx.command)
    report.add_witnessed("coherence", check_arrow_coherence(d), f"{len(d.objects)} objects, {len(d.arrows)} arrows")

    intersections = {}
    for s1, s2 in itertools.combinations(d.keys(), 2):
        meet = orbit_intersection(d, s1, s2)
        intersections[f"{s1} ∩ {s2}"] = meet
    report.body = {"diagram": d.to_dict(), "intersections": intersections}
    return CommandResult(report)


def run_verify(args, ctx: CommandContext) -> CommandResult:
    report = verify_mirror(load_fan_input(args.file), ctx.jobs, ctx.max_rank, ctx.max_rays)
    report.command = ctx.command
    return CommandResult(report)
