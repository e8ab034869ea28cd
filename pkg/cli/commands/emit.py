"""
Emit commands: DOT export of posets, nerves and diagrams
"""

from core.fanifold import barycentric_cover, nerve
from core.mirror import boundary_diagram, fanifold_bside
from models.report import Report
from services.dot_export import DotExporter, count_edges, count_nodes
from cli.context import CommandContext, CommandResult, load_fan_input, load_fanifold_input

TARGETS = ("face-poset", "nerve", "boundary", "bside")


def register(groups, parents) -> None:
    parser = groups.add_parser("emit", help="Export structures for other tools")
    commands = parser.add_subparsers(dest="command", metavar="<command>")
    commands.required = True

    dot = commands.add_parser("dot", parents=parents, help="Graphviz DOT text")
    dot.add_argument("--what", choices=TARGETS, default="face-poset", help="Structure to export")
    dot.add_argument("file", help="Fan document (fanifold document also accepted for nerve and bside)")
    dot.set_defaults(handler=run_dot)


def run_dot(args, ctx: CommandContext) -> CommandResult:
    exporter = DotExporter()
    if args.what == "face-poset":
        text = exporter.face_poset(load_fan_input(args.file))
    elif args.what == "boundary":
        text = exporter.diagram(boundary_diagram(load_fan_input(args.file)))
    else:
        F = load_fanifold_input(args.file, ctx)
        if args.what == "nerve":
            text = exporter.nerve(nerve(barycentric_cover(F, ctx.jobs), F), title=f"nerve({F.name or 'fanifold'})")
        else:
            text = exporter.diagram(fanifold_bside(F))

    report = Report(command=ctx.command)
    report.add("emitted", True, f"{count_nodes(text)} nodes, {count_edges(text)} edges")
    report.body = {"what": args.what, "nodes": count_nodes(text), "edges": count_edges(text), "dot": text}
    return CommandResult(report, text=text)
