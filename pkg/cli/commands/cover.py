"""
Cover commands: nerve of the barycentric cover
"""

from core.fanifold import barycentric_cover, nerve
from models.report import Report
from cli.context import CommandContext, CommandResult, load_fanifold_input


def register(groups, parents) -> None:
    parser = groups.add_parser("cover", help="Barycentric cover of a fanifold")
    commands = parser.add_subparsers(dest="command", metavar="<command>")
    commands.required = True

    nerve_parser = commands.add_parser("nerve", parents=parents, help="Nerve of the barycentric cover")
    nerve_parser.add_argument("file", help="Fanifold document, or a complete fan for its sphere")
    nerve_parser.set_defaults(handler=run_nerve)


def run_nerve(args, ctx: CommandContext) -> CommandResult:
    F = load_fanifold_input(args.file, ctx)
    nv = nerve(barycentric_cover(F, ctx.jobs), F)
    counts = {str(k): len(nv.of_dim(k)) for k in sorted({s.dim for s in nv.simplices})}

    report = Report(command=ctx.command)
    report.add(
        "regions",
        len(nv.regions) == len(F.zero_strata()),
        f"{len(nv.regions)} regions, " + ", ".join(f"{n} of dim {k}" for k, n in counts.items()),
    )
    report.add_witnessed(
        "labels",
        [f"{s.label}: minimal strata {list(s.minimal_strata)}" for s in nv.simplices if s.fan is None],
    )

    # Strata of a sphere know their cones; the nerve must recover the cone complex
    strata = list(F.strata.values())
    if strata and all(s.defining_cone is not None for s in strata):
        ray_of = {s.id: s.defining_cone.ray_indices[0] for s in F.zero_strata()}
        simplices = {frozenset(ray_of[v] for v in s.vertices) for s in nv.simplices}
        cones = {frozenset(s.defining_cone.ray_indices) for s in strata}
        witnesses = sorted(
            [f"simplex on rays {sorted(c)} has no cone" for c in simplices - cones]
            + [f"cone on rays {sorted(c)} has no simplex" for c in cones - simplices]
        )
        report.add_witnessed("cone_complex", witnesses)

    report.body = {"simplices_by_dim": counts, **nv.to_dict()}
    return CommandResult(report)
