"""
Fanifolds: validation against the commuting square, the sphere fanifold of a
complete fan, the dimension filtration with its handle schedule, and the
barycentric cover with its nerve
"""

import itertools
from typing import Dict, Iterable, List, Optional, Set, Tuple

from core.fans import induced_fan_iso, is_complete, quotient_fan, star, validate_fan
from core.lattice import compose_quotients, factor_quotient, integer_kernel, is_surjective
from models.fan import Cone, Fan, FanIso, QuotientFan
from models.fanifold import (
    ArrowKey,
    CoverRegion,
    ExitArrow,
    Fanifold,
    Filtration,
    HandleRecord,
    Nerve,
    NerveSimplex,
    Stratum,
)
from models.lattice import QuotientMap
from models.report import Report
from utils.concurrency import ordered_map
from utils.exceptions import CoverConstructionError, FanifoldError, FanifoldMirrorError
from utils.logger import get_logger

logger = get_logger(__name__)


def stratum_id(cone: Cone) -> str:
    """Stratum id of the sphere fanifold for a nonzero cone, e.g. "s0_2" """
    return "s" + "_".join(str(i) for i in cone.ray_indices)


def arrow_fan_iso(qf: QuotientFan, lattice_map: QuotientMap, target_fan: Fan) -> Optional[FanIso]:
    """
    The isomorphism Σ_S/σ → Σ_S′ induced by an arrow's lattice map, if it is one

    The arrow's projection factors through the canonical quotient by ⟨σ⟩; the
    factor is the candidate lattice isomorphism.
    """
    factor = factor_quotient(qf.q, lattice_map)
    return induced_fan_iso(qf.g, target_fan, factor.projection)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _arrow_problems(F: Fanifold, arrow: ExitArrow) -> List[str]:
    tag = f"{arrow.source}->{arrow.target}"
    if arrow.source not in F.strata or arrow.target not in F.strata:
        return [f"{tag}: unknown stratum"]
    source, target = F.strata[arrow.source], F.strata[arrow.target]
    problems = []
    if target.dim <= source.dim:
        problems.append(f"{tag}: target dim {target.dim} does not exceed source dim {source.dim}")
    if arrow.cone not in source.normal_fan.cones:
        return problems + [f"{tag}: cone {arrow.cone.label} is not in the normal fan of {source.id}"]
    if arrow.cone.is_zero:
        problems.append(f"{tag}: labeled by the zero cone")

    q = arrow.lattice_map
    if (
        q.source_rank != source.lattice_rank
        or q.target_rank != target.lattice_rank
        or q.projection.shape != (q.target_rank, q.source_rank)
    ):
        return problems + [
            f"{tag}: lattice map Z^{q.source_rank} -> Z^{q.target_rank} does not match ranks "
            f"{source.lattice_rank} -> {target.lattice_rank}"
        ]
    if not is_surjective(q.projection):
        return problems + [f"{tag}: projection is not surjective"]

    qf = quotient_fan(source.normal_fan, arrow.cone)
    if integer_kernel(q.projection) != qf.q.kernel_basis:
        return problems + [f"{tag}: kernel of the projection is not the saturated span of {arrow.cone.label}"]
    if arrow_fan_iso(qf, q, target.normal_fan) is None:
        problems.append(f"{tag}: quotient fan is not carried onto the fan of {target.id} by the lattice map")
    return problems


def _composition_problems(F: Fanifold, first: ExitArrow, second: ExitArrow) -> List[str]:
    tag = f"{first.source}->{first.target}->{second.target}"
    direct = F.arrows.get((first.source, second.target))
    if direct is None:
        return [f"{tag}: no direct arrow"]
    problems = []
    composed = compose_quotients(first.lattice_map, second.lattice_map)
    if composed.projection != direct.lattice_map.projection:
        problems.append(f"{tag}: composed projection differs from the direct one")

    source = F.strata[first.source]
    qf = quotient_fan(source.normal_fan, first.cone)
    iso = arrow_fan_iso(qf, first.lattice_map, F.strata[first.target].normal_fan)
    if iso is None:
        return problems + [f"{tag}: first arrow does not induce a fan isomorphism"]
    expected = qf.preimage(iso.inverse_cone(second.cone))
    if expected != direct.cone:
        problems.append(f"{tag}: direct cone {direct.cone.label} differs from the transported cone {expected.label}")
    return problems


def _exit_poset_problems(F: Fanifold, stratum: Stratum) -> List[str]:
    outgoing = F.arrows_from(stratum.id)
    cones = [a.cone for a in outgoing]
    nonzero = set(stratum.normal_fan.nonzero_cones())
    problems = []
    if len(set(cones)) != len(cones) or set(cones) != nonzero:
        problems.append(
            f"{stratum.id}: arrows leave along {sorted(c.label for c in cones)} "
            f"but the nonzero cones are {sorted(c.label for c in nonzero)}"
        )
    for a, b in itertools.permutations(outgoing, 2):
        related = (a.target, b.target) in F.arrows
        if related != a.cone.is_face_of(b.cone):
            problems.append(
                f"{stratum.id}: order of {a.target}, {b.target} disagrees with {a.cone.label} ⊆ {b.cone.label}"
            )
    return problems


def _guarded(check, *args) -> List[str]:
    try:
        return check(*args)
    except FanifoldMirrorError as exc:
        return [f"{type(exc).__name__}: {exc}"]


def validate_fanifold(F: Fanifold, jobs: int = 1) -> Report:
    """
    Check a fanifold against its definition

    Clauses:
        normal_fans: every normal fan is a valid fan
        dimensions: dim S + rank M_S = dim Φ and rank M_S = rank Σ_S
        arrows: each arrow's lattice map realizes Σ_S′ ≅ Σ_S/σ
        composition: composable arrows compose to the direct arrow, lattice maps
            by canonical matrix equality and cones by transport through the first arrow
        exit_posets: arrows out of S correspond to the nonzero cones of Σ_S, order included

    Args:
        F: Fanifold to check
        jobs: Worker threads for independent arrow checks

    Returns:
        Report with witnesses for every failing clause
    """
    report = Report(command="fanifold check")
    strata = F.sorted_strata()

    bad_fans = []
    for s in strata:
        violations = validate_fan(s.normal_fan)
        if violations:
            bad_fans.append(f"{s.id}: {violations[0]}")
    report.add_witnessed("normal_fans", bad_fans)

    dims = []
    for s in strata:
        if s.lattice_rank != s.normal_fan.rank:
            dims.append(f"{s.id}: lattice rank {s.lattice_rank} but fan rank {s.normal_fan.rank}")
        if s.dim < 0 or s.dim + s.lattice_rank != F.dim:
            dims.append(f"{s.id}: dim {s.dim} + rank {s.lattice_rank} != {F.dim}")
    report.add_witnessed("dimensions", dims)

    arrows = F.sorted_arrows()
    arrow_problems = ordered_map(lambda a: _guarded(_arrow_problems, F, a), arrows, jobs)
    report.add_witnessed("arrows", [p for ps in arrow_problems for p in ps], f"{len(arrows)} arrows")

    broken = {a.key for a, ps in zip(arrows, arrow_problems) if ps}
    pairs = [
        (first, second)
        for first in arrows
        for second in F.arrows_from(first.target)
        if first.key not in broken and second.key not in broken
    ]
    composition = ordered_map(lambda p: _guarded(_composition_problems, F, *p), pairs, jobs)
    report.add_witnessed("composition", [p for ps in composition for p in ps], f"{len(pairs)} composable pairs")

    exit_problems = [p for s in strata for p in _guarded(_exit_poset_problems, F, s)]
    report.add_witnessed("exit_posets", exit_problems)

    report.body = {
        "fanifold": F.name,
        "dim": F.dim,
        "strata": len(F.strata),
        "arrows": len(F.arrows),
        "closed": F.closed,
    }
    if not report.passed:
        logger.warning(f"Fanifold {F.name or ''} failed: {[c.name for c in report.failing()]}")
    return report


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def sphere_fanifold(f: Fan, name: Optional[str] = None) -> Fanifold:
    """
    The canonical fanifold structure on Σ ∩ S^d for a complete fan Σ

    Strata are the nonzero cones σ (dim σ − 1) with normal data
    (M/⟨σ⟩, Σ/σ); arrows are the strict face relations σ ⊊ σ′ with cone
    σ′/⟨σ⟩ and the presentation M/⟨σ⟩ ↠ M/⟨σ′⟩ factored from the canonical ones.

    Raises:
        FanifoldError: If f has rank 0 or is not complete
    """
    if f.rank < 1:
        raise FanifoldError("Sphere fanifold needs a fan of rank at least 1")
    if not is_complete(f):
        raise FanifoldError(f"Fan {f.name or ''} is not complete; its sphere would have boundary")

    quotients = {sigma: quotient_fan(f, sigma) for sigma in f.nonzero_cones()}
    strata: Dict[str, Stratum] = {}
    for sigma, qf in quotients.items():
        sid = stratum_id(sigma)
        strata[sid] = Stratum(
            id=sid,
            dim=sigma.dim - 1,
            lattice_rank=qf.g.rank,
            normal_fan=qf.g,
            is_closed=sigma.dim == 1,
            defining_cone=sigma,
        )

    arrows: Dict[ArrowKey, ExitArrow] = {}
    for sigma, qf in quotients.items():
        for tau in star(f, sigma):
            if tau == sigma:
                continue
            arrow = ExitArrow(
                source=stratum_id(sigma),
                target=stratum_id(tau),
                cone=qf.cone_map[tau],
                lattice_map=factor_quotient(qf.q, quotients[tau].q),
            )
            arrows[arrow.key] = arrow

    label = name or (f"sphere({f.name})" if f.name else None)
    F = Fanifold(dim=f.rank - 1, strata=strata, arrows=arrows, closed=True, name=label)
    logger.info(f"Built {F}")
    return F


def sub_fanifold(F: Fanifold, stratum_ids: Iterable[str], name: Optional[str] = None) -> Fanifold:
    """Full sub-fanifold on the given strata, arrows restricted"""
    keep = set(stratum_ids)
    for sid in keep:
        F.stratum(sid)
    return Fanifold(
        dim=F.dim,
        strata={sid: F.strata[sid] for sid in sorted(keep)},
        arrows={k: a for k, a in F.arrows.items() if a.source in keep and a.target in keep},
        closed=F.closed,
        name=name,
    )


def filtration(F: Fanifold) -> Filtration:
    """
    The filtration Φ_0 ⊆ … ⊆ Φ_n by stratum dimension and its handle schedule

    Φ_k holds the strata of dim ≤ k. The schedule lists one record per stratum,
    ordered by dimension then id, gluing along the arrows that enter it from
    lower strata.
    """
    top = max([F.dim] + [s.dim for s in F.strata.values()])
    levels = [
        sub_fanifold(
            F,
            [s.id for s in F.strata.values() if s.dim <= k],
            name=f"{F.name or 'fanifold'}_{k}",
        )
        for k in range(top + 1)
    ]
    schedule = [
        HandleRecord(
            stratum_id=s.id,
            level=s.dim,
            lattice_rank=s.lattice_rank,
            normal_fan=s.normal_fan,
            gluing=tuple(a for a in F.arrows_into(s.id) if F.strata[a.source].dim < s.dim),
        )
        for s in F.sorted_strata()
    ]
    return Filtration(levels=levels, schedule=schedule)


def replay_schedule(schedule: List[HandleRecord]) -> Tuple[Set[str], Set[ArrowKey]]:
    """Stratum ids and arrow keys reconstructed from a handle schedule"""
    strata = {r.stratum_id for r in schedule}
    arrows = {a.key for r in schedule for a in r.gluing}
    return strata, arrows


# ---------------------------------------------------------------------------
# Barycentric cover and nerve
# ---------------------------------------------------------------------------

def _chains_from(F: Fanifold, start: str) -> List[Tuple[str, ...]]:
    chains = []
    stack = [(start,)]
    while stack:
        chain = stack.pop()
        chains.append(chain)
        for arrow in F.arrows_from(chain[-1]):
            stack.append(chain + (arrow.target,))
    return sorted(chains, key=lambda c: (len(c), c))


def barycentric_cover(F: Fanifold, jobs: int = 1) -> List[CoverRegion]:
    """
    One region per 0-stratum: the flags of its closed star and its skeleton fan

    Raises:
        CoverConstructionError: If F is not closed, has no 0-strata, or has a
            stratum no 0-stratum exits into
    """
    if not F.closed:
        raise CoverConstructionError(f"Fanifold {F.name or ''} is not closed")
    vertices = F.zero_strata()
    if not vertices:
        raise CoverConstructionError(f"Fanifold {F.name or ''} has no 0-strata")
    vertex_ids = {v.id for v in vertices}
    for s in F.sorted_strata():
        if s.dim > 0 and not any(a.source in vertex_ids for a in F.arrows_into(s.id)):
            raise CoverConstructionError(f"Stratum '{s.id}' is not adjacent to any 0-stratum")

    def region(vertex: Stratum) -> CoverRegion:
        return CoverRegion(
            vertex=vertex.id,
            flags=tuple(_chains_from(F, vertex.id)),
            skeleton_fan=vertex.normal_fan,
        )

    return ordered_map(region, vertices, jobs)


def nerve(regions: List[CoverRegion], F: Fanifold) -> Nerve:
    """
    Nerve of the barycentric cover

    A set of vertices spans a simplex iff some stratum has all of them in its
    closure. Each simplex is labeled by its minimal common strata and, when
    that stratum is unique, by its normal fan and defining cone.
    """
    vertex_ids = {r.vertex for r in regions}
    closure_vertices: Dict[str, Set[str]] = {}
    for s in F.sorted_strata():
        below = {a.source for a in F.arrows_into(s.id) if a.source in vertex_ids}
        if s.id in vertex_ids:
            below.add(s.id)
        closure_vertices[s.id] = below

    vertex_sets: Set[frozenset] = set()
    for below in closure_vertices.values():
        members = sorted(below)
        for k in range(1, len(members) + 1):
            vertex_sets.update(frozenset(c) for c in itertools.combinations(members, k))

    simplices = []
    for vs in vertex_sets:
        containing = [sid for sid, below in closure_vertices.items() if vs <= below]
        minimal = sorted(
            sid for sid in containing
            if not any((other, sid) in F.arrows for other in containing if other != sid)
        )
        unique = F.strata[minimal[0]] if len(minimal) == 1 else None
        simplices.append(NerveSimplex(
            vertices=tuple(sorted(vs)),
            minimal_strata=tuple(minimal),
            fan=unique.normal_fan if unique else None,
            anchor=unique.defining_cone if unique else None,
        ))
    simplices.sort(key=lambda s: (s.dim, s.vertices))
    logger.debug(f"Nerve of {F.name or 'fanifold'}: {len(simplices)} simplices")
    return Nerve(regions=list(regions), simplices=simplices)
