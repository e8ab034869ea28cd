"""
B-side gluing diagrams and the A/B matcher

The toric boundary ∂T_Σ is presented by the orbit closures O(σ)̄ for nonzero
cones σ, glued along closed immersions O(τ)̄ ↪ O(σ)̄ for σ ⊆ τ; a fanifold
presents T(Φ) the same way over its strata. The matchers compare such
diagrams with each other and with the nerve of the barycentric cover.
"""

import itertools
from typing import Callable, Dict, Iterator, List, Optional

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from core.fans import (
    DEFAULT_MAX_SEARCH_RANK,
    DEFAULT_MAX_SEARCH_RAYS,
    fan_isomorphic,
    iter_fan_isomorphisms,
    quotient_composition_iso,
    quotient_fan,
    star,
    wedge,
)
from core.fanifold import arrow_fan_iso, barycentric_cover, nerve, sphere_fanifold, validate_fanifold
from core.fltz import boundary_strata, cover_pieces
from core.lattice import compose_quotients, factor_quotient
from models.diagram import DiagramArrow, DiagramObject, GluingDiagram, MatchReport, ObjectMatch, OrbitClosure
from models.fan import Fan, FanIso
from models.fanifold import ExitArrow, Fanifold, Nerve
from models.report import Report
from utils.exceptions import DiagramError, FanifoldMirrorError, IsomorphismSearchError
from utils.logger import get_logger

logger = get_logger(__name__)

MAX_POSET_CANDIDATES = 256
MAX_ASSIGNMENT_STEPS = 20000


# ---------------------------------------------------------------------------
# Diagrams
# ---------------------------------------------------------------------------

def orbit_closures(f: Fan) -> List[OrbitClosure]:
    """O(σ)̄ for every nonzero cone σ, as (σ, Σ/σ, M ↠ M/⟨σ⟩) with the cones of its boundary"""
    closures = []
    for sigma in f.nonzero_cones():
        qf = quotient_fan(f, sigma)
        faces = tuple((tau, qf.cone_map[tau]) for tau in star(f, sigma))
        closures.append(OrbitClosure(cone=sigma, fan=qf.g, quotient=qf.q, faces=faces))
    return closures


def boundary_diagram(f: Fan, name: Optional[str] = None) -> GluingDiagram:
    """
    The diagram presenting ∂T_Σ as a colimit of orbit closures

    Objects are the orbit closures O(σ)̄ for the nonzero cones; σ ⊊ τ gives
    the arrow (σ, τ) labeled by τ/⟨σ⟩ in Σ/σ and the presentation
    M/⟨σ⟩ ↠ M/⟨τ⟩.

    Raises:
        DiagramError: If f has no nonzero cone
    """
    closures = {c.cone: c for c in orbit_closures(f)}
    if not closures:
        raise DiagramError(f"Fan {f.name or ''} has no nonzero cone; its toric boundary is empty")

    objects = {
        sigma.label: DiagramObject(key=sigma.label, fan=c.fan, anchor=sigma, closure=c)
        for sigma, c in closures.items()
    }
    arrows = {}
    for sigma, tau in itertools.permutations(closures, 2):
        if sigma.is_face_of(tau):
            arrows[(sigma.label, tau.label)] = DiagramArrow(
                lower=sigma.label,
                upper=tau.label,
                cone=closures[sigma].orbit_cone(tau),
                lattice_map=factor_quotient(closures[sigma].quotient, closures[tau].quotient),
            )
    label = name or f"boundary({f.name or 'fan'})"
    return GluingDiagram(name=label, objects=objects, arrows=arrows, base_fan=f)


def fanifold_bside(F: Fanifold, name: Optional[str] = None) -> GluingDiagram:
    """The diagram presenting T(Φ): one object Σ_S per stratum, arrows from the exit arrows"""
    objects = {
        s.id: DiagramObject(key=s.id, fan=s.normal_fan, anchor=s.defining_cone)
        for s in F.sorted_strata()
    }
    arrows = {
        a.key: DiagramArrow(lower=a.source, upper=a.target, cone=a.cone, lattice_map=a.lattice_map)
        for a in F.sorted_arrows()
    }
    return GluingDiagram(name=name or f"T({F.name or 'fanifold'})", objects=objects, arrows=arrows)


def orbit_intersection(d: GluingDiagram, s1: str, s2: str) -> Optional[str]:
    """
    The object O(s1)̄ ∩ O(s2)̄, or None when the closures are disjoint

    Uses the wedge in the base fan when the diagram has one, the join in the
    index poset otherwise.
    """
    a, b = d.require(s1), d.require(s2)
    if d.base_fan is not None and a.anchor is not None and b.anchor is not None:
        joined = wedge(d.base_fan, a.anchor, b.anchor)
        return d.anchored().get(joined) if joined is not None else None

    upper = [k for k in d.objects if d.leq(s1, k) and d.leq(s2, k)]
    least = [k for k in upper if all(d.leq(k, other) for other in upper)]
    return least[0] if least else None


def _arrow_iso(d: GluingDiagram, arrow: DiagramArrow) -> Optional[FanIso]:
    # (fan of lower)/cone ≅ fan of upper, induced by the arrow's lattice map
    lower = d.objects[arrow.lower].fan
    if arrow.cone not in lower.cones:
        return None
    try:
        return arrow_fan_iso(quotient_fan(lower, arrow.cone), arrow.lattice_map, d.objects[arrow.upper].fan)
    except FanifoldMirrorError:
        return None


def check_arrow_coherence(d: GluingDiagram) -> List[str]:
    """
    Witnesses of arrows that are not closed immersions of the expected shape
    and of composable pairs that disagree with the direct arrow

    Each arrow's lattice map must induce (Σ_lower)/cone ≅ Σ_upper. For
    lower → middle → upper the composed projection must equal the direct one,
    and the second arrow's cone pulled back through the first must be the
    direct arrow's cone.
    """
    problems = []
    isos = {}
    for key in sorted(d.arrows):
        arrow = d.arrows[key]
        isos[key] = _arrow_iso(d, arrow)
        if isos[key] is None:
            problems.append(f"{arrow.lower}->{arrow.upper}: lattice map does not induce a fan isomorphism")

    for first in (d.arrows[k] for k in sorted(d.arrows)):
        for second in (d.arrows[k] for k in sorted(d.arrows) if k[0] == first.upper):
            direct = d.arrows.get((first.lower, second.upper))
            tag = f"{first.lower}->{first.upper}->{second.upper}"
            if direct is None:
                problems.append(f"{tag}: no direct arrow")
                continue
            if compose_quotients(first.lattice_map, second.lattice_map).projection != direct.lattice_map.projection:
                problems.append(f"{tag}: composition differs from the direct arrow")
            iso = isos[first.key]
            if iso is None or isos[second.key] is None:
                continue
            qf = quotient_fan(d.objects[first.lower].fan, first.cone)
            transported = qf.preimage(iso.inverse_cone(second.cone))
            if transported != direct.cone:
                problems.append(
                    f"{tag}: direct cone {direct.cone.label} differs from the transported cone {transported.label}"
                )
    return problems


# ---------------------------------------------------------------------------
# Matching
# ---------------------------------------------------------------------------

def _is_poset_iso(ga: nx.DiGraph, gb: nx.DiGraph, mapping: Dict[str, str]) -> bool:
    if sorted(mapping) != sorted(ga.nodes) or sorted(mapping.values()) != sorted(gb.nodes):
        return False
    return {(mapping[u], mapping[v]) for u, v in ga.edges} == set(gb.edges)


def _poset_isomorphisms(
    ga: nx.DiGraph, gb: nx.DiGraph, canonical: Optional[Dict[str, str]]
) -> Iterator[Dict[str, str]]:
    # Canonical candidate first, then a labeled graph-isomorphism search.
    if canonical is not None and _is_poset_iso(ga, gb, canonical):
        yield canonical
    matcher = DiGraphMatcher(
        ga, gb, node_match=lambda x, y: x["rank"] == y["rank"] and x["cones"] == y["cones"]
    )
    for mapping in itertools.islice(matcher.isomorphisms_iter(), MAX_POSET_CANDIDATES):
        if mapping != canonical:
            yield dict(mapping)


def _search_match(
    report: MatchReport,
    ga: nx.DiGraph,
    gb: nx.DiGraph,
    canonical: Optional[Dict[str, str]],
    match_objects: Callable[[Dict[str, str]], List[ObjectMatch]],
) -> MatchReport:
    best_mapping, best_matches = None, []
    for mapping in _poset_isomorphisms(ga, gb, canonical):
        matches = match_objects(mapping)
        if best_mapping is None:
            best_mapping, best_matches = mapping, matches
        if all(m.matched for m in matches):
            best_mapping, best_matches = mapping, matches
            break

    report.add(
        "poset",
        best_mapping is not None,
        "index posets are isomorphic" if best_mapping is not None else "no isomorphism of index posets",
    )
    report.add_witnessed(
        "objects",
        [f"{m.source} -> {m.target}: {m.witness}" for m in best_matches if not m.matched],
        f"{sum(m.matched for m in best_matches)}/{len(best_matches)} matched",
    )
    report.poset_iso = best_mapping
    report.object_matches = best_matches
    return report


def _canonical_by_anchor(a: GluingDiagram, b: GluingDiagram) -> Optional[Dict[str, str]]:
    anchors_b = b.anchored()
    if len(anchors_b) != len(b.objects):
        return None
    mapping = {}
    for key, obj in a.objects.items():
        if obj.anchor is None or obj.anchor not in anchors_b:
            return None
        mapping[key] = anchors_b[obj.anchor]
    return mapping


def _lattice_compatible(iso_lower: FanIso, iso_upper: FanIso, arrow_a: DiagramArrow, arrow_b: DiagramArrow) -> bool:
    # iso_upper · P_a = P_b · iso_lower
    if arrow_a.lattice_map.target_rank == 0:
        return True
    left = iso_upper.lattice_iso * arrow_a.lattice_map.projection
    right = arrow_b.lattice_map.projection * iso_lower.lattice_iso
    return left == right


def _joint_object_isos(
    a: GluingDiagram,
    b: GluingDiagram,
    mapping: Dict[str, str],
    max_rank: int,
    max_rays: int,
) -> List[ObjectMatch]:
    """
    Choose one fan isomorphism per object so that every arrow commutes

    Candidates per object are the isomorphisms carrying each outgoing arrow's
    cone onto the cone of the corresponding arrow; a backtracking search then
    picks candidates whose lattice isomorphisms intertwine the arrow maps.
    """
    order = a.keys()
    partner = {key: b.arrows[(mapping[key[0]], mapping[key[1]])] for key in a.arrows}
    candidates: Dict[str, List[FanIso]] = {}
    witnesses: Dict[str, str] = {}
    for key in order:
        target = mapping[key]
        required = [(arrow.cone, partner[arrow.key].cone) for arrow in a.arrows.values() if arrow.lower == key]
        try:
            candidates[key] = [
                iso for iso in iter_fan_isomorphisms(a.objects[key].fan, b.objects[target].fan, max_rank, max_rays)
                if all(iso.map_cone(src) == dst for src, dst in required)
            ]
            if not candidates[key]:
                witnesses[key] = "no fan isomorphism compatible with the arrows"
        except IsomorphismSearchError as exc:
            candidates[key] = []
            witnesses[key] = str(exc)

    if witnesses:
        return [
            ObjectMatch(
                source=key,
                target=mapping[key],
                iso=candidates[key][0] if candidates[key] else None,
                witness=witnesses.get(key, ""),
            )
            for key in order
        ]

    incident = {key: [arrow for arrow in a.arrows.values() if key in (arrow.lower, arrow.upper)] for key in order}
    chosen: Dict[str, FanIso] = {}
    steps = 0
    stuck = (-1, order[0] if order else "")

    def consistent(key: str, iso: FanIso) -> bool:
        for arrow in incident[key]:
            other = arrow.upper if arrow.lower == key else arrow.lower
            if other not in chosen:
                continue
            lower = iso if arrow.lower == key else chosen[other]
            upper = iso if arrow.upper == key else chosen[other]
            if not _lattice_compatible(lower, upper, arrow, partner[arrow.key]):
                return False
        return True

    def extend(depth: int) -> bool:
        nonlocal steps, stuck
        if depth == len(order):
            return True
        key = order[depth]
        for iso in candidates[key]:
            steps += 1
            if steps > MAX_ASSIGNMENT_STEPS:
                return False
            if consistent(key, iso):
                chosen[key] = iso
                if extend(depth + 1):
                    return True
                del chosen[key]
        if depth > stuck[0]:
            stuck = (depth, key)
        return False

    if extend(0):
        return [ObjectMatch(source=key, target=mapping[key], iso=chosen[key]) for key in order]

    if steps > MAX_ASSIGNMENT_STEPS:
        reason = f"no joint choice of isomorphisms within {MAX_ASSIGNMENT_STEPS} steps"
    else:
        reason = "no fan isomorphism intertwines the arrow lattice maps"
    return [
        ObjectMatch(
            source=key,
            target=mapping[key],
            iso=None if key == stuck[1] else candidates[key][0],
            witness=reason if key == stuck[1] else "",
        )
        for key in order
    ]


def match_bside(
    a: GluingDiagram,
    b: GluingDiagram,
    max_rank: int = DEFAULT_MAX_SEARCH_RANK,
    max_rays: int = DEFAULT_MAX_SEARCH_RAYS,
) -> MatchReport:
    """
    Match two gluing diagrams

    Finds a poset isomorphism (the anchor correspondence first) and one fan
    isomorphism per object. Together they carry every arrow cone onto the
    corresponding arrow cone and intertwine the arrow lattice maps.

    Returns:
        MatchReport with clauses cardinality, poset and objects
    """
    report = MatchReport(command="mirror match-bside")
    same_size = len(a.objects) == len(b.objects) and len(a.arrows) == len(b.arrows)
    report.add(
        "cardinality",
        same_size,
        f"{len(a.objects)} vs {len(b.objects)} objects, {len(a.arrows)} vs {len(b.arrows)} arrows",
    )
    report.body = {"a": a.name, "b": b.name, "objects": len(a.objects), "arrows": len(a.arrows)}
    if not same_size:
        return report

    def match_objects(mapping: Dict[str, str]) -> List[ObjectMatch]:
        return _joint_object_isos(a, b, mapping, max_rank, max_rays)

    _search_match(report, a.index_poset(), b.index_poset(), _canonical_by_anchor(a, b), match_objects)
    if not report.passed:
        logger.warning(f"{a.name} does not match {b.name}")
    return report


def _nerve_poset(nv: Nerve) -> nx.DiGraph:
    graph = nx.DiGraph()
    for s in nv.simplices:
        fan = s.fan
        graph.add_node(s.label, rank=fan.rank if fan else -1, cones=len(fan.cones) if fan else -1)
    for s, t in itertools.permutations(nv.simplices, 2):
        if set(s.vertices) < set(t.vertices):
            graph.add_edge(s.label, t.label)
    return graph


def match_hms(
    nv: Nerve,
    b: GluingDiagram,
    max_rank: int = DEFAULT_MAX_SEARCH_RANK,
    max_rays: int = DEFAULT_MAX_SEARCH_RAYS,
) -> MatchReport:
    """
    Match the nerve of the barycentric cover with an orbit-closure diagram

    Nerve simplices under face inclusion must be isomorphic to the index poset
    of b, and the skeleton fan labeling each simplex must be isomorphic to the
    fan of the corresponding orbit closure.
    """
    report = MatchReport(command="mirror match-hms")
    same_size = len(nv.simplices) == len(b.objects)
    report.add("cardinality", same_size, f"{len(nv.simplices)} simplices vs {len(b.objects)} objects")
    report.body = {
        "simplices_by_dim": {str(k): len(nv.of_dim(k)) for k in sorted({s.dim for s in nv.simplices})},
        "objects": len(b.objects),
    }
    if not same_size:
        return report

    by_label = {s.label: s for s in nv.simplices}
    anchors_b = b.anchored()
    canonical: Optional[Dict[str, str]] = {}
    for s in nv.simplices:
        if s.anchor is None or s.anchor not in anchors_b:
            canonical = None
            break
        canonical[s.label] = anchors_b[s.anchor]

    def match_objects(mapping: Dict[str, str]) -> List[ObjectMatch]:
        matches = []
        for label in sorted(mapping, key=lambda k: (by_label[k].dim, by_label[k].vertices)):
            simplex, target = by_label[label], mapping[label]
            iso, witness = None, ""
            if simplex.fan is None:
                witness = f"no unique minimal stratum among {list(simplex.minimal_strata)}"
            else:
                try:
                    iso = fan_isomorphic(simplex.fan, b.objects[target].fan, max_rank=max_rank, max_rays=max_rays)
                    if iso is None:
                        witness = "skeleton fan and orbit closure fan are not isomorphic"
                except IsomorphismSearchError as exc:
                    witness = str(exc)
            matches.append(ObjectMatch(source=label, target=target, iso=iso, witness=witness))
        return matches

    _search_match(report, _nerve_poset(nv), b.index_poset(), canonical, match_objects)
    if not report.passed:
        logger.warning(f"Nerve does not match {b.name}")
    return report


# ---------------------------------------------------------------------------
# Lift of the boundary cover and end-to-end verification
# ---------------------------------------------------------------------------

def _transported_quotient(region_fan: Fan, arrow: ExitArrow, target: Fan) -> Optional[FanIso]:
    # Quotient of a vertex skeleton by an arrow cone, carried by the arrow map
    try:
        return arrow_fan_iso(quotient_fan(region_fan, arrow.cone), arrow.lattice_map, target)
    except FanifoldMirrorError:
        return None


def check_lift(f: Fan, jobs: int = 1) -> Report:
    """
    Check that the sectorial cover of the sphere fanifold lifts the cover of ∂∞L(Σ)

    Clauses:
        regions: each region P corresponds to the piece indexed by ρ_P. Its
            flags pass through exactly the ambient cones of the piece, count
            its boundary strata, and its exit arrows carry the piece's cones
        ray_cover: the ray-indexed pieces already cover every boundary stratum
        intersections: each nerve edge sits over the wedge of its rays, and
            each vertex skeleton quotiented along its arrow is carried onto the
            fan of the piece indexed by that wedge
    """
    report = Report(command="mirror lift")
    F = sphere_fanifold(f)
    regions = barycentric_cover(F, jobs)
    pieces = {p.index_cone: p for p in cover_pieces(f, jobs)}
    by_cone = {s.defining_cone: s for s in F.sorted_strata()}

    region_problems = []
    ray_pieces = [p for c, p in pieces.items() if c.dim == 1]
    if len(ray_pieces) != len(regions):
        region_problems.append(f"{len(regions)} regions but {len(ray_pieces)} ray-indexed pieces")
    for region in regions:
        ray = F.strata[region.vertex].defining_cone
        piece = pieces.get(ray)
        if piece is None:
            region_problems.append(f"{region.vertex}: no piece indexed by {ray.label}")
            continue
        through = {F.strata[s].defining_cone for chain in region.flags for s in chain}
        ambient = {b.ambient_cone for b in piece.members}
        if through != ambient:
            region_problems.append(
                f"{region.vertex}: flags pass through {sorted(c.label for c in through)} "
                f"but the piece spans {sorted(c.label for c in ambient)}"
            )
        # (ρ, ρ), then (ρ, τ) and (τ, τ) per arrow, then (σ, τ) per two-step flag
        lengths = [len(chain) for chain in region.flags]
        expected = lengths.count(1) + 2 * lengths.count(2) + lengths.count(3)
        if expected != len(piece.members):
            region_problems.append(
                f"{region.vertex}: flags account for {expected} boundary strata, the piece has {len(piece.members)}"
            )
        for arrow in F.arrows_from(region.vertex):
            tau = F.strata[arrow.target].defining_cone
            if piece.fiber.cone_map.get(tau) != arrow.cone:
                region_problems.append(f"{region.vertex}->{arrow.target}: arrow cone differs from {tau.label} in the piece")
    report.add_witnessed("regions", region_problems, f"{len(regions)} regions")

    covered = set()
    for piece in ray_pieces:
        covered |= piece.members
    report.add_witnessed("ray_cover", [b.label for b in boundary_strata(f) if b not in covered])

    edge_problems = []
    nv = nerve(regions, F)
    skeleta = {r.vertex: r.skeleton_fan for r in regions}
    for edge in nv.of_dim(1):
        rays = [F.strata[v].defining_cone for v in edge.vertices]
        joined = wedge(f, rays[0], rays[1])
        if joined is None:
            edge_problems.append(f"{edge.label}: rays span no cone")
            continue
        if edge.minimal_strata != (by_cone[joined].id,):
            edge_problems.append(f"{edge.label}: minimal strata {list(edge.minimal_strata)} are not {by_cone[joined].id}")
        for vertex in edge.vertices:
            arrow = F.arrows.get((vertex, by_cone[joined].id))
            if arrow is None or _transported_quotient(skeleta[vertex], arrow, pieces[joined].fiber_fan) is None:
                edge_problems.append(f"{edge.label}: skeleton of {vertex} does not quotient onto the piece of {joined.label}")
        if any(quotient_composition_iso(f, ray, joined) is None for ray in rays):
            edge_problems.append(f"{edge.label}: vertex skeleta do not quotient onto the edge fan")
    report.add_witnessed("intersections", edge_problems, f"{len(nv.of_dim(1))} edges")

    report.body = {"regions": len(regions), "pieces": len(pieces)}
    return report


def verify_mirror(
    f: Fan,
    jobs: int = 1,
    max_rank: int = DEFAULT_MAX_SEARCH_RANK,
    max_rays: int = DEFAULT_MAX_SEARCH_RAYS,
) -> Report:
    """
    End to end from one complete fan: sphere fanifold, its validity, the
    B-side match with the toric boundary, the nerve match and the lift
    """
    report = Report(command="mirror verify")
    F = sphere_fanifold(f)
    report.extend(validate_fanifold(F, jobs), prefix="fanifold.")

    boundary = boundary_diagram(f)
    report.add_witnessed("boundary.coherence", check_arrow_coherence(boundary))
    bside = match_bside(fanifold_bside(F), boundary, max_rank, max_rays)
    report.extend(bside, prefix="bside.")

    nv = nerve(barycentric_cover(F, jobs), F)
    hms = match_hms(nv, boundary, max_rank, max_rays)
    report.extend(hms, prefix="hms.")
    report.extend(check_lift(f, jobs), prefix="lift.")

    report.body = {
        "fan": f.to_dict(),
        "fanifold": {"dim": F.dim, "strata": len(F.strata), "arrows": len(F.arrows)},
        "nerve": {str(k): len(nv.of_dim(k)) for k in sorted({s.dim for s in nv.simplices})},
        "diagram": {"objects": len(boundary.objects), "arrows": len(boundary.arrows)},
        "matched_objects": sum(m.matched for m in bside.object_matches),
        "matched_simplices": sum(m.matched for m in hms.object_matches),
    }
    logger.info(f"mirror verify {f.name or 'fan'}: {report.verdict.value}")
    return report
