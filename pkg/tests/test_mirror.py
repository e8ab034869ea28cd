"""
Tests for orbit-closure diagrams, fanifold B-sides and the matchers
"""

from dataclasses import replace

import pytest

import core.mirror as mirror
from core.fanifold import barycentric_cover, nerve, sphere_fanifold
from core.mirror import (
    boundary_diagram,
    check_arrow_coherence,
    check_lift,
    fanifold_bside,
    match_bside,
    match_hms,
    orbit_closures,
    orbit_intersection,
    verify_mirror,
)
from models.diagram import GluingDiagram
from models.fan import ZERO_CONE, Cone
from utils.exceptions import DiagramError


def negate_arrow(d: GluingDiagram, key) -> GluingDiagram:
    arrow = d.arrows[key]
    flipped = replace(arrow.lattice_map, projection=-arrow.lattice_map.projection)
    d.arrows[key] = replace(arrow, lattice_map=flipped)
    return d


class TestBoundaryDiagram:
    def test_orbit_closures(self, p2, p1):
        closures = orbit_closures(p2)
        assert len(closures) == 6
        ray = [c for c in closures if c.cone == Cone((0,))][0]
        assert ray.fan == p1
        assert ray.quotient.target_rank == 1
        assert ray.orbit_cone(Cone((0,))).is_zero
        assert ray.orbit_cone(Cone((0, 1))).dim == 1
        assert ray.orbit_cone(Cone((0, 1))) != ray.orbit_cone(Cone((0, 2)))
        with pytest.raises(DiagramError):
            ray.orbit_cone(Cone((1, 2)))

    def test_objects_are_orbit_closures(self, p2):
        d = boundary_diagram(p2)
        closures = {c.cone.label: c for c in orbit_closures(p2)}
        for key, obj in d.objects.items():
            assert obj.closure == closures[key]
            assert obj.fan == obj.closure.fan
        arrow = d.arrows[("(0)", "(0,1)")]
        assert arrow.cone == closures["(0)"].orbit_cone(Cone((0, 1)))
        assert d.to_dict()["objects"][0]["closure"]["cone"] == "(0)"

    def test_p2_shape(self, p2):
        d = boundary_diagram(p2)
        assert len(d.objects) == 6
        assert len(d.arrows) == 6
        assert d.base_fan == p2

    def test_p3_arrow_count(self, p3):
        assert len(boundary_diagram(p3).arrows) == 36

    def test_hasse_drops_composites(self, p3):
        d = boundary_diagram(p3)
        assert d.hasse().number_of_edges() == 24
        assert d.hasse().number_of_nodes() == 14

    def test_coherent(self, p2, p3, f1):
        for f in (p2, p3, f1):
            assert check_arrow_coherence(boundary_diagram(f)) == []

    def test_missing_composite_is_reported(self, p3):
        d = boundary_diagram(p3)
        del d.arrows[("(0)", "(0,1,2)")]
        problems = check_arrow_coherence(d)
        assert problems
        assert all("no direct arrow" in p for p in problems)

    def test_negated_arrow_map_breaks_cone_transport(self, p3):
        d = negate_arrow(boundary_diagram(p3), ("(0)", "(0,1)"))
        problems = check_arrow_coherence(d)
        assert problems
        assert any(p.startswith("(0)->(0,1)->") and "transported cone" in p for p in problems)

    def test_arrow_map_must_induce_fan_iso(self, p2):
        d = boundary_diagram(p2)
        arrow = d.arrows[("(0)", "(0,1)")]
        d.arrows[arrow.key] = replace(arrow, cone=ZERO_CONE)
        assert "(0)->(0,1): lattice map does not induce a fan isomorphism" in check_arrow_coherence(d)

    def test_trivial_fan_has_no_boundary(self, trivial):
        with pytest.raises(DiagramError):
            boundary_diagram(trivial)


class TestOrbitIntersection:
    def test_adjacent_rays(self, p2):
        assert orbit_intersection(boundary_diagram(p2), "(0)", "(1)") == "(0,1)"

    def test_nested(self, p2):
        assert orbit_intersection(boundary_diagram(p2), "(0)", "(0,2)") == "(0,2)"

    def test_disjoint(self, p1xp1):
        assert orbit_intersection(boundary_diagram(p1xp1), "(0)", "(2)") is None

    def test_join_without_base_fan(self, p2):
        d = fanifold_bside(sphere_fanifold(p2))
        assert d.base_fan is None
        assert orbit_intersection(d, "s0", "s2") == "s0_2"
        assert orbit_intersection(d, "s0_1", "s1_2") is None

    def test_unknown_object(self, p2):
        with pytest.raises(DiagramError):
            orbit_intersection(boundary_diagram(p2), "(0)", "(7)")


class TestMatching:
    def test_bside_matches_boundary(self, p2):
        report = match_bside(fanifold_bside(sphere_fanifold(p2)), boundary_diagram(p2))
        assert report.passed, [str(c) for c in report.failing()]
        assert report.poset_iso["s0_2"] == "(0,2)"
        assert sum(m.matched for m in report.object_matches) == 6

    def test_bside_cardinality(self, p2, p1xp1):
        report = match_bside(fanifold_bside(sphere_fanifold(p2)), boundary_diagram(p1xp1))
        assert not report.passed
        assert [c.name for c in report.failing()] == ["cardinality"]

    def test_relabeled_diagram_is_found_by_search(self, p2):
        d = boundary_diagram(p2)
        stripped = fanifold_bside(sphere_fanifold(p2))
        for key, obj in list(stripped.objects.items()):
            stripped.objects[key] = type(obj)(key=key, fan=obj.fan, anchor=None)
        report = match_bside(stripped, d)
        assert report.passed

    def test_negated_arrow_map_does_not_match(self, p3):
        original = boundary_diagram(p3)
        corrupted = negate_arrow(boundary_diagram(p3), ("(0)", "(0,1)"))
        report = match_bside(original, corrupted)
        assert not report.passed
        assert [c.name for c in report.failing()] == ["objects"]
        assert any(not m.matched for m in report.object_matches)

    def test_arrow_maps_of_matched_objects_commute(self, p3):
        a, b = fanifold_bside(sphere_fanifold(p3)), boundary_diagram(p3)
        report = match_bside(a, b)
        assert report.passed
        isos = {m.source: m.iso for m in report.object_matches}
        for (lower, upper), arrow in a.arrows.items():
            target = b.arrows[(report.poset_iso[lower], report.poset_iso[upper])]
            if arrow.lattice_map.target_rank:
                left = isos[upper].lattice_iso * arrow.lattice_map.projection
                assert left == target.lattice_map.projection * isos[lower].lattice_iso

    def test_hms(self, p2, p3):
        for f in (p2, p3):
            F = sphere_fanifold(f)
            report = match_hms(nerve(barycentric_cover(F), F), boundary_diagram(f))
            assert report.passed, (f.name, [str(c) for c in report.failing()])

    def test_hms_cardinality(self, p2, p1xp1):
        F = sphere_fanifold(p2)
        report = match_hms(nerve(barycentric_cover(F), F), boundary_diagram(p1xp1))
        assert [c.name for c in report.failing()] == ["cardinality"]

    def test_match_report_serializes_iso(self, p2):
        data = match_bside(fanifold_bside(sphere_fanifold(p2)), boundary_diagram(p2)).to_dict()
        assert data["body"]["poset_iso"]["s0"] == "(0)"
        assert len(data["body"]["object_matches"]) == 6


class TestVerify:
    def test_lift(self, p2, p1xp1):
        for f in (p2, p1xp1):
            assert check_lift(f).passed, f.name

    def test_lift_clauses_in_rank_three(self, p3):
        report = check_lift(p3)
        assert report.passed, [str(c) for c in report.failing()]
        assert report.body == {"regions": 4, "pieces": 14}

    def test_lift_notices_swapped_arrow_cones(self, p2, monkeypatch):
        def swapped(f, name=None):
            F = sphere_fanifold(f, name)
            a, b = F.arrows[("s0", "s0_1")], F.arrows[("s0", "s0_2")]
            F.arrows[a.key] = replace(a, cone=b.cone)
            F.arrows[b.key] = replace(b, cone=a.cone)
            return F

        monkeypatch.setattr(mirror, "sphere_fanifold", swapped)
        report = check_lift(p2)
        assert not report.clause("regions").passed
        assert report.clause("ray_cover").passed

    def test_p2_end_to_end(self, p2):
        report = verify_mirror(p2)
        assert report.passed, [str(c) for c in report.failing()]
        assert report.body["nerve"] == {"0": 3, "1": 3}
        assert report.body["diagram"]["objects"] == 6
        assert report.body["matched_objects"] == 6
        assert report.body["matched_simplices"] == 6

    def test_clause_namespaces(self, p1xp1):
        report = verify_mirror(p1xp1)
        names = {c.name.split(".")[0] for c in report.clauses}
        assert names == {"fanifold", "boundary", "bside", "hms", "lift"}
        assert report.clause("bside.poset").passed
        with pytest.raises(KeyError):
            report.clause("poset")

    def test_jobs_do_not_change_the_report(self, f1):
        assert verify_mirror(f1, jobs=1).to_dict() == verify_mirror(f1, jobs=3).to_dict()
