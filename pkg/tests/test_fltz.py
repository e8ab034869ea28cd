"""
Tests for the FLTZ skeleton, its boundary strata and the boundary cover
"""

from core.fltz import (
    boundary_strata,
    check_cover,
    check_pants,
    cover_pieces,
    coverage_multiplicity,
    fltz_strata,
    pants_decomposition,
)
from models.fan import ZERO_CONE, Cone
from tests.oracles import nonzero_faces


class TestStrata:
    def test_every_stratum_is_half_dimensional(self, p2, p3, a3):
        for f in (p2, p3, a3):
            assert all(s.dim == f.rank for s in fltz_strata(f)), f.name

    def test_zero_cone_has_full_perp(self, p2):
        first = fltz_strata(p2)[0]
        assert first.cone == ZERO_CONE
        assert first.perp.rank == 2

    def test_top_cone_has_trivial_perp(self, p2):
        top = [s for s in fltz_strata(p2) if s.cone == Cone((0, 1))][0]
        assert top.perp.rank == 0

    def test_trivial_fan(self, trivial):
        strata = fltz_strata(trivial)
        assert len(strata) == 1 and strata[0].dim == 0


class TestBoundaryStrata:
    def test_p2_count(self, p2):
        assert len(boundary_strata(p2)) == 12

    def test_affine_plane_count(self, a2):
        assert len(boundary_strata(a2)) == 5

    def test_direction_inside_ambient(self, p3):
        for b in boundary_strata(p3):
            assert not b.direction_cone.is_zero
            assert b.direction_cone.is_face_of(b.ambient_cone)

    def test_dimensions(self, p2):
        dims = {b.label: b.dim for b in boundary_strata(p2)}
        assert dims["(0)|(0)"] == 1
        assert dims["(0)|(0,1)"] == 0
        assert dims["(0,1)|(0,1)"] == 1

    def test_trivial_fan_has_empty_boundary(self, trivial):
        assert boundary_strata(trivial) == []
        assert cover_pieces(trivial) == []


class TestCover:
    def test_piece_sizes(self, p2):
        sizes = {p.index_cone: len(p.members) for p in cover_pieces(p2)}
        assert len(sizes) == 6
        assert sizes[Cone((0,))] == 5
        assert sizes[Cone((0, 1))] == 1

    def test_fiber_is_quotient(self, p2, p1):
        piece = [p for p in cover_pieces(p2) if p.index_cone == Cone((2,))][0]
        assert piece.fiber_fan.rank == 1
        assert piece.fiber.sigma == Cone((2,))

    def test_multiplicity_counts_nonzero_faces(self, p3):
        pieces = cover_pieces(p3)
        for b in boundary_strata(p3):
            assert coverage_multiplicity(pieces, b) == nonzero_faces(p3, b.direction_cone)

    def test_jobs_do_not_change_pieces(self, p3):
        assert cover_pieces(p3, jobs=1) == cover_pieces(p3, jobs=4)

    def test_check_cover_passes(self, p2, p1xp1, a2):
        for f in (p2, p1xp1, a2):
            report = check_cover(f)
            assert report.passed, [str(c) for c in report.failing()]
            assert {c.name for c in report.clauses} == {
                "coverage", "multiplicity", "anti_indexing", "perp_stability", "open_inclusion",
            }

    def test_check_cover_trivial_is_vacuous(self, trivial):
        report = check_cover(trivial)
        assert report.passed
        assert report.body["boundary_strata"] == 0

    def test_check_cover_body(self, p2):
        body = check_cover(p2).body
        assert body["boundary_strata"] == 12
        assert body["multiplicities"]["(0,1)|(0,1)"] == 3


class TestPants:
    def test_one_piece_per_maximal_cone(self, p2):
        pieces = pants_decomposition(p2)
        assert [p.maximal_cone for p in pieces] == p2.maximal_cones()
        assert all(p.local_fan.rank == 2 for p in pieces)

    def test_check_pants(self, p2, p3, a2):
        for f in (p2, p3, a2):
            report = check_pants(f)
            assert report.passed, f.name

    def test_affine_is_a_single_piece(self, a2):
        pieces = pants_decomposition(a2)
        assert len(pieces) == 1
        assert len(pieces[0].members) == 5
