"""
Tests for cones, fans, quotients and fan isomorphisms
"""

import itertools

import pytest
from sympy import ImmutableMatrix, eye

from core.fans import (
    build_fan,
    cone_contains,
    ensure_valid_fan,
    face_poset,
    fan_isomorphic,
    induced_fan_iso,
    is_complete,
    iter_fan_isomorphisms,
    quotient_composition_iso,
    quotient_fan,
    star,
    validate_fan,
    wedge,
)
from models.fan import ZERO_CONE, Cone, Fan
from models.lattice import matrix_rows
from utils.exceptions import ConeNotInFanError, FanValidationError, IsomorphismSearchError


def kinds(f):
    return {v.kind for v in validate_fan(f)}


class TestValidation:
    def test_standard_fans_are_valid(self, p1, p2, p1xp1, f1, p3, a2, a3):
        for f in (p1, p2, p1xp1, f1, p3, a2, a3):
            assert validate_fan(f) == [], f.name

    def test_trivial_fan_is_valid(self, trivial):
        assert validate_fan(trivial) == []
        assert trivial.cones == frozenset({ZERO_CONE})

    def test_intersection_violation_names_both_cones(self):
        f = build_fan(2, [(1, 0), (0, 1), (1, 1)], [[0, 1], [2]])
        violations = validate_fan(f)
        assert [v.kind for v in violations] == ["intersection"]
        assert set(violations[0].witnesses) == {"(0,1)", "(2)"}

    def test_duplicate_ray(self):
        f = build_fan(2, [(1, 0), (0, 1), (1, 0)], [[0, 1], [1, 2]])
        violations = [v for v in validate_fan(f) if v.kind == "duplicate_ray"]
        assert violations and violations[0].witnesses == ("ray 0", "ray 2")

    def test_non_primitive_ray(self):
        assert "non_primitive_ray" in kinds(build_fan(1, [(2,)], [[0]]))

    def test_missing_face(self):
        f = Fan(rank=2, rays=((1, 0), (0, 1)), cones=frozenset({ZERO_CONE, Cone((0, 1))}))
        assert "missing_face" in kinds(f)

    def test_dependent_rays(self):
        assert "dependent_rays" in kinds(build_fan(2, [(1, 0), (-1, 0)], [[0, 1]]))

    def test_unused_ray(self):
        assert "unused_ray" in kinds(build_fan(1, [(1,), (-1,)], [[0]]))

    def test_bad_ray_length(self):
        assert "bad_ray_length" in kinds(build_fan(2, [(1, 0, 0)], [[0]]))

    def test_ensure_valid_fan_raises_with_violations(self):
        with pytest.raises(FanValidationError) as exc_info:
            ensure_valid_fan(build_fan(2, [(1, 0), (0, 1), (1, 0)], [[0, 1], [2]]))
        assert any(v.kind == "duplicate_ray" for v in exc_info.value.violations)


class TestFaceClosure:
    def test_p2_has_seven_cones(self, p2):
        assert len(p2.cones) == 7
        assert len(p2.cones_of_dim(1)) == 3

    def test_maximal_cones(self, p2, a2):
        assert [c.ray_indices for c in p2.maximal_cones()] == [(0, 1), (0, 2), (1, 2)]
        assert a2.maximal_cones() == [Cone((0, 1))]


class TestFacePoset:
    def test_p1(self, p1):
        poset = face_poset(p1)
        assert poset.number_of_nodes() == 3
        assert set(poset.successors(ZERO_CONE)) == {Cone((0,)), Cone((1,))}

    def test_trivial(self, trivial):
        poset = face_poset(trivial)
        assert list(poset.nodes) == [ZERO_CONE]
        assert poset.number_of_edges() == 0

    def test_p2(self, p2):
        poset = face_poset(p2)
        assert poset.number_of_nodes() == 7
        assert poset.number_of_edges() == 9
        for ray in p2.cones_of_dim(1):
            assert poset.out_degree(ray) == 2
        assert [n for n in poset.nodes if poset.in_degree(n) == 0] == [ZERO_CONE]


class TestStarAndWedge:
    def test_star_of_zero_cone(self, p2):
        assert set(star(p2, ZERO_CONE)) == set(p2.cones)

    def test_star_of_ray(self, p2):
        assert set(star(p2, Cone((0,)))) == {Cone((0,)), Cone((0, 1)), Cone((0, 2))}

    def test_star_of_top_cone(self, p2):
        assert star(p2, Cone((1, 2))) == [Cone((1, 2))]

    def test_star_rejects_foreign_cone(self, p1xp1):
        with pytest.raises(ConeNotInFanError):
            star(p1xp1, Cone((0, 2)))

    def test_wedge(self, p2, p1xp1):
        sigma = Cone((0,))
        assert wedge(p2, sigma, sigma) == sigma
        assert wedge(p2, Cone((0,)), Cone((1,))) == Cone((0, 1))
        assert wedge(p1xp1, Cone((0,)), Cone((2,))) is None


WEDGE_FANS = ["p1", "p2", "p1xp1", "f1", "p3", "a2", "a3"]


class TestWedgeLaws:
    @pytest.mark.parametrize("name", WEDGE_FANS)
    def test_exists_iff_stars_meet(self, request, name):
        f = request.getfixturevalue(name)
        for s1, s2 in itertools.product(f.sorted_cones(), repeat=2):
            common = set(star(f, s1)) & set(star(f, s2))
            joined = wedge(f, s1, s2)
            assert (joined is not None) == bool(common), (s1.label, s2.label)
            if joined is not None:
                assert joined in common
                assert all(joined.is_face_of(tau) for tau in common)

    @pytest.mark.parametrize("name", WEDGE_FANS)
    def test_monotone(self, request, name):
        f = request.getfixturevalue(name)
        for t1, t2 in itertools.combinations_with_replacement(f.sorted_cones(), 2):
            upper = wedge(f, t1, t2)
            if upper is None:
                continue
            for s1 in (c for c in f.cones if c.is_face_of(t1)):
                for s2 in (c for c in f.cones if c.is_face_of(t2)):
                    lower = wedge(f, s1, s2)
                    assert lower is not None and lower.is_face_of(upper), (s1.label, s2.label)

    def test_commutative_and_idempotent(self, p3):
        for s1, s2 in itertools.product(p3.sorted_cones(), repeat=2):
            assert wedge(p3, s1, s2) == wedge(p3, s2, s1)
        assert all(wedge(p3, s, s) == s for s in p3.cones)


class TestQuotientFan:
    def test_quotient_by_zero_cone_is_identity(self, p2):
        qf = quotient_fan(p2, ZERO_CONE)
        assert qf.g == p2
        assert qf.q.projection == ImmutableMatrix(eye(2))

    def test_p2_by_ray_is_p1(self, p2, p1):
        qf = quotient_fan(p2, Cone((0,)))
        assert qf.g.rank == 1
        assert qf.g == p1
        assert qf.cone_map[Cone((0, 1))] == Cone((0,))
        assert qf.cone_map[Cone((0, 2))] == Cone((1,))
        assert qf.cone_map[Cone((0,))] == ZERO_CONE
        assert validate_fan(qf.g) == []

    def test_affine_by_top_cone_is_trivial(self, a2):
        qf = quotient_fan(a2, Cone((0, 1)))
        assert qf.g.rank == 0
        assert qf.g.cones == frozenset({ZERO_CONE})

    def test_preimage(self, p2):
        qf = quotient_fan(p2, Cone((0,)))
        assert qf.preimage(Cone((0,))) == Cone((0, 1))
        assert qf.preimage(ZERO_CONE) == Cone((0,))

    def test_rays_are_primitive(self):
        f = build_fan(2, [(1, 0), (1, 2), (-1, 0), (0, -1)], [[0, 1], [1, 2], [2, 3], [0, 3]])
        qf = quotient_fan(f, Cone((0,)))
        assert set(qf.g.rays) == {(1,), (-1,)}

    def test_quotient_of_complete_is_complete(self, p3):
        for sigma in p3.nonzero_cones():
            assert is_complete(quotient_fan(p3, sigma).g)

    def test_composition_iso(self, p3):
        iso = quotient_composition_iso(p3, Cone((0,)), Cone((0, 1)))
        assert iso is not None

    def test_star_poset_matches_quotient_poset(self, p2):
        qf = quotient_fan(p2, Cone((0,)))
        for tau in star(p2, Cone((0,))):
            for upsilon in star(p2, Cone((0,))):
                assert tau.is_face_of(upsilon) == qf.cone_map[tau].is_face_of(qf.cone_map[upsilon])


class TestCompleteness:
    def test_complete_fans(self, p1, p2, p1xp1, f1, p3):
        for f in (p1, p2, p1xp1, f1, p3):
            assert is_complete(f), f.name

    def test_affine_plane_is_not_complete(self, a2):
        assert not is_complete(a2)

    def test_rank_zero_is_complete(self, trivial):
        assert is_complete(trivial)

    def test_half_plane_is_not_complete(self):
        f = build_fan(2, [(1, 0), (0, 1), (-1, 0)], [[0, 1], [1, 2]])
        assert not is_complete(f)

    def test_cone_membership(self, p2):
        assert cone_contains(p2, Cone((0, 1)), (2, 3))
        assert not cone_contains(p2, Cone((0, 1)), (-1, 0))
        assert cone_contains(p2, Cone((0,)), (5, 0))
        assert not cone_contains(p2, Cone((0,)), (5, 1))


class TestIsomorphisms:
    def test_identity(self, p2):
        iso = fan_isomorphic(p2, p2)
        assert iso.lattice_iso == ImmutableMatrix(eye(2))
        assert iso.ray_bijection == (0, 1, 2)

    def test_relabeled_p1(self, p1):
        reversed_p1 = build_fan(1, [(-1,), (1,)], [[0], [1]])
        iso = fan_isomorphic(p1, reversed_p1)
        assert iso is not None
        assert iso.ray_bijection == (1, 0) or matrix_rows(iso.lattice_iso) == [[-1]]

    def test_quotient_is_p1(self, p2, p1):
        assert fan_isomorphic(quotient_fan(p2, Cone((1,))).g, p1) is not None

    def test_different_fans(self, p2, p1xp1, f1):
        assert fan_isomorphic(p2, p1xp1) is None
        assert fan_isomorphic(p1xp1, f1) is None

    def test_automorphism_counts(self, p2, p1xp1):
        assert len(list(iter_fan_isomorphisms(p2, p2))) == 6
        assert len(list(iter_fan_isomorphisms(p1xp1, p1xp1))) == 8

    def test_non_standard_basis(self):
        sheared = build_fan(2, [(1, 0), (1, 1), (-2, -1)], [[0, 1], [1, 2], [0, 2]])
        from core.corpus import p2

        assert fan_isomorphic(sheared, p2()) is not None

    def test_verify_supplied_iso(self, p1):
        flip = induced_fan_iso(p1, p1, ImmutableMatrix([[-1]]))
        assert flip.ray_bijection == (1, 0)
        assert fan_isomorphic(p1, p1, via=flip) is flip

    def test_induced_iso_rejects_non_maps(self, p2, p1xp1):
        assert induced_fan_iso(p2, p2, ImmutableMatrix([[2, 0], [0, 1]])) is None
        assert induced_fan_iso(p2, p1xp1, ImmutableMatrix(eye(2))) is None

    def test_search_limits(self, p2):
        with pytest.raises(IsomorphismSearchError):
            list(iter_fan_isomorphisms(p2, p2, max_rank=1))
