"""
Tests for fanifold validation, sphere fanifolds, filtrations and the cover nerve
"""

import dataclasses

import pytest

from core.fanifold import (
    barycentric_cover,
    filtration,
    nerve,
    replay_schedule,
    sphere_fanifold,
    stratum_id,
    sub_fanifold,
    validate_fanifold,
)
from models.fan import Cone
from services.fanifold_document import FanifoldDocumentCodec
from utils.exceptions import CoverConstructionError, FanifoldError


@pytest.fixture
def load(corpus_dir):
    codec = FanifoldDocumentCodec()

    def _load(name):
        return codec.load_fanifold(corpus_dir / name)

    return _load


def failing_names(report):
    return [c.name for c in report.failing()]


class TestValidation:
    def test_corner_is_valid(self, load):
        F = load("corner.fanifold")
        report = validate_fanifold(F)
        assert report.passed, [str(c) for c in report.failing()]
        assert report.body["strata"] == 4
        assert report.body["arrows"] == 5

    def test_corrupted_arrow_fails_only_arrows(self, load):
        report = validate_fanifold(load("corrupted_arrow.fanifold"))
        assert failing_names(report) == ["arrows"]
        assert "P->A: projection is not surjective" in report.failing()[0].witnesses

    def test_vertex_on_line_is_valid(self, load):
        assert validate_fanifold(load("vertex_on_line.fanifold")).passed

    def test_dimension_mismatch(self, load):
        F = load("corner.fanifold")
        F.strata["C"] = dataclasses.replace(F.strata["C"], dim=1)
        assert "dimensions" in failing_names(validate_fanifold(F))

    def test_missing_exit_arrow(self, load):
        F = load("corner.fanifold")
        del F.arrows[("P", "B")]
        failing = failing_names(validate_fanifold(F))
        assert "exit_posets" in failing

    def test_missing_direct_arrow_breaks_composition(self, load):
        F = load("corner.fanifold")
        del F.arrows[("P", "C")]
        assert "composition" in failing_names(validate_fanifold(F))

    def test_jobs_give_identical_reports(self, p3):
        F = sphere_fanifold(p3)
        assert validate_fanifold(F, jobs=1).to_dict() == validate_fanifold(F, jobs=4).to_dict()


class TestSphere:
    def test_p2_shape(self, p2):
        F = sphere_fanifold(p2)
        assert F.dim == 1
        assert sorted(F.strata) == ["s0", "s0_1", "s0_2", "s1", "s1_2", "s2"]
        assert len(F.arrows) == 6
        assert F.closed

    def test_stratum_data(self, p2, p1):
        F = sphere_fanifold(p2)
        s0 = F.stratum("s0")
        assert s0.dim == 0 and s0.lattice_rank == 1 and s0.is_closed
        assert s0.normal_fan == p1
        top = F.stratum("s0_1")
        assert top.dim == 1 and top.lattice_rank == 0 and not top.is_closed

    def test_arrow_cone_is_image_in_quotient(self, p2):
        arrow = sphere_fanifold(p2).arrows[("s0", "s0_2")]
        assert arrow.cone == Cone((1,))

    def test_sphere_validates(self, p2, p1xp1, f1, p3):
        for f in (p2, p1xp1, f1, p3):
            report = validate_fanifold(sphere_fanifold(f))
            assert report.passed, (f.name, [str(c) for c in report.failing()])

    def test_p1_sphere_is_two_points(self, p1):
        F = sphere_fanifold(p1)
        assert F.dim == 0
        assert sorted(F.strata) == ["s0", "s1"]
        assert F.arrows == {}
        assert validate_fanifold(F).passed

    def test_incomplete_fan_is_rejected(self, a2):
        with pytest.raises(FanifoldError):
            sphere_fanifold(a2)

    def test_rank_zero_is_rejected(self, trivial):
        with pytest.raises(FanifoldError):
            sphere_fanifold(trivial)

    def test_stratum_id(self):
        assert stratum_id(Cone((0, 2))) == "s0_2"

    def test_unknown_stratum(self, p2):
        with pytest.raises(FanifoldError):
            sphere_fanifold(p2).stratum("s9")


class TestFiltration:
    def test_p2_levels(self, p2):
        filt = filtration(sphere_fanifold(p2))
        assert [len(level.strata) for level in filt.levels] == [3, 6]
        assert [r.stratum_id for r in filt.batch(0)] == ["s0", "s1", "s2"]

    def test_levels_are_nested(self, p3):
        levels = filtration(sphere_fanifold(p3)).levels
        for smaller, larger in zip(levels, levels[1:]):
            assert set(smaller.strata) <= set(larger.strata)
            assert set(smaller.arrows) <= set(larger.arrows)

    def test_replay_reconstructs(self, p3, load):
        for F in (sphere_fanifold(p3), load("corner.fanifold")):
            strata, arrows = replay_schedule(filtration(F).schedule)
            assert strata == set(F.strata)
            assert arrows == set(F.arrows)

    def test_corner(self, load):
        filt = filtration(load("corner.fanifold"))
        assert [len(level.strata) for level in filt.levels] == [1, 3, 4]
        record = [r for r in filt.schedule if r.stratum_id == "C"][0]
        assert sorted(a.source for a in record.gluing) == ["A", "B", "P"]

    def test_sub_fanifold_restricts_arrows(self, p2):
        sub = sub_fanifold(sphere_fanifold(p2), ["s0", "s0_1"])
        assert list(sub.arrows) == [("s0", "s0_1")]

    def test_sub_fanifold_rejects_unknown(self, p2):
        with pytest.raises(FanifoldError):
            sub_fanifold(sphere_fanifold(p2), ["s7"])


class TestNerve:
    def test_p2(self, p2):
        F = sphere_fanifold(p2)
        nv = nerve(barycentric_cover(F), F)
        assert len(nv.of_dim(0)) == 3
        assert len(nv.of_dim(1)) == 3
        assert nv.of_dim(2) == []

    def test_edge_label(self, p2, p1):
        F = sphere_fanifold(p2)
        nv = nerve(barycentric_cover(F), F)
        edge = nv.simplex(["s1", "s0"])
        assert edge.minimal_strata == ("s0_1",)
        assert edge.anchor == Cone((0, 1))
        vertex = nv.simplex(["s0"])
        assert vertex.minimal_strata == ("s0",)
        assert vertex.fan == p1

    def test_p3(self, p3):
        F = sphere_fanifold(p3)
        nv = nerve(barycentric_cover(F), F)
        assert [len(nv.of_dim(k)) for k in range(4)] == [4, 6, 4, 0]

    def test_region_flags_start_at_vertex(self, p2):
        F = sphere_fanifold(p2)
        regions = barycentric_cover(F)
        assert [r.vertex for r in regions] == ["s0", "s1", "s2"]
        assert regions[0].flags == (("s0",), ("s0", "s0_1"), ("s0", "s0_2"))

    def test_not_closed(self, load):
        with pytest.raises(CoverConstructionError):
            barycentric_cover(load("vertex_on_line.fanifold"))

    def test_no_vertices(self, p1xp1):
        F = sub_fanifold(sphere_fanifold(p1xp1), ["s0_1"])
        with pytest.raises(CoverConstructionError):
            barycentric_cover(F)

    def test_stratum_away_from_vertices(self, p2):
        F = sub_fanifold(sphere_fanifold(p2), ["s0", "s1_2"])
        with pytest.raises(CoverConstructionError):
            barycentric_cover(F)

    def test_unknown_simplex(self, p2):
        F = sphere_fanifold(p2)
        with pytest.raises(FanifoldError):
            nerve(barycentric_cover(F), F).simplex(["s0", "s1", "s2"])
