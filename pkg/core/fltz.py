"""
FLTZ skeleton L(Σ), the strata of its boundary at infinity and the open cover
of that boundary by the pieces L(Σ/σ) × ∂∞σ

The boundary is modeled by pairs (σ, τ) with 0 ≠ σ ⊆ τ: a direction at
infinity in the relative interior of σ together with a torus coordinate in τ^⊥.
The piece indexed by σ holds exactly the pairs whose direction cone contains σ.
"""

import itertools
from typing import Dict, List, Tuple

from core.fans import build_fan, quotient_composition_iso, quotient_fan, star
from core.lattice import hnf_basis, perp_lattice
from models.fan import Cone, Fan
from models.fltz import BoundaryStratum, CoverPiece, FltzStratum, PantsPiece
from models.lattice import int_matrix, matrix_rows
from models.report import Report
from utils.concurrency import ordered_map
from utils.logger import get_logger

logger = get_logger(__name__)


def fltz_strata(f: Fan) -> List[FltzStratum]:
    """
    One stratum σ^⊥ × σ per cone of f, the zero cone included

    The dimension is computed from the perp rank and the cone dimension, so
    every stratum of a simplicial fan comes out half-dimensional.
    """
    strata = []
    for cone in f.sorted_cones():
        perp = perp_lattice(f.rank, f.generators(cone))
        strata.append(FltzStratum(cone=cone, perp=perp, dim=perp.rank + cone.dim))
    return strata


def boundary_strata(f: Fan) -> List[BoundaryStratum]:
    """All pairs (σ, τ) with 0 ≠ σ ⊆ τ, dim = (rank − dim τ) + (dim σ − 1)"""
    strata = []
    for sigma in f.nonzero_cones():
        for tau in star(f, sigma):
            strata.append(BoundaryStratum(
                direction_cone=sigma,
                ambient_cone=tau,
                dim=(f.rank - tau.dim) + (sigma.dim - 1),
            ))
    return sorted(strata, key=lambda b: b.sort_key)


def cover_pieces(f: Fan, jobs: int = 1) -> List[CoverPiece]:
    """
    The cover of ∂∞L(Σ), one piece per nonzero cone

    Args:
        f: Valid fan
        jobs: Worker threads for the per-cone quotients

    Returns:
        Pieces in cone order; a fan with only the zero cone yields none
    """
    strata = boundary_strata(f)

    def build(sigma: Cone) -> CoverPiece:
        members = frozenset(b for b in strata if sigma.is_face_of(b.direction_cone))
        return CoverPiece(index_cone=sigma, fiber=quotient_fan(f, sigma), members=members)

    pieces = ordered_map(build, f.nonzero_cones(), jobs)
    logger.debug(f"Built {len(pieces)} cover pieces for {f.name or 'fan'}")
    return pieces


def coverage_multiplicity(pieces: List[CoverPiece], stratum: BoundaryStratum) -> int:
    """Number of pieces containing the stratum"""
    return sum(1 for p in pieces if stratum in p.members)


def _pulled_back_perp(f: Fan, sigma: Cone, tau: Cone):
    # (τ/⟨σ⟩)^⊥ in the dual of M/⟨σ⟩, pulled back along y ↦ y · P
    qf = quotient_fan(f, sigma)
    image = qf.cone_map[tau]
    perp_bar = perp_lattice(qf.g.rank, qf.g.generators(image)).basis
    if perp_bar.rows == 0:
        return int_matrix([], f.rank)
    return hnf_basis(perp_bar * qf.q.projection)


def check_cover(f: Fan, jobs: int = 1) -> Report:
    """
    Verify the cover laws of ∂∞L(Σ)

    Clauses: coverage (with the multiplicity law), anti-indexing in both
    directions, perp stability across quotients and the quotient-inclusion
    fan data.

    Args:
        f: Valid fan
        jobs: Worker threads for independent pair checks

    Returns:
        Report; a fan with only the zero cone passes vacuously
    """
    report = Report(command="fltz cover-check")
    strata = boundary_strata(f)
    pieces = cover_pieces(f, jobs)
    by_cone = {p.index_cone: p for p in pieces}

    uncovered = []
    wrong_multiplicity = []
    multiplicities: Dict[str, int] = {}
    for b in strata:
        count = coverage_multiplicity(pieces, b)
        multiplicities[b.label] = count
        if count == 0:
            uncovered.append(b.label)
        expected = 2 ** b.direction_cone.dim - 1
        if count != expected:
            wrong_multiplicity.append(f"{b.label}: {count} pieces, expected {expected}")
    report.add_witnessed("coverage", uncovered, f"{len(strata)} strata in {len(pieces)} pieces")
    report.add_witnessed("multiplicity", wrong_multiplicity)

    anti = []
    for s1, s2 in itertools.product(by_cone, repeat=2):
        contained = by_cone[s2].members <= by_cone[s1].members
        if contained != s1.is_face_of(s2):
            anti.append(f"members{s2.label} ⊆ members{s1.label} is {contained}, {s1.label} ⊆ {s2.label} is {s1.is_face_of(s2)}")
    report.add_witnessed("anti_indexing", anti)

    pairs: List[Tuple[Cone, Cone]] = [
        (sigma, tau) for sigma in f.sorted_cones() for tau in star(f, sigma)
    ]

    def perp_ok(pair: Tuple[Cone, Cone]) -> bool:
        sigma, tau = pair
        direct = perp_lattice(f.rank, f.generators(tau)).basis
        return matrix_rows(_pulled_back_perp(f, sigma, tau)) == matrix_rows(direct)

    perp_results = ordered_map(perp_ok, pairs, jobs)
    report.add_witnessed(
        "perp_stability",
        [f"{s.label} ⊆ {t.label}" for (s, t), ok in zip(pairs, perp_results) if not ok],
        f"{len(pairs)} pairs",
    )

    inclusion_results = ordered_map(lambda p: quotient_composition_iso(f, p[0], p[1]) is not None, pairs, jobs)
    report.add_witnessed(
        "open_inclusion",
        [f"{s.label} ⊆ {t.label}" for (s, t), ok in zip(pairs, inclusion_results) if not ok],
        f"{len(pairs)} pairs",
    )

    report.body = {
        "fan": f.to_dict(),
        "boundary_strata": len(strata),
        "pieces": [
            {"index_cone": p.index_cone.label, "members": len(p.members), "fiber_rank": p.fiber_fan.rank}
            for p in pieces
        ],
        "multiplicities": multiplicities,
    }
    if not report.passed:
        logger.warning(f"Cover check failed for {f.name or 'fan'}: {[c.name for c in report.failing()]}")
    return report


def pants_decomposition(f: Fan) -> List[PantsPiece]:
    """
    One local affine piece per nonzero maximal cone

    Each piece carries the affine fan spanned by the maximal cone (rays
    renumbered in order) and the boundary strata (σ, τ) with τ inside it.
    """
    strata = boundary_strata(f)
    pieces = []
    for top in f.maximal_cones():
        if top.is_zero:
            continue
        local_name = f"{f.name}|{top.label}" if f.name else None
        local = build_fan(f.rank, [f.rays[i] for i in top.ray_indices], [range(top.dim)], local_name)
        members = frozenset(b for b in strata if b.ambient_cone.is_face_of(top))
        pieces.append(PantsPiece(maximal_cone=top, local_fan=local, members=members))
    return pieces


def check_pants(f: Fan) -> Report:
    """
    Check that the pants pieces cover the boundary and match their own affine models

    Returns:
        Report with clauses coverage and local_models
    """
    report = Report(command="fltz pants")
    strata = boundary_strata(f)
    pieces = pants_decomposition(f)

    covered = set()
    for piece in pieces:
        covered |= piece.members
    report.add_witnessed("coverage", [b.label for b in strata if b not in covered])

    mismatched = []
    for piece in pieces:
        relabel = piece.maximal_cone.ray_indices
        local = {
            (Cone.of(relabel[i] for i in b.direction_cone.ray_indices),
             Cone.of(relabel[i] for i in b.ambient_cone.ray_indices))
            for b in boundary_strata(piece.local_fan)
        }
        members = {(b.direction_cone, b.ambient_cone) for b in piece.members}
        if local != members:
            mismatched.append(piece.maximal_cone.label)
    report.add_witnessed("local_models", mismatched, f"{len(pieces)} pieces")

    report.body = {"fan": f.to_dict(), "pieces": [p.to_dict() for p in pieces]}
    return report
