"""
FLTZ skeleton data models
"""

from dataclasses import dataclass
from typing import FrozenSet, Tuple

from models.fan import Cone, Fan, QuotientFan
from models.lattice import PerpLattice


@dataclass(frozen=True)
class FltzStratum:
    """The piece σ^⊥ × σ of L(Σ) for one cone σ"""

    cone: Cone
    perp: PerpLattice
    dim: int

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization"""
        return {"cone": self.cone.label, "dim": self.dim, "perp": self.perp.to_dict()}


@dataclass(frozen=True)
class BoundaryStratum:
    """
    Stratum of ∂∞L(Σ): direction at infinity in relint σ, torus coordinate in τ^⊥

    direction_cone is σ (nonzero), ambient_cone is τ ⊇ σ.
    """

    direction_cone: Cone
    ambient_cone: Cone
    dim: int

    @property
    def sort_key(self) -> Tuple:
        return (self.direction_cone.sort_key, self.ambient_cone.sort_key)

    @property
    def label(self) -> str:
        return f"{self.direction_cone.label}|{self.ambient_cone.label}"

    def to_dict(self) -> dict:
        return {
            "direction_cone": self.direction_cone.label,
            "ambient_cone": self.ambient_cone.label,
            "dim": self.dim,
        }

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class CoverPiece:
    """Open piece L(Σ/σ) × ∂∞σ of the boundary cover, indexed by a nonzero cone"""

    index_cone: Cone
    fiber: QuotientFan
    members: FrozenSet[BoundaryStratum]

    @property
    def fiber_fan(self) -> Fan:
        return self.fiber.g

    def sorted_members(self):
        return sorted(self.members, key=lambda b: b.sort_key)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization"""
        return {
            "index_cone": self.index_cone.label,
            "fiber_fan": self.fiber_fan.to_dict(),
            "members": [b.label for b in self.sorted_members()],
        }


@dataclass(frozen=True)
class PantsPiece:
    """Local affine piece of the boundary attached to one maximal cone"""

    maximal_cone: Cone
    local_fan: Fan  # affine fan of the maximal cone, rays renumbered 0..k-1
    members: FrozenSet[BoundaryStratum]

    def to_dict(self) -> dict:
        return {
            "maximal_cone": self.maximal_cone.label,
            "local_fan": self.local_fan.to_dict(),
            "members": sorted(b.label for b in self.members),
        }
