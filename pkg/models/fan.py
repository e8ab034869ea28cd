"""
Cone and fan data models
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from sympy import ImmutableMatrix

from models.lattice import QuotientMap, int_matrix, matrix_rows
from utils.exceptions import ConeNotInFanError


@dataclass(frozen=True, order=True)
class Cone:
    """Simplicial cone identified by the sorted ray indices of its parent fan"""

    ray_indices: Tuple[int, ...]

    @classmethod
    def of(cls, indices: Iterable[int]) -> "Cone":
        return cls(tuple(sorted(set(int(i) for i in indices))))

    @property
    def dim(self) -> int:
        return len(self.ray_indices)

    @property
    def is_zero(self) -> bool:
        return not self.ray_indices

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.dim, self.ray_indices)

    @property
    def label(self) -> str:
        """Short printable id, e.g. "(0,2)" or "()" for the zero cone"""
        return "(" + ",".join(str(i) for i in self.ray_indices) + ")"

    def is_face_of(self, other: "Cone") -> bool:
        return set(self.ray_indices) <= set(other.ray_indices)

    def union(self, other: "Cone") -> "Cone":
        return Cone.of(self.ray_indices + other.ray_indices)

    def facets(self) -> List["Cone"]:
        """Codimension-one faces"""
        return [Cone(self.ray_indices[:i] + self.ray_indices[i + 1:]) for i in range(self.dim)]

    def __str__(self) -> str:
        return self.label


ZERO_CONE = Cone(())


def sort_cones(cones: Iterable[Cone]) -> List[Cone]:
    return sorted(cones, key=lambda c: c.sort_key)


@dataclass(frozen=True)
class Fan:
    """Simplicial fan: primitive rays and face-closed cones given as ray-index sets"""

    rank: int
    rays: Tuple[Tuple[int, ...], ...]
    cones: FrozenSet[Cone]
    name: Optional[str] = field(default=None, compare=False, hash=False)

    def sorted_cones(self) -> List[Cone]:
        return sort_cones(self.cones)

    def nonzero_cones(self) -> List[Cone]:
        return [c for c in self.sorted_cones() if not c.is_zero]

    def maximal_cones(self) -> List[Cone]:
        cones = self.sorted_cones()
        return [c for c in cones if not any(c != d and c.is_face_of(d) for d in cones)]

    def cones_of_dim(self, dim: int) -> List[Cone]:
        return [c for c in self.sorted_cones() if c.dim == dim]

    def require(self, cone: Cone) -> Cone:
        """Return cone if it belongs to this fan, raise otherwise"""
        if cone not in self.cones:
            raise ConeNotInFanError(cone.ray_indices, self.name)
        return cone

    def cone(self, *indices: int) -> Cone:
        return self.require(Cone.of(indices))

    def generators(self, cone: Cone) -> ImmutableMatrix:
        """Ray vectors of the cone as matrix rows"""
        return int_matrix([self.rays[i] for i in cone.ray_indices], self.rank)

    @property
    def dim(self) -> int:
        return max((c.dim for c in self.cones), default=0)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization"""
        return {
            "name": self.name,
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "maximal_cones": [list(c.ray_indices) for c in self.maximal_cones()],
            "cone_count": len(self.cones),
        }

    def __str__(self) -> str:
        name = self.name or "fan"
        return f"{name}: rank {self.rank}, {len(self.rays)} rays, {len(self.cones)} cones"


@dataclass(frozen=True)
class FanIso:
    """Isomorphism of fans: unimodular lattice map plus the induced ray bijection"""

    lattice_iso: ImmutableMatrix  # target_ray = lattice_iso · source_ray
    ray_bijection: Tuple[int, ...]  # source ray i ↦ target ray ray_bijection[i]

    def map_cone(self, cone: Cone) -> Cone:
        return Cone.of(self.ray_bijection[i] for i in cone.ray_indices)

    def inverse_cone(self, cone: Cone) -> Cone:
        back = {t: s for s, t in enumerate(self.ray_bijection)}
        return Cone.of(back[i] for i in cone.ray_indices)

    def to_dict(self) -> dict:
        return {
            "lattice_iso": matrix_rows(self.lattice_iso),
            "ray_bijection": list(self.ray_bijection),
        }


@dataclass(frozen=True)
class FanViolation:
    """A single fan axiom violation with the offending witnesses"""

    kind: str  # duplicate_ray, non_primitive_ray, missing_face, ...
    message: str
    witnesses: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "witnesses": list(self.witnesses)}

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class QuotientFan:
    """Result of Σ/σ: the quotient map, the quotient fan and the cone correspondence"""

    base: Fan
    sigma: Cone
    q: QuotientMap
    g: Fan
    cone_map: Dict[Cone, Cone] = field(hash=False)
    ray_lift: Tuple[int, ...]  # quotient ray j is the image of base ray ray_lift[j]

    def preimage(self, cone: Cone) -> Cone:
        """The cone τ ⊇ σ of the base fan with τ/⟨σ⟩ = cone"""
        self.g.require(cone)
        return Cone.of(self.sigma.ray_indices + tuple(self.ray_lift[j] for j in cone.ray_indices))
