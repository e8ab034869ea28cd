"""
Fanifold data models: strata, exit arrows, filtrations, cover regions and nerves
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from models.fan import Cone, Fan
from models.lattice import QuotientMap
from utils.exceptions import FanifoldError

ArrowKey = Tuple[str, str]


@dataclass(frozen=True)
class Stratum:
    """A stratum S with its normal data (M_S, Σ_S)"""

    id: str
    dim: int
    lattice_rank: int
    normal_fan: Fan
    is_closed: bool = False
    defining_cone: Optional[Cone] = None  # the cone σ of the base fan for sphere fanifolds

    @property
    def sort_key(self) -> Tuple[int, str]:
        return (self.dim, self.id)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization"""
        return {
            "id": self.id,
            "dim": self.dim,
            "lattice_rank": self.lattice_rank,
            "is_closed": self.is_closed,
            "defining_cone": self.defining_cone.label if self.defining_cone is not None else None,
            "normal_fan": self.normal_fan.to_dict(),
        }

    def __str__(self) -> str:
        return f"{self.id} (dim {self.dim}, rank {self.lattice_rank})"


@dataclass(frozen=True)
class ExitArrow:
    """Exit path S → S′ labeled by the cone σ of Σ_S and the presentation of M_S ↠ M_S′"""

    source: str
    target: str
    cone: Cone
    lattice_map: QuotientMap

    @property
    def key(self) -> ArrowKey:
        return (self.source, self.target)

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "cone": self.cone.label,
            "lattice_map": self.lattice_map.to_dict(),
        }

    def __str__(self) -> str:
        return f"{self.source} -> {self.target} along {self.cone.label}"


@dataclass
class Fanifold:
    """Stratum poset with normal fans and exit arrows"""

    dim: int
    strata: Dict[str, Stratum]
    arrows: Dict[ArrowKey, ExitArrow] = field(default_factory=dict)
    closed: bool = True
    name: Optional[str] = None

    def stratum(self, stratum_id: str) -> Stratum:
        """Look up a stratum, raise FanifoldError if missing"""
        try:
            return self.strata[stratum_id]
        except KeyError:
            raise FanifoldError(f"Unknown stratum '{stratum_id}'")

    def sorted_strata(self) -> List[Stratum]:
        """Strata ordered by dimension, then id"""
        return sorted(self.strata.values(), key=lambda s: s.sort_key)

    def sorted_arrows(self) -> List[ExitArrow]:
        return [self.arrows[k] for k in sorted(self.arrows)]

    def arrows_from(self, stratum_id: str) -> List[ExitArrow]:
        return [a for a in self.sorted_arrows() if a.source == stratum_id]

    def arrows_into(self, stratum_id: str) -> List[ExitArrow]:
        return [a for a in self.sorted_arrows() if a.target == stratum_id]

    def zero_strata(self) -> List[Stratum]:
        return [s for s in self.sorted_strata() if s.dim == 0]

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization"""
        return {
            "name": self.name,
            "dim": self.dim,
            "closed": self.closed,
            "strata": [s.to_dict() for s in self.sorted_strata()],
            "arrows": [a.to_dict() for a in self.sorted_arrows()],
        }

    def __str__(self) -> str:
        name = self.name or "fanifold"
        return f"{name}: dim {self.dim}, {len(self.strata)} strata, {len(self.arrows)} arrows"


@dataclass(frozen=True)
class HandleRecord:
    """Attachment of the handle of one stratum along its arrows from lower strata"""

    stratum_id: str
    level: int
    lattice_rank: int
    normal_fan: Fan
    gluing: Tuple[ExitArrow, ...]

    def to_dict(self) -> dict:
        return {
            "stratum": self.stratum_id,
            "level": self.level,
            "lattice_rank": self.lattice_rank,
            "normal_fan": self.normal_fan.to_dict(),
            "glues_to": [a.source for a in self.gluing],
        }


@dataclass
class Filtration:
    """Dimension filtration Φ_0 ⊆ … ⊆ Φ_n and the handle schedule building it"""

    levels: List[Fanifold]
    schedule: List[HandleRecord]

    def batch(self, level: int) -> List[HandleRecord]:
        return [r for r in self.schedule if r.level == level]

    def to_dict(self) -> dict:
        return {
            "levels": [sorted(level.strata) for level in self.levels],
            "schedule": [r.to_dict() for r in self.schedule],
        }


@dataclass(frozen=True)
class CoverRegion:
    """Closed star of a 0-stratum in the barycentric subdivision, as flags of strata"""

    vertex: str
    flags: Tuple[Tuple[str, ...], ...]
    skeleton_fan: Fan

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "flags": [list(chain) for chain in self.flags],
            "skeleton_fan": self.skeleton_fan.to_dict(),
        }


@dataclass(frozen=True)
class NerveSimplex:
    """A simplex of the cover nerve with its intersection data"""

    vertices: Tuple[str, ...]
    minimal_strata: Tuple[str, ...]
    fan: Optional[Fan] = None  # normal fan of the unique minimal common stratum
    anchor: Optional[Cone] = None

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def label(self) -> str:
        return "{" + ",".join(self.vertices) + "}"

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "minimal_strata": list(self.minimal_strata),
            "fan": self.fan.to_dict() if self.fan is not None else None,
            "anchor": self.anchor.label if self.anchor is not None else None,
        }


@dataclass
class Nerve:
    """Nerve of the barycentric cover"""

    regions: List[CoverRegion]
    simplices: List[NerveSimplex]

    def vertex_sets(self) -> Set[FrozenSet[str]]:
        return {frozenset(s.vertices) for s in self.simplices}

    def of_dim(self, dim: int) -> List[NerveSimplex]:
        return [s for s in self.simplices if s.dim == dim]

    def simplex(self, vertices) -> NerveSimplex:
        key = tuple(sorted(vertices))
        for s in self.simplices:
            if s.vertices == key:
                return s
        raise FanifoldError(f"{list(key)} is not a simplex of the nerve")

    def to_dict(self) -> dict:
        return {
            "vertices": [r.vertex for r in self.regions],
            "simplices": [s.to_dict() for s in self.simplices],
        }
