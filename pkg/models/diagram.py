"""
Gluing diagram data models: orbit closures, diagram objects and arrows, match reports
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import networkx as nx

from models.fan import Cone, Fan, FanIso
from models.lattice import QuotientMap
from models.report import Report
from utils.exceptions import DiagramError


@dataclass(frozen=True)
class OrbitClosure:
    """Closure of the torus orbit of a nonzero cone: the toric variety of Σ/σ"""

    cone: Cone
    fan: Fan
    quotient: QuotientMap  # M ↠ M/⟨σ⟩
    faces: Tuple[Tuple[Cone, Cone], ...] = ()  # (τ, τ/⟨σ⟩) for τ in star(σ)

    def orbit_cone(self, tau: Cone) -> Cone:
        """The cone of the closure fan whose orbit closure is O(τ)̄ ⊆ O(σ)̄"""
        for cone, image in self.faces:
            if cone == tau:
                return image
        raise DiagramError(f"{tau.label} is not in the star of {self.cone.label}")

    def to_dict(self) -> dict:
        return {"cone": self.cone.label, "quotient": self.quotient.to_dict()}


@dataclass(frozen=True)
class DiagramObject:
    """Fan attached to one index of a gluing diagram"""

    key: str
    fan: Fan
    anchor: Optional[Cone] = None  # cone of the base fan the object stands for, when known
    closure: Optional[OrbitClosure] = None

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "anchor": self.anchor.label if self.anchor is not None else None,
            "fan": self.fan.to_dict(),
            "closure": self.closure.to_dict() if self.closure is not None else None,
        }


@dataclass(frozen=True)
class DiagramArrow:
    """
    Closed immersion between objects lower ≤ upper

    cone lives in the fan of lower; lattice_map presents the lattice of lower
    onto the lattice of upper.
    """

    lower: str
    upper: str
    cone: Cone
    lattice_map: QuotientMap

    @property
    def key(self) -> Tuple[str, str]:
        return (self.lower, self.upper)


@dataclass
class GluingDiagram:
    """Poset-indexed diagram of fans; every comparable pair carries an arrow"""

    name: str
    objects: Dict[str, DiagramObject]
    arrows: Dict[Tuple[str, str], DiagramArrow] = field(default_factory=dict)
    base_fan: Optional[Fan] = None

    def keys(self) -> List[str]:
        return sorted(self.objects, key=self._sort_key)

    def _sort_key(self, key: str):
        anchor = self.objects[key].anchor
        return (0, anchor.sort_key, key) if anchor is not None else (1, (), key)

    def require(self, key: str) -> DiagramObject:
        if key not in self.objects:
            raise DiagramError(f"'{key}' is not an object of diagram {self.name}")
        return self.objects[key]

    def leq(self, a: str, b: str) -> bool:
        return a == b or (a, b) in self.arrows

    def index_poset(self) -> nx.DiGraph:
        """Comparability digraph: an edge lower → upper per arrow"""
        graph = nx.DiGraph()
        for key in self.keys():
            obj = self.objects[key]
            graph.add_node(key, rank=obj.fan.rank, cones=len(obj.fan.cones))
        graph.add_edges_from(sorted(self.arrows))
        return graph

    def hasse(self) -> nx.DiGraph:
        """Covering relations only"""
        reduced = nx.transitive_reduction(self.index_poset())
        reduced.add_nodes_from(self.index_poset().nodes(data=True))
        return reduced

    def anchored(self) -> Dict[Cone, str]:
        return {o.anchor: k for k, o in self.objects.items() if o.anchor is not None}

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization"""
        return {
            "name": self.name,
            "objects": [self.objects[k].to_dict() for k in self.keys()],
            "arrows": [
                {"lower": a.lower, "upper": a.upper, "cone": a.cone.label}
                for a in (self.arrows[k] for k in sorted(self.arrows))
            ],
        }

    def __str__(self) -> str:
        return f"{self.name}: {len(self.objects)} objects, {len(self.arrows)} arrows"


@dataclass
class ObjectMatch:
    """Per-object outcome of a diagram match"""

    source: str
    target: str
    iso: Optional[FanIso] = None
    witness: str = ""

    @property
    def matched(self) -> bool:
        return self.iso is not None

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "matched": self.matched,
            "iso": self.iso.to_dict() if self.iso is not None else None,
            "witness": self.witness,
        }


@dataclass
class MatchReport(Report):
    """Report of a diagram match with the poset bijection and per-object isomorphisms"""

    poset_iso: Optional[Dict[str, str]] = None
    object_matches: List[ObjectMatch] = field(default_factory=list)

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["body"] = dict(
            self.body,
            poset_iso=dict(sorted(self.poset_iso.items())) if self.poset_iso is not None else None,
            object_matches=[m.to_dict() for m in self.object_matches],
        )
        return data
