"""
Graphviz DOT export of face posets, nerves and gluing diagrams

Node lines come first in sorted order, then one edge line per covering
relation, so identical inputs give byte-identical text.
"""

from typing import Callable, Hashable, List

import networkx as nx

from core.fans import face_poset
from models.diagram import GluingDiagram
from models.fan import Fan
from models.fanifold import Nerve
from utils.logger import get_logger

logger = get_logger(__name__)


def _quote(text: str) -> str:
    return '"' + str(text).replace('"', '\\"') + '"'


class DotExporter:
    """Renders posets as DOT text"""

    def __init__(self, indent: str = "  "):
        self.indent = indent

    def hasse(
        self,
        graph: nx.DiGraph,
        title: str,
        node_id: Callable[[Hashable], str],
        node_label: Callable[[Hashable], str],
        sort_key: Callable[[Hashable], object],
    ) -> str:
        """
        Render the covering relations of a poset given as a DAG

        Args:
            graph: Poset, possibly with transitive edges
            title: Graph name
            node_id: Stable id for each node
            node_label: Display label for each node
            sort_key: Ordering for nodes and edges
        """
        reduced = nx.transitive_reduction(graph) if graph.number_of_edges() else graph
        nodes = sorted(graph.nodes, key=sort_key)
        lines = [f"digraph {_quote(title)} {{"]
        for node in nodes:
            lines.append(f"{self.indent}{_quote(node_id(node))} [label={_quote(node_label(node))}];")
        edges = sorted(reduced.edges, key=lambda e: (sort_key(e[0]), sort_key(e[1])))
        for u, v in edges:
            lines.append(f"{self.indent}{_quote(node_id(u))} -> {_quote(node_id(v))};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def face_poset(self, f: Fan) -> str:
        return self.hasse(
            face_poset(f),
            title=f"faces({f.name or 'fan'})",
            node_id=lambda c: c.label,
            node_label=lambda c: f"{c.label} dim {c.dim}",
            sort_key=lambda c: c.sort_key,
        )

    def nerve(self, nv: Nerve, title: str = "nerve") -> str:
        """1-skeleton of the nerve as an undirected graph"""
        lines = [f"graph {_quote(title)} {{"]
        for vertex in sorted(s.vertices[0] for s in nv.of_dim(0)):
            lines.append(f"{self.indent}{_quote(vertex)};")
        for edge in nv.of_dim(1):
            u, v = edge.vertices
            lines.append(f"{self.indent}{_quote(u)} -- {_quote(v)};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def diagram(self, d: GluingDiagram) -> str:
        order = {key: i for i, key in enumerate(d.keys())}
        return self.hasse(
            d.index_poset(),
            title=d.name,
            node_id=lambda k: k,
            node_label=lambda k: f"{k} rank {d.objects[k].fan.rank}",
            sort_key=lambda k: order[k],
        )


def count_edges(dot: str) -> int:
    """Number of edge lines in DOT text"""
    return sum(1 for line in dot.splitlines() if " -> " in line or " -- " in line)


def count_nodes(dot: str) -> int:
    lines: List[str] = dot.splitlines()[1:-1]
    return sum(1 for line in lines if " -> " not in line and " -- " not in line)
