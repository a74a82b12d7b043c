import dataclasses
import logging
from typing import FrozenSet, Iterable, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy import linalg

from .constants import TOL_SPECTRAL
from .exceptions import GraphError

__all__ = (
    "Graph",
    "SpectralData",
    "GRAPH_PRESETS",
    "build_graph",
    "graph_from_preset",
    "laplacian",
    "is_connected",
    "kron_laplacian",
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclasses.dataclass(frozen=True)
class Graph:
    """Undirected simple graph on nodes 1..node_count."""

    node_count: int
    edges: FrozenSet[Edge]

    def neighbors(self, node: int) -> Tuple[int, ...]:
        self._check_node(node)
        out = [m for n, m in self.edges if n == node]
        out += [n for n, m in self.edges if m == node]
        return tuple(sorted(out))

    def degree(self, node: int) -> int:
        return len(self.neighbors(node))

    @property
    def degrees(self) -> Tuple[int, ...]:
        counts = [0] * self.node_count
        for n, m in self.edges:
            counts[n - 1] += 1
            counts[m - 1] += 1
        return tuple(counts)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.node_count, self.node_count))
        for n, m in self.edges:
            a[n - 1, m - 1] = 1.0
            a[m - 1, n - 1] = 1.0
        return a

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(1, self.node_count + 1))
        g.add_edges_from(self.edges)
        return g

    def sorted_edges(self) -> Tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    def _check_node(self, node: int) -> None:
        if not 1 <= node <= self.node_count:
            raise GraphError(f"node {node} is outside 1..{self.node_count}")


@dataclasses.dataclass(frozen=True)
class SpectralData:
    laplacian: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    lambda2: float


def build_graph(node_count: int, edges: Iterable[Sequence[int]]) -> Graph:
    if int(node_count) != node_count or node_count < 1:
        raise GraphError(f"node count must be a positive integer, got {node_count}")
    node_count = int(node_count)
    normalized = set()
    for edge in edges:
        if len(edge) != 2:
            raise GraphError(f"edge {list(edge)} must be a pair of node ids")
        n, m = (int(v) for v in edge)
        if n == m:
            raise GraphError(f"self-loop ({n},{m}) is not allowed in a simple graph")
        for v in (n, m):
            if not 1 <= v <= node_count:
                raise GraphError(f"node id {v} is outside 1..{node_count}")
        normalized.add((min(n, m), max(n, m)))
    graph = Graph(node_count=node_count, edges=frozenset(normalized))
    logger.debug("Built graph N=%s with %s edges", node_count, len(normalized))
    return graph


def _from_networkx(g: nx.Graph) -> Graph:
    # networkx generators label nodes from 0
    return build_graph(g.number_of_nodes(), [(n + 1, m + 1) for n, m in g.edges])


GRAPH_PRESETS = {
    "path": nx.path_graph,
    "ring": nx.cycle_graph,
    "complete": nx.complete_graph,
    "star": lambda n: nx.star_graph(n - 1),
}


def graph_from_preset(name: str, nodes: int) -> Graph:
    if name not in GRAPH_PRESETS:
        raise GraphError(
            f"unknown graph preset {name!r}, expected one of {sorted(GRAPH_PRESETS)}"
        )
    if nodes < 1:
        raise GraphError(f"node count must be a positive integer, got {nodes}")
    if name == "ring" and nodes < 3:
        # a 2-cycle would be a multigraph
        return graph_from_preset("path", nodes)
    return _from_networkx(GRAPH_PRESETS[name](nodes))


def laplacian(g: Graph) -> SpectralData:
    a = g.adjacency()
    lap = np.diag(a.sum(axis=1)) - a
    eigenvalues, eigenvectors = linalg.eigh(lap)
    # single node: no second eigenvalue, report the trivial spectrum
    lambda2 = float(eigenvalues[1]) if g.node_count > 1 else 0.0
    return SpectralData(
        laplacian=lap,
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        lambda2=max(lambda2, 0.0) if abs(lambda2) < TOL_SPECTRAL else lambda2,
    )


def is_connected(g: Graph) -> bool:
    return bool(nx.is_connected(g.to_networkx()))


def kron_laplacian(g: Graph, d: int) -> np.ndarray:
    if d < 1:
        raise GraphError(f"state dimension must be >= 1, got {d}")
    return np.kron(laplacian(g).laplacian, np.eye(d))
