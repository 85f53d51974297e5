"""
Edge partitions of problem graphs, built from vertex separators.
"""
import itertools
from dataclasses import dataclass
from typing import FrozenSet, List, Sequence, Tuple

import networkx as nx

from qaoa.graphs import graph_edges
from utils.log_setup import setup_project_logging

logger = setup_project_logging()

Edge = Tuple[int, int]

class PartitionError(Exception):
    """Custom exception for separator and edge partition errors"""
    pass

@dataclass(frozen=True)
class EdgePartition:
    """Disjoint edge subsets E_1..E_r covering the edge set; part j induces g_j"""
    parts: Tuple[Tuple[Edge, ...], ...]

    def __post_init__(self):
        parts = tuple(tuple(sorted((min(u, v), max(u, v)) for u, v in part)) for part in self.parts)
        seen = set()
        for part in parts:
            for edge in part:
                if edge in seen:
                    raise PartitionError(f"Edge {edge} appears in more than one part")
                seen.add(edge)
        object.__setattr__(self, 'parts', parts)

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    def vertices(self, j: int) -> FrozenSet[int]:
        """V(g_j): vertices incident to an edge of part j"""
        return frozenset(v for edge in self.parts[j] for v in edge)

    def overlap(self) -> int:
        """kappa: the largest |V(g_i) & V(g_j)| over pairs of parts"""
        sizes = [len(self.vertices(i) & self.vertices(j))
                 for i, j in itertools.combinations(range(self.num_parts), 2)]
        return max(sizes, default=0)

    def num_overlaps(self) -> int:
        """Number of part pairs that share a vertex"""
        return sum(1 for i, j in itertools.combinations(range(self.num_parts), 2)
                   if self.vertices(i) & self.vertices(j))

    def covers(self, graph: nx.Graph) -> bool:
        return sorted(e for part in self.parts for e in part) == graph_edges(graph)

    def label_of(self) -> dict:
        """edge -> part index"""
        return {edge: j for j, part in enumerate(self.parts) for edge in part}

def natural_partition(graph: nx.Graph) -> EdgePartition:
    return EdgePartition((tuple(graph_edges(graph)),))

def _components_without(graph: nx.Graph, separator: Sequence[int]) -> List[List[int]]:
    rest = graph.copy()
    rest.remove_nodes_from(separator)
    return sorted((sorted(c) for c in nx.connected_components(rest)), key=lambda c: (-len(c), c))

def is_balanced(graph: nx.Graph, separator: Sequence[int]) -> bool:
    """Every component left after removing the separator has at most 2/3 of the vertices"""
    components = _components_without(graph, separator)
    return len(components) >= 2 and 3 * len(components[0]) <= 2 * graph.number_of_nodes()

def separator_partition(graph: nx.Graph, separator: Sequence[int]) -> EdgePartition:
    """
    Two-part edge partition around a vertex separator S.

    The components left by removing S are split into two sides by size; E_2
    holds the edges with both endpoints in the smaller side or S, E_1 the rest.
    So V(g_1) & V(g_2) lies inside S.

    Raises:
        PartitionError: S names unknown vertices or does not disconnect the graph
    """
    separator = sorted(set(int(v) for v in separator))
    missing = [v for v in separator if v not in graph]
    if missing:
        raise PartitionError(f"Separator names vertices not in the graph: {missing}")
    components = _components_without(graph, separator)
    if len(components) < 2:
        raise PartitionError(f"Removing {separator} does not disconnect the graph")
    if not is_balanced(graph, separator):
        logger.warning(
            f"Separator {separator} is unbalanced: largest component has {len(components[0])} "
            f"of {graph.number_of_nodes()} vertices"
        )

    sides: List[List[int]] = [[], []]
    for component in components:
        lighter = 0 if len(sides[0]) <= len(sides[1]) else 1
        sides[lighter].extend(component)
    small = set(min(sides, key=lambda side: (len(side), sorted(side)))) | set(separator)

    second = [e for e in graph_edges(graph) if e[0] in small and e[1] in small]
    first = [e for e in graph_edges(graph) if not (e[0] in small and e[1] in small)]
    if not first or not second:
        raise PartitionError(f"Separator {separator} leaves an empty edge part")
    return EdgePartition((tuple(first), tuple(second)))

def cluster_partition(graph: nx.Graph) -> EdgePartition:
    """
    r-part partition of a chain-clustered graph: E_i holds the edges with an
    endpoint in cluster i.

    Raises:
        PartitionError: unlabelled vertices or an edge touching no cluster
    """
    labels = dict(graph.nodes(data='label'))
    if any(label is None for label in labels.values()):
        raise PartitionError("cluster_partition needs generator labels on every vertex")
    clusters = sorted({int(label.split(':')[1]) for label in labels.values() if label.startswith('cluster:')})
    parts = {i: [] for i in clusters}
    for u, v in graph_edges(graph):
        owner = [int(labels[w].split(':')[1]) for w in (u, v) if labels[w].startswith('cluster:')]
        if not owner:
            raise PartitionError(f"Edge ({u}, {v}) joins two separator vertices")
        parts[owner[0]].append((u, v))
    return EdgePartition(tuple(tuple(parts[i]) for i in clusters))

def find_balanced_separator(graph: nx.Graph, max_size: int = 3, max_vertices: int = 12) -> Tuple[int, ...]:
    """
    Smallest balanced vertex separator by exhaustive search.

    Among separators of the smallest size, the one with the smallest largest
    component wins; remaining ties go to the lexicographically first set.

    Raises:
        PartitionError: graph too large to search, or no balanced separator up to max_size
    """
    n = graph.number_of_nodes()
    if n > max_vertices:
        raise PartitionError(f"Exhaustive separator search is limited to {max_vertices} vertices, got {n}")
    vertices = sorted(graph.nodes())
    for size in range(1, max_size + 1):
        best = None
        for candidate in itertools.combinations(vertices, size):
            if not is_balanced(graph, candidate):
                continue
            largest = len(_components_without(graph, candidate)[0])
            if best is None or largest < best[0]:
                best = (largest, candidate)
        if best is not None:
            logger.debug(f"Balanced separator {best[1]} (largest component {best[0]})")
            return tuple(best[1])
    raise PartitionError(f"No balanced separator of size <= {max_size}")
