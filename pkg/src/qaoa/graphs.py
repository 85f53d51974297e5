"""
Clustered problem graphs: r clusters in a chain joined by groups of k
separator vertices.

Vertices are numbered along the chain: cluster 0, separator 0, cluster 1,
separator 1, ..., cluster r-1. Each vertex carries a 'label' attribute,
"cluster:i" or "sep:i".
"""
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from utils.config import get_settings
from utils.log_setup import setup_project_logging
from utils.seeding import derived_generator, master_seed_of

logger = setup_project_logging()

class GraphGenerationError(Exception):
    """Custom exception for graph generation and graph file errors"""
    pass

@dataclass(frozen=True)
class ClusteredGraphSpec:
    r: int
    n: int
    k: int
    p_intra: float = 0.7
    p_sep: float = 0.3
    seed: Optional[int] = None
    # every separator vertex gets at least one edge into each neighbouring cluster
    anchored: bool = False

    def __post_init__(self):
        if self.r < 2 or self.n < 1 or self.k < 1:
            raise GraphGenerationError(f"Need r >= 2, n >= 1, k >= 1; got r={self.r}, n={self.n}, k={self.k}")
        for name in ('p_intra', 'p_sep'):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise GraphGenerationError(f"{name} must be in (0, 1], got {value}")

    @property
    def num_vertices(self) -> int:
        return self.r * self.n + (self.r - 1) * self.k

def chain_layout(spec: ClusteredGraphSpec) -> Tuple[List[List[int]], List[List[int]]]:
    """Vertex lists of the clusters and of the separator groups"""
    clusters, separators = [], []
    next_vertex = 0
    for i in range(spec.r):
        clusters.append(list(range(next_vertex, next_vertex + spec.n)))
        next_vertex += spec.n
        if i < spec.r - 1:
            separators.append(list(range(next_vertex, next_vertex + spec.k)))
            next_vertex += spec.k
    return clusters, separators

def _sample_edges(spec: ClusteredGraphSpec, rng: np.random.Generator) -> List[Tuple[int, int]]:
    clusters, separators = chain_layout(spec)
    edges = []
    for i, cluster in enumerate(clusters):
        for a in range(len(cluster)):
            for b in range(a + 1, len(cluster)):
                if rng.random() < spec.p_intra:
                    edges.append((cluster[a], cluster[b]))
        adjacent = [separators[j] for j in (i - 1, i) if 0 <= j < len(separators)]
        for group in adjacent:
            for u in cluster:
                for s in group:
                    if rng.random() < spec.p_sep:
                        edges.append((min(u, s), max(u, s)))
            if spec.anchored:
                linked = {s for edge in edges for s in edge if s in group and (sum(edge) - s) in cluster}
                for s in group:
                    if s not in linked:
                        u = cluster[int(rng.integers(len(cluster)))]
                        edges.append((min(u, s), max(u, s)))
    return sorted(edges)

def generate_clustered_graph(spec: ClusteredGraphSpec, rng=None) -> nx.Graph:
    """
    Sample a connected clustered graph.

    Every attempt draws from its own substream of the master seed, so a given
    seed always yields the same graph.

    Args:
        spec: cluster count, sizes and edge probabilities
        rng: master seed or Generator; defaults to spec.seed

    Returns:
        networkx Graph with 'label' vertex attributes

    Raises:
        GraphGenerationError: no connected sample within the retry budget
    """
    seed = spec.seed if rng is None else rng
    if seed is None:
        raise GraphGenerationError("A seed is required to generate a graph")
    master = master_seed_of(seed)
    clusters, separators = chain_layout(spec)
    retries = get_settings().bench.connectivity_retries

    for attempt in range(retries):
        graph = nx.Graph()
        for i, cluster in enumerate(clusters):
            graph.add_nodes_from(cluster, label=f"cluster:{i}")
        for i, group in enumerate(separators):
            graph.add_nodes_from(group, label=f"sep:{i}")
        graph.add_edges_from(_sample_edges(spec, derived_generator(master, attempt)))
        if nx.is_connected(graph):
            logger.info(
                f"Generated clustered graph r={spec.r} n={spec.n} k={spec.k}: "
                f"{graph.number_of_nodes()} vertices, {graph.number_of_edges()} edges (attempt {attempt + 1})"
            )
            return graph
    raise GraphGenerationError(f"No connected graph after {retries} attempts for {spec}")

def graph_edges(graph: nx.Graph) -> List[Tuple[int, int]]:
    """Edges as sorted (u, v) pairs with u < v"""
    return sorted((min(u, v), max(u, v)) for u, v in graph.edges())

def known_separator(graph: nx.Graph, index: int = 0) -> Tuple[int, ...]:
    """Vertices of separator group `index` as recorded by the generator"""
    members = tuple(sorted(v for v, label in graph.nodes(data='label') if label == f"sep:{index}"))
    if not members:
        raise GraphGenerationError(f"Graph has no vertices labelled sep:{index}")
    return members

def graph_to_dict(graph: nx.Graph) -> Dict:
    labels = {str(v): label for v, label in sorted(graph.nodes(data='label')) if label is not None}
    return {
        'num_vertices': graph.number_of_nodes(),
        'edges': [list(e) for e in graph_edges(graph)],
        'labels': labels,
    }

def graph_from_dict(data: Dict) -> nx.Graph:
    try:
        graph = nx.Graph()
        graph.add_nodes_from(range(int(data['num_vertices'])))
        for vertex, label in (data.get('labels') or {}).items():
            graph.nodes[int(vertex)]['label'] = label
        for u, v in data['edges']:
            u, v = int(u), int(v)
            if u == v:
                raise GraphGenerationError(f"Self-loop on vertex {u}")
            if graph.has_edge(u, v):
                raise GraphGenerationError(f"Duplicate edge ({u}, {v})")
            if u not in graph or v not in graph:
                raise GraphGenerationError(f"Edge ({u}, {v}) names a vertex outside 0..{data['num_vertices'] - 1}")
            graph.add_edge(u, v)
    except (KeyError, TypeError, ValueError) as e:
        raise GraphGenerationError(f"Malformed graph JSON: {e}")
    return graph

def save_graph(graph: nx.Graph, path: Path) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(graph_to_dict(graph), f, indent=2)

def load_graph(path: Path) -> nx.Graph:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return graph_from_dict(json.load(f))
    except (OSError, json.JSONDecodeError) as e:
        raise GraphGenerationError(f"Could not read graph {path}: {e}")
