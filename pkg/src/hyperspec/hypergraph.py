"""Combinatorial hypergraph representation and structural queries."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DeletesAllVertices,
    Disconnected,
    DuplicateVertex,
    EmptyVertexSet,
    LoopEdge,
    NoEdges,
    NonPositiveWeight,
    TrivialCut,
    UnknownVertex,
)

Vertex = Hashable


@dataclass(frozen=True)
class VertexClassification:
    cored: frozenset
    intersectional: frozenset
    pendant: frozenset
    isolated: frozenset
    twin_classes: tuple  # of frozensets, ordered by first member


class Hypergraph:
    """An immutable hypergraph with optional positive hyperedge weights.

    Vertex and edge order is the input order and fixes the row/column order of
    every matrix built from the hypergraph. Hyperedges are stored as frozensets;
    repeated hyperedges are kept (see :attr:`duplicate_edges`).

    Parameters
    ----------
    vertices : sequence of hashable
        Distinct vertex identifiers.
    edges : iterable of iterables
        Each hyperedge must contain at least two distinct known vertices.
    edge_weights : sequence or mapping, optional
        Positive weight per edge (by position, or ``{edge_index: weight}``);
        edges missing from a mapping get weight 1.
    """

    def __init__(
        self,
        vertices: Sequence[Vertex],
        edges: Iterable[Iterable[Vertex]],
        edge_weights: Sequence[float] | Mapping[int, float] | None = None,
    ):
        vertices = tuple(vertices)
        if not vertices:
            raise EmptyVertexSet("hypergraph needs at least one vertex")
        index = {}
        for i, v in enumerate(vertices):
            if v in index:
                raise DuplicateVertex(f"vertex {v!r} listed twice")
            index[v] = i

        stored = []
        for k, e in enumerate(edges):
            members = frozenset(e)
            for v in members:
                if v not in index:
                    raise UnknownVertex(f"edge {k} contains unknown vertex {v!r}")
            if len(members) < 2:
                raise LoopEdge(f"edge {k} has {len(members)} distinct member(s); loops are not allowed")
            stored.append(members)

        m = len(stored)
        if edge_weights is None:
            weights = [1.0] * m
        elif isinstance(edge_weights, Mapping):
            weights = [1.0] * m
            for k, w in edge_weights.items():
                if not 0 <= int(k) < m:
                    raise NonPositiveWeight(f"weight given for missing edge {k}")
                weights[int(k)] = float(w)
        else:
            weights = [float(w) for w in edge_weights]
            if len(weights) != m:
                raise NonPositiveWeight(f"{len(weights)} weights for {m} edges")
        for k, w in enumerate(weights):
            if not (w > 0 and math.isfinite(w)):
                raise NonPositiveWeight(f"edge {k} has non-positive weight {w}")

        self._vertices = vertices
        self._index = index
        self._edges = tuple(stored)
        self._weights = tuple(weights)

    # -- basic accessors -------------------------------------------------

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def edges(self) -> tuple:
        return self._edges

    @property
    def edge_weights(self) -> tuple:
        return self._weights

    @property
    def n_vertices(self) -> int:
        return len(self._vertices)

    @property
    def n_edges(self) -> int:
        return len(self._edges)

    @property
    def is_weighted(self) -> bool:
        return any(w != 1.0 for w in self._weights)

    def index(self, v: Vertex) -> int:
        try:
            return self._index[v]
        except (KeyError, TypeError):
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    def indices(self, vs: Iterable[Vertex]) -> list[int]:
        return [self.index(v) for v in vs]

    def sorted_edge(self, k: int) -> list:
        """Members of edge ``k`` in canonical vertex order."""
        return sorted(self._edges[k], key=self._index.__getitem__)

    def __repr__(self):
        return f"Hypergraph(|V|={self.n_vertices}, |E|={self.n_edges})"

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self._vertices, self._edges, self._weights) == (
            other._vertices,
            other._edges,
            other._weights,
        )

    def __hash__(self):
        return hash((self._vertices, self._edges, self._weights))

    # -- cached numeric views --------------------------------------------

    @cached_property
    def edge_members(self) -> tuple:
        """Per edge, the sorted integer indices of its members."""
        return tuple(np.array(sorted(self._index[v] for v in e), dtype=np.intp) for e in self._edges)

    @cached_property
    def edge_sizes(self) -> np.ndarray:
        sizes = np.array([len(e) for e in self._edges], dtype=float)
        sizes.setflags(write=False)
        return sizes

    @cached_property
    def incidence(self) -> np.ndarray:
        """0/1 vertex-by-edge incidence matrix."""
        H = np.zeros((self.n_vertices, self.n_edges))
        for k, members in enumerate(self.edge_members):
            H[members, k] = 1.0
        H.setflags(write=False)
        return H

    @cached_property
    def _stars(self) -> tuple:
        stars = [[] for _ in self._vertices]
        for k, members in enumerate(self.edge_members):
            for i in members:
                stars[i].append(k)
        return tuple(frozenset(s) for s in stars)

    @cached_property
    def _neighbours(self) -> tuple:
        nb = [set() for _ in self._vertices]
        for members in self.edge_members:
            ms = members.tolist()
            for i in ms:
                nb[i].update(ms)
        for i, s in enumerate(nb):
            s.discard(i)
        return tuple(frozenset(s) for s in nb)

    # -- structural queries ----------------------------------------------

    def star(self, v: Vertex) -> frozenset:
        """Indices of the edges containing ``v``."""
        return self._stars[self.index(v)]

    def degree(self, v: Vertex) -> float:
        """Weighted degree: sum of the weights of the edges containing ``v``."""
        return float(sum(self._weights[k] for k in self.star(v)))

    def star_sizes(self) -> np.ndarray:
        return np.array([len(s) for s in self._stars], dtype=float)

    def rank_corank(self) -> tuple[int, int]:
        if not self._edges:
            raise NoEdges("rank and corank need at least one edge")
        sizes = [len(e) for e in self._edges]
        return max(sizes), min(sizes)

    def is_uniform(self) -> bool:
        rk, cr = self.rank_corank()
        return rk == cr

    def neighbours(self, v: Vertex) -> frozenset:
        return frozenset(self._vertices[i] for i in self._neighbours[self.index(v)])

    @cached_property
    def _component_labels(self) -> np.ndarray:
        labels = np.full(self.n_vertices, -1, dtype=np.intp)
        current = 0
        for start in range(self.n_vertices):
            if labels[start] >= 0:
                continue
            labels[start] = current
            queue = deque([start])
            while queue:
                i = queue.popleft()
                for j in self._neighbours[i]:
                    if labels[j] < 0:
                        labels[j] = current
                        queue.append(j)
            current += 1
        labels.setflags(write=False)
        return labels

    def components(self) -> list[frozenset]:
        """Connected classes under shared-hyperedge adjacency, in first-vertex order."""
        groups: dict[int, list] = {}
        for v, c in zip(self._vertices, self._component_labels):
            groups.setdefault(int(c), []).append(v)
        return [frozenset(g) for g in groups.values()]

    @property
    def n_components(self) -> int:
        return int(self._component_labels.max()) + 1

    def is_connected(self) -> bool:
        return self.n_components == 1

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        """All-pairs distances by BFS; ``inf`` between components."""
        n = self.n_vertices
        D = np.full((n, n), np.inf)
        for s in range(n):
            D[s, s] = 0.0
            queue = deque([s])
            while queue:
                i = queue.popleft()
                for j in self._neighbours[i]:
                    if D[s, j] == np.inf:
                        D[s, j] = D[s, i] + 1
                        queue.append(j)
        D.setflags(write=False)
        return D

    def distance(self, u: Vertex, v: Vertex) -> float:
        return float(self.distance_matrix[self.index(u), self.index(v)])

    def distances(self) -> dict:
        """``{(u, v): d(u, v)}`` over ordered pairs; ``math.inf`` if disconnected."""
        D = self.distance_matrix
        return {(u, v): float(D[i, j]) for i, u in enumerate(self._vertices) for j, v in enumerate(self._vertices)}

    def distance_diameter(self) -> tuple[dict, int]:
        """Pairwise distances and the diameter.

        Raises :class:`Disconnected` (carrying per-component diameters) when
        the diameter is infinite.
        """
        D = self.distance_matrix
        if not self.is_connected():
            per = []
            labels = self._component_labels
            for c in range(self.n_components):
                idx = np.flatnonzero(labels == c)
                per.append(int(D[np.ix_(idx, idx)].max()))
            raise Disconnected("hypergraph is disconnected; diameter is infinite", per)
        return self.distances(), int(D.max())

    def diameter(self) -> float:
        return float(self.distance_matrix.max())

    def edge_boundary(self, S: Iterable[Vertex]) -> frozenset:
        """Indices of edges meeting both ``S`` and its complement."""
        idx = set(self.indices(S))
        if not idx or len(idx) == self.n_vertices:
            raise TrivialCut("edge boundary needs a nonempty proper vertex subset")
        out = []
        for k, members in enumerate(self.edge_members):
            inside = sum(1 for i in members.tolist() if i in idx)
            if 0 < inside < len(members):
                out.append(k)
        return frozenset(out)

    def weak_delete(self, S: Iterable[Vertex]) -> "Hypergraph":
        """Remove ``S`` from every edge and from V; edges left with < 2 vertices are dropped."""
        drop = set(self.indices(S))
        if len(drop) == self.n_vertices:
            raise DeletesAllVertices("weak deletion would remove every vertex")
        removed = {self._vertices[i] for i in drop}
        vertices = [v for v in self._vertices if v not in removed]
        edges, weights = [], []
        for e, w in zip(self._edges, self._weights):
            rest = e - removed
            if len(rest) >= 2:
                edges.append(rest)
                weights.append(w)
        return Hypergraph(vertices, edges, weights)

    def classify_vertices(self) -> VertexClassification:
        stars = self._stars
        V = self._vertices
        cored = frozenset(V[i] for i, s in enumerate(stars) if len(s) == 1)
        inter = frozenset(V[i] for i, s in enumerate(stars) if len(s) > 1)
        isolated = frozenset(V[i] for i, s in enumerate(stars) if not s)
        pendant = set()
        for members in self.edge_members:
            c = [i for i in members.tolist() if len(stars[i]) == 1]
            if len(c) == 1:
                pendant.add(V[c[0]])
        return VertexClassification(cored, inter, frozenset(pendant), isolated, self.twin_classes())

    def twin_classes(self) -> tuple:
        """Maximal vertex classes with identical stars, ordered by first member."""
        groups: dict[frozenset, list] = {}
        for v, s in zip(self._vertices, self._stars):
            groups.setdefault(s, []).append(v)
        return tuple(frozenset(g) for g in groups.values())

    def twin_groups(self) -> list[tuple[list[int], frozenset]]:
        """Twin classes as ``(sorted vertex indices, star)`` pairs."""
        groups: dict[frozenset, list] = {}
        for i, s in enumerate(self._stars):
            groups.setdefault(s, []).append(i)
        return [(g, s) for s, g in groups.items()]

    def underlying_graph(self) -> "Hypergraph":
        """The 2-uniform graph joining every pair that shares a hyperedge."""
        pairs = set()
        for members in self.edge_members:
            ms = members.tolist()
            for a in range(len(ms)):
                for b in range(a + 1, len(ms)):
                    pairs.add((ms[a], ms[b]))
        V = self._vertices
        return Hypergraph(V, [(V[i], V[j]) for i, j in sorted(pairs)])

    def duplicate_edges(self) -> list[list[int]]:
        """Groups of edge indices that repeat the same vertex set."""
        seen: dict[frozenset, list] = {}
        for k, e in enumerate(self._edges):
            seen.setdefault(e, []).append(k)
        return [g for g in seen.values() if len(g) > 1]
