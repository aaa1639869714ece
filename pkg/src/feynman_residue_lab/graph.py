"""Vertex-labelled multigraphs without tadpoles."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .errors import CapacityError, InvalidArgumentError

MAX_ISOMORPHISM_VERTICES = 10

Edge = Tuple[int, int, int]


@dataclass(frozen=True)
class Multigraph:
    """Multiplicity matrix l_ij of a graph on vertices 0..n-1."""

    n_vertices: int
    multiplicity: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = self.n_vertices
        if n < 1:
            raise InvalidArgumentError("a graph needs at least one vertex", n_vertices=n)
        if len(self.multiplicity) != n or any(len(row) != n for row in self.multiplicity):
            raise InvalidArgumentError("multiplicity matrix must be n x n", n_vertices=n)
        for i in range(n):
            if self.multiplicity[i][i] != 0:
                raise InvalidArgumentError("tadpoles unsupported", vertex=i)
            for j in range(i + 1, n):
                lij = self.multiplicity[i][j]
                if lij != self.multiplicity[j][i]:
                    raise InvalidArgumentError("multiplicity matrix must be symmetric", pair=[i, j])
                if lij < 0:
                    raise InvalidArgumentError("multiplicities must be non-negative", pair=[i, j])

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]]) -> "Multigraph":
        rows = tuple(tuple(int(x) for x in row) for row in matrix)
        return cls(n_vertices=len(rows), multiplicity=rows)

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Sequence[Tuple[int, int]]) -> "Multigraph":
        matrix = [[0] * n_vertices for _ in range(n_vertices)]
        for i, j in edges:
            if not (0 <= i < n_vertices and 0 <= j < n_vertices):
                raise InvalidArgumentError("edge endpoint out of range", edge=[i, j])
            if i == j:
                raise InvalidArgumentError("tadpoles unsupported", edge=[i, j])
            matrix[i][j] += 1
            matrix[j][i] += 1
        return cls.from_matrix(matrix)

    @classmethod
    def from_upper_triangle(cls, n_vertices: int, values: Sequence[int]) -> "Multigraph":
        matrix = [[0] * n_vertices for _ in range(n_vertices)]
        for (i, j), value in zip(itertools.combinations(range(n_vertices), 2), values):
            matrix[i][j] = matrix[j][i] = int(value)
        return cls.from_matrix(matrix)

    @property
    def upper_triangle(self) -> Tuple[int, ...]:
        return tuple(
            self.multiplicity[i][j] for i, j in itertools.combinations(range(self.n_vertices), 2)
        )

    @property
    def edge_count(self) -> int:
        return sum(self.upper_triangle)

    @cached_property
    def edges(self) -> Tuple[Edge, ...]:
        """Canonical edge order: sorted by (i, j, copy-index) with i < j."""
        return tuple(
            (i, j, copy)
            for i, j in itertools.combinations(range(self.n_vertices), 2)
            for copy in range(self.multiplicity[i][j])
        )

    def degree(self, vertex: int) -> int:
        return sum(self.multiplicity[vertex])

    @property
    def degree_sequence(self) -> Tuple[int, ...]:
        return tuple(sorted((self.degree(v) for v in range(self.n_vertices)), reverse=True))

    def to_numpy(self) -> np.ndarray:
        return np.array(self.multiplicity, dtype=np.int64)

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.n_vertices))
        graph.add_edges_from((i, j) for i, j, _ in self.edges)
        return graph

    @cached_property
    def component_count(self) -> int:
        return nx.number_connected_components(self.to_networkx())

    @property
    def is_connected(self) -> bool:
        return self.component_count == 1

    def relabel(self, permutation: Sequence[int]) -> "Multigraph":
        """Return the graph whose vertex permutation[v] is this graph's vertex v."""
        n = self.n_vertices
        if sorted(permutation) != list(range(n)):
            raise InvalidArgumentError(
                "not a permutation of the vertices", permutation=list(permutation)
            )
        matrix = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                matrix[permutation[i]][permutation[j]] = self.multiplicity[i][j]
        return Multigraph.from_matrix(matrix)


@dataclass(frozen=True)
class VertexSubset:
    parent: Multigraph
    members: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise InvalidArgumentError("vertex subset must be non-empty")
        ordered = tuple(sorted(set(self.members)))
        if ordered[0] < 0 or ordered[-1] >= self.parent.n_vertices:
            raise InvalidArgumentError(
                "vertex subset out of range",
                members=list(ordered),
                n_vertices=self.parent.n_vertices,
            )
        object.__setattr__(self, "members", ordered)

    @classmethod
    def of(cls, parent: Multigraph, members: Sequence[int]) -> "VertexSubset":
        return cls(parent=parent, members=tuple(members))

    def __len__(self) -> int:
        return len(self.members)


def induced_subgraph(g: Multigraph, s: VertexSubset) -> Multigraph:
    if s.parent is not g and s.parent != g:
        raise InvalidArgumentError("vertex subset belongs to a different graph")
    members = s.members
    return Multigraph.from_matrix([[g.multiplicity[i][j] for j in members] for i in members])


def loop_number(g: Multigraph) -> int:
    return g.edge_count - g.n_vertices + g.component_count


def edge_subset_components(edges: Sequence[Edge], subset: Iterable[int]) -> Tuple[int, int]:
    """(touched vertices, connected components) of the graph spanned by the chosen edges."""
    graph = nx.MultiGraph()
    graph.add_edges_from((edges[index][0], edges[index][1]) for index in subset)
    return graph.number_of_nodes(), nx.number_connected_components(graph)


def edge_subset_rank(edges: Sequence[Edge], subset: Iterable[int]) -> int:
    vertices, components = edge_subset_components(edges, subset)
    return vertices - components


def symmetry_factor(g: Multigraph) -> int:
    return math.prod(math.factorial(lij) for lij in g.upper_triangle)


def _bounded_tuples(length: int, max_total: int) -> Iterator[Tuple[int, ...]]:
    # lexicographic order, entries summing to at most max_total
    if length == 0:
        yield ()
        return
    for head in range(max_total + 1):
        for tail in _bounded_tuples(length - 1, max_total - head):
            yield (head, *tail)


def enumerate_graphs(n: int, max_edges: int, connected_only: bool = True) -> List[Multigraph]:
    if n < 1 or max_edges < 0:
        raise InvalidArgumentError("need n >= 1 and max_edges >= 0", n=n, max_edges=max_edges)
    pairs = n * (n - 1) // 2
    graphs = []
    for values in _bounded_tuples(pairs, max_edges):
        g = Multigraph.from_upper_triangle(n, values)
        if connected_only and not g.is_connected:
            continue
        graphs.append(g)
    return graphs


def _degree_compatible_mappings(a: Multigraph, b: Multigraph) -> Iterator[Tuple[int, ...]]:
    """Backtrack over vertex maps a -> b that preserve degrees and multiplicities."""
    n = a.n_vertices
    candidates = [[w for w in range(n) if b.degree(w) == a.degree(v)] for v in range(n)]
    mapping: List[int] = []
    used = [False] * n

    def extend(v: int) -> Iterator[Tuple[int, ...]]:
        if v == n:
            yield tuple(mapping)
            return
        for w in candidates[v]:
            if used[w]:
                continue
            if any(a.multiplicity[v][u] != b.multiplicity[w][mapping[u]] for u in range(v)):
                continue
            used[w] = True
            mapping.append(w)
            yield from extend(v + 1)
            mapping.pop()
            used[w] = False

    yield from extend(0)


def are_isomorphic(a: Multigraph, b: Multigraph) -> bool:
    if a.n_vertices != b.n_vertices:
        return False
    if a.n_vertices > MAX_ISOMORPHISM_VERTICES:
        raise CapacityError(
            f"isomorphism search is limited to {MAX_ISOMORPHISM_VERTICES} vertices",
            n_vertices=a.n_vertices,
        )
    if a.edge_count != b.edge_count or a.degree_sequence != b.degree_sequence:
        return False
    return next(_degree_compatible_mappings(a, b), None) is not None


def automorphisms(g: Multigraph) -> List[Tuple[int, ...]]:
    if g.n_vertices > MAX_ISOMORPHISM_VERTICES:
        raise CapacityError(
            f"automorphism search is limited to {MAX_ISOMORPHISM_VERTICES} vertices",
            n_vertices=g.n_vertices,
        )
    return list(_degree_compatible_mappings(g, g))


def canonical_form(g: Multigraph) -> Multigraph:
    """Lexicographically minimal upper triangle over degree-sorted relabelings.

    Vertices are first ordered by non-increasing degree; only permutations inside
    each degree class are searched, so the result is an isomorphism invariant.
    """
    n = g.n_vertices
    if n > MAX_ISOMORPHISM_VERTICES:
        raise CapacityError(
            f"canonical labelling is limited to {MAX_ISOMORPHISM_VERTICES} vertices",
            n_vertices=n,
        )
    classes: Dict[int, List[int]] = {}
    for v in range(n):
        classes.setdefault(g.degree(v), []).append(v)
    ordered_classes = [classes[d] for d in sorted(classes, reverse=True)]

    best: Optional[Tuple[int, ...]] = None
    for parts in itertools.product(*(itertools.permutations(c) for c in ordered_classes)):
        order = [v for part in parts for v in part]
        values = tuple(
            g.multiplicity[order[i]][order[j]] for i, j in itertools.combinations(range(n), 2)
        )
        if best is None or values < best:
            best = values
    assert best is not None
    return Multigraph.from_upper_triangle(n, best)


def fish() -> Multigraph:
    return banana(2)


def banana(lines: int) -> Multigraph:
    return Multigraph.from_edges(2, [(0, 1)] * lines)


def triangle() -> Multigraph:
    return Multigraph.from_edges(3, [(0, 1), (0, 2), (1, 2)])


def wheel_with_three_spokes() -> Multigraph:
    """Rim 0-1-2 plus hub 3."""
    return Multigraph.from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)])


NAMED_GRAPHS = {
    "fish": fish,
    "triangle": triangle,
    "wheel3": wheel_with_three_spokes,
    "banana3": lambda: banana(3),
    "banana4": lambda: banana(4),
}
