"""Scaling degree, divergence degree and primitivity of graphs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Dict, Optional

from .errors import PreconditionError, UnsupportedDimensionError
from .graph import (
    Multigraph,
    VertexSubset,
    edge_subset_components,
    induced_subgraph,
    loop_number,
)

MAX_CK_EDGES = 16


@dataclass(frozen=True)
class PowerCountReport:
    dimension: int
    scaling_degree: int
    divergence_degree: int
    superficially_divergent: bool
    eg_primitive: bool
    worst_subgraph: Optional[VertexSubset]
    worst_subgraph_degree: Optional[int]
    induced_subdivergence_free: bool
    ck_primitive: Optional[bool]
    scaling_order: Optional[int]
    vertex_count: int
    edge_count: int
    loop_number: int

    @property
    def configuration_dimension(self) -> int:
        """N = (|V| - 1) D, the dimension the distribution lives on."""
        return (self.vertex_count - 1) * self.dimension

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dimension": self.dimension,
            "scaling_degree": self.scaling_degree,
            "divergence_degree": self.divergence_degree,
            "superficially_divergent": self.superficially_divergent,
            "eg_primitive": self.eg_primitive,
            "ck_primitive": self.ck_primitive,
            "induced_subdivergence_free": self.induced_subdivergence_free,
            "scaling_order": self.scaling_order,
            "worst_subgraph": list(self.worst_subgraph.members) if self.worst_subgraph else None,
            "worst_subgraph_degree": self.worst_subgraph_degree,
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "loop_number": self.loop_number,
            "configuration_dimension": self.configuration_dimension,
        }


def check_dimension(dimension: int) -> None:
    if dimension < 4 or dimension % 2:
        raise UnsupportedDimensionError(dimension)


def scaling_degree(edge_count: int, dimension: int) -> int:
    return (dimension - 2) * edge_count


def divergence_degree(edge_count: int, vertex_count: int, dimension: int) -> int:
    return scaling_degree(edge_count, dimension) - (vertex_count - 1) * dimension


def _require_connected(g: Multigraph) -> None:
    if not g.is_connected:
        raise PreconditionError("graph must be connected", n_vertices=g.n_vertices)


def _ck_subdivergence_free(g: Multigraph, dimension: int) -> bool:
    edges = g.edges
    count = len(edges)
    for size in range(1, count):
        for subset in itertools.combinations(range(count), size):
            vertices, components = edge_subset_components(edges, subset)
            if components != 1:
                continue
            if divergence_degree(size, vertices, dimension) >= 0:
                return False
    return True


def power_count(g: Multigraph, dim: int) -> PowerCountReport:
    check_dimension(dim)
    _require_connected(g)
    n = g.n_vertices
    omega = divergence_degree(g.edge_count, n, dim)

    worst: Optional[VertexSubset] = None
    worst_degree: Optional[int] = None
    for size in range(2, n):
        for members in itertools.combinations(range(n), size):
            subset = VertexSubset.of(g, members)
            sub = induced_subgraph(g, subset)
            sub_omega = divergence_degree(sub.edge_count, size, dim)
            if worst_degree is None or sub_omega > worst_degree:
                worst, worst_degree = subset, sub_omega

    induced_free = worst_degree is None or worst_degree < 0
    eg_primitive = n >= 2 and omega == 0 and induced_free
    ck_primitive: Optional[bool] = None
    if g.edge_count <= MAX_CK_EDGES:
        ck_primitive = n >= 2 and omega == 0 and _ck_subdivergence_free(g, dim)

    return PowerCountReport(
        dimension=dim,
        scaling_degree=scaling_degree(g.edge_count, dim),
        divergence_degree=omega,
        superficially_divergent=omega >= 0,
        eg_primitive=eg_primitive,
        worst_subgraph=worst,
        worst_subgraph_degree=worst_degree,
        induced_subdivergence_free=induced_free,
        ck_primitive=ck_primitive,
        scaling_order=0 if eg_primitive else None,
        vertex_count=n,
        edge_count=g.edge_count,
        loop_number=loop_number(g),
    )


def check_cond_primitive(g: Multigraph, dim: int) -> bool:
    """|E| = (D/2) h1, the degree-zero condition written with the loop number."""
    _require_connected(g)
    return 2 * g.edge_count == dim * loop_number(g)


def period_convergence_precheck(g: Multigraph, dim: int) -> bool:
    return power_count(g, dim).eg_primitive

