"""Wick-submonomial coproduct and the vertex-partition expansion of the RG generator."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .corpus import CorpusEntry, lookup_known_period
from .dsl import graph_to_json
from .errors import CapacityError, InvalidArgumentError, PreconditionError, RequiresExtensionError
from .graph import Multigraph, VertexSubset, induced_subgraph
from .power_counting import check_dimension, power_count
from .quadrature import QuadratureConfig, evaluate_period
from .residue import ResidueValue, residue_from_period

MAX_BETA_VERTICES = 12


@dataclass(frozen=True)
class VertexMonomial:
    """Decorated field monomial at a vertex, e.g. phi^2 * dphi."""

    factors: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        merged: Dict[str, int] = {}
        for label, power in self.factors:
            if not label:
                raise InvalidArgumentError("monomial labels must be non-empty")
            if power < 0:
                raise InvalidArgumentError("monomial powers must be non-negative", label=label)
            merged[label] = merged.get(label, 0) + power
        normalized = tuple(sorted((label, p) for label, p in merged.items() if p > 0))
        object.__setattr__(self, "factors", normalized)

    @classmethod
    def of(cls, factors: Mapping[str, int]) -> "VertexMonomial":
        return cls(tuple(factors.items()))

    @classmethod
    def unit(cls) -> "VertexMonomial":
        return cls()

    @property
    def is_unit(self) -> bool:
        return not self.factors

    @property
    def degree(self) -> int:
        return sum(power for _, power in self.factors)

    def power(self, label: str) -> int:
        return dict(self.factors).get(label, 0)

    def divides(self, other: "VertexMonomial") -> bool:
        return all(other.power(label) >= power for label, power in self.factors)

    def __truediv__(self, other: "VertexMonomial") -> "VertexMonomial":
        if not other.divides(self):
            raise InvalidArgumentError("not a Wick submonomial", p=str(self), q=str(other))
        return VertexMonomial(tuple((label, p - other.power(label)) for label, p in self.factors))

    def __mul__(self, other: "VertexMonomial") -> "VertexMonomial":
        return VertexMonomial(self.factors + other.factors)

    def __str__(self) -> str:
        if self.is_unit:
            return "1"
        return "*".join(f"{label}^{power}" for label, power in self.factors)


@dataclass(frozen=True)
class CoproductTerm:
    coefficient: int
    left: VertexMonomial
    right: VertexMonomial

    def to_dict(self) -> Dict[str, Any]:
        return {"coefficient": self.coefficient, "left": str(self.left), "right": str(self.right)}


def wick_submonomials(p: VertexMonomial) -> List[VertexMonomial]:
    """All divisors of p, from the unit up to p itself."""
    labels = [label for label, _ in p.factors]
    ranges = [range(power + 1) for _, power in p.factors]
    return [VertexMonomial(tuple(zip(labels, powers))) for powers in itertools.product(*ranges)]


def coproduct(p: VertexMonomial) -> List[CoproductTerm]:
    terms = []
    for q in wick_submonomials(p):
        coefficient = math.prod(math.comb(n, q.power(label)) for label, n in p.factors)
        terms.append(CoproductTerm(coefficient=coefficient, left=p / q, right=q))
    return terms


def set_partitions(n: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """Partitions of {0..n-1} in restricted-growth-string order."""
    if n < 1:
        return
    growth = [0] * n

    def blocks() -> Tuple[Tuple[int, ...], ...]:
        grouped: Dict[int, List[int]] = {}
        for vertex, block in enumerate(growth):
            grouped.setdefault(block, []).append(vertex)
        return tuple(tuple(grouped[b]) for b in sorted(grouped))

    def extend(position: int, largest: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
        if position == n:
            yield blocks()
            return
        for block in range(largest + 2):
            growth[position] = block
            yield from extend(position + 1, max(largest, block))

    growth[0] = 0
    yield from extend(1, 0)


def bell_number(n: int) -> int:
    """Bell triangle."""
    if n < 0:
        raise InvalidArgumentError("n must be non-negative", n=n)
    row = [1]
    for _ in range(n):
        following = [row[-1]]
        for value in row:
            following.append(following[-1] + value)
        row = following
    return row[0]


class LeafStatus(str, Enum):
    PRIMITIVE_WITH_RESIDUE = "primitive-with-residue"
    REQUIRES_EXTENSION = "requires-extension"
    SINGLE_VERTEX = "single-vertex"
    DISCONNECTED = "disconnected"


@dataclass(frozen=True)
class BetaTerm:
    partition: Tuple[Tuple[int, ...], ...]
    quotient_graph: Multigraph
    block_graphs: Tuple[Multigraph, ...]
    leaf_status: Tuple[LeafStatus, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "partition": [list(block) for block in self.partition],
            "quotient_graph": graph_to_json(self.quotient_graph),
            "block_graphs": [graph_to_json(block) for block in self.block_graphs],
            "leaf_status": [status.value for status in self.leaf_status],
        }


def _leaf_status(block: Multigraph, dim: int) -> LeafStatus:
    if block.n_vertices == 1:
        return LeafStatus.SINGLE_VERTEX
    if not block.is_connected:
        return LeafStatus.DISCONNECTED
    if power_count(block, dim).eg_primitive:
        return LeafStatus.PRIMITIVE_WITH_RESIDUE
    return LeafStatus.REQUIRES_EXTENSION


def _quotient_graph(g: Multigraph, partition: Sequence[Sequence[int]]) -> Multigraph:
    block_of = {v: index for index, block in enumerate(partition) for v in block}
    n = g.n_vertices
    return Multigraph.from_matrix(
        [
            [g.multiplicity[i][j] if block_of[i] != block_of[j] else 0 for j in range(n)]
            for i in range(n)
        ]
    )


def beta_expansion(g: Multigraph, dim: int) -> List[BetaTerm]:
    """One term per vertex partition except the partition into singletons."""
    check_dimension(dim)
    if g.n_vertices > MAX_BETA_VERTICES:
        raise CapacityError(
            f"partition expansion is limited to {MAX_BETA_VERTICES} vertices",
            n_vertices=g.n_vertices,
        )
    if not g.is_connected:
        raise PreconditionError("graph must be connected", n_vertices=g.n_vertices)
    terms = []
    for partition in set_partitions(g.n_vertices):
        if len(partition) == g.n_vertices:
            continue
        blocks = tuple(induced_subgraph(g, VertexSubset.of(g, block)) for block in partition)
        terms.append(
            BetaTerm(
                partition=partition,
                quotient_graph=_quotient_graph(g, partition),
                block_graphs=blocks,
                leaf_status=tuple(_leaf_status(block, dim) for block in blocks),
            )
        )
    return terms


def primitive_beta_value(
    g: Multigraph,
    dim: int,
    cfg: Optional[QuadratureConfig] = None,
    corpus: Optional[Sequence[CorpusEntry]] = None,
) -> ResidueValue:
    """Res u^g for an EG-primitive graph, exact when the corpus knows its period."""
    report = power_count(g, dim)
    if not report.eg_primitive:
        raise RequiresExtensionError(
            "graph is not EG-primitive; its beta contribution needs an extension",
            divergence_degree=report.divergence_degree,
        )
    known = lookup_known_period(g, dim, corpus)
    if known is not None:
        return residue_from_period(g, dim, known)
    estimate = evaluate_period(g, dim, cfg)
    return residue_from_period(g, dim, estimate.value)
