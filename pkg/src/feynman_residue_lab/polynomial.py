"""Exact integer polynomials in edge variables and the dual graph polynomial.

The dual polynomial is computed two ways: as the determinant of a Kirchhoff
minor (fraction-free elimination over ZZ[a1..aE]) and as a sum over spanning
trees enumerated by deletion-contraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple

import numpy as np
import sympy
from sympy import ZZ, Poly

from .errors import CapacityError, InvalidArgumentError, NoSpanningTreeError
from .graph import Multigraph

Exponent = Tuple[int, ...]

MAX_COFACTOR_DIMENSION = 5


def edge_variables(g: Multigraph) -> Tuple[str, ...]:
    """a1..aE in canonical edge order."""
    return tuple(f"a{k}" for k in range(1, g.edge_count + 1))


@dataclass(frozen=True)
class ExactPolynomial:
    variables: Tuple[str, ...]
    terms: Tuple[Tuple[Exponent, int], ...]

    def __post_init__(self) -> None:
        cleaned: Dict[Exponent, int] = {}
        for exponent, coefficient in self.terms:
            if len(exponent) != len(self.variables):
                raise InvalidArgumentError(
                    "exponent vector length does not match the variables",
                    exponent=list(exponent),
                )
            cleaned[tuple(exponent)] = cleaned.get(tuple(exponent), 0) + int(coefficient)
        ordered = tuple(sorted(((e, c) for e, c in cleaned.items() if c != 0), reverse=True))
        object.__setattr__(self, "terms", ordered)

    @classmethod
    def from_dict(
        cls, variables: Sequence[str], terms: Mapping[Exponent, int]
    ) -> "ExactPolynomial":
        return cls(variables=tuple(variables), terms=tuple(terms.items()))

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "ExactPolynomial":
        return cls(variables=tuple(variables), terms=())

    @classmethod
    def constant(cls, variables: Sequence[str], value: int) -> "ExactPolynomial":
        return cls(variables=tuple(variables), terms=(((0,) * len(variables), value),))

    @classmethod
    def variable(cls, variables: Sequence[str], index: int) -> "ExactPolynomial":
        exponent = tuple(1 if k == index else 0 for k in range(len(variables)))
        return cls(variables=tuple(variables), terms=((exponent, 1),))

    @classmethod
    def from_sympy(cls, poly: Poly, variables: Sequence[str]) -> "ExactPolynomial":
        return cls(variables=tuple(variables), terms=tuple((e, int(c)) for e, c in poly.terms()))

    def to_sympy(self) -> Poly:
        gens = sympy.symbols(self.variables) if self.variables else ()
        if not gens:
            value = self.terms[0][1] if self.terms else 0
            return Poly(value, sympy.Symbol("_"), domain=ZZ)
        return Poly.from_dict(dict(self.terms) or {(0,) * len(gens): 0}, *gens, domain=ZZ)

    def as_dict(self) -> Dict[Exponent, int]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def _check_compatible(self, other: "ExactPolynomial") -> None:
        if self.variables != other.variables:
            raise InvalidArgumentError("polynomials use different variable orderings")

    def __add__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        self._check_compatible(other)
        return ExactPolynomial(self.variables, self.terms + other.terms)

    def __neg__(self) -> "ExactPolynomial":
        return ExactPolynomial(self.variables, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        return self + (-other)

    def __mul__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        self._check_compatible(other)
        products = [
            (tuple(x + y for x, y in zip(e1, e2)), c1 * c2)
            for e1, c1 in self.terms
            for e2, c2 in other.terms
        ]
        return ExactPolynomial(self.variables, tuple(products))

    @property
    def total_degrees(self) -> Tuple[int, ...]:
        return tuple(sorted({sum(e) for e, _ in self.terms}))

    @property
    def is_homogeneous(self) -> bool:
        return len(self.total_degrees) <= 1

    @cached_property
    def _exponent_array(self) -> np.ndarray:
        return np.array([e for e, _ in self.terms], dtype=np.float64).reshape(
            len(self.terms), len(self.variables)
        )

    @cached_property
    def _coefficient_array(self) -> np.ndarray:
        return np.array([c for _, c in self.terms], dtype=np.float64)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at each row of an (N, len(variables)) array."""
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if points.shape[1] != len(self.variables):
            raise InvalidArgumentError(
                "evaluation point has the wrong dimension",
                expected=len(self.variables),
                got=int(points.shape[1]),
            )
        if not self.terms:
            return np.zeros(points.shape[0])
        monomials = np.prod(points[:, None, :] ** self._exponent_array[None, :, :], axis=2)
        return monomials @ self._coefficient_array

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces: List[str] = []
        for exponent, coefficient in self.terms:
            factors = [
                name if power == 1 else f"{name}^{power}"
                for name, power in zip(self.variables, exponent)
                if power
            ]
            magnitude = abs(coefficient)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(magnitude), *factors])
            if not pieces:
                pieces.append(body if coefficient > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coefficient > 0 else f"- {body}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class PolyMatrix:
    dimension: int
    entries: Tuple[Tuple[ExactPolynomial, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.dimension or any(
            len(row) != self.dimension for row in self.entries
        ):
            raise InvalidArgumentError("PolyMatrix must be square")
        orderings = {entry.variables for row in self.entries for entry in row}
        if len(orderings) > 1:
            raise InvalidArgumentError("PolyMatrix entries must share one variable ordering")

    def __getitem__(self, index: Tuple[int, int]) -> ExactPolynomial:
        i, j = index
        return self.entries[i][j]

    def minor(self, row: int, column: int) -> "PolyMatrix":
        rows = [
            tuple(entry for j, entry in enumerate(r) if j != column)
            for i, r in enumerate(self.entries)
            if i != row
        ]
        return PolyMatrix(dimension=self.dimension - 1, entries=tuple(rows))

    def row_sums(self) -> List[ExactPolynomial]:
        sums = []
        for row in self.entries:
            total = ExactPolynomial.zero(row[0].variables)
            for entry in row:
                total = total + entry
            sums.append(total)
        return sums

    def column_sums(self) -> List[ExactPolynomial]:
        transposed = PolyMatrix(
            self.dimension,
            tuple(
                tuple(self.entries[i][j] for i in range(self.dimension))
                for j in range(self.dimension)
            ),
        )
        return transposed.row_sums()


def kirchhoff_matrix(g: Multigraph) -> PolyMatrix:
    variables = edge_variables(g)
    n = g.n_vertices
    cells: List[List[ExactPolynomial]] = [
        [ExactPolynomial.zero(variables) for _ in range(n)] for _ in range(n)
    ]
    for index, (i, j, _) in enumerate(g.edges):
        alpha = ExactPolynomial.variable(variables, index)
        cells[i][i] = cells[i][i] + alpha
        cells[j][j] = cells[j][j] + alpha
        cells[i][j] = cells[i][j] - alpha
        cells[j][i] = cells[j][i] - alpha
    return PolyMatrix(dimension=n, entries=tuple(tuple(row) for row in cells))


def _bareiss_determinant(rows: List[List[Poly]], one: Poly) -> Poly:
    size = len(rows)
    if size == 0:
        return one
    matrix = [list(row) for row in rows]
    sign = 1
    previous = one
    for k in range(size - 1):
        if matrix[k][k].is_zero:
            swap = next((r for r in range(k + 1, size) if not matrix[r][k].is_zero), None)
            if swap is None:
                return one * 0
            matrix[k], matrix[swap] = matrix[swap], matrix[k]
            sign = -sign
        pivot = matrix[k][k]
        for r in range(k + 1, size):
            for c in range(k + 1, size):
                matrix[r][c] = (matrix[r][c] * pivot - matrix[r][k] * matrix[k][c]).exquo(previous)
        previous = pivot
    return matrix[-1][-1] * sign


def _cofactor_determinant(rows: List[List[Poly]], one: Poly) -> Poly:
    size = len(rows)
    if size == 0:
        return one
    if size == 1:
        return rows[0][0]
    total = one * 0
    for column, entry in enumerate(rows[0]):
        if entry.is_zero:
            continue
        sub = [row[:column] + row[column + 1 :] for row in rows[1:]]
        term = entry * _cofactor_determinant(sub, one)
        total = total + term if column % 2 == 0 else total - term
    return total


def determinant(matrix: PolyMatrix, method: str = "bareiss") -> ExactPolynomial:
    if matrix.dimension == 0:
        raise InvalidArgumentError("determinant of an empty PolyMatrix needs a variable ordering")
    variables = matrix.entries[0][0].variables
    return _determinant_rows(
        [[entry.to_sympy() for entry in row] for row in matrix.entries], variables, method
    )


def _determinant_rows(
    rows: List[List[Poly]], variables: Tuple[str, ...], method: str
) -> ExactPolynomial:
    one = ExactPolynomial.constant(variables, 1).to_sympy()
    if method == "bareiss":
        result = _bareiss_determinant(rows, one)
    elif method == "cofactor":
        if len(rows) > MAX_COFACTOR_DIMENSION:
            raise CapacityError(
                f"cofactor expansion is limited to dimension {MAX_COFACTOR_DIMENSION}",
                dimension=len(rows),
            )
        result = _cofactor_determinant(rows, one)
    else:
        raise InvalidArgumentError(f"unknown determinant method {method!r}")
    if not variables:
        return ExactPolynomial.constant((), int(result.LC()) if not result.is_zero else 0)
    return ExactPolynomial.from_sympy(result, variables)


def dual_polynomial_minor(
    g: Multigraph, root_vertex: int, method: str = "bareiss"
) -> ExactPolynomial:
    if not 0 <= root_vertex < g.n_vertices:
        raise InvalidArgumentError(
            "root vertex out of range", root_vertex=root_vertex, n_vertices=g.n_vertices
        )
    if not g.is_connected:
        raise NoSpanningTreeError()
    laplacian = kirchhoff_matrix(g)
    variables = edge_variables(g)
    rows = [
        [laplacian[i, j].to_sympy() for j in range(g.n_vertices) if j != root_vertex]
        for i in range(g.n_vertices)
        if i != root_vertex
    ]
    result = _determinant_rows(rows, variables, method)
    if result.is_zero:
        raise NoSpanningTreeError()
    return result


def _contract(
    bundles: Dict[Tuple[int, int], List[int]], keep: int, merge: int
) -> Dict[Tuple[int, int], List[int]]:
    merged: Dict[Tuple[int, int], List[int]] = {}
    for (u, v), ids in bundles.items():
        u2 = keep if u == merge else u
        v2 = keep if v == merge else v
        if u2 == v2:
            continue
        key = (min(u2, v2), max(u2, v2))
        merged.setdefault(key, []).extend(ids)
    return merged


def _spanning_trees(
    vertices: frozenset, bundles: Dict[Tuple[int, int], List[int]]
) -> Iterator[Tuple[int, ...]]:
    # deletion-contraction on bundles of parallel edges
    if len(vertices) == 1:
        yield ()
        return
    if not bundles:
        return
    (u, v), ids = next(iter(sorted(bundles.items())))
    contracted = _contract({k: b for k, b in bundles.items() if k != (u, v)}, u, v)
    sub_trees = list(_spanning_trees(vertices - {v}, contracted))
    for edge_id in ids:
        for tree in sub_trees:
            yield (edge_id, *tree)
    deleted = {k: b for k, b in bundles.items() if k != (u, v)}
    yield from _spanning_trees(vertices, deleted)


def spanning_trees(g: Multigraph) -> List[Tuple[int, ...]]:
    """Spanning trees as sorted tuples of canonical edge indices."""
    bundles: Dict[Tuple[int, int], List[int]] = {}
    for index, (i, j, _) in enumerate(g.edges):
        bundles.setdefault((i, j), []).append(index)
    trees = _spanning_trees(frozenset(range(g.n_vertices)), bundles)
    return sorted(tuple(sorted(tree)) for tree in trees)


def dual_polynomial_trees(g: Multigraph) -> ExactPolynomial:
    if not g.is_connected:
        raise NoSpanningTreeError()
    variables = edge_variables(g)
    terms = []
    for tree in spanning_trees(g):
        exponent = [0] * len(variables)
        for index in tree:
            exponent[index] = 1
        terms.append((tuple(exponent), 1))
    return ExactPolynomial(variables=variables, terms=tuple(terms))


def spanning_tree_count(g: Multigraph) -> int:
    """Matrix-tree count: determinant of the integer Laplacian minor at alpha = 1."""
    if g.n_vertices == 1:
        return 1
    adjacency = sympy.Matrix(g.multiplicity)
    laplacian = sympy.diag(*[g.degree(v) for v in range(g.n_vertices)]) - adjacency
    return int(laplacian[1:, 1:].det(method="bareiss"))
