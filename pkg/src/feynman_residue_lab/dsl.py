"""Text forms of graphs and vertex monomials.

Graph DSL::

    n=<int>; e=<i>-<j>[,<i>-<j>...]

Repeated pairs mean parallel edges and whitespace is ignored. The JSON form
``{"vertices": n, "edges": [[i, j], ...]}`` and the names in ``NAMED_GRAPHS``
are accepted as well.

Monomial DSL: ``label^power`` factors joined by ``*``; ``1`` is the unit.
"""

from __future__ import annotations

import json
import re
from typing import TYPE_CHECKING, Any, Dict, List, Tuple

from .errors import GraphParseError, InvalidArgumentError
from .graph import NAMED_GRAPHS, Multigraph

if TYPE_CHECKING:
    from .combinatorics import VertexMonomial

_INT = re.compile(r"\d+")
_LABEL = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


class _Scanner:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def skip_space(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_space()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_space()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, literal: str) -> None:
        self.skip_space()
        if not self.text.startswith(literal, self.pos):
            raise GraphParseError(f"expected '{literal}'", position=self.pos)
        self.pos += len(literal)

    def accept(self, literal: str) -> bool:
        self.skip_space()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def integer(self) -> Tuple[int, int]:
        self.skip_space()
        match = _INT.match(self.text, self.pos)
        if not match:
            raise GraphParseError("expected a non-negative integer", position=self.pos)
        self.pos = match.end()
        return int(match.group()), match.start()

    def label(self) -> str:
        self.skip_space()
        match = _LABEL.match(self.text, self.pos)
        if not match:
            raise GraphParseError("expected a field label", position=self.pos)
        self.pos = match.end()
        return match.group()


def _parse_dsl(text: str) -> Multigraph:
    scanner = _Scanner(text)
    scanner.expect("n")
    scanner.expect("=")
    n, n_position = scanner.integer()
    if n < 1:
        raise GraphParseError("a graph needs at least one vertex", position=n_position)
    edges: List[Tuple[int, int]] = []
    if scanner.accept(";") and not scanner.at_end():
        scanner.expect("e")
        scanner.expect("=")
        while not scanner.at_end() and scanner.peek() != ";":
            i, i_position = scanner.integer()
            scanner.expect("-")
            j, j_position = scanner.integer()
            for vertex, position in ((i, i_position), (j, j_position)):
                if vertex >= n:
                    raise GraphParseError(
                        f"vertex {vertex} out of range for n={n}", position=position
                    )
            if i == j:
                raise GraphParseError("tadpoles unsupported", position=i_position)
            edges.append((i, j))
            if not scanner.accept(","):
                break
        scanner.accept(";")
    if not scanner.at_end():
        raise GraphParseError("unexpected trailing input", position=scanner.pos)
    return Multigraph.from_edges(n, edges)


def _parse_json(text: str) -> Multigraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid graph JSON: {exc.msg}", position=exc.pos) from exc
    if not isinstance(data, dict) or "vertices" not in data:
        raise GraphParseError("graph JSON needs a 'vertices' field", position=0)
    try:
        n = int(data["vertices"])
        edges = [(int(i), int(j)) for i, j in data.get("edges", [])]
    except (TypeError, ValueError) as exc:
        raise GraphParseError("graph JSON edges must be [i, j] integer pairs", position=0) from exc
    for index, (i, j) in enumerate(edges):
        if i == j:
            raise GraphParseError("tadpoles unsupported", position=index)
        if not (0 <= i < n and 0 <= j < n):
            raise GraphParseError(f"edge {index} out of range for n={n}", position=index)
    try:
        return Multigraph.from_edges(n, edges)
    except InvalidArgumentError as exc:
        raise GraphParseError(exc.message, position=0) from exc


def parse_graph(text: str) -> Multigraph:
    stripped = text.strip()
    if stripped in NAMED_GRAPHS:
        return NAMED_GRAPHS[stripped]()
    if stripped.startswith("{"):
        return _parse_json(stripped)
    return _parse_dsl(text)


def format_graph(g: Multigraph) -> str:
    edges = ",".join(f"{i}-{j}" for i, j, _ in g.edges)
    return f"n={g.n_vertices}; e={edges}"


def graph_to_json(g: Multigraph) -> Dict[str, Any]:
    return {"vertices": g.n_vertices, "edges": [[i, j] for i, j, _ in g.edges]}


def parse_monomial(text: str) -> "VertexMonomial":
    from .combinatorics import VertexMonomial

    scanner = _Scanner(text)
    if scanner.at_end():
        raise GraphParseError("empty monomial", position=0)
    if scanner.accept("1") and scanner.at_end():
        return VertexMonomial.unit()
    scanner.pos = 0
    factors: List[Tuple[str, int]] = []
    while True:
        label = scanner.label()
        power = 1
        if scanner.accept("^"):
            power, _ = scanner.integer()
        factors.append((label, power))
        if scanner.at_end():
            break
        scanner.expect("*")
    return VertexMonomial(tuple(factors))
