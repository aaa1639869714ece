import pytest

from feynman_residue_lab.combinatorics import VertexMonomial
from feynman_residue_lab.dsl import format_graph, graph_to_json, parse_graph, parse_monomial
from feynman_residue_lab.errors import GraphParseError
from feynman_residue_lab.graph import (
    Multigraph,
    are_isomorphic,
    enumerate_graphs,
    fish,
    triangle,
    wheel_with_three_spokes,
)


def test_parse_dsl_with_parallel_edges() -> None:
    assert parse_graph("n=2; e=0-1,0-1") == fish()
    assert parse_graph(" n = 3 ; e = 0-1, 0-2, 1-2 ") == triangle()


def test_parse_isolated_vertex_forms() -> None:
    single = Multigraph.from_matrix([[0]])

    assert parse_graph("n=1") == single
    assert parse_graph("n=1;") == single
    assert parse_graph("n=1; e=") == single


def test_parse_named_and_json_graphs() -> None:
    assert parse_graph("wheel3") == wheel_with_three_spokes()
    assert parse_graph('{"vertices": 2, "edges": [[0, 1], [1, 0]]}') == fish()


def test_format_round_trips_through_parse() -> None:
    text = format_graph(wheel_with_three_spokes())

    assert text == "n=4; e=0-1,0-2,0-3,1-2,1-3,2-3"
    assert parse_graph(text) == wheel_with_three_spokes()
    assert graph_to_json(fish()) == {"vertices": 2, "edges": [[0, 1], [0, 1]]}


def test_out_of_range_vertex_reports_position() -> None:
    with pytest.raises(GraphParseError) as info:
        parse_graph("n=2; e=0-2")

    assert info.value.position == 9
    assert info.value.exit_code == 2


def test_tadpoles_are_parse_errors() -> None:
    with pytest.raises(GraphParseError, match="tadpoles unsupported"):
        parse_graph("n=2; e=1-1")
    with pytest.raises(GraphParseError, match="tadpoles unsupported"):
        parse_graph('{"vertices": 2, "edges": [[0, 0]]}')


def test_malformed_graphs() -> None:
    for text in ("", "m=2", "n=2; e=0-", "n=2; e=0-1 junk", "n=0", '{"edges": []}', "{nope"):
        with pytest.raises(GraphParseError):
            parse_graph(text)


def test_parse_monomials() -> None:
    assert parse_monomial("1") == VertexMonomial.unit()
    assert parse_monomial("phi^4") == VertexMonomial.of({"phi": 4})
    assert parse_monomial("phi^2 * dphi") == VertexMonomial.of({"phi": 2, "dphi": 1})


def test_malformed_monomials() -> None:
    for text in ("", "phi^", "phi^2 dphi", "2phi"):
        with pytest.raises(GraphParseError):
            parse_monomial(text)


def test_format_then_parse_preserves_the_graph() -> None:
    for g in enumerate_graphs(4, 5):
        again = parse_graph(format_graph(g))
        assert again == g
        assert are_isomorphic(again, g)
