from fractions import Fraction

import numpy as np
import pytest

from feynman_residue_lab.combinatorics import (
    LeafStatus,
    VertexMonomial,
    beta_expansion,
    bell_number,
    coproduct,
    primitive_beta_value,
    set_partitions,
    wick_submonomials,
)
from feynman_residue_lab.errors import (
    CapacityError,
    InvalidArgumentError,
    PreconditionError,
    RequiresExtensionError,
)
from feynman_residue_lab.graph import Multigraph, banana, fish, triangle, wheel_with_three_spokes
from feynman_residue_lab.quadrature import QuadratureConfig


def test_monomial_normalizes_factors() -> None:
    p = VertexMonomial((("phi", 2), ("dphi", 1), ("phi", 1), ("psi", 0)))

    assert p.factors == (("dphi", 1), ("phi", 3))
    assert p.degree == 4
    assert str(p) == "dphi^1*phi^3"
    assert str(VertexMonomial.unit()) == "1"


def test_monomial_division_requires_a_divisor() -> None:
    p = VertexMonomial.of({"phi": 2})

    assert p / VertexMonomial.of({"phi": 1}) == VertexMonomial.of({"phi": 1})
    with pytest.raises(InvalidArgumentError):
        _ = p / VertexMonomial.of({"dphi": 1})


def test_coproduct_of_phi_four() -> None:
    terms = coproduct(VertexMonomial.of({"phi": 4}))

    assert [term.coefficient for term in terms] == [1, 4, 6, 4, 1]
    assert [term.right.degree for term in terms] == [0, 1, 2, 3, 4]
    assert all(term.left * term.right == VertexMonomial.of({"phi": 4}) for term in terms)


def test_coproduct_of_mixed_monomial() -> None:
    p = VertexMonomial.of({"phi": 2, "dphi": 1})
    terms = coproduct(p)

    assert len(terms) == len(wick_submonomials(p)) == 6
    assert sum(term.coefficient for term in terms) == 2**3
    assert terms[0].right.is_unit
    assert terms[-1].left.is_unit


def test_coproduct_of_unit() -> None:
    terms = coproduct(VertexMonomial.unit())

    assert len(terms) == 1
    assert terms[0].coefficient == 1


def test_set_partitions_follow_bell_numbers() -> None:
    for n in range(1, 8):
        partitions = list(set_partitions(n))
        assert len(partitions) == bell_number(n)
        assert len(set(partitions)) == len(partitions)
    assert [bell_number(n) for n in range(6)] == [1, 1, 2, 5, 15, 52]
    assert list(set_partitions(3))[0] == ((0, 1, 2),)
    assert list(set_partitions(3))[-1] == ((0,), (1,), (2,))


def test_beta_expansion_term_counts() -> None:
    counts = [len(beta_expansion(Multigraph.from_edges(n, [(k, k + 1) for k in range(n - 1)]), 4))
              for n in range(2, 7)]

    assert counts == [1, 4, 14, 51, 202]


def test_beta_expansion_of_fish() -> None:
    (term,) = beta_expansion(fish(), 4)

    assert term.partition == ((0, 1),)
    assert term.quotient_graph.edge_count == 0
    assert term.block_graphs == (fish(),)
    assert term.leaf_status == (LeafStatus.PRIMITIVE_WITH_RESIDUE,)


def test_beta_expansion_leaf_statuses() -> None:
    g = Multigraph.from_edges(3, [(0, 1), (0, 1), (1, 2)])
    by_partition = {term.partition: term for term in beta_expansion(g, 4)}

    assert by_partition[((0, 1), (2,))].leaf_status == (
        LeafStatus.PRIMITIVE_WITH_RESIDUE,
        LeafStatus.SINGLE_VERTEX,
    )
    assert by_partition[((0, 2), (1,))].leaf_status == (
        LeafStatus.DISCONNECTED,
        LeafStatus.SINGLE_VERTEX,
    )
    assert by_partition[((0, 1), (2,))].quotient_graph.upper_triangle == (0, 0, 1)
    assert by_partition[((0, 1, 2),)].leaf_status == (LeafStatus.REQUIRES_EXTENSION,)


def test_beta_expansion_preconditions() -> None:
    with pytest.raises(PreconditionError):
        beta_expansion(Multigraph.from_edges(3, [(0, 1)]), 4)
    ring = Multigraph.from_edges(13, [(k, (k + 1) % 13) for k in range(13)])
    with pytest.raises(CapacityError):
        beta_expansion(ring, 4)


def test_primitive_beta_value_prefers_the_corpus() -> None:
    value = primitive_beta_value(wheel_with_three_spokes(), 4)

    assert value.rational_part == Fraction(3, 1024)
    assert value.tag == "zeta3"


def test_primitive_beta_value_falls_back_to_quadrature() -> None:
    cfg = QuadratureConfig(points_per_axis=32)
    value = primitive_beta_value(triangle(), 6, cfg, corpus=[])

    assert value.tag == "P_Gamma"
    assert value.tag_value == pytest.approx(0.5, abs=1e-3)


def test_non_primitive_graph_requires_extension() -> None:
    with pytest.raises(RequiresExtensionError):
        primitive_beta_value(banana(4), 4)


def test_coproduct_identities() -> None:
    for n in range(13):
        terms = coproduct(VertexMonomial.of({"phi": n}))
        assert sum(term.coefficient for term in terms) == 2**n
        pairs = sorted((t.coefficient, str(t.left), str(t.right)) for t in terms)
        swapped = sorted((t.coefficient, str(t.right), str(t.left)) for t in terms)
        assert pairs == swapped
    assert [t.coefficient for t in coproduct(VertexMonomial.of({"phi": 1}))] == [1, 1]


def test_coproduct_counit_terms() -> None:
    p = VertexMonomial.of({"phi": 2, "dphi": 1})
    terms = coproduct(p)

    assert [t.coefficient for t in terms if t.right.is_unit] == [1]
    assert [t.coefficient for t in terms if t.left.is_unit] == [1]
    mixed = [t for t in terms if t.right == VertexMonomial.of({"phi": 1, "dphi": 1})]
    assert [t.coefficient for t in mixed] == [2]


def test_beta_expansion_conserves_edges() -> None:
    for g, dim in ((wheel_with_three_spokes(), 4), (triangle(), 6)):
        for term in beta_expansion(g, dim):
            inner = sum(block.edge_count for block in term.block_graphs)
            assert term.quotient_graph.edge_count + inner == g.edge_count
    assert len(beta_expansion(triangle(), 6)) == 4


def test_beta_expansion_term_counts_on_longer_paths() -> None:
    for n, expected in ((7, 876), (8, 4139)):
        path = Multigraph.from_edges(n, [(k, k + 1) for k in range(n - 1)])
        assert len(beta_expansion(path, 4)) == expected == bell_number(n) - 1


def test_beta_expansion_conserves_edges_on_random_graphs() -> None:
    rng = np.random.default_rng(2024)
    for _ in range(100):
        n = int(rng.integers(2, 7))
        edges = [(k, int(rng.integers(0, k))) for k in range(1, n)]
        for _ in range(int(rng.integers(0, 4))):
            i, j = rng.choice(n, size=2, replace=False)
            edges.append((int(i), int(j)))
        g = Multigraph.from_edges(n, edges)

        terms = beta_expansion(g, 4)

        assert len(terms) == bell_number(n) - 1
        for term in terms:
            inner = sum(block.edge_count for block in term.block_graphs)
            assert term.quotient_graph.edge_count + inner == g.edge_count
