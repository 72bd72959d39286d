"""Unit tests for edge-weight quantities and dyadic rounding."""

from fractions import Fraction

import pytest

from smallness_lab.domain.errors import CapExceededError, DegenerateInstanceError
from smallness_lab.domain.graph import WeightedGraph
from smallness_lab.service.graph_weights import (
    boundary_weight,
    dyadic_index,
    expected_weights,
    induced_weight,
    partition_weight,
    round_down_dyadic,
)


@pytest.fixture
def triangle():
    """Unit-weight triangle."""
    return WeightedGraph.unweighted(3, [(0, 1), (1, 2), (0, 2)])


def weighted(weights):
    """Path 0-1-2-... with the given weights."""
    edges = tuple((i, i + 1) for i in range(len(weights)))
    weights = tuple(Fraction(w) for w in weights)
    return WeightedGraph(n=len(weights) + 1, edges=edges, weights=weights)


def test_induced_weight(triangle):
    """Test λ(G[U]) on a triangle and a weighted path."""
    assert induced_weight(triangle, 0b111) == 3
    assert induced_weight(triangle, 0b001) == 0
    path = weighted([Fraction(1, 2), Fraction(1, 4)])
    assert induced_weight(path, 0b011) == Fraction(1, 2)


def test_boundary_weight(triangle):
    """Test λ(D(U)) for the full set, one vertex and ∅."""
    assert boundary_weight(triangle, 0b111) == triangle.total_weight
    assert boundary_weight(triangle, 0b001) == 1
    assert boundary_weight(triangle, 0) == 0


def test_dyadic_index():
    """Test the class index of scaled weights."""
    assert dyadic_index(Fraction(1)) == 1
    assert dyadic_index(Fraction(3, 10)) == 2
    assert dyadic_index(Fraction(1, 2)) == 1
    with pytest.raises(ValueError):
        dyadic_index(Fraction(0))


def test_rounding_single_weight():
    """Test that a lone weight lands in class 1."""
    rounding = round_down_dyadic(weighted([Fraction(1)]))
    assert rounding.decomposition.classes == ((1, (0,)),)
    assert rounding.rounded.weights == (Fraction(1, 2),)


def test_rounding_two_classes():
    """Test weights {1, 0.3} split into classes 1 and 2."""
    rounding = round_down_dyadic(weighted([Fraction(1), Fraction(3, 10)]))
    assert rounding.decomposition.classes == ((1, (0,)), (2, (1,)))
    assert rounding.rounded.weights == (Fraction(1, 2), Fraction(1, 4))


def test_rounding_equal_weights_share_a_class():
    """Test that equal weights after scaling form one class."""
    rounding = round_down_dyadic(weighted([Fraction(1, 2), Fraction(1, 2)]))
    assert rounding.scale == 2
    assert rounding.decomposition.indices == (1,)
    assert rounding.decomposition.class_weight(1) == 1


def test_rounding_keeps_zero_weight_edges_out_of_classes():
    """Test zero-weight edges."""
    rounding = round_down_dyadic(weighted([Fraction(0), Fraction(2)]))
    assert rounding.decomposition.classes == ((1, (1,)),)
    assert rounding.rounded.weights[0] == 0


def test_rounding_rejects_all_zero():
    """Test that an all-zero graph is degenerate."""
    with pytest.raises(DegenerateInstanceError):
        round_down_dyadic(weighted([Fraction(0)]))


def test_class_graphs_are_unit_weight_on_full_vertex_set():
    """Test per-class graphs."""
    rounding = round_down_dyadic(weighted([Fraction(1), Fraction(3, 10), Fraction(1)]))
    graphs = rounding.class_graphs
    assert set(graphs) == {1, 2}
    assert graphs[1].n == 4
    assert graphs[1].edges == ((0, 1), (2, 3))
    assert graphs[2].weights == (Fraction(1),)
    assert partition_weight(rounding, [0, 1]) == Fraction(3, 4)


def test_expected_weights_of_single_edge():
    """Test E λ(G[V_p]) = λ p² and E λ(D(V_p)) = λ p."""
    graph = weighted([Fraction(1)])
    induced, boundary = expected_weights(graph, Fraction(1, 3))
    assert induced == Fraction(1, 9)
    assert boundary == Fraction(1, 3)
    with pytest.raises(CapExceededError):
        expected_weights(graph, Fraction(1, 3), cap=1)
