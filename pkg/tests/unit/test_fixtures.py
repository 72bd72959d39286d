"""Unit tests for the built-in instances."""

from fractions import Fraction

import numpy as np
import pytest

from smallness_lab.domain.errors import ConfigurationError
from smallness_lab.service.fixtures import (
    SingletonOptimalityFixture,
    necessity_fixture,
    random_family,
    random_singleton_instance,
    random_weighted_graph,
    small_graph_battery,
    star_union,
    tr2_instance_at_guard,
)
from smallness_lab.service.star_forest import reduced_conditions


def test_small_graph_battery_shapes():
    """Test names and sizes of the small graphs."""
    graphs = small_graph_battery()
    assert set(graphs) == {
        "path-6",
        "path-12",
        "star-7",
        "star-11",
        "cliques-4-4",
        "cliques-3-4-5",
        "cliques-6-6",
    }
    assert len(graphs["path-12"]) == 11
    assert graphs["star-7"].degrees[0] == 7
    assert len(graphs["cliques-3-4-5"]) == 3 + 6 + 10
    assert all(graph.n <= 12 for graph in graphs.values())


def test_star_union_centers():
    """Test that copy j is centered at j·(m+1)."""
    graph = star_union(2, 4)
    assert graph.n == 10
    assert graph.degrees[0] == 4
    assert graph.degrees[5] == 4


def test_necessity_fixture_minimum(solver):
    """Test that the plain edge-count target costs at least 1/K."""
    fixture = necessity_fixture()
    assert (fixture.copies, fixture.T, fixture.mu) == (2, 1, Fraction(1, 2))
    family = fixture.family()
    assert len(family.minimal_sets) == 8
    value = solver.min_integral_cost(family, fixture.p).value
    assert value >= fixture.lower_bound


def test_necessity_fixture_with_boundary_condition_is_cheaper(solver):
    """Test that the D_G(U) condition drops the cost below 1/K."""
    fixture = necessity_fixture()
    family = fixture.family(J=Fraction(2))
    assert all(s.bit_count() == 3 for s in family.minimal_sets)
    assert solver.min_integral_cost(family, fixture.p).value < fixture.lower_bound


def test_necessity_fixture_rejects_fractional_parameters():
    """Test that (Kp)^-1 and mp must be integers."""
    with pytest.raises(ConfigurationError):
        necessity_fixture(K=Fraction(3), p=Fraction(1, 4))


def test_singleton_optimality_fixture(solver):
    """Test that every singleton must be covered, at total cost 1/J."""
    fixture = SingletonOptimalityFixture(J=6)
    assert fixture.instance.J == 6
    assert solver.min_integral_cost(fixture.family(), fixture.instance.p).value == fixture.optimum


def test_random_generators_are_seeded():
    """Test reproducibility of the random generators."""
    first = random_family(5, np.random.default_rng(4))
    second = random_family(5, np.random.default_rng(4))
    assert first == second
    assert random_weighted_graph(6, 0.5, seed=2) == random_weighted_graph(6, 0.5, seed=2)
    inst = random_singleton_instance(np.random.default_rng(9), max_n=6)
    assert inst.J * inst.p <= 1
    assert 1 <= inst.n <= 6


def test_random_weighted_graph_has_an_edge():
    """Test that the weighted generator never returns an edgeless graph."""
    graph = random_weighted_graph(3, 0.0, seed=0)
    assert len(graph) == 1
    assert 0 < graph.weights[0] <= 1


def test_tr2_instance_at_guard_meets_reduced_conditions():
    """Test c₀ = 64e/J exactly at the guard."""
    inst = tr2_instance_at_guard(star_union(2, 4), Fraction(22), 32)
    assert len(inst.graph) * inst.p**2 <= inst.mu
    assert reduced_conditions(inst, 32)
