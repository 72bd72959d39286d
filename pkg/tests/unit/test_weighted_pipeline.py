"""Unit tests for the edge-weighted cover pipeline."""

from fractions import Fraction
from unittest.mock import Mock

import pytest

from smallness_lab.domain.cover import ExplicitList
from smallness_lab.domain.errors import ConfigurationError, DegenerateInstanceError
from smallness_lab.domain.graph import WeightedGraph
from smallness_lab.domain.subsets import full_set
from smallness_lab.service.fixtures import clique_union, small_graph_battery
from smallness_lab.service.weighted_pipeline import (
    PipelineInstance,
    PipelineVerifier,
    WeightedTarget,
    build_class_plans,
    build_weighted_cover,
    diagnostics,
    f_bound,
    pipeline_costs,
    replay_member,
    star_series_bound,
)

P = Fraction(1, 32)
R_REDUCED = Fraction(32)


@pytest.fixture
def pipeline(mock_logger, verifier):
    """Pipeline verifier over the single-process coverage verifier."""
    return PipelineVerifier(mock_logger, verifier)


@pytest.fixture
def single_edge():
    """One edge of weight 1."""
    return WeightedGraph.unweighted(2, [(0, 1)])


def reduced(graph, p=P, R=R_REDUCED):
    """Instance under the reduced guard."""
    return PipelineInstance(graph=graph, p=p, R=R, reduced_guard=True)


def test_R_w_is_dyadic_floor(single_edge):
    """Test R_w² <= R²/2 < (R_w + 2^-40)²."""
    inst = reduced(single_edge)
    step = Fraction(1, 1 << 40)
    assert inst.R_w**2 <= 512 < (inst.R_w + step) ** 2
    assert inst.J == inst.R_w / 2


@pytest.mark.parametrize(
    "p,R,guard,error",
    [
        (Fraction(0), Fraction(32), True, DegenerateInstanceError),
        (Fraction(1, 32), Fraction(10), True, DegenerateInstanceError),
        (Fraction(1, 32), Fraction(100), False, DegenerateInstanceError),
        (Fraction(3, 2), Fraction(32), True, ConfigurationError),
        (Fraction(1, 32), Fraction(0), True, ConfigurationError),
    ],
)
def test_guards(single_edge, p, R, guard, error):
    """Test p = 0, R below either guard and invalid inputs."""
    with pytest.raises(error):
        PipelineInstance(graph=single_edge, p=p, R=R, reduced_guard=guard)


def test_single_edge_has_one_trivial_class(single_edge, pipeline):
    """Test the plan for one edge and exhaustive coverage."""
    inst = reduced(single_edge)
    plans = build_class_plans(inst)
    assert len(plans) == 1
    plan = plans[0]
    assert (plan.i, plan.size, plan.alpha, plan.beta) == (1, 1, -10, 1)
    assert plan.trivial
    report = pipeline.verify_pipeline(inst)
    assert report.ok
    assert report.coverage.targets == 1
    assert report.cover.singleton.a == 2
    assert not report.costs.caps_asserted


def test_constant_weights_one_class():
    """Test that constant λ gives exactly one class."""
    graph = clique_union([4]).with_weights([Fraction(3)] * 6)
    inst = reduced(graph)
    assert inst.rounding.decomposition.indices == (1,)
    assert inst.w == 3
    assert len(build_class_plans(inst)) == 1


def test_empty_target_when_R_w_p_exceeds_one(single_edge, pipeline):
    """Test R_w·p > 1."""
    inst = reduced(single_edge, p=Fraction(1, 2))
    assert inst.empty_target
    report = pipeline.verify_pipeline(inst)
    assert report.cover.singleton is None
    assert report.costs.total == 0
    assert report.ok
    assert report.coverage.targets == 0


def test_diagnostics_on_regular_graph():
    """Test L = K = 1/p for the full vertex set of K4, and K = 0 when G[U] is empty."""
    weighted = build_weighted_cover(reduced(clique_union([4])))
    full = diagnostics(weighted, full_set(4))
    assert full.L == 32
    assert full.K == 32
    assert full.classes[0].L == 32
    assert full.classes[0].K == 32
    assert full.heavy == (1,)
    assert not full.in_u_star
    assert full.witness_class is None
    one = diagnostics(weighted, 0b0001)
    assert one.L == 8
    assert one.K == 0


def test_theorem_mode_asserts_caps(single_edge, pipeline):
    """Test the theorem guard with R = 15750."""
    inst = PipelineInstance(graph=single_edge, p=Fraction(1, 20000), R=Fraction(15750))
    assert inst.theorem_mode
    report = pipeline.verify_pipeline(inst)
    assert report.ok
    costs = report.costs
    assert costs.caps_asserted
    assert costs.star_bound is not None
    assert costs.total <= costs.total_bound
    assert costs.singleton.best < costs.singleton_bound


def test_small_graph_battery_reduced(pipeline):
    """Test exhaustive coverage on every built-in small graph."""
    for name, graph in small_graph_battery().items():
        report = pipeline.verify_pipeline(reduced(graph))
        assert report.ok, name


def test_weighted_battery_member_sampled(pipeline):
    """Test the sampled verification mode."""
    graph = clique_union([3, 4]).with_weights([Fraction(k, 9) for k in range(1, 10)])
    report = pipeline.verify_pipeline(reduced(graph), mode="sampled", samples=200, seed=5)
    assert report.coverage.mode == "audit"
    assert report.ok


def test_costs_only_mode(single_edge, pipeline):
    """Test mode None and unknown modes."""
    assert pipeline.verify_pipeline(reduced(single_edge), mode=None).coverage is None
    with pytest.raises(ConfigurationError):
        pipeline.verify_pipeline(reduced(single_edge), mode="bogus")


def test_pipeline_costs_split(single_edge):
    """Test that a lone trivial class lands in the trivial subtotal."""
    costs = pipeline_costs(build_weighted_cover(reduced(single_edge)))
    assert costs.trivial == P**2
    assert costs.star == 0


def test_weighted_target(single_edge):
    """Test λ(G[U]) >= R²·λ(G)·p²."""
    target = WeightedTarget(single_edge, R_REDUCED, P)
    assert target(0b11)
    assert not target(0b01)


def test_f_bound_small_s():
    """Test f(s) = J₁^-2 for small s."""
    assert f_bound(Fraction(4), 0) == Fraction(1, 16)
    assert f_bound(Fraction(4), 9) == Fraction(1, 16)


def test_star_series_bound():
    """Test the series closes with a geometric tail."""
    bound = star_series_bound(Fraction(2))
    assert bound.stop >= 10
    assert bound.stop % 2 == 0
    assert bound.tail > 0
    assert bound.value > 768 * Fraction(1, 4)
    with pytest.raises(DegenerateInstanceError):
        star_series_bound(Fraction(1))


def test_replay_member_on_edge_list(single_edge):
    """Test that edge-list members are replayed through is_member."""
    edges = ExplicitList(subsets=single_edge.edge_masks)
    assert replay_member(edges, 0b11)
    assert not replay_member(edges, 0b01)


def test_replay_member_rejects_unconfirmed_member():
    """Test that a member the part does not recognise fails the replay."""
    part = Mock()
    part.find_member_inside.return_value = 0b011
    part.is_member.return_value = False
    assert not replay_member(part, 0b111)
    part.is_member.assert_called_once_with(0b011)

    part.find_member_inside.return_value = 0b1000
    part.is_member.return_value = True
    assert not replay_member(part, 0b111)
