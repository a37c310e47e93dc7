import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from graphspine.errors import (
    CapExceeded,
    NotOuterSpace,
    NotUnitVolume,
    ParameterOutOfRange,
)
from graphspine.graphs import (
    Edge,
    MetricGraph,
    are_isomorphic,
    rank,
)
from graphspine.cycles import minimum_cycles
from graphspine.fill import geometrically_fills, support_betti, systole_support
from graphspine.flow import (
    NEW_SYSTOLES,
    STAGE_COMPLETE,
    FlowState,
    flow_lengths_at,
    next_event,
    retract_to_spine,
)

from .conftest import make_theta
from .strategies import outer_graphs, random_outer_graph, random_relabeling


def test_flow_lengths_identity_at_one(dumbbell_eq):
    state = FlowState.initial(dumbbell_eq)
    assert flow_lengths_at(state, Fraction(1)) == dumbbell_eq.lengths


def test_flow_lengths_dumbbell_collapse(dumbbell_eq):
    state = FlowState.initial(dumbbell_eq)
    lengths = flow_lengths_at(state, Fraction(3, 2))
    assert lengths == {0: Fraction(1, 2), 1: Fraction(1, 2), 2: Fraction(0)}


def test_flow_lengths_theta(theta_long):
    state = FlowState.initial(theta_long)
    lengths = flow_lengths_at(state, Fraction(4, 3))
    assert lengths == {0: Fraction(1, 3), 1: Fraction(1, 3), 2: Fraction(1, 3)}


def test_flow_lengths_out_of_range(dumbbell_eq):
    state = FlowState.initial(dumbbell_eq)
    with pytest.raises(ParameterOutOfRange):
        flow_lengths_at(state, Fraction(1, 2))
    with pytest.raises(ParameterOutOfRange):
        flow_lengths_at(state, Fraction(2))


def test_next_event_dumbbell_unequal(dumbbell_uneq):
    state = FlowState.initial(dumbbell_uneq)
    event = next_event(state)
    assert event.kind == NEW_SYSTOLES
    assert event.u_star == Fraction(10, 7)
    assert [c.edge_ids for c in event.new_cycles] == [frozenset({1})]
    assert math.isclose(event.t_approx, math.log(10 / 7))


def test_next_event_dumbbell_equal(dumbbell_eq):
    event = next_event(FlowState.initial(dumbbell_eq))
    assert event.kind == STAGE_COMPLETE
    assert event.u_star == Fraction(3, 2)
    assert event.contracted_edge_ids == (2,)


def test_next_event_theta_long(theta_long):
    event = next_event(FlowState.initial(theta_long))
    assert event.kind == NEW_SYSTOLES
    assert event.u_star == Fraction(4, 3)
    assert len(event.new_cycles) == 2
    assert all(0 in c.edge_ids for c in event.new_cycles)


def test_retract_theta_long(theta_long):
    traj = retract_to_spine(theta_long)
    assert len(traj.events) == 1
    assert traj.final_sigma == Fraction(2, 3)
    assert are_isomorphic(traj.final_graph, make_theta()) is not None


def test_retract_dumbbell_equal(dumbbell_eq):
    traj = retract_to_spine(dumbbell_eq)
    assert [e.kind for e in traj.events] == [STAGE_COMPLETE]
    assert traj.events[0].u_star == Fraction(3, 2)
    assert traj.final_sigma == Fraction(1, 2)
    assert traj.final_graph.num_vertices == 1
    assert sorted(e.length for e in traj.final_graph.edges) == [Fraction(1, 2)] * 2


def test_retract_dumbbell_unequal(dumbbell_uneq):
    traj = retract_to_spine(dumbbell_uneq)
    assert [e.kind for e in traj.events] == [NEW_SYSTOLES, STAGE_COMPLETE]
    assert traj.events[0].u_star == Fraction(10, 7)
    assert traj.events[1].u_star == Fraction(2)
    assert sorted(e.length for e in traj.final_graph.edges) == [Fraction(1, 2)] * 2


def test_retract_already_covered_is_empty(theta):
    traj = retract_to_spine(theta)
    assert traj.events == ()
    assert traj.final_graph == theta


def test_retract_requires_unit_volume():
    g = make_theta(Fraction(1), Fraction(1), Fraction(1))
    with pytest.raises(NotUnitVolume):
        retract_to_spine(g)


def test_retract_requires_outer_space():
    lollipop = MetricGraph(
        2, (Edge(0, 0, 0, Fraction(1, 2)), Edge(1, 0, 1, Fraction(1, 4)),
            Edge(2, 0, 1, Fraction(1, 4))), "lollipop")
    with pytest.raises(NotOuterSpace):
        retract_to_spine(lollipop)  # rank 2 but a degree-2 vertex... rank is 2


def test_tie_at_stage_end_merges_contraction():
    # two equal theta pairs joined by two connectors: the four long cycles
    # reach the minimum exactly when the connectors collapse
    h = Fraction(1, 6)
    g = MetricGraph(4, (
        Edge(0, 0, 1, h), Edge(1, 0, 1, h),
        Edge(2, 2, 3, h), Edge(3, 2, 3, h),
        Edge(4, 1, 2, h), Edge(5, 3, 0, h)), "tie")
    traj = retract_to_spine(g)
    assert len(traj.events) == 1
    event = traj.events[0]
    assert event.kind == NEW_SYSTOLES
    assert event.u_star == Fraction(3, 2)
    assert len(event.new_cycles) == 4
    assert event.contracted_edge_ids == (4, 5)
    assert traj.final_graph.num_vertices == 2
    assert traj.final_graph.num_edges == 4
    assert traj.final_sigma == Fraction(1, 2)


def test_cap_exceeded_carries_partial_trajectory(dumbbell_uneq):
    with pytest.raises(CapExceeded) as excinfo:
        retract_to_spine(dumbbell_uneq, max_events_per_stage=0)
    assert excinfo.value.trajectory is not None
    assert excinfo.value.trajectory.events == ()


def test_retraction_commutes_with_relabeling():
    rng = random.Random(20240817)
    for _ in range(10):
        g = random_outer_graph(rng, 2, 4)
        mangled, _, _ = random_relabeling(rng, g)
        t1 = retract_to_spine(g)
        t2 = retract_to_spine(mangled)
        assert [e.u_star for e in t1.events] == [e.u_star for e in t2.events]
        assert [e.kind for e in t1.events] == [e.kind for e in t2.events]
        assert are_isomorphic(t1.final_graph, t2.final_graph) is not None


def _check_trajectory_invariants(g, traj):
    assert traj.initial == g
    sigma_prev, _ = minimum_cycles(g)
    betti_prev = support_betti(g, systole_support(g))
    stage_prev = 1
    stage_edges = g.num_edges
    u_prev = Fraction(0)
    stage_event_count = 0
    contractions = 0
    for event in traj.events:
        snapshot = event.graph_after
        assert snapshot.volume == 1
        sigma, mins = minimum_cycles(snapshot)
        assert sigma == event.sigma_after
        assert sigma >= sigma_prev
        betti = support_betti(snapshot, systole_support(snapshot))
        assert betti >= betti_prev
        assert event.stage == stage_prev
        assert event.u_star > u_prev
        if event.kind == NEW_SYSTOLES:
            stage_event_count += 1
            assert stage_event_count <= stage_edges
        if event.contracted_edge_ids:
            contractions += 1
            stage_event_count = 0
            stage_prev += 1
            stage_edges = snapshot.num_edges
            u_prev = Fraction(0)
        else:
            u_prev = event.u_star
        sigma_prev, betti_prev = sigma, betti
    assert contractions <= max(g.num_vertices - 1, 0) or g.num_vertices == 1
    assert geometrically_fills(traj.final_graph)
    assert rank(traj.final_graph) == rank(g)


@given(outer_graphs(rank_lo=2, rank_hi=4))
@settings(max_examples=40, deadline=None)
def test_trajectory_invariants_random(g):
    traj = retract_to_spine(g)
    _check_trajectory_invariants(g, traj)


def test_next_event_refuses_covered_state(theta):
    from graphspine.errors import FlowStateError

    state = FlowState.initial(theta)
    with pytest.raises(FlowStateError):
        next_event(state)


def test_forest_check_flags_cycles(theta):
    from graphspine.errors import DegenerateStage
    from graphspine.flow import _forest_or_die

    with pytest.raises(DegenerateStage):
        _forest_or_die(theta, frozenset({0, 1}))
    _forest_or_die(theta, frozenset({0}))
