import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from graphspine.errors import BudgetExceeded, NoCycle
from graphspine.graphs import Edge, MetricGraph, cycle_length, relabel_cycle
from graphspine.cycles import (
    all_systoles,
    bridge_ids,
    cycles_up_to_length,
    minimum_cycles,
    shortest_cycle,
    shortest_cycle_above,
)
from graphspine.datasets import bundled_dataset, bundled_graph

from .oracles import oracle_cycles, oracle_length, oracle_systoles
from .strategies import multigraphs, random_relabeling


def test_girth_theta(theta):
    length, witness = shortest_cycle(theta)
    assert length == Fraction(2, 3)
    assert witness.edge_ids == {0, 1}


def test_girth_dumbbell_tie_break(dumbbell_eq):
    length, witness = shortest_cycle(dumbbell_eq)
    assert length == Fraction(1, 3)
    assert witness.edge_ids == {0}  # smaller loop id wins the tie


def test_girth_unit_klein():
    g = bundled_graph("klein_73")
    length, _ = shortest_cycle(g)  # bundled skeleton has unit lengths
    assert length == 7


def test_no_cycle_on_tree():
    tree = MetricGraph(2, (Edge(0, 0, 1, Fraction(1)),), "edgelet")
    with pytest.raises(NoCycle):
        shortest_cycle(tree)


def test_all_systoles_theta(theta):
    systoles = all_systoles(theta)
    assert len(systoles) == 3
    assert all(cycle_length(theta, c) == Fraction(2, 3) for c in systoles)


def test_all_systoles_k4(k4):
    systoles = all_systoles(k4)
    assert len(systoles) == 4
    assert all(len(c) == 3 for c in systoles)
    assert all(cycle_length(k4, c) == Fraction(1, 2) for c in systoles)


def test_all_systoles_unequal_dumbbell(dumbbell_uneq):
    systoles = all_systoles(dumbbell_uneq)
    assert len(systoles) == 1
    assert systoles[0].edge_ids == {0}


def test_cycles_up_to_length_theta(theta):
    assert len(cycles_up_to_length(theta, Fraction(2, 3))) == 3


def test_cycles_up_to_length_k4(k4):
    cycles = cycles_up_to_length(k4, Fraction(2, 3))
    assert len(cycles) == 7  # 4 triangles + 3 squares
    triangles = [c for c in cycles if len(c) == 3]
    squares = [c for c in cycles if len(c) == 4]
    assert (len(triangles), len(squares)) == (4, 3)


def test_heawood_six_cycles_exceed_faces():
    m = bundled_dataset("heawood_torus")
    g = m.skeleton_unit()
    six_cycles = cycles_up_to_length(g, 6)
    assert all(len(c) == 6 for c in six_cycles)  # girth 6: nothing shorter
    assert len(six_cycles) == 28 > 7


def test_budget_cap(k4):
    with pytest.raises(BudgetExceeded):
        cycles_up_to_length(k4, Fraction(2, 3), cap=3)


def test_bridges_excluded(dumbbell_eq):
    assert bridge_ids(dumbbell_eq) == {2}
    assert all(2 not in c.edge_ids for c in cycles_up_to_length(dumbbell_eq, Fraction(1)))


def test_shortest_cycle_above_examples(theta, dumbbell_eq, k4):
    assert shortest_cycle_above(theta, None, Fraction(2, 3)) is None
    above = shortest_cycle_above(k4, None, Fraction(1, 2))
    assert above is not None
    length, witness = above
    assert length == Fraction(2, 3) and len(witness) == 4
    assert shortest_cycle_above(dumbbell_eq, None, Fraction(1, 3)) is None


def test_shortest_cycle_above_threshold_zero(dumbbell_uneq):
    length, witness = shortest_cycle_above(dumbbell_uneq, None, Fraction(0))
    assert length == Fraction(1, 4)
    assert witness.edge_ids == {0}


@given(multigraphs(max_edges=9))
@settings(max_examples=80, deadline=None)
def test_minimum_cycles_match_oracle(g):
    girth, mins = minimum_cycles(g)
    oracle_girth, oracle_mins = oracle_systoles(g)
    assert girth == oracle_girth
    assert set(mins) == oracle_mins


@given(multigraphs(max_edges=9))
@settings(max_examples=50, deadline=None)
def test_bounded_enumeration_matches_oracle(g):
    everything = oracle_cycles(g)
    lengths = sorted({oracle_length(g, c) for c in everything})
    bound = lengths[min(1, len(lengths) - 1)]  # second-smallest when it exists
    got = set(cycles_up_to_length(g, bound))
    want = {c for c in everything if oracle_length(g, c) <= bound}
    assert got == want


@given(multigraphs(max_edges=8))
@settings(max_examples=50, deadline=None)
def test_above_girth_agrees_with_oracle(g):
    girth, mins = minimum_cycles(g)
    above = shortest_cycle_above(g, None, girth)
    cycles = oracle_cycles(g)
    bigger = sorted(oracle_length(g, c) for c in cycles if oracle_length(g, c) > girth)
    if bigger:
        assert above is not None and above[0] == bigger[0]
    else:
        assert above is None
        assert len(mins) == len(cycles)


@given(multigraphs(max_edges=8))
@settings(max_examples=40, deadline=None)
def test_systole_invariants(g):
    girth, mins = minimum_cycles(g)
    assert all(cycle_length(g, c) == girth for c in mins)
    assert shortest_cycle(g)[0] == girth
    for c in mins:
        assert len(set(c.edge_ids)) == len(c)


@given(multigraphs(max_edges=8))
@settings(max_examples=40, deadline=None)
def test_systoles_commute_with_relabeling(g):
    mangled, _, emap = random_relabeling(random.Random(11), g)
    mapped = {relabel_cycle(c, emap) for c in all_systoles(g)}
    assert mapped == set(all_systoles(mangled))
