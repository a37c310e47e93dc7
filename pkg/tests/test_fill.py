import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from graphspine.errors import NotOuterSpace
from graphspine.fill import (
    classify_membership,
    geometrically_fills,
    support_betti,
    systole_support,
    topologically_fills,
)
from .oracles import oracle_support, oracle_topologically_fills
from .strategies import multigraphs, outer_graphs


def test_support_theta(theta):
    s = systole_support(theta)
    assert s.edge_ids == {0, 1, 2}
    assert s.total_length == 1


def test_support_dumbbells(dumbbell_eq, dumbbell_uneq):
    s = systole_support(dumbbell_eq)
    assert s.edge_ids == {0, 1}
    assert s.total_length == Fraction(2, 3)
    s2 = systole_support(dumbbell_uneq)
    assert s2.edge_ids == {0}
    assert s2.total_length == Fraction(1, 4)


def test_fill_examples(theta, dumbbell_eq, dumbbell_uneq):
    assert topologically_fills(theta)
    assert geometrically_fills(theta)
    assert topologically_fills(dumbbell_eq)       # complement is the open bar
    assert not geometrically_fills(dumbbell_eq)
    assert not topologically_fills(dumbbell_uneq)  # long loop is disjoint
    assert not geometrically_fills(dumbbell_uneq)


def test_membership_examples(theta, dumbbell_eq, dumbbell_uneq):
    m = classify_membership(dumbbell_eq)
    assert (m.in_W, m.in_V, m.in_Vprime) == (True, True, False)
    m2 = classify_membership(theta)
    assert (m2.in_W, m2.in_V, m2.in_Vprime) == (True, True, True)
    m3 = classify_membership(dumbbell_uneq)
    assert (m3.in_W, m3.in_V, m3.in_Vprime) == (False, False, False)


def test_membership_refuses_rank_one():
    from graphspine.graphs import MetricGraph, Edge

    loop = MetricGraph(1, (Edge(0, 0, 0, Fraction(1)),), "circle")
    with pytest.raises(NotOuterSpace):
        classify_membership(loop)


def test_support_betti(dumbbell_eq, theta):
    assert support_betti(dumbbell_eq, systole_support(dumbbell_eq)) == 2
    assert support_betti(theta, systole_support(theta)) == 2


@given(multigraphs(max_edges=8))
@settings(max_examples=80, deadline=None)
def test_support_matches_oracle(g):
    s = systole_support(g)
    edge_ids, vertex_ids, total = oracle_support(g)
    assert s.edge_ids == edge_ids
    assert s.vertex_ids == vertex_ids
    assert s.total_length == total


@given(multigraphs(max_edges=8))
@settings(max_examples=80, deadline=None)
def test_topological_fill_matches_oracle(g):
    assert topologically_fills(g) == oracle_topologically_fills(g)


@given(multigraphs(max_edges=8))
@settings(max_examples=60, deadline=None)
def test_geometric_implies_topological(g):
    if geometrically_fills(g):
        assert topologically_fills(g)


@given(outer_graphs())
@settings(max_examples=40, deadline=None)
def test_containment_laws(g):
    m = classify_membership(g)
    if m.in_W:
        assert m.in_V
    if m.in_Vprime:
        assert m.in_V


@given(multigraphs(max_edges=8))
@settings(max_examples=40, deadline=None)
def test_predicates_relabeling_invariant(g):
    from .strategies import random_relabeling

    mangled, _, _ = random_relabeling(random.Random(23), g)
    assert topologically_fills(g) == topologically_fills(mangled)
    assert geometrically_fills(g) == geometrically_fills(mangled)
