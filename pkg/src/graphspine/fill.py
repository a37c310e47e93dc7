"""Systole support and the fill predicates.

A family of curves topologically fills when every component of the complement
of their union is contractible (equivalently: no embedded cycle is point-wise
disjoint from the union), and geometrically fills when the union is the whole
graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotOuterSpace
from .graphs import Cycle, MetricGraph, cycle_vertices, rank
from .cycles import all_systoles
from .homology import LatticeVerdict, is_well_rounded


@dataclass(frozen=True)
class SystoleSupport:
    """Union of the systoles: edges, vertices, and exact total length."""

    edge_ids: frozenset[int]
    vertex_ids: frozenset[int]
    total_length: Fraction

    def covers(self, g: MetricGraph) -> bool:
        return len(self.edge_ids) == g.num_edges


def support_of(g: MetricGraph, cycles: Sequence[Cycle]) -> SystoleSupport:
    edges: set[int] = set()
    verts: set[int] = set()
    for c in cycles:
        edges |= c.edge_ids
        verts |= cycle_vertices(g, c)
    total = sum((g.lengths[eid] for eid in edges), Fraction(0))
    return SystoleSupport(frozenset(edges), frozenset(verts), total)


def systole_support(g: MetricGraph) -> SystoleSupport:
    return support_of(g, all_systoles(g))


def support_betti(g: MetricGraph, support: SystoleSupport) -> int:
    """First Betti number of the (possibly disconnected) support subgraph."""
    verts = sorted(support.vertex_ids)
    index = {v: i for i, v in enumerate(verts)}
    parent = list(range(len(verts)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = len(verts)
    for eid in support.edge_ids:
        e = g.edge_by_id[eid]
        ru, rv = find(index[e.u]), find(index[e.v])
        if ru != rv:
            parent[ru] = rv
            components -= 1
    return len(support.edge_ids) - len(verts) + components


def _complement_is_forest(g: MetricGraph, support: SystoleSupport) -> bool:
    outside = [v for v in range(g.num_vertices) if v not in support.vertex_ids]
    index = {v: i for i, v in enumerate(outside)}
    parent = list(range(len(outside)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        if e.u in index and e.v in index:
            if e.is_loop:
                return False
            ru, rv = find(index[e.u]), find(index[e.v])
            if ru == rv:
                return False
            parent[ru] = rv
    return True


def topologically_fills(g: MetricGraph) -> bool:
    """Whether every cycle of g meets the systole union in at least a point."""
    return _complement_is_forest(g, systole_support(g))


def geometrically_fills(g: MetricGraph) -> bool:
    """Whether the systoles cover every edge."""
    return systole_support(g).covers(g)


@dataclass(frozen=True)
class Membership:
    in_W: bool
    in_V: bool
    in_Vprime: bool
    lattice: LatticeVerdict
    support: SystoleSupport


def classify_membership(g: MetricGraph) -> Membership:
    """Well-rounded / topological fill / geometric fill verdicts.

    Only defined for rank >= 2 (the moduli space convention starts there).
    """
    if rank(g) < 2:
        raise NotOuterSpace(f"membership classification needs rank >= 2, got {rank(g)}")
    well, verdict = is_well_rounded(g)
    support = systole_support(g)
    in_v = _complement_is_forest(g, support)
    in_vprime = support.covers(g)
    m = Membership(well, in_v, in_vprime, verdict, support)
    assert not m.in_W or m.in_V
    assert not m.in_Vprime or m.in_V
    return m
