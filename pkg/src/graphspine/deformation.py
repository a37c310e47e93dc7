"""Length deformations that keep the systole set fixed.

With systoles g_1..g_F, keeping them of equal length imposes F-1 linear
conditions on the edge lengths; intersecting with the unit-volume hyperplane,
the local dimension of the equal-systole locus at the base point is
E - 1 - rank(difference rows), which is at least E - F.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import NotStrictlyShorter
from .graphs import Cycle, MetricGraph, cycle_length, rank, require_outer_space
from .cycles import minimum_cycles


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q by exact Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1) / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def kernel_basis(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel, via reduced row echelon form."""
    m = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1) / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    free_cols = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][fc]
        basis.append(tuple(vec))
    return basis


def _ordered_systoles(g: MetricGraph, systoles: Optional[Sequence[Cycle]],
                      cycle_cap: Optional[int] = None) -> tuple[tuple[Cycle, ...], Fraction]:
    """The systole family in canonical order, certified to be the complete
    set of minimum-length cycles."""
    kwargs = {} if cycle_cap is None else {"cap": cycle_cap}
    girth, mins = minimum_cycles(g, **kwargs)
    if systoles is None:
        return mins, girth
    given = sorted(set(systoles), key=Cycle.sort_key)
    lengths = {cycle_length(g, c) for c in given}
    if lengths != {girth}:
        raise NotStrictlyShorter(
            f"given cycles have lengths {sorted(lengths)}, minimum cycle length is {girth}")
    if set(given) != set(mins):
        extra = sorted(set(mins) - set(given), key=Cycle.sort_key)
        raise NotStrictlyShorter(
            f"{len(extra)} cycles tie the minimal length but are not in the family")
    return tuple(given), girth


def indicator_row(g: MetricGraph, c: Cycle) -> tuple[int, ...]:
    cols = {e.id: i for i, e in enumerate(g.edges)}
    row = [0] * g.num_edges
    for eid in c.edge_ids:
        row[cols[eid]] = 1
    return tuple(row)


def systole_equality_system(g: MetricGraph,
                            systoles: Optional[Sequence[Cycle]] = None) -> tuple[tuple[Fraction, ...], ...]:
    """Constraint matrix: F-1 consecutive length-difference rows followed by
    the all-ones volume row; columns follow g.edges order."""
    family, _ = _ordered_systoles(g, systoles)
    indicators = [indicator_row(g, c) for c in family]
    rows: list[tuple[Fraction, ...]] = []
    for i in range(len(indicators) - 1):
        rows.append(tuple(Fraction(b - a) for a, b in zip(indicators[i], indicators[i + 1])))
    rows.append(tuple(Fraction(1) for _ in range(g.num_edges)))
    return tuple(rows)


@dataclass(frozen=True)
class DeformationRecord:
    E: int
    F: int
    rank_diff: int
    dim: int
    lower_bound: int  # E - F
    has_positive_direction: bool


def local_deformation_dimension(g: MetricGraph,
                                systoles: Optional[Sequence[Cycle]] = None,
                                cycle_cap: Optional[int] = None) -> DeformationRecord:
    """Dimension of the systole-preserving deformation space at g.

    The certification that every non-systole cycle is strictly longer holds
    by construction when the family is computed here; a provided family is
    checked against the full minimum-cycle set.
    """
    require_outer_space(g)
    family, _ = _ordered_systoles(g, systoles, cycle_cap)
    system = systole_equality_system(g, family)
    diff_rows = system[:-1]
    rank_diff = rational_rank(diff_rows)
    dim = g.num_edges - 1 - rank_diff
    lower = g.num_edges - len(family)
    assert dim >= lower
    # the base lengths themselves are a strictly positive solution of the
    # homogeneous difference system, so a positive direction always exists
    # at a certified base point; recorded explicitly rather than assumed
    base = [g.lengths[e.id] for e in g.edges]
    positive = all(
        sum(r * x for r, x in zip(row, base)) == 0 for row in diff_rows
    ) and all(x > 0 for x in base)
    return DeformationRecord(
        E=g.num_edges, F=len(family), rank_diff=rank_diff, dim=dim,
        lower_bound=lower, has_positive_direction=positive,
    )


def deformation_kernel(g: MetricGraph,
                       systoles: Optional[Sequence[Cycle]] = None) -> list[tuple[Fraction, ...]]:
    """Basis of the tangent space: difference rows plus the volume row."""
    system = systole_equality_system(g, systoles)
    return kernel_basis(system, g.num_edges)


@dataclass(frozen=True)
class VcdRecord:
    n: int
    dim: int
    vcd: int
    exceeds: bool
    deformation: DeformationRecord


def vcd_witness(g: MetricGraph, systoles: Optional[Sequence[Cycle]] = None,
                cycle_cap: Optional[int] = None) -> VcdRecord:
    """Compare the local deformation dimension with 2n - 3."""
    record = local_deformation_dimension(g, systoles, cycle_cap)
    n = rank(g)
    vcd = 2 * n - 3
    return VcdRecord(n=n, dim=record.dim, vcd=vcd, exceeds=record.dim > vcd,
                     deformation=record)
