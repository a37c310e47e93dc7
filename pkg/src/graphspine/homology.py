"""Integer homology of a metric graph via a spanning-tree basis.

H_1(g, Z) is free of rank E - V + 1; the fundamental cycles of the chords of
a spanning tree form a basis.  The lattice spanned by the systole classes is
analyzed through an exact Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ForeignCycle, InvalidGraph
from .graphs import Cycle, EdgeCorrespondence, MetricGraph, rank
from .cycles import all_systoles


@dataclass(frozen=True)
class HomologyBasis:
    """Spanning tree plus ordered chords c_1..c_n.

    ``transform`` accumulates the unimodular change of basis back to the
    basis this one was transported from (identity for a fresh basis).
    """

    tree_edge_ids: frozenset[int]
    chords: tuple[int, ...]
    transform: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.chords)


def _identity(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def build_basis(g: MetricGraph) -> HomologyBasis:
    """Deterministic minimum-edge-id BFS spanning tree; chords sorted by id."""
    tree: set[int] = set()
    reached = {0}
    frontier = [0]
    while frontier:
        next_frontier: list[int] = []
        for v in frontier:
            for eid, other in g.adjacency[v]:
                if other not in reached:
                    reached.add(other)
                    tree.add(eid)
                    next_frontier.append(other)
        frontier = next_frontier
    chords = tuple(sorted(e.id for e in g.edges if e.id not in tree))
    return HomologyBasis(frozenset(tree), chords, _identity(len(chords)))


def basis_from_tree(g: MetricGraph, tree_edge_ids) -> HomologyBasis:
    tree = frozenset(tree_edge_ids)
    if len(tree) != g.num_vertices - 1:
        raise InvalidGraph("not a spanning tree: wrong edge count")
    sub = [g.edge_by_id[eid] for eid in tree]
    parent = list(range(g.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in sub:
        ru, rv = find(e.u), find(e.v)
        if ru == rv:
            raise InvalidGraph("not a spanning tree: contains a cycle")
        parent[ru] = rv
    chords = tuple(sorted(e.id for e in g.edges if e.id not in tree))
    return HomologyBasis(tree, chords, _identity(len(chords)))


def _tree_path_steps(g: MetricGraph, basis: HomologyBasis, start: int, goal: int) -> list[tuple[int, int]]:
    """Steps of the unique tree path start -> goal (empty if equal)."""
    if start == goal:
        return []
    prev: dict[int, tuple[int, int]] = {start: (-1, -1)}
    frontier = [start]
    while frontier and goal not in prev:
        nxt = []
        for v in frontier:
            for eid, other in g.adjacency[v]:
                if eid in basis.tree_edge_ids and other not in prev:
                    prev[other] = (v, eid)
                    nxt.append(other)
        frontier = nxt
    steps: list[tuple[int, int]] = []
    v = goal
    while v != start:
        u, eid = prev[v]
        e = g.edge_by_id[eid]
        steps.append((eid, 0 if e.u == u else 1))
        v = u
    steps.reverse()
    return steps


def fundamental_cycle(g: MetricGraph, basis: HomologyBasis, chord_id: int) -> Cycle:
    """Chord traversed forward, closed up through the tree.

    Kept in this orientation (not reduced to canonical form) so that its
    class is exactly the corresponding unit vector.
    """
    if chord_id not in basis.chords:
        raise InvalidGraph(f"edge {chord_id} is not a chord of the basis")
    e = g.edge_by_id[chord_id]
    steps = [(chord_id, 0)] + _tree_path_steps(g, basis, e.v, e.u)
    return Cycle.make(g, steps, canonical=False)


def cycle_class(g: MetricGraph, basis: HomologyBasis, c: Cycle) -> tuple[int, ...]:
    """Signed chord-traversal counts of the cycle in the given orientation."""
    unknown = c.edge_ids - set(g.edge_by_id)
    if unknown:
        raise ForeignCycle(f"cycle uses edges not in graph: {sorted(unknown)}")
    index = {eid: i for i, eid in enumerate(basis.chords)}
    vec = [0] * basis.n
    for eid, d in c.steps:
        i = index.get(eid)
        if i is not None:
            vec[i] += 1 if d == 0 else -1
    return tuple(vec)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithNormalForm:
    U: tuple[tuple[int, ...], ...]
    D: tuple[tuple[int, ...], ...]
    W: tuple[tuple[int, ...], ...]
    divisors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.divisors)


def _mat_mul(A, B):
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(rows)]


def _det(M) -> Fraction:
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            A[col], A[pivot] = A[pivot], A[col]
            det = -det
        det *= A[col][col]
        inv = Fraction(1) / A[col][col]
        for r in range(col + 1, n):
            if A[r][col]:
                f = A[r][col] * inv
                for c in range(col, n):
                    A[r][c] -= f * A[col][c]
    return det


def smith_normal_form(matrix: Sequence[Sequence[int]], ncols: Optional[int] = None) -> SmithNormalForm:
    """Exact integer Smith normal form with unimodular U, W.

    Row and column operations only (swap, negate, add integer multiple), with
    the pivot chosen as the smallest nonzero entry to keep coefficients tame.
    In test builds the factorization U*A*W == D and |det| = 1 are re-checked
    on every call.
    """
    m = len(matrix)
    n = ncols if ncols is not None else (len(matrix[0]) if m else 0)
    D = [[int(x) for x in row] for row in matrix]
    for row in D:
        assert len(row) == n
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    W = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in D:
                row[i], row[j] = row[j], row[i]
            for row in W:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, factor):
        for c in range(n):
            D[dst][c] += factor * D[src][c]
        for c in range(m):
            U[dst][c] += factor * U[src][c]

    def add_col(src, dst, factor):
        for row in D:
            row[dst] += factor * row[src]
        for row in W:
            row[dst] += factor * row[src]

    def negate_row(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while True:
        entries = [(abs(D[i][j]), i, j)
                   for i in range(t, m) for j in range(t, n) if D[i][j] != 0]
        if not entries:
            break
        _, pi, pj = min(entries)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, m):
                if D[i][t] != 0:
                    q = D[i][t] // D[t][t]
                    add_row(t, i, -q)
                    if D[i][t] != 0:  # remainder becomes the smaller pivot
                        swap_rows(t, i)
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, n):
                if D[t][j] != 0:
                    q = D[t][j] // D[t][t]
                    add_col(t, j, -q)
                    if D[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            if all(D[i][t] == 0 for i in range(t + 1, m)) and all(
                    D[t][j] == 0 for j in range(t + 1, n)):
                break
        # enforce divisibility of the remaining block by the pivot
        offender = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                         if D[i][j] % D[t][t] != 0), None)
        if offender is not None:
            add_row(offender[0], t, 1)
            continue  # redo this pivot
        if D[t][t] < 0:
            negate_row(t)
        t += 1

    divisors = tuple(D[k][k] for k in range(min(m, n)) if D[k][k] != 0)
    result = SmithNormalForm(
        U=tuple(tuple(r) for r in U),
        D=tuple(tuple(r) for r in D),
        W=tuple(tuple(r) for r in W),
        divisors=divisors,
    )
    assert _mat_mul(_mat_mul(U, [list(r) for r in matrix]), W) == D
    assert abs(_det(U)) == 1 and abs(_det(W)) == 1
    assert all(divisors[i + 1] % divisors[i] == 0 for i in range(len(divisors) - 1))
    return result


# ---------------------------------------------------------------------------
# systole lattice


@dataclass(frozen=True)
class LatticeVerdict:
    """Sublattice of H_1 spanned by a family of cycle classes."""

    generators: tuple[tuple[int, ...], ...]
    ambient_rank: int
    rank: int
    divisors: tuple[int, ...]
    index: Optional[int]  # None means infinite

    @property
    def finite_index(self) -> bool:
        return self.index is not None


def lattice_verdict(classes: Sequence[Sequence[int]], ambient_rank: int) -> LatticeVerdict:
    rows = tuple(tuple(int(x) for x in row) for row in classes)
    snf = smith_normal_form(rows, ncols=ambient_rank)
    r = snf.rank
    index: Optional[int] = None
    if r == ambient_rank:
        index = 1
        for d in snf.divisors:
            index *= d
    return LatticeVerdict(rows, ambient_rank, r, snf.divisors, index)


def systole_lattice(g: MetricGraph, basis: Optional[HomologyBasis] = None) -> LatticeVerdict:
    """Verdict on the lattice spanned by the classes of all systoles."""
    basis = basis if basis is not None else build_basis(g)
    classes = [cycle_class(g, basis, c) for c in all_systoles(g)]
    return lattice_verdict(classes, rank(g))


def is_well_rounded(g: MetricGraph) -> tuple[bool, LatticeVerdict]:
    """True iff the systole classes span a finite-index subgroup of H_1."""
    verdict = systole_lattice(g)
    return verdict.rank == rank(g), verdict


# ---------------------------------------------------------------------------
# transport through contraction


def _lift_cycle(g: MetricGraph, basis: HomologyBasis, corr: EdgeCorrespondence,
                contracted_graph: MetricGraph, c: Cycle) -> Cycle:
    """Lift a cycle of the contracted graph back through the contraction,
    bridging gaps with the unique paths inside the contracted forest."""
    steps: list[tuple[int, int]] = []
    fadj: dict[int, list[tuple[int, int]]] = {}
    for eid in corr.contracted:
        e = g.edge_by_id[eid]
        fadj.setdefault(e.u, []).append((eid, e.v))
        fadj.setdefault(e.v, []).append((eid, e.u))

    def forest_path(a: int, b: int) -> list[tuple[int, int]]:
        if a == b:
            return []
        prev = {a: (-1, -1)}
        frontier = [a]
        while frontier and b not in prev:
            nxt = []
            for v in frontier:
                for eid, other in fadj.get(v, ()):
                    if other not in prev:
                        prev[other] = (v, eid)
                        nxt.append(other)
            frontier = nxt
        out = []
        v = b
        while v != a:
            u, eid = prev[v]
            e = g.edge_by_id[eid]
            out.append((eid, 0 if e.u == u else 1))
            v = u
        out.reverse()
        return out

    walk: list[tuple[int, int, int]] = []  # (eid, dir, tail in g)
    for eid, d in c.steps:
        e_old = g.edge_by_id[eid]
        tail = e_old.u if d == 0 else e_old.v
        walk.append((eid, d, tail))
    for i, (eid, d, tail) in enumerate(walk):
        e_old = g.edge_by_id[eid]
        head = e_old.v if d == 0 else e_old.u
        steps.append((eid, d))
        next_tail = walk[(i + 1) % len(walk)][2]
        steps.extend(forest_path(head, next_tail))
    return Cycle.make(g, steps, canonical=False)


def transport_basis(g: MetricGraph, basis: HomologyBasis, corr: EdgeCorrespondence,
                    contracted_graph: MetricGraph) -> tuple[HomologyBasis, tuple[tuple[int, ...], ...]]:
    """Rebuild the basis on the contracted graph and return it together with
    the unimodular matrix expressing its generators in the old basis."""
    new_basis = build_basis(contracted_graph)
    columns = []
    for chord in new_basis.chords:
        fc = fundamental_cycle(contracted_graph, new_basis, chord)
        lifted = _lift_cycle(g, basis, corr, contracted_graph, fc)
        columns.append(cycle_class(g, basis, lifted))
    n = basis.n
    M = tuple(tuple(columns[j][i] for j in range(n)) for i in range(n))
    assert abs(_det(M)) == 1, "change of basis is not unimodular"
    accumulated = tuple(tuple(int(x) for x in row) for row in _mat_mul(basis.transform, M))
    return HomologyBasis(new_basis.tree_edge_ids, new_basis.chords, accumulated), M
