"""Metric multigraphs with exact rational edge lengths.

Vertices are integers ``0..V-1``.  Loops and parallel edges are allowed.
Every length is a :class:`fractions.Fraction`; no decision anywhere in this
package is made in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    ContractionOfCycle,
    Disconnected,
    DuplicateEdgeId,
    InvalidGraph,
    MalformedLine,
    NonPositiveLength,
    NotOuterSpace,
)


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    length: Fraction

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def other(self, vertex: int) -> int:
        if vertex == self.u:
            return self.v
        if vertex == self.v:
            return self.u
        raise ValueError(f"vertex {vertex} is not an endpoint of edge {self.id}")


@dataclass(frozen=True)
class MetricGraph:
    """Connected multigraph with positive rational edge lengths."""

    num_vertices: int
    edges: tuple[Edge, ...]
    name: str = "graph"

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.id)))
        if self.num_vertices < 1:
            raise InvalidGraph("a metric graph needs at least one vertex")
        seen = set()
        for e in self.edges:
            if e.id in seen:
                raise DuplicateEdgeId(f"duplicate edge id {e.id}")
            seen.add(e.id)
            if e.id < 0:
                raise InvalidGraph(f"negative edge id {e.id}")
            if not (0 <= e.u < self.num_vertices and 0 <= e.v < self.num_vertices):
                raise InvalidGraph(f"edge {e.id} endpoint out of range")
            if not isinstance(e.length, Fraction):
                raise InvalidGraph(f"edge {e.id} length must be a Fraction")
            if e.length <= 0:
                raise NonPositiveLength(f"edge {e.id} has non-positive length {e.length}")
        if not self._is_connected():
            raise Disconnected(f"graph {self.name!r} is not connected")

    def _is_connected(self) -> bool:
        if self.num_vertices == 1:
            return True
        reached = {0}
        stack = [0]
        adj: dict[int, list[int]] = {}
        for e in self.edges:
            adj.setdefault(e.u, []).append(e.v)
            adj.setdefault(e.v, []).append(e.u)
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y not in reached:
                    reached.add(y)
                    stack.append(y)
        return len(reached) == self.num_vertices

    # -- derived views ------------------------------------------------------

    @cached_property
    def edge_by_id(self) -> Mapping[int, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, the incident (edge_id, other_endpoint) pairs.

        A loop at ``v`` appears twice at ``v``.
        """
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.num_vertices)]
        for e in self.edges:
            adj[e.u].append((e.id, e.v))
            adj[e.v].append((e.id, e.u))
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def volume(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))

    @cached_property
    def lengths(self) -> Mapping[int, Fraction]:
        return {e.id: e.length for e in self.edges}

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges for x in (e.u, e.v) if x == v)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def with_lengths(self, lengths: Mapping[int, Fraction]) -> "MetricGraph":
        new_edges = tuple(replace(e, length=Fraction(lengths[e.id])) for e in self.edges)
        return MetricGraph(self.num_vertices, new_edges, self.name)


def rank(g: MetricGraph) -> int:
    """First Betti number E - V + 1 of a connected graph."""
    return g.num_edges - g.num_vertices + 1


def require_outer_space(g: MetricGraph) -> None:
    """Enforce the moduli-space convention: rank >= 2 and no vertex of degree
    1 or 2 (loops count twice)."""
    if rank(g) < 2:
        raise NotOuterSpace(f"rank {rank(g)} < 2")
    for v in range(g.num_vertices):
        if g.degree(v) < 3:
            raise NotOuterSpace(f"vertex {v} has degree {g.degree(v)} < 3")


def normalize_volume(g: MetricGraph) -> MetricGraph:
    """Rescale all lengths by one rational so the total is exactly 1."""
    scale = Fraction(1) / g.volume
    if scale == 1:
        return g
    return g.with_lengths({e.id: e.length * scale for e in g.edges})


# ---------------------------------------------------------------------------
# cycles


def _canonical_steps(steps: Sequence[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Lexicographically minimal rotation of the step sequence or its reversal.

    Gives one distinguished representative per unoriented cyclic curve, which
    is what makes cycle sets diffable and reports deterministic.
    """
    steps = tuple(steps)
    k = len(steps)
    reversed_steps = tuple((eid, 1 - d) for eid, d in reversed(steps))
    candidates = [steps[i:] + steps[:i] for i in range(k)]
    candidates += [reversed_steps[i:] + reversed_steps[:i] for i in range(k)]
    return min(candidates)


@dataclass(frozen=True, eq=False)
class Cycle:
    """An embedded closed curve: an oriented cyclic sequence of steps.

    A step ``(edge_id, direction)`` traverses the edge from u to v when
    ``direction == 0`` and from v to u otherwise.  Equality and hashing ignore
    orientation and starting point (canonical form), but the stored steps keep
    the orientation they were built with, so homology classes can distinguish
    a cycle from its reverse.
    """

    steps: tuple[tuple[int, int], ...]

    @cached_property
    def canonical_key(self) -> tuple[tuple[int, int], ...]:
        return _canonical_steps(self.steps)

    @cached_property
    def edge_ids(self) -> frozenset[int]:
        return frozenset(eid for eid, _ in self.steps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cycle):
            return NotImplemented
        return self.canonical_key == other.canonical_key

    def __hash__(self) -> int:
        return hash(self.canonical_key)

    def __len__(self) -> int:
        return len(self.steps)

    def reverse(self) -> "Cycle":
        return Cycle(tuple((eid, 1 - d) for eid, d in reversed(self.steps)))

    def canonical(self) -> "Cycle":
        return Cycle(self.canonical_key)

    def sort_key(self):
        key = self.canonical_key
        return tuple(eid for eid, _ in key), tuple(d for _, d in key)

    def format(self) -> str:
        return " ".join(f"{eid}{'+' if d == 0 else '-'}" for eid, d in self.steps)

    @staticmethod
    def make(g: MetricGraph, steps: Sequence[tuple[int, int]], canonical: bool = True) -> "Cycle":
        """Validate embeddedness against ``g`` and build a cycle."""
        steps = tuple(steps)
        if not steps:
            raise InvalidGraph("a cycle needs at least one step")
        tails = []
        prev_head: Optional[int] = None
        eids = set()
        for eid, d in steps:
            e = g.edge_by_id.get(eid)
            if e is None:
                raise InvalidGraph(f"cycle step refers to unknown edge {eid}")
            if d not in (0, 1):
                raise InvalidGraph(f"bad direction {d}")
            if eid in eids:
                raise InvalidGraph(f"cycle repeats edge {eid}")
            eids.add(eid)
            tail, head = (e.u, e.v) if d == 0 else (e.v, e.u)
            if prev_head is not None and tail != prev_head:
                raise InvalidGraph("consecutive steps do not share a vertex")
            tails.append(tail)
            prev_head = head
        if prev_head != tails[0]:
            raise InvalidGraph("cycle does not close up")
        if len(set(tails)) != len(tails):
            raise InvalidGraph("cycle visits a vertex twice")
        c = Cycle(steps)
        return c.canonical() if canonical else c


def cycle_length(g: MetricGraph, c: Cycle, weights: Optional[Mapping[int, Fraction]] = None) -> Fraction:
    w = weights if weights is not None else g.lengths
    return sum((w[eid] for eid, _ in c.steps), Fraction(0))


def cycle_vertices(g: MetricGraph, c: Cycle) -> frozenset[int]:
    verts = set()
    for eid, _ in c.steps:
        e = g.edge_by_id[eid]
        verts.add(e.u)
        verts.add(e.v)
    return frozenset(verts)


def relabel_cycle(c: Cycle, edge_map: Mapping[int, int]) -> Cycle:
    return Cycle(tuple((edge_map[eid], d) for eid, d in c.steps)).canonical()


# ---------------------------------------------------------------------------
# forest contraction


@dataclass(frozen=True)
class EdgeCorrespondence:
    """Tracks identities through a contraction.

    ``vertex_map[old_vertex] -> new_vertex``; surviving edges keep their ids,
    listed in ``edge_map``; contracted ids in ``contracted``.
    """

    vertex_map: tuple[int, ...]
    edge_map: Mapping[int, int]
    contracted: frozenset[int]


def contract_forest(g: MetricGraph, edge_ids: Iterable[int]) -> tuple[MetricGraph, EdgeCorrespondence]:
    """Contract a set of non-loop edges containing no cycle.

    Surviving edges keep their lengths and ids; the rank is preserved.
    """
    ids = frozenset(edge_ids)
    for eid in ids:
        e = g.edge_by_id.get(eid)
        if e is None:
            raise InvalidGraph(f"unknown edge id {eid}")
        if e.is_loop:
            raise ContractionOfCycle(f"edge {eid} is a loop")

    parent = list(range(g.num_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in sorted(ids):
        e = g.edge_by_id[eid]
        ru, rv = find(e.u), find(e.v)
        if ru == rv:
            raise ContractionOfCycle(f"selected edges contain a cycle through edge {eid}")
        parent[max(ru, rv)] = min(ru, rv)

    roots = sorted({find(v) for v in range(g.num_vertices)})
    new_index = {r: i for i, r in enumerate(roots)}
    vertex_map = tuple(new_index[find(v)] for v in range(g.num_vertices))

    new_edges = tuple(
        Edge(e.id, vertex_map[e.u], vertex_map[e.v], e.length)
        for e in g.edges
        if e.id not in ids
    )
    new_graph = MetricGraph(len(roots), new_edges, g.name)
    corr = EdgeCorrespondence(
        vertex_map=vertex_map,
        edge_map={e.id: e.id for e in new_edges},
        contracted=ids,
    )
    return new_graph, corr


# ---------------------------------------------------------------------------
# isomorphism


@dataclass(frozen=True)
class Isomorphism:
    """Length-preserving multigraph isomorphism g1 -> g2."""

    vertex_map: tuple[int, ...]
    edge_map: tuple[tuple[int, int], ...]  # (edge id in g1, edge id in g2)

    @cached_property
    def edge_dict(self) -> Mapping[int, int]:
        return dict(self.edge_map)


def _vertex_signature(g: MetricGraph, v: int):
    incident = []
    loops = []
    for e in g.edges:
        if e.is_loop and e.u == v:
            loops.append(e.length)
        elif v in (e.u, e.v):
            incident.append(e.length)
    return (g.degree(v), tuple(sorted(loops)), tuple(sorted(incident)))


def _pair_lengths(g: MetricGraph, a: int, b: int) -> tuple[Fraction, ...]:
    if a == b:
        return tuple(sorted(e.length for e in g.edges if e.is_loop and e.u == a))
    return tuple(sorted(e.length for e in g.edges if {e.u, e.v} == {a, b}))


def are_isomorphic(g1: MetricGraph, g2: MetricGraph) -> Optional[Isomorphism]:
    """Search for a length-preserving isomorphism; None if there is none.

    Deterministic backtracking over vertex images, refined by degree and
    incident-length signatures.  Fine at the scales this package works with.
    """
    if g1.num_vertices != g2.num_vertices or g1.num_edges != g2.num_edges:
        return None
    sig1 = [_vertex_signature(g1, v) for v in range(g1.num_vertices)]
    sig2 = [_vertex_signature(g2, v) for v in range(g2.num_vertices)]
    if sorted(sig1) != sorted(sig2):
        return None

    n = g1.num_vertices
    order = sorted(range(n), key=lambda v: (sig1[v], v))
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(v1: int, v2: int) -> bool:
        if sig1[v1] != sig2[v2]:
            return False
        for w1, w2 in mapping.items():
            if _pair_lengths(g1, v1, w1) != _pair_lengths(g2, v2, w2):
                return False
        return True

    def backtrack(i: int) -> bool:
        if i == n:
            return True
        v1 = order[i]
        for v2 in range(n):
            if v2 in used or not consistent(v1, v2):
                continue
            mapping[v1] = v2
            used.add(v2)
            if backtrack(i + 1):
                return True
            del mapping[v1]
            used.discard(v2)
        return False

    if not backtrack(0):
        return None

    vertex_map = tuple(mapping[v] for v in range(n))
    edge_pairs: list[tuple[int, int]] = []
    by_pair1: dict[tuple[int, int], list[Edge]] = {}
    by_pair2: dict[tuple[int, int], list[Edge]] = {}
    for e in g1.edges:
        a, b = sorted((vertex_map[e.u], vertex_map[e.v]))
        by_pair1.setdefault((a, b), []).append(e)
    for e in g2.edges:
        a, b = sorted((e.u, e.v))
        by_pair2.setdefault((a, b), []).append(e)
    for key, edges1 in sorted(by_pair1.items()):
        edges2 = by_pair2.get(key, [])
        edges1 = sorted(edges1, key=lambda e: (e.length, e.id))
        edges2 = sorted(edges2, key=lambda e: (e.length, e.id))
        if [e.length for e in edges1] != [e.length for e in edges2]:
            return None
        edge_pairs.extend((a.id, b.id) for a, b in zip(edges1, edges2))
    return Isomorphism(vertex_map=vertex_map, edge_map=tuple(sorted(edge_pairs)))


def relabel_graph(g: MetricGraph, vertex_map: Sequence[int], edge_map: Mapping[int, int],
                  name: Optional[str] = None) -> MetricGraph:
    """Apply a relabeling (used by the equivariance test suites)."""
    new_edges = tuple(
        Edge(edge_map[e.id], vertex_map[e.u], vertex_map[e.v], e.length) for e in g.edges
    )
    return MetricGraph(g.num_vertices, new_edges, name if name is not None else g.name)


# ---------------------------------------------------------------------------
# file format


def _parse_fraction(token: str, lineno: int, line: str) -> Fraction:
    try:
        if "/" in token:
            num_s, den_s = token.split("/", 1)
            num, den = int(num_s), int(den_s)
            if den == 0:
                raise MalformedLine(lineno, line, "zero denominator")
            return Fraction(num, den)
        return Fraction(int(token))
    except ValueError:
        raise MalformedLine(lineno, line, f"not a rational: {token!r}") from None


def parse_graph_file(text: str):
    """Low-level parser shared by graphs and maps.

    Returns ``(name, num_vertices, edges, rotations, twists)`` where
    ``rotations`` maps a vertex to its cyclic dart list (``(edge_id, end)``)
    and ``twists`` is a set of edge ids.  Rotation and twist lines are
    optional; see the maps module.
    """
    name: Optional[str] = None
    num_vertices: Optional[int] = None
    edges: list[Edge] = []
    rotations: dict[int, list[tuple[int, int]]] = {}
    twists: set[int] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "graph":
            if len(parts) < 2:
                raise MalformedLine(lineno, raw, "graph line needs a name")
            name = line.split(None, 1)[1]
        elif kind == "vertices":
            if len(parts) != 2 or not parts[1].isdigit():
                raise MalformedLine(lineno, raw, "vertices line needs a count")
            num_vertices = int(parts[1])
        elif kind == "edge":
            if len(parts) != 5:
                raise MalformedLine(lineno, raw, "edge line needs: id u v length")
            try:
                eid, u, v = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError:
                raise MalformedLine(lineno, raw, "edge ids and endpoints must be integers") from None
            length = _parse_fraction(parts[4], lineno, raw)
            edges.append(Edge(eid, u, v, length))
        elif kind == "rotation":
            head, _, rest = line.partition(":")
            head_parts = head.split()
            if len(head_parts) != 2 or not head_parts[1].isdigit():
                raise MalformedLine(lineno, raw, "rotation line needs: rotation <v>: darts")
            v = int(head_parts[1])
            darts = []
            for tok in rest.split():
                try:
                    eid_s, end_s = tok.split(".")
                    darts.append((int(eid_s), int(end_s)))
                except ValueError:
                    raise MalformedLine(lineno, raw, f"bad dart {tok!r}") from None
            if v in rotations:
                raise MalformedLine(lineno, raw, f"duplicate rotation for vertex {v}")
            rotations[v] = darts
        elif kind == "twists":
            for tok in parts[1:]:
                try:
                    twists.add(int(tok))
                except ValueError:
                    raise MalformedLine(lineno, raw, f"bad twist id {tok!r}") from None
        else:
            raise MalformedLine(lineno, raw, f"unknown directive {kind!r}")

    if name is None:
        raise MalformedLine(0, "", "missing 'graph <name>' line")
    if num_vertices is None:
        raise MalformedLine(0, "", "missing 'vertices <V>' line")
    return name, num_vertices, edges, rotations, twists


def parse_graph(text: str) -> MetricGraph:
    """Parse the line-based graph format into a validated MetricGraph."""
    name, num_vertices, edges, _, _ = parse_graph_file(text)
    return MetricGraph(num_vertices, tuple(edges), name)


def serialize_graph(g: MetricGraph) -> str:
    lines = [f"graph {g.name}", f"vertices {g.num_vertices}"]
    for e in g.edges:
        lines.append(f"edge {e.id} {e.u} {e.v} {e.length.numerator}/{e.length.denominator}")
    return "\n".join(lines) + "\n"
