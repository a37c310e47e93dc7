"""Combinatorial maps: graphs embedded in surfaces via rotation systems.

A dart is one of the two sides ``(edge_id, 0|1)`` of an edge (end 0 sits at
the endpoint u, end 1 at v; a loop contributes both darts at its one vertex).
``alpha`` swaps the two darts of each edge and ``sigma`` rotates the darts
counterclockwise around their base vertex; faces are the orbits of
sigma o alpha.

Non-orientable embeddings are supported through an optional set of twisted
edges (a signed rotation system); crossing a twisted edge flips the local
sense of rotation.  For maps without twists everything reduces to the plain
orientable conventions above.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Optional, Sequence

from .errors import InvalidGraph, InvalidMap, MalformedLine, NotCubic
from .graphs import (
    Cycle,
    Edge,
    MetricGraph,
    parse_graph_file,
    rank,
    serialize_graph,
)
from .cycles import DEFAULT_CYCLE_CAP, minimum_cycles

Dart = tuple[int, int]


@dataclass(frozen=True)
class CombinatorialMap:
    graph: MetricGraph
    rotations: tuple[tuple[Dart, ...], ...]
    twists: frozenset[int] = frozenset()

    def __post_init__(self):
        g = self.graph
        object.__setattr__(self, "rotations", tuple(tuple(r) for r in self.rotations))
        object.__setattr__(self, "twists", frozenset(self.twists))
        if len(self.rotations) != g.num_vertices:
            raise InvalidMap("one rotation per vertex required")
        expected: dict[int, list[Dart]] = {v: [] for v in range(g.num_vertices)}
        for e in g.edges:
            expected[e.u].append((e.id, 0))
            expected[e.v].append((e.id, 1))
        for v, rot in enumerate(self.rotations):
            if sorted(rot) != sorted(expected[v]):
                raise InvalidMap(f"rotation at vertex {v} does not list its darts exactly once")
        for eid in self.twists:
            if eid not in g.edge_by_id:
                raise InvalidMap(f"twist on unknown edge {eid}")
        if g.num_edges:
            reached = {self.darts[0]}
            stack = [self.darts[0]]
            while stack:
                d = stack.pop()
                for nd in (self.alpha[d], self.sigma[d]):
                    if nd not in reached:
                        reached.add(nd)
                        stack.append(nd)
            if len(reached) != len(self.darts):
                raise InvalidMap("alpha and sigma do not act transitively on the darts")

    # -- permutations -------------------------------------------------------

    @cached_property
    def darts(self) -> tuple[Dart, ...]:
        return tuple(sorted((e.id, end) for e in self.graph.edges for end in (0, 1)))

    @cached_property
    def alpha(self) -> Mapping[Dart, Dart]:
        return {(eid, end): (eid, 1 - end) for eid, end in self.darts}

    @cached_property
    def sigma(self) -> Mapping[Dart, Dart]:
        nxt: dict[Dart, Dart] = {}
        for rot in self.rotations:
            for i, d in enumerate(rot):
                nxt[d] = rot[(i + 1) % len(rot)]
        return nxt

    @cached_property
    def sigma_inv(self) -> Mapping[Dart, Dart]:
        return {v: k for k, v in self.sigma.items()}

    @cached_property
    def dart_vertex(self) -> Mapping[Dart, int]:
        out: dict[Dart, int] = {}
        for e in self.graph.edges:
            out[(e.id, 0)] = e.u
            out[(e.id, 1)] = e.v
        return out

    def twist_sign(self, edge_id: int) -> int:
        return -1 if edge_id in self.twists else 1

    @cached_property
    def is_orientable(self) -> bool:
        """Whether the twist signs can be removed by flipping local rotations
        (always true when there are no twists).  A twisted loop is intrinsic:
        flipping its vertex negates both ends."""
        g = self.graph
        if any(g.edge_by_id[eid].is_loop for eid in self.twists):
            return False
        sign = {0: 1}
        stack = [0]
        while stack:
            v = stack.pop()
            for eid, w in g.adjacency[v]:
                if g.edge_by_id[eid].is_loop or w in sign:
                    continue
                sign[w] = sign[v] * self.twist_sign(eid)
                stack.append(w)
        return all(
            e.is_loop or sign[e.u] * sign[e.v] * self.twist_sign(e.id) == 1
            for e in g.edges
        )

    def skeleton_unit(self) -> MetricGraph:
        g = self.graph
        ones = tuple(Edge(e.id, e.u, e.v, Fraction(1)) for e in g.edges)
        return MetricGraph(g.num_vertices, ones, g.name)


# ---------------------------------------------------------------------------
# face tracing


@dataclass(frozen=True)
class FaceWalk:
    darts: tuple[Dart, ...]
    edge_walk: tuple[int, ...]
    embedded: bool
    cycle: Optional[Cycle]

    def __len__(self) -> int:
        return len(self.darts)


@dataclass(frozen=True)
class MapFaces:
    faces: tuple[FaceWalk, ...]
    euler_characteristic: int
    orientable: bool
    genus: Optional[int]        # orientable genus when orientable
    crosscaps: Optional[int]    # non-orientable genus otherwise

    @property
    def count(self) -> int:
        return len(self.faces)


def _walk_to_face(m: CombinatorialMap, walk: Sequence[Dart]) -> FaceWalk:
    g = m.graph
    edge_walk = tuple(eid for eid, _ in walk)
    embedded = True
    cycle: Optional[Cycle] = None
    try:
        cycle = Cycle.make(g, [(eid, end) for eid, end in walk])
    except InvalidGraph:
        embedded = False
    return FaceWalk(tuple(walk), edge_walk, embedded, cycle)


def _faces_untwisted(m: CombinatorialMap) -> list[tuple[Dart, ...]]:
    remaining = set(m.darts)
    orbits: list[tuple[Dart, ...]] = []
    while remaining:
        start = min(remaining)
        walk = [start]
        remaining.discard(start)
        d = m.sigma[m.alpha[start]]
        while d != start:
            walk.append(d)
            remaining.discard(d)
            d = m.sigma[m.alpha[d]]
        orbits.append(tuple(walk))
    return orbits


def _canonical_walk_key(edge_walk: Sequence[int]) -> tuple[int, ...]:
    seq = tuple(edge_walk)
    k = len(seq)
    rev = tuple(reversed(seq))
    return min([seq[i:] + seq[:i] for i in range(k)] + [rev[i:] + rev[:i] for i in range(k)])


def _faces_twisted(m: CombinatorialMap) -> list[tuple[Dart, ...]]:
    """General signed tracing: states are (dart, local orientation); each face
    is covered by exactly two state orbits (one per traversal sense)."""
    def step(state):
        d, o = state
        o2 = o * m.twist_sign(d[0])
        d2 = m.alpha[d]
        nd = m.sigma[d2] if o2 == 1 else m.sigma_inv[d2]
        return (nd, o2)

    states = [(d, o) for d in m.darts for o in (1, -1)]
    remaining = set(states)
    orbits: list[tuple[Dart, ...]] = []
    while remaining:
        start = min(remaining, key=lambda s: (s[0], -s[1]))
        walk = [start[0]]
        remaining.discard(start)
        s = step(start)
        while s != start:
            walk.append(s[0])
            remaining.discard(s)
            s = step(s)
        orbits.append(tuple(walk))
    assert len(orbits) % 2 == 0
    by_key: dict[tuple[int, ...], list[tuple[Dart, ...]]] = {}
    for orbit in orbits:
        by_key.setdefault(_canonical_walk_key([d[0] for d in orbit]), []).append(orbit)
    faces: list[tuple[Dart, ...]] = []
    for key in sorted(by_key):
        group = sorted(by_key[key])
        assert len(group) % 2 == 0, "face traversals must pair up"
        faces.extend(group[: len(group) // 2])
    return faces


def trace_faces(m: CombinatorialMap) -> MapFaces:
    """Faces of the embedding, with embeddedness of each boundary walk and
    the Euler characteristic V - E + F."""
    orbit_walks = _faces_untwisted(m) if not m.twists else _faces_twisted(m)
    faces = tuple(_walk_to_face(m, walk) for walk in
                  sorted(orbit_walks, key=lambda wk: tuple(wk)))
    g = m.graph
    euler = g.num_vertices - g.num_edges + len(faces)
    orientable = m.is_orientable
    genus = crosscaps = None
    if orientable:
        assert (2 - euler) % 2 == 0
        genus = (2 - euler) // 2
    else:
        crosscaps = 2 - euler
    assert sum(len(f) for f in faces) == 2 * g.num_edges
    return MapFaces(faces, euler, orientable, genus, crosscaps)


# ---------------------------------------------------------------------------
# type and counting identities


@dataclass(frozen=True)
class MapTypeReport:
    uniform: bool
    p: Optional[int]
    q: Optional[int]
    degree_multiset: tuple[int, ...]
    face_length_multiset: tuple[int, ...]


def map_type_check(m: CombinatorialMap) -> MapTypeReport:
    degrees = tuple(sorted(len(rot) for rot in m.rotations))
    face_lengths = tuple(sorted(len(f) for f in trace_faces(m).faces))
    uniform = len(set(degrees)) == 1 and len(set(face_lengths)) == 1
    return MapTypeReport(
        uniform=uniform,
        p=face_lengths[0] if uniform else None,
        q=degrees[0] if uniform else None,
        degree_multiset=degrees,
        face_length_multiset=face_lengths,
    )


@dataclass(frozen=True)
class EulerRelations:
    V: int
    E: int
    F: int
    p: int
    n: int
    vertex_edge_identity: bool   # 3V == 2E
    edge_face_identity: bool     # 2E == pF
    rank_identity: bool          # n == 1 + V/2
    face_count_identity: bool    # pF == 6(n - 1)

    @property
    def all_pass(self) -> bool:
        return (self.vertex_edge_identity and self.edge_face_identity
                and self.rank_identity and self.face_count_identity)


def euler_relations(m: CombinatorialMap) -> EulerRelations:
    """Exact verification of the counting identities of cubic uniform maps."""
    t = map_type_check(m)
    if not t.uniform or t.q != 3:
        raise NotCubic(f"need a uniform cubic map, got degrees {t.degree_multiset}")
    g = m.graph
    V, E = g.num_vertices, g.num_edges
    F = trace_faces(m).count
    p = t.p
    n = rank(g)
    return EulerRelations(
        V=V, E=E, F=F, p=p, n=n,
        vertex_edge_identity=(3 * V == 2 * E),
        edge_face_identity=(2 * E == p * F),
        rank_identity=(V % 2 == 0 and n == 1 + V // 2),
        face_count_identity=(p * F == 6 * (n - 1)),
    )


# ---------------------------------------------------------------------------
# automorphisms and flag transitivity


@dataclass(frozen=True)
class FlagTransitivityReport:
    transitive: bool
    aut_order: int
    flag_count: int


def _propagate(m: CombinatorialMap, base: Dart, target: Dart, eps: int) -> Optional[dict[Dart, Dart]]:
    """Extend dart image base -> target with local sense eps at the base
    vertex to a full map automorphism, or fail.

    An automorphism is a dart bijection commuting with alpha and carrying
    sigma to sigma^(m(v)) for per-vertex senses m, consistent with the twist
    signs; on untwisted maps m is constant, giving exactly the
    orientation-preserving (m = +1) and reversing (m = -1) automorphisms.
    """
    psi: dict[Dart, Dart] = {base: target}
    sense: dict[int, int] = {m.dart_vertex[base]: eps}
    stack = [base]

    def assign(d: Dart, img: Dart) -> bool:
        known = psi.get(d)
        if known is not None:
            return known == img
        psi[d] = img
        stack.append(d)
        return True

    while stack:
        d = stack.pop()
        img = psi[d]
        v = m.dart_vertex[d]
        s = sense[v]
        nd = m.sigma[d]
        nimg = m.sigma[img] if s == 1 else m.sigma_inv[img]
        if not assign(nd, nimg):
            return None
        ad, aimg = m.alpha[d], m.alpha[img]
        w = m.dart_vertex[ad]
        mw = s * m.twist_sign(d[0]) * m.twist_sign(img[0])
        if w in sense:
            if sense[w] != mw:
                return None
        else:
            sense[w] = mw
        if not assign(ad, aimg):
            return None
    if len(psi) != len(m.darts) or len(set(psi.values())) != len(psi):
        return None
    return psi


def map_automorphisms(m: CombinatorialMap) -> list[dict[Dart, Dart]]:
    """All automorphisms (both senses), each determined by the image of one
    dart plus a local sense; O(E) per candidate."""
    base = m.darts[0]
    autos = []
    for target in m.darts:
        for eps in (1, -1):
            psi = _propagate(m, base, target, eps)
            if psi is not None:
                autos.append(psi)
    return autos


def flag_transitivity(m: CombinatorialMap) -> FlagTransitivityReport:
    """A map is flag-transitive exactly when its automorphism group is as
    large as the flag count 4E (the action on flags is free)."""
    autos = map_automorphisms(m)
    flags = 4 * m.graph.num_edges
    return FlagTransitivityReport(
        transitive=len(autos) == flags,
        aut_order=len(autos),
        flag_count=flags,
    )


# ---------------------------------------------------------------------------
# systoles versus faces


@dataclass(frozen=True)
class FaceSystoleReport:
    girth: Fraction
    p: int
    equal: bool
    all_faces_embedded: bool
    face_count: int
    min_cycle_count: int
    extra_min_cycles: tuple[Cycle, ...]


def systoles_equal_faces(m: CombinatorialMap, cap: int = DEFAULT_CYCLE_CAP) -> FaceSystoleReport:
    """Whether the unit-weight minimum cycles are exactly the face boundaries.

    Decided by exhaustive enumeration of all cycles up to the girth on the
    skeleton with every edge of length 1.
    """
    t = map_type_check(m)
    if not t.uniform:
        raise InvalidMap("face/systole comparison needs a uniform map")
    skeleton = m.skeleton_unit()
    girth, mins = minimum_cycles(skeleton, cap=cap)
    traced = trace_faces(m)
    face_cycles = {f.cycle for f in traced.faces if f.embedded}
    all_embedded = all(f.embedded for f in traced.faces)
    equal = girth == t.p and all_embedded and set(mins) == face_cycles
    extras = tuple(sorted((c for c in mins if c not in face_cycles), key=Cycle.sort_key))
    return FaceSystoleReport(
        girth=girth, p=t.p, equal=equal, all_faces_embedded=all_embedded,
        face_count=traced.count, min_cycle_count=len(mins), extra_min_cycles=extras,
    )


# ---------------------------------------------------------------------------
# file format


def parse_map(text: str) -> CombinatorialMap:
    name, num_vertices, edges, rotations, twists = parse_graph_file(text)
    if not rotations:
        raise MalformedLine(0, "", "map requires rotation lines")
    g = MetricGraph(num_vertices, tuple(edges), name)
    stray = set(rotations) - set(range(num_vertices))
    if stray:
        raise InvalidMap(f"rotation for unknown vertex {sorted(stray)}")
    rots = []
    for v in range(num_vertices):
        if v not in rotations:
            raise InvalidMap(f"missing rotation for vertex {v}")
        rots.append(tuple(rotations[v]))
    return CombinatorialMap(g, tuple(rots), frozenset(twists))


def serialize_map(m: CombinatorialMap) -> str:
    out = serialize_graph(m.graph).rstrip("\n").splitlines()
    for v, rot in enumerate(m.rotations):
        if rot:
            k = rot.index(min(rot))
            rot = rot[k:] + rot[:k]
        darts = " ".join(f"{eid}.{end}" for eid, end in rot)
        out.append(f"rotation {v}: {darts}")
    if m.twists:
        out.append("twists " + " ".join(str(i) for i in sorted(m.twists)))
    return "\n".join(out) + "\n"
