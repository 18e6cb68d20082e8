"""Plane graphs given by a rotation system, their faces, and embedding-preserving edits.

Vertices are the integers ``0..n-1``.  ``rotation[v]`` lists the neighbours of
``v`` in counter-clockwise order.  Faces are traced with the rule: the successor
of the dart ``(u, v)`` is ``(v, w)`` where ``w`` follows ``u`` in
``rotation[v]``.  Every face is named after the lexicographically smallest dart
on its walk, written ``"u->v"``; an isolated vertex ``v`` forms a face of its
own with an empty walk, named ``"v"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import InvalidEmbedding, ValidationError
from .rational import RationalLike, to_rational

Dart = tuple[int, int]
ONE = Fraction(1)
ZERO = Fraction(0)


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple graph with exact edge and vertex weights and no embedding."""

    n: int
    edges: tuple[tuple[int, int, Fraction], ...]
    vertex_weights: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        if not self.vertex_weights:
            object.__setattr__(self, "vertex_weights", (ZERO,) * self.n)
        if len(self.vertex_weights) != self.n:
            raise ValidationError("vertex_weights must have one entry per vertex")
        for u, v, _ in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValidationError(f"edge {u}-{v} references an unknown vertex")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Sequence],
        vertex_weights: Sequence[RationalLike] | None = None,
    ) -> "Graph":
        """Build from ``(u, v)`` or ``(u, v, weight)`` items; missing weights are 1."""
        return cls(n, _normalize_edges(edges), _weights(n, vertex_weights))

    @cached_property
    def weight(self) -> dict[tuple[int, int], Fraction]:
        """Edge weight lookup keyed by ``(min, max)``."""
        return {edge_key(u, v): w for u, v, w in self.edges}

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v, _ in self.edges:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.weight

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components, each sorted, ordered by smallest vertex."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self.neighbors[x]:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    def with_vertex_weights(self, weights: Sequence[RationalLike] | Mapping[int, RationalLike]):
        return _replace(self, vertex_weights=_weights(self.n, weights))

    def with_edge_weights(self, weights: Mapping[tuple[int, int], RationalLike]):
        """Return a copy with the weights of the given edges replaced."""
        new = {edge_key(*e): to_rational(w) for e, w in weights.items()}
        missing = [e for e in new if e not in self.weight]
        if missing:
            raise ValidationError(f"unknown edge {missing[0]}")
        edges = tuple((u, v, new.get((u, v), w)) for u, v, w in self.edges)
        return _replace(self, edges=edges)


@dataclass(frozen=True, eq=False)
class PlaneGraph(Graph):
    """A graph together with a rotation system (counter-clockwise neighbour order)."""

    rotation: tuple[tuple[int, ...], ...] = ()
    # straight-line drawing, when the graph came from one; only used to pick
    # the geometric outer face
    points: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.rotation:
            object.__setattr__(self, "rotation", ((),) * self.n)
        if len(self.rotation) != self.n:
            raise ValidationError("rotation must have one entry per vertex")
        if self.points is not None and len(self.points) != self.n:
            raise ValidationError("points must have one entry per vertex")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Sequence],
        rotation: Sequence[Sequence[int]] | Mapping[int, Sequence[int]] | None = None,
        vertex_weights: Sequence[RationalLike] | None = None,
    ) -> "PlaneGraph":
        edges = _normalize_edges(edges)
        if rotation is None:
            raise ValidationError("a plane graph needs a rotation system")
        if isinstance(rotation, Mapping):
            rot = tuple(tuple(rotation.get(v, ())) for v in range(n))
        else:
            rot = tuple(tuple(r) for r in rotation)
        return cls(n, edges, _weights(n, vertex_weights), rot)

    @classmethod
    def from_coordinates(
        cls,
        points: Sequence[tuple[float, float]],
        edges: Iterable[Sequence],
        vertex_weights: Sequence[RationalLike] | None = None,
    ) -> "PlaneGraph":
        """Straight-line drawing: neighbours are ordered by angle, counter-clockwise."""
        n = len(points)
        edges = _normalize_edges(edges)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v, _ in edges:
            adj[u].append(v)
            adj[v].append(u)
        rot = []
        for v in range(n):
            x0, y0 = points[v]
            rot.append(
                tuple(sorted(adj[v], key=lambda u: math.atan2(points[u][1] - y0, points[u][0] - x0)))
            )
        pts = tuple((float(x), float(y)) for x, y in points)
        return cls(n, edges, _weights(n, vertex_weights), tuple(rot), pts)

    @cached_property
    def _position(self) -> tuple[dict[int, int], ...]:
        return tuple({u: i for i, u in enumerate(r)} for r in self.rotation)

    def successor(self, dart: Dart) -> Dart:
        """Next dart along the face walk containing ``dart``."""
        u, v = dart
        rv = self.rotation[v]
        return (v, rv[(self._position[v][u] + 1) % len(rv)])

    @cached_property
    def _face_data(self) -> tuple[tuple["Face", ...], dict[Dart, int]]:
        darts = sorted((u, v) for u in range(self.n) for v in self.rotation[u])
        face_of: dict[Dart, int] = {}
        walks = []
        for start in darts:
            if start in face_of:
                continue
            walk = [start]
            face_of[start] = len(walks)
            d = self.successor(start)
            while d != start:
                if d in face_of:
                    raise InvalidEmbedding("face traversal does not close")
                face_of[d] = len(walks)
                walk.append(d)
                d = self.successor(d)
            walks.append(tuple(walk))
        faces = [Face.from_walk(w) for w in walks]
        for v in range(self.n):
            if not self.rotation[v]:
                faces.append(Face(str(v), (), (v,)))
        return tuple(faces), face_of

    @cached_property
    def _problem(self) -> str | None:
        return validate(self)

    def faces(self) -> tuple["Face", ...]:
        """All faces, ordered by canonical dart (isolated-vertex faces last)."""
        if self._problem is not None:
            raise InvalidEmbedding(self._problem)
        return self._face_data[0]

    @cached_property
    def _face_index(self) -> dict[str, "Face"]:
        return {f.id: f for f in self.faces()}

    def face(self, face_id: str) -> "Face":
        try:
            return self._face_index[str(face_id)]
        except KeyError:
            raise ValidationError(f"unknown face {face_id!r}") from None

    def face_of_dart(self, dart: Dart) -> "Face":
        self.faces()
        return self._face_data[0][self._face_data[1][dart]]

    def outer_face(self, component: int = 0) -> "Face":
        """Outer face of a component.

        With a straight-line drawing this is the unbounded face (the only walk
        that is not clockwise); otherwise the longest walk, ties by id.
        """
        comp = set(self.components[component])
        cands = [f for f in self.faces() if f.vertices[0] in comp]
        if self.points is not None:
            pts = self.points

            def area(f: "Face") -> float:
                return sum(pts[u][0] * pts[v][1] - pts[v][0] * pts[u][1] for u, v in f.walk)

            return max(cands, key=lambda f: (area(f), -len(f.walk)))
        return min(cands, key=lambda f: (-len(f.walk), f.sort_key))

    def builder(self) -> "EmbeddingBuilder":
        return EmbeddingBuilder.from_graph(self)


@dataclass(frozen=True)
class Face:
    """A face: its walk (starting at the canonical dart) and its distinct vertices."""

    id: str
    walk: tuple[Dart, ...]
    vertices: tuple[int, ...]

    @classmethod
    def from_walk(cls, walk: Sequence[Dart]) -> "Face":
        i = min(range(len(walk)), key=lambda j: walk[j])
        walk = tuple(walk[i:]) + tuple(walk[:i])
        seen: dict[int, None] = {}
        for u, _ in walk:
            seen.setdefault(u, None)
        return cls(f"{walk[0][0]}->{walk[0][1]}", walk, tuple(seen))

    @property
    def sort_key(self) -> tuple:
        if self.walk:
            return (0,) + self.walk[0]
        return (1, self.vertices[0])

    def corners(self) -> dict[int, Dart]:
        """First corner of each vertex along the walk, as the incoming dart.

        A new edge drawn into this face at ``v`` goes right after
        ``corners()[v][0]`` in ``rotation[v]``.
        """
        out: dict[int, Dart] = {}
        m = len(self.walk)
        for j, (u, _) in enumerate(self.walk):
            if u not in out:
                out[u] = self.walk[j - 1] if m else None
        return out


def validate(g: PlaneGraph) -> str | None:
    """Return ``None`` if ``g`` is a valid plane graph, else a diagnostic naming
    the first violated invariant."""
    seen = set()
    for u, v, _ in g.edges:
        if u == v:
            return f"loop at vertex {u}"
        if (u, v) in seen:
            return f"parallel edge {u}-{v}"
        seen.add((u, v))
    for v in range(g.n):
        rv = g.rotation[v]
        if len(set(rv)) != len(rv) or set(rv) != set(g.neighbors[v]):
            return f"rotation/neighbor mismatch at vertex {v}"
    try:
        faces, face_of = g._face_data
    except InvalidEmbedding as exc:
        return str(exc)
    comp_of = {}
    for i, comp in enumerate(g.components):
        for v in comp:
            comp_of[v] = i
    counts = [[len(c), 0, 0] for c in g.components]
    for u, v, _ in g.edges:
        counts[comp_of[u]][1] += 1
    for f in faces:
        counts[comp_of[f.vertices[0]]][2] += 1
    for i, (nv, ne, nf) in enumerate(counts):
        if nv - ne + nf != 2:
            return (
                f"Euler check failed on component of vertex {g.components[i][0]}: "
                f"V - E + F = {nv - ne + nf}"
            )
    return None


def check(g: PlaneGraph) -> PlaneGraph:
    problem = g._problem
    if problem is not None:
        raise InvalidEmbedding(problem)
    return g


def faces(g: PlaneGraph) -> tuple[Face, ...]:
    return g.faces()


def drop_zero_weight_edges(g: PlaneGraph) -> PlaneGraph:
    """Delete every edge of weight 0, splicing it out of the rotations."""
    check(g)
    zero = {(u, v) for u, v, w in g.edges if w == 0}
    if not zero:
        return g
    rot = tuple(
        tuple(u for u in g.rotation[v] if edge_key(u, v) not in zero) for v in range(g.n)
    )
    edges = tuple(e for e in g.edges if (e[0], e[1]) not in zero)
    return PlaneGraph(g.n, edges, g.vertex_weights, rot)


def delete_vertices(g: Graph, removed: Iterable[int], *, return_map: bool = False):
    """Induced subgraph on the remaining vertices, relabelled in increasing order.

    With ``return_map`` the old-id -> new-id mapping is returned as well.
    """
    removed = set(removed)
    bad = [x for x in removed if not (isinstance(x, int) and 0 <= x < g.n)]
    if bad:
        raise ValidationError(f"unknown vertex id {bad[0]!r}")
    keep = [v for v in range(g.n) if v not in removed]
    new = {v: i for i, v in enumerate(keep)}
    edges = tuple(
        (new[u], new[v], w) for u, v, w in g.edges if u in new and v in new
    )
    weights = tuple(g.vertex_weights[v] for v in keep)
    if isinstance(g, PlaneGraph):
        rot = tuple(tuple(new[u] for u in g.rotation[v] if u in new) for v in keep)
        h = PlaneGraph(len(keep), edges, weights, rot)
    else:
        h = Graph(len(keep), edges, weights)
    return (h, new) if return_map else h


@dataclass(frozen=True, eq=False)
class ApexInstance:
    """A graph ``G`` with apex set ``A`` and a plane drawing of ``H = G - A``.

    ``planar`` is ``H`` (vertices ``0..n_H-1``); apices are numbered
    ``0..apex_count-1`` separately.  ``apex_edges`` holds ``(a, v, w)`` for
    apex-to-planar edges and ``apex_pairs`` holds ``(a, b, w)`` for edges inside
    ``A``.  ``faces`` are the ids of the distinguished faces of ``H``.
    """

    planar: PlaneGraph
    apex_count: int
    apex_edges: tuple[tuple[int, int, Fraction], ...] = ()
    apex_pairs: tuple[tuple[int, int, Fraction], ...] = ()
    faces: tuple[str, ...] = ()

    @classmethod
    def build(
        cls,
        planar: PlaneGraph,
        apex_count: int,
        apex_edges: Iterable[Sequence] = (),
        apex_pairs: Iterable[Sequence] = (),
        faces: Iterable[str] = (),
    ) -> "ApexInstance":
        ae = tuple(sorted((int(a), int(v), _w(rest)) for a, v, *rest in apex_edges))
        ap = tuple(sorted((*edge_key(int(a), int(b)), _w(rest)) for a, b, *rest in apex_pairs))
        return cls(planar, apex_count, ae, ap, tuple(str(f) for f in faces))

    @property
    def k(self) -> int:
        return self.apex_count

    def apex_vertex(self, a: int) -> int:
        """Id of apex ``a`` in :meth:`to_graph`."""
        return self.planar.n + a

    def to_graph(self) -> Graph:
        """The full (generally non-planar) graph; apex ``a`` becomes ``n_H + a``."""
        n = self.planar.n
        edges = list(self.planar.edges)
        edges += [(v, n + a, w) for a, v, w in self.apex_edges]
        edges += [(n + a, n + b, w) for a, b, w in self.apex_pairs]
        weights = self.planar.vertex_weights + (ZERO,) * self.apex_count
        return Graph(n + self.apex_count, _normalize_edges(edges), weights)

    def apex_neighborhood(self, v: int) -> frozenset[int]:
        return self._neighborhoods.get(v, frozenset())

    @cached_property
    def _neighborhoods(self) -> dict[int, frozenset[int]]:
        out: dict[int, set[int]] = {}
        for a, v, _ in self.apex_edges:
            out.setdefault(v, set()).add(a)
        return {v: frozenset(s) for v, s in out.items()}

    def validate(self) -> str | None:
        problem = validate(self.planar)
        if problem is not None:
            return problem
        seen = set()
        for a, v, _ in self.apex_edges:
            if not (0 <= a < self.apex_count and 0 <= v < self.planar.n):
                return f"apex edge {a}-{v} references an unknown vertex"
            if (a, v) in seen:
                return f"parallel apex edge {a}-{v}"
            seen.add((a, v))
        for a, b, _ in self.apex_pairs:
            if a == b or not (0 <= a < self.apex_count and 0 <= b < self.apex_count):
                return f"invalid apex pair {a}-{b}"
        if len({(a, b) for a, b, _ in self.apex_pairs}) != len(self.apex_pairs):
            return "parallel apex pair"
        covered = set()
        for fid in self.faces:
            try:
                covered.update(self.planar.face(fid).vertices)
            except ValidationError as exc:
                return str(exc)
        for v in self._neighborhoods:
            if v not in covered:
                return f"apex neighbour {v} is not on a distinguished face"
        return None


class EmbeddingBuilder:
    """Mutable scratch space for edits that keep the embedding planar."""

    def __init__(self, n: int, rotation, edges, weights):
        self.rotation: list[list[int]] = [list(r) for r in rotation]
        self.edges: dict[tuple[int, int], Fraction] = dict(edges)
        self.weights: list[Fraction] = list(weights)

    @classmethod
    def from_graph(cls, g: PlaneGraph) -> "EmbeddingBuilder":
        return cls(g.n, g.rotation, {(u, v): w for u, v, w in g.edges}, g.vertex_weights)

    @property
    def n(self) -> int:
        return len(self.weights)

    def add_vertex(self, weight: Fraction = ZERO) -> int:
        self.rotation.append([])
        self.weights.append(Fraction(weight))
        return self.n - 1

    def add_edge(self, u: int, v: int, weight: RationalLike = ONE, *, after_u=None, after_v=None) -> None:
        """Add edge ``uv``; at each end the new neighbour goes right after the
        given neighbour (or at the end of the rotation when ``None``)."""
        key = edge_key(u, v)
        if u == v or key in self.edges:
            raise ValidationError(f"edge {u}-{v} would make the graph non-simple")
        self.edges[key] = to_rational(weight)
        self._insert(u, v, after_u)
        self._insert(v, u, after_v)

    def _insert(self, v: int, new: int, after) -> None:
        rv = self.rotation[v]
        if after is None:
            rv.append(new)
        else:
            rv.insert(rv.index(after) + 1, new)

    def build(self) -> PlaneGraph:
        edges = tuple(sorted((u, v, w) for (u, v), w in self.edges.items()))
        return PlaneGraph(self.n, edges, tuple(self.weights), tuple(tuple(r) for r in self.rotation))


def _w(rest) -> Fraction:
    return to_rational(rest[0]) if rest else ONE


def _normalize_edges(edges: Iterable[Sequence]) -> tuple[tuple[int, int, Fraction], ...]:
    out = []
    for e in edges:
        u, v = int(e[0]), int(e[1])
        w = to_rational(e[2]) if len(e) > 2 else ONE
        u, v = edge_key(u, v)
        out.append((u, v, w))
    return tuple(sorted(out))


def _weights(n: int, weights) -> tuple[Fraction, ...]:
    if weights is None:
        return (ZERO,) * n
    if isinstance(weights, Mapping):
        return tuple(to_rational(weights.get(v, 0)) for v in range(n))
    weights = tuple(to_rational(w) for w in weights)
    if len(weights) != n:
        raise ValidationError("vertex_weights must have one entry per vertex")
    return weights


def _replace(g, **changes):
    import dataclasses

    return dataclasses.replace(g, **changes)
