"""Plane gadgets: parity gadgets, rakes, apex-edge subdivision, and their insertion."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .brute import brute_perfmatch
from .errors import InvariantError, ValidationError
from .plane_graph import (
    ApexInstance,
    EmbeddingBuilder,
    Face,
    PlaneGraph,
    check,
    delete_vertices,
)
from .rational import to_rational

ZERO = Fraction(0)
ONE = Fraction(1)
SIGNATURE_MAX_ARITY = 8
VERIFY_MAX_ARITY = 6


@dataclass(frozen=True)
class ParityGadget:
    """A plane gadget with ordered externals on its outer face.

    ``PerfMatch(D - {u_i : i in S})`` is 1 when ``|S| = parity (mod 2)`` and 0
    otherwise.  ``corners[i]`` is the dart entering ``externals[i]`` along the
    outer face walk (``None`` for an isolated external); a new edge drawn in
    the outer face at ``u_i`` goes right after that dart's tail in ``rotation``.
    Along the outer walk the externals appear in *decreasing* order, which is
    what lets them face a host face traversed in increasing order.
    """

    graph: PlaneGraph
    externals: tuple[int, ...]
    parity: int
    corners: tuple[tuple[int, int] | None, ...]

    @property
    def arity(self) -> int:
        return len(self.externals)


def _chain(m: int) -> tuple[list[tuple[float, float]], list[tuple[int, int]], list[int]]:
    """``m`` triangle-plus-pendant blocks in a row, joined right-to-left.

    Block ``i`` has L, M, Z, R at ids ``4i..4i+3``; externals are
    ``L_0, M_0, ..., M_{m-1}, R_{m-1}``.
    """
    pts, edges = [], []
    for i in range(m):
        b = 4 * i
        pts += [(4.0 * i, 0.0), (4.0 * i + 1, 1.0), (4.0 * i + 2, 0.0), (4.0 * i + 3, 0.0)]
        edges += [(b, b + 1), (b, b + 2), (b + 1, b + 2), (b + 2, b + 3)]
        if i:
            edges.append((b - 1, b))
    ext = [0] + [4 * i + 1 for i in range(m)] + [4 * m - 1]
    return pts, edges, ext


def _raw_gadget(t: int, b: int) -> tuple[list[tuple[float, float]], list[tuple[int, int]], list[int]]:
    if b == 0:
        if t == 1:
            return [(0.0, 0.0), (1.0, 0.0)], [(0, 1)], [0]
        if t == 2:
            return [(0.0, 0.0), (1.0, 0.0)], [(0, 1)], [0, 1]
        return _chain(t - 2)
    if t == 1:
        return [(0.0, 0.0)], [], [0]
    if t == 2:
        return [(0.0, 0.0), (1.0, -1.0), (2.0, 0.0)], [(0, 1), (1, 2)], [0, 2]
    pts, edges, ext = _chain(t - 1)
    last = ext.pop()
    x, y = pts[last]
    pts.append((x + 1.0, y))
    edges.append((last, len(pts) - 1))
    return pts, edges, ext


def _outer_corners(g: PlaneGraph, externals: Sequence[int]) -> tuple[Face | None, dict[int, tuple[int, int]]]:
    if not g.edges:
        return None, {}
    outer = g.outer_face()
    return outer, outer.corners()


def _mirror(g: PlaneGraph) -> PlaneGraph:
    pts = None if g.points is None else tuple((-x, y) for x, y in g.points)
    return PlaneGraph(g.n, g.edges, g.vertex_weights, tuple(tuple(reversed(r)) for r in g.rotation), pts)


def _orient_externals(g: PlaneGraph, externals: Sequence[int]) -> PlaneGraph:
    """Mirror ``g`` if needed so the outer walk meets the externals in decreasing order."""
    if len(externals) < 3:
        return g
    for cand in (g, _mirror(g)):
        outer = cand.outer_face()
        pos = {u: j for j, (u, _) in enumerate(outer.walk)}
        seq = sorted(range(len(externals)), key=lambda i: pos[externals[i]])
        j = seq.index(len(externals) - 1)
        seq = seq[j:] + seq[:j]
        if seq == list(range(len(externals) - 1, -1, -1)):
            return cand
    raise InvariantError("gadget externals are not in cyclic order on the outer face")


def build_parity_gadget(t: int, b: int, *, verify: bool = True) -> ParityGadget:
    """Unit-weight plane parity gadget of arity ``t`` and parity ``b``.

    EVEN: one edge for ``t <= 2``, else a chain of ``t - 2`` blocks (4 vertices
    each).  ODD: an isolated vertex for ``t = 1``, a 2-path for ``t = 2``, else
    EVEN of arity ``t + 1`` with a pendant vertex forcing its last external.
    Gadgets of arity up to 6 are checked against the parity table on creation.
    """
    if isinstance(t, bool) or not isinstance(t, int) or t < 1:
        raise ValidationError(f"gadget arity must be a positive integer, got {t!r}")
    if b not in (0, 1):
        raise ValidationError(f"gadget parity must be 0 or 1, got {b!r}")
    pts, edges, ext = _raw_gadget(t, b)
    g = _orient_externals(PlaneGraph.from_coordinates(pts, edges), ext)
    _, corners = _outer_corners(g, ext)
    gadget = ParityGadget(g, tuple(ext), b, tuple(corners.get(u) for u in ext))
    if verify and t <= VERIFY_MAX_ARITY:
        table = signature(gadget)
        for mask, value in enumerate(table):
            if value != (1 if bin(mask).count("1") % 2 == b else 0):
                raise InvariantError(f"gadget ({t}, {b}) fails its signature at subset {mask:b}")
    return gadget


def signature(gadget: ParityGadget) -> list[Fraction]:
    """``PerfMatch(D - U_S)`` for every ``S``; entry ``mask`` has bit ``i`` set iff ``u_{i+1} in S``."""
    t = gadget.arity
    if t > SIGNATURE_MAX_ARITY:
        raise ValidationError(f"signature enumeration is limited to arity {SIGNATURE_MAX_ARITY}")
    out = []
    for mask in range(1 << t):
        removed = [gadget.externals[i] for i in range(t) if mask >> i & 1]
        out.append(brute_perfmatch(delete_vertices(gadget.graph, removed), max_vertices=64))
    return out


def subset_lex_order(t: int) -> list[int]:
    """Masks ordered by subset size, then lexicographically (``∅, {1}, {2}, ..., {1,2}, ...``)."""
    out = []
    for size in range(t + 1):
        for combo in combinations(range(t), size):
            out.append(sum(1 << i for i in combo))
    return out


# --- insertion -----------------------------------------------------------------


def _block_order(face: Face, block: Iterable[int]) -> list[int]:
    block = set(block)
    missing = block - set(face.vertices)
    if missing:
        raise ValidationError(f"vertices {sorted(missing)} are not on face {face.id}")
    return [v for v in face.vertices if v in block]


def _insert_gadget(
    builder: EmbeddingBuilder,
    face: Face,
    block: Sequence[int],
    parity: int,
    weights: Mapping[int, Fraction],
) -> list[tuple[int, int]]:
    """Draw a parity gadget inside ``face`` (a face of the graph ``builder``
    started from) and connect it to ``block``, which must follow the face walk.

    Returns the connector edges ``(v_i, u_i)``.
    """
    for v in block:
        builder.weights[v] = ZERO
    if not block:
        if parity:
            builder.add_vertex(ZERO)
        return []
    gadget = build_parity_gadget(len(block), parity, verify=False)
    d = gadget.graph
    offset = builder.n
    for _ in range(d.n):
        builder.add_vertex(ZERO)
    for v in range(d.n):
        builder.rotation[offset + v] = [offset + u for u in d.rotation[v]]
    for u, v, w in d.edges:
        builder.edges[(offset + u, offset + v)] = w
    corners = face.corners()
    connectors = []
    for i, v in enumerate(block):
        u = offset + gadget.externals[i]
        host = corners.get(v)
        inner = gadget.corners[i]
        w = to_rational(weights.get(v, ZERO))
        builder.add_edge(
            v,
            u,
            w,
            after_u=None if host is None else host[0],
            after_v=None if inner is None else offset + inner[0],
        )
        connectors.append((v, u))
    return connectors


def insert_parity_gadget(
    g: PlaneGraph,
    face_id: str,
    block: Iterable[int],
    parity: int,
    weights: Mapping[int, object] | None = None,
) -> PlaneGraph:
    """Place a parity gadget inside a face and join its externals to ``block``.

    ``block`` is ordered by first occurrence along the face walk; connector
    ``v_i u_i`` gets weight ``weights[v_i]`` (default: the vertex weight of
    ``v_i``).  Block and gadget vertices end up with vertex weight 0.
    """
    check(g)
    face = g.face(face_id)
    order = _block_order(face, block)
    if weights is None:
        weights = {v: g.vertex_weights[v] for v in order}
    builder = g.builder()
    _insert_gadget(builder, face, order, parity, weights)
    return builder.build()


# --- rakes and subdivisions ----------------------------------------------------


def attach_rakes(g: PlaneGraph, vertices: Iterable[int], ell: int) -> PlaneGraph:
    """Attach a fresh ``ell``-rake at each listed vertex (the vertex is the handle).

    The ``ell`` spine neighbours are inserted consecutively after the first
    existing neighbour of the handle; each carries one pendant tooth.
    """
    if ell < 0:
        raise ValidationError("rake size must be non-negative")
    vertices = sorted(set(vertices))
    for v in vertices:
        if not 0 <= v < g.n:
            raise ValidationError(f"unknown vertex {v}")
    if ell == 0 or not vertices:
        return g
    builder = g.builder()
    for v in vertices:
        after = g.rotation[v][0] if g.rotation[v] else None
        for _ in range(ell):
            spine = builder.add_vertex()
            tooth = builder.add_vertex()
            builder.add_edge(v, spine, ONE, after_u=after)
            builder.add_edge(spine, tooth, ONE)
            after = spine
    return builder.build()


def rake_graph(ell: int) -> PlaneGraph:
    """A lone ``ell``-rake with handle 0."""
    return attach_rakes(PlaneGraph.from_edges(1, [], [()]), [0], ell)


def subdivide_apex_edges(inst: ApexInstance) -> ApexInstance:
    """Replace each non-unit apex edge ``a v`` by the path ``a r1 r2 v`` with
    weights ``1, 1, w``.

    ``r2 r1`` hangs off ``v`` inside the lowest-index distinguished face at
    ``v``, so ``r1`` lands on that face.  Unit edges are kept as they are.
    """
    g = inst.planar
    check(g)
    if all(w == 1 for _, _, w in inst.apex_edges):
        return inst
    faces = [g.face(f) for f in inst.faces]
    host: dict[int, Face] = {}
    for f in faces:
        for v in f.vertices:
            host.setdefault(v, f)
    # every face keeps at least one of its old darts; point faces get the new one
    reps: list[tuple[int, int] | None] = [f.walk[0] if f.walk else None for f in faces]
    builder = g.builder()
    new_edges = []
    for a, v, w in inst.apex_edges:
        if w == 1:
            new_edges.append((a, v, w))
            continue
        if v not in host:
            raise ValidationError(f"apex neighbour {v} is not on a distinguished face")
        f = host[v]
        corner = f.corners().get(v)
        r2 = builder.add_vertex()
        r1 = builder.add_vertex()
        builder.add_edge(v, r2, w, after_u=None if corner is None else corner[0])
        builder.add_edge(r2, r1, ONE)
        for i, face in enumerate(faces):
            if face is f and reps[i] is None:
                reps[i] = (v, r2)
        new_edges.append((a, r1, ONE))
    h = builder.build()
    ids = [h.face_of_dart(d).id if d is not None else faces[i].id for i, d in enumerate(reps)]
    return ApexInstance.build(h, inst.apex_count, new_edges, inst.apex_pairs, ids)
