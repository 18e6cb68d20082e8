"""MatchSum when every weighted vertex lies on one of a few distinguished faces.

For each parity type θ ∈ {0,1}^s, a parity gadget of parity θ_i is drawn
inside face i and wired to that face's block of weighted vertices.  The
perfect matchings of the resulting plane graph G_θ are exactly the matchings
of G whose unmatched set meets block i with parity θ_i, each weighted by the
product of its unmatched-vertex weights.  Summing PerfMatch(G_θ) over all θ
gives MatchSum(G).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import InvariantError, ValidationError
from .fkt import KasteleynSystem
from .gadgets import _insert_gadget
from .plane_graph import Face, PlaneGraph, check, edge_key
from .poly import interpolate_univariate

ZERO = Fraction(0)


@dataclass(frozen=True)
class BlockPartition:
    """Disjoint blocks ``B_i ⊆ V(F_i)`` covering all distinguished-face vertices.

    A vertex on several faces goes to the lowest-index one.  Each block is
    listed in order of first occurrence along its face walk.
    """

    faces: tuple[Face, ...]
    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, faces: Sequence[Face]) -> "BlockPartition":
        taken: set[int] = set()
        blocks = []
        for f in faces:
            b = tuple(v for v in f.vertices if v not in taken)
            taken.update(b)
            blocks.append(b)
        return cls(tuple(faces), tuple(blocks))

    @property
    def covered(self) -> frozenset[int]:
        return frozenset(v for b in self.blocks for v in b)


def _resolve_faces(g: PlaneGraph, faces: Iterable) -> tuple[Face, ...]:
    out = []
    for f in faces:
        face = f if isinstance(f, Face) else g.face(f)
        if face not in out:
            out.append(face)
    return tuple(out)


class FaceMatchSum:
    """Reusable evaluator of MatchSum(G) for vertex weights supported on the
    distinguished faces.

    The plane graph G_θ and its Kasteleyn data depend only on θ and on which
    face vertices carry nonzero weight; they are cached, so sweeping weights
    (for interpolation) costs one Pfaffian per θ per evaluation.  Vertices of
    weight 0 need no connector: they must be matched anyway.
    """

    def __init__(self, g: PlaneGraph, faces: Iterable):
        check(g)
        self.graph = g
        self.partition = BlockPartition.of(_resolve_faces(g, faces))
        self._cache: dict[tuple, tuple[KasteleynSystem, list[tuple[int, int]]]] = {}

    @property
    def s(self) -> int:
        return len(self.partition.faces)

    def _weights(self, weights) -> tuple[Fraction, ...]:
        if weights is None:
            w = self.graph.vertex_weights
        elif isinstance(weights, Mapping):
            w = tuple(Fraction(weights.get(v, 0)) for v in range(self.graph.n))
        else:
            w = tuple(Fraction(x) for x in weights)
        covered = self.partition.covered
        for v, x in enumerate(w):
            if x and v not in covered:
                raise ValidationError(f"vertex {v} has nonzero weight but lies on no distinguished face")
        return w

    def _structure(self, theta: tuple[int, ...], active: tuple[tuple[int, ...], ...]):
        key = (theta, active)
        hit = self._cache.get(key)
        if hit is None:
            builder = self.graph.builder()
            connectors: list[tuple[int, int]] = []
            for face, block, bit in zip(self.partition.faces, active, theta):
                connectors += _insert_gadget(builder, face, block, bit, {v: 1 for v in block})
            hit = (KasteleynSystem(builder.build()), connectors)
            self._cache[key] = hit
        return hit

    def theta_sums(self, weights=None) -> dict[tuple[int, ...], Fraction]:
        """``S_θ = PerfMatch(G_θ)`` for every parity type ``θ``."""
        w = self._weights(weights)
        active = tuple(tuple(v for v in b if w[v]) for b in self.partition.blocks)
        out = {}
        for theta in itertools.product((0, 1), repeat=self.s):
            if any(bit and not blk for bit, blk in zip(theta, active)):
                out[theta] = ZERO
                continue
            system, connectors = self._structure(theta, active)
            overrides = {edge_key(v, u): w[v] for v, u in connectors}
            out[theta] = system.perfmatch(overrides)
        return out

    def evaluate(self, weights=None) -> Fraction:
        """MatchSum(G) with the given vertex weights (default: the graph's own)."""
        return sum(self.theta_sums(weights).values(), ZERO)

    def face_vertex_weights(self, value) -> tuple[Fraction, ...]:
        """``value`` on every distinguished-face vertex, 0 elsewhere."""
        covered = self.partition.covered
        x = Fraction(value)
        return tuple(x if v in covered else ZERO for v in range(self.graph.n))


def matchsum_faces(g: PlaneGraph, faces: Iterable) -> Fraction:
    """Exact MatchSum of ``g`` using its own vertex weights, which must vanish
    off the distinguished faces."""
    return FaceMatchSum(g, faces).evaluate()


def theta_sums(g: PlaneGraph, faces: Iterable) -> dict[tuple[int, ...], Fraction]:
    return FaceMatchSum(g, faces).theta_sums()


def count_defects_on_faces_total(g: PlaneGraph, faces: Iterable) -> int:
    """Number of matchings (any size) whose unmatched vertices all lie on the faces."""
    fm = FaceMatchSum(g, faces)
    return _as_int(fm.evaluate(fm.face_vertex_weights(1)))


def defect_spectrum(g: PlaneGraph, faces: Iterable, workers=None) -> list[int]:
    """``c_k`` = number of k-defect matchings with all defects on the faces, k = 0..n.

    Evaluates MatchSum at face weight ξ = 0..n and interpolates; ``workers``
    optionally maps the evaluations over a process pool.
    """
    fm = FaceMatchSum(g, faces)
    xs = list(range(g.n + 1))
    if workers is not None and workers.parallel:
        values = workers.map(_spectrum_point, [(g, fm.partition.faces, x) for x in xs])
    else:
        values = [fm.evaluate(fm.face_vertex_weights(x)) for x in xs]
    poly = interpolate_univariate(zip(xs, values))
    coeffs = [poly.coefficient(i) for i in range(g.n + 1)]
    return [_as_int(c) for c in coeffs]


def _spectrum_point(args) -> Fraction:
    g, faces, x = args
    fm = FaceMatchSum(g, faces)
    return fm.evaluate(fm.face_vertex_weights(x))


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise InvariantError(f"expected an integer count, got {x}")
    return x.numerator
