"""Small plane graphs with straight-line embeddings, plus random instances."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

from .plane_graph import ApexInstance, PlaneGraph


def path_graph(n: int, weights: Sequence | None = None) -> PlaneGraph:
    pts = [(float(i), 0.0) for i in range(n)]
    edges = [(i, i + 1) + ((weights[i],) if weights else ()) for i in range(n - 1)]
    return PlaneGraph.from_coordinates(pts, edges)


def cycle_graph(n: int, weights: Sequence | None = None) -> PlaneGraph:
    pts = [(math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)) for i in range(n)]
    edges = [(i, (i + 1) % n) + ((weights[i],) if weights else ()) for i in range(n)]
    return PlaneGraph.from_coordinates(pts, edges)


def grid_graph(rows: int, cols: int) -> PlaneGraph:
    """``rows x cols`` grid; vertex ``r*cols + c`` sits at ``(c, r)``."""
    pts = [(float(c), float(r)) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return PlaneGraph.from_coordinates(pts, edges)


def wheel_graph(spokes: int) -> PlaneGraph:
    """Hub 0 joined to the cycle ``1..spokes``."""
    pts = [(0.0, 0.0)] + [
        (math.cos(2 * math.pi * i / spokes), math.sin(2 * math.pi * i / spokes)) for i in range(spokes)
    ]
    edges = [(0, i + 1) for i in range(spokes)]
    edges += [(i + 1, (i + 1) % spokes + 1) for i in range(spokes)]
    return PlaneGraph.from_coordinates(pts, edges)


def star_graph(leaves: int) -> PlaneGraph:
    pts = [(0.0, 0.0)] + [
        (math.cos(2 * math.pi * i / leaves), math.sin(2 * math.pi * i / leaves)) for i in range(leaves)
    ]
    return PlaneGraph.from_coordinates(pts, [(0, i + 1) for i in range(leaves)])


def empty_graph(n: int) -> PlaneGraph:
    return PlaneGraph.from_coordinates([(float(i), 0.0) for i in range(n)], [])


def _crosses(p, q, r, s) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(p, q, r), orient(p, q, s)
    d3, d4 = orient(r, s, p), orient(r, s, q)
    return d1 * d2 < 0 and d3 * d4 < 0


def random_points(n: int, rng: random.Random) -> list[tuple[float, float]]:
    return [(rng.random(), rng.random()) for _ in range(n)]


def random_plane_graph(
    n: int,
    rng: random.Random,
    density: float = 0.6,
    connected: bool = True,
    weight=None,
) -> PlaneGraph:
    """Random straight-line plane graph on ``n`` random points.

    A greedy triangulation of the points is thinned: every edge survives with
    probability ``density``; with ``connected`` a random spanning tree of the
    triangulation is always kept.  ``weight(rng)`` draws edge weights (default 1).
    """
    pts = random_points(n, rng)
    pairs = sorted(
        ((i, j) for i in range(n) for j in range(i + 1, n)),
        key=lambda e: math.dist(pts[e[0]], pts[e[1]]),
    )
    tri: list[tuple[int, int]] = []
    for i, j in pairs:
        if not any(
            len({i, j, a, b}) == 4 and _crosses(pts[i], pts[j], pts[a], pts[b]) for a, b in tri
        ):
            tri.append((i, j))
    keep = set()
    if connected:
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        order = tri[:]
        rng.shuffle(order)
        for i, j in order:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
                keep.add((i, j))
    edges = [e for e in tri if e in keep or rng.random() < density]
    draw = weight or (lambda r: 1)
    return PlaneGraph.from_coordinates(pts, [(i, j, draw(rng)) for i, j in edges])


def random_rational(rng: random.Random, bound: int = 3, zero_prob: float = 0.15) -> Fraction:
    """Random rational in ``[-bound, bound]`` with small denominators."""
    if rng.random() < zero_prob:
        return Fraction(0)
    den = rng.choice((1, 1, 2, 3))
    return Fraction(rng.randint(-bound * den, bound * den), den)


def random_apex_instance(
    n_planar: int,
    k: int,
    rng: random.Random,
    *,
    s: int = 1,
    apex_degree: int = 2,
    weighted: bool = True,
    adjacent_apices: bool = True,
    max_classes: int | None = None,
) -> ApexInstance:
    """Random k-apex instance whose apex neighbourhood lies on ``s`` faces of H."""
    weight = (lambda r: random_rational(r, zero_prob=0.0) or Fraction(1)) if weighted else None
    h = random_plane_graph(n_planar, rng, weight=weight)
    fs = list(h.faces())
    rng.shuffle(fs)
    chosen = fs[: max(1, min(s, len(fs)))]
    pool = sorted({v for f in chosen for v in f.vertices})
    apex_edges = []
    for a in range(k):
        for v in rng.sample(pool, min(apex_degree, len(pool))):
            w = (random_rational(rng, zero_prob=0.0) or Fraction(1)) if weighted else Fraction(1)
            if weighted and rng.random() < 0.3:
                w = Fraction(1)
            apex_edges.append((a, v, w))
    if max_classes is not None:
        apex_edges = _limit_classes(apex_edges, max_classes)
    pairs = []
    if adjacent_apices:
        for a in range(k):
            for b in range(a + 1, k):
                if rng.random() < 0.5:
                    pairs.append((a, b, random_rational(rng, zero_prob=0.0) or 1 if weighted else 1))
    return ApexInstance.build(h, k, apex_edges, pairs, [f.id for f in chosen])


def _limit_classes(apex_edges, max_classes):
    nbhd: dict[int, set] = {}
    for a, v, w in apex_edges:
        if w == 1:
            nbhd.setdefault(v, set()).add(a)
    classes = sorted({frozenset(s) for s in nbhd.values()}, key=sorted)
    if len(classes) <= max_classes:
        return apex_edges
    allowed = set(classes[:max_classes])
    out = []
    for a, v, w in apex_edges:
        if w == 1 and frozenset(nbhd[v]) not in allowed:
            w = Fraction(2)
        out.append((a, v, w))
    return out


def random_promise_instance(n_planar: int, k: int, rng: random.Random, *, s: int = 2) -> ApexInstance:
    """Unweighted k-apex instance with an independent apex set in which every
    planar vertex has at most one apex neighbour (neighbours lie on ``s`` faces)."""
    h = random_plane_graph(n_planar, rng)
    fs = list(h.faces())
    rng.shuffle(fs)
    chosen = fs[: max(1, min(s, len(fs)))]
    pool = sorted({v for f in chosen for v in f.vertices})
    edges = [(rng.randrange(k), v) for v in pool if rng.random() < 0.7] if k else []
    return ApexInstance.build(h, k, edges, (), [f.id for f in chosen])
