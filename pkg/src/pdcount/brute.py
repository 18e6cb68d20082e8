"""Brute-force enumeration of matchings: the ground truth for every fast path.

All routines branch on the lowest unprocessed vertex, which is either left
unmatched or matched to a higher neighbour (neighbours in increasing order),
so every matching is visited exactly once.  They are exponential and refuse
graphs with more than ``max_vertices`` vertices.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator

from .errors import SizeCapExceeded
from .plane_graph import Graph
from .poly import Poly1

MAX_VERTICES = 22


def _check_size(g: Graph, max_vertices: int) -> None:
    if g.n > max_vertices:
        raise SizeCapExceeded(f"brute force is capped at {max_vertices} vertices (got {g.n})")


def _adjacency(g: Graph) -> list[list[tuple[int, Fraction]]]:
    adj: list[list[tuple[int, Fraction]]] = [[] for _ in range(g.n)]
    for u, v, w in g.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    for a in adj:
        a.sort()
    return adj


def _low(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def brute_perfmatch(g: Graph, max_vertices: int = MAX_VERTICES) -> Fraction:
    """Sum over perfect matchings of the product of edge weights."""
    _check_size(g, max_vertices)
    if g.n % 2:
        return Fraction(0)
    adj = _adjacency(g)

    def rec(mask: int) -> Fraction:
        if not mask:
            return Fraction(1)
        v = _low(mask)
        rest = mask ^ (1 << v)
        total = Fraction(0)
        for u, w in adj[v]:
            if rest >> u & 1 and w:
                total += w * rec(rest ^ (1 << u))
        return total

    return rec((1 << g.n) - 1)


def brute_matchsum(g: Graph, max_vertices: int = MAX_VERTICES) -> Fraction:
    """Sum over all matchings of (product of unmatched-vertex weights) x
    (product of edge weights)."""
    _check_size(g, max_vertices)
    adj = _adjacency(g)
    vw = g.vertex_weights

    def rec(mask: int) -> Fraction:
        if not mask:
            return Fraction(1)
        v = _low(mask)
        rest = mask ^ (1 << v)
        total = vw[v] * rec(rest) if vw[v] else Fraction(0)
        for u, w in adj[v]:
            if rest >> u & 1 and w:
                total += w * rec(rest ^ (1 << u))
        return total

    return rec((1 << g.n) - 1)


def brute_mu(g: Graph, max_vertices: int = MAX_VERTICES) -> Poly1:
    """Defect-generating matching polynomial: coefficient of X^k counts
    k-defect matchings (edge weights are ignored)."""
    _check_size(g, max_vertices)
    adj = _adjacency(g)
    counts = [0] * (g.n + 1)

    def rec(mask: int, defects: int) -> None:
        if not mask:
            counts[defects] += 1
            return
        v = _low(mask)
        rest = mask ^ (1 << v)
        rec(rest, defects + 1)
        for u, _ in adj[v]:
            if rest >> u & 1:
                rec(rest ^ (1 << u), defects)

    rec((1 << g.n) - 1, 0)
    return Poly1(counts)


def _narrow_order(g: Graph) -> list[int]:
    """Greedy vertex order that keeps the frontier (unprocessed vertices with a
    processed neighbour) small: always take the frontier vertex that adds the
    fewest new frontier vertices."""
    adj = [set(a) for a in g.neighbors]
    done = [False] * g.n
    frontier: set[int] = set()
    order: list[int] = []
    while len(order) < g.n:
        pool = frontier or {v for v in range(g.n) if not done[v]}
        v = min(pool, key=lambda x: (sum(1 for y in adj[x] if not done[y] and y not in frontier), len(adj[x]), x))
        done[v] = True
        order.append(v)
        frontier.discard(v)
        frontier.update(y for y in adj[v] if not done[y])
    return order


def brute_defects(
    g: Graph, k: int, forbidden: Iterable[int] = (), max_vertices: int = MAX_VERTICES
) -> int:
    """Number of k-defect matchings none of whose defects lies in ``forbidden``.

    Same branching as the other enumerators, but on vertices relabelled in a
    narrow-frontier order and memoised on (remaining vertex set, defects left), so graphs
    with long pendant attachments stay cheap.  Only matchings with at most
    ``k`` defects are ever explored.
    """
    _check_size(g, max_vertices)
    if k < 0 or k > g.n or (g.n - k) % 2:
        return 0
    order = _narrow_order(g)
    pos = {v: i for i, v in enumerate(order)}
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for u, v, _ in g.edges:
        adj[pos[u]].append(pos[v])
        adj[pos[v]].append(pos[u])
    banned = 0
    for v in forbidden:
        banned |= 1 << pos[v]
    memo: dict[tuple[int, int], int] = {}

    def rec(mask: int, budget: int) -> int:
        if not mask:
            return 1 if budget == 0 else 0
        key = (mask, budget)
        hit = memo.get(key)
        if hit is not None:
            return hit
        v = _low(mask)
        rest = mask ^ (1 << v)
        total = 0
        if budget and not banned >> v & 1:
            total += rec(rest, budget - 1)
        for u in adj[v]:
            if rest >> u & 1:
                total += rec(rest ^ (1 << u), budget)
        memo[key] = total
        return total

    return rec((1 << g.n) - 1, k)


def matchings(g: Graph, max_vertices: int = MAX_VERTICES) -> Iterator[tuple[tuple[int, int], ...]]:
    """Yield every matching as a tuple of edges ``(u, v)`` with ``u < v``."""
    _check_size(g, max_vertices)
    adj = _adjacency(g)
    chosen: list[tuple[int, int]] = []

    def rec(mask: int):
        if not mask:
            yield tuple(chosen)
            return
        v = _low(mask)
        rest = mask ^ (1 << v)
        yield from rec(rest)
        for u, _ in adj[v]:
            if rest >> u & 1:
                chosen.append((v, u))
                yield from rec(rest ^ (1 << u))
                chosen.pop()

    yield from rec((1 << g.n) - 1)


def unmatched(g: Graph, matching: Iterable[tuple[int, int]]) -> set[int]:
    covered = {x for e in matching for x in e}
    return {v for v in range(g.n) if v not in covered}


class BruteDefectOracle:
    """Counts k-defect matchings of a graph by enumeration."""

    name = "brute"

    def __init__(self, max_vertices: int = MAX_VERTICES):
        self.max_vertices = max_vertices

    def __call__(self, g: Graph, k: int) -> int:
        return brute_defects(g, k, (), self.max_vertices)


class BruteRestrictedOracle:
    """Counts k-defect matchings whose defects avoid a forbidden vertex set."""

    name = "brute"

    def __init__(self, max_vertices: int = MAX_VERTICES):
        self.max_vertices = max_vertices

    def __call__(self, g: Graph, forbidden: Iterable[int], k: int) -> int:
        return brute_defects(g, k, forbidden, self.max_vertices)
