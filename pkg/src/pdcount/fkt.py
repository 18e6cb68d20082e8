"""Perfect-matching sums on plane graphs via Kasteleyn orientations and exact Pfaffians."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InvalidEmbedding, ValidationError
from .plane_graph import Face, PlaneGraph, check, edge_key

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Orientation:
    """Direction of every edge: ``direction[(u, v)] = +1`` means ``u -> v`` (``u < v``)."""

    direction: Mapping[tuple[int, int], int]
    outer: tuple[str, ...]  # id of the unconstrained face of each component

    def forward(self, u: int, v: int) -> bool:
        """True if the edge ``uv`` is directed from ``u`` to ``v``."""
        s = self.direction[edge_key(u, v)]
        return (s > 0) == (u < v)


def _agreements(walk: Sequence[tuple[int, int]], orient: Mapping[tuple[int, int], int]) -> int:
    return sum(1 for u, v in walk if (orient[edge_key(u, v)] > 0) == (u < v))


def kasteleyn_orient(g: PlaneGraph, outer: str | None = None) -> Orientation:
    """Orientation with an odd number of agreeing walk edges on every face except
    the outer one.  Requires a connected graph.

    A BFS spanning tree is oriented away from the root; the remaining edges form
    a spanning tree of the dual, whose faces are fixed leaves-first so that the
    single undetermined edge of each face makes its parity odd.
    """
    check(g)
    if len(g.components) > 1:
        raise ValidationError("kasteleyn_orient needs a connected graph; split components first")
    orient: dict[tuple[int, int], int] = {}
    if g.n == 0:
        return Orientation(orient, ())
    # spanning tree
    root = 0
    seen = {root}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in g.rotation[x]:
            if y not in seen:
                seen.add(y)
                orient[edge_key(x, y)] = 1 if x < y else -1
                queue.append(y)
    faces = g.faces()
    outer_face = g.face(outer) if outer is not None else g.outer_face()
    face_pos = {f.id: i for i, f in enumerate(faces)}
    # dual tree on the non-tree edges
    dual: dict[int, list[tuple[int, tuple[int, int]]]] = {i: [] for i in range(len(faces))}
    for u, v, _ in g.edges:
        if (u, v) in orient:
            continue
        fa = face_pos[g.face_of_dart((u, v)).id]
        fb = face_pos[g.face_of_dart((v, u)).id]
        dual[fa].append((fb, (u, v)))
        dual[fb].append((fa, (u, v)))
    root_f = face_pos[outer_face.id]
    parent_edge: dict[int, tuple[int, int]] = {}
    order = [root_f]
    visited = {root_f}
    for f in order:
        for h, e in dual[f]:
            if h not in visited:
                visited.add(h)
                parent_edge[h] = e
                order.append(h)
    if len(order) != len(faces):
        raise InvalidEmbedding("dual of the cotree is not connected")
    for f in reversed(order[1:]):
        e = parent_edge[f]
        orient[e] = 1
        if _agreements(faces[f].walk, orient) % 2 == 0:
            orient[e] = -1
    return Orientation(orient, (outer_face.id,))


def is_kasteleyn(g: PlaneGraph, orientation: Orientation) -> bool:
    """Every face except the designated outer faces has odd agreement count."""
    outer = set(orientation.outer)
    return all(
        _agreements(f.walk, orientation.direction) % 2 == 1
        for f in g.faces()
        if f.walk and f.id not in outer
    )


@dataclass(frozen=True)
class KasteleynMatrix:
    """Sparse skew-symmetric matrix: ``entries[(i, j)]`` for ``i < j``; ``K[j][i] = -K[i][j]``."""

    n: int
    entries: Mapping[tuple[int, int], Fraction]

    def dense(self) -> list[list[Fraction]]:
        m = [[ZERO] * self.n for _ in range(self.n)]
        for (i, j), x in self.entries.items():
            m[i][j] = x
            m[j][i] = -x
        return m


def kasteleyn_matrix(g: PlaneGraph, orientation: Orientation) -> KasteleynMatrix:
    entries = {}
    for u, v, w in g.edges:
        if w:
            entries[(u, v)] = w if orientation.direction[(u, v)] > 0 else -w
    return KasteleynMatrix(g.n, entries)


def pfaffian(k) -> Fraction:
    """Exact Pfaffian of a skew-symmetric matrix (dense rows or :class:`KasteleynMatrix`)."""
    if isinstance(k, KasteleynMatrix):
        return _pfaffian_sparse(k.n, k.entries)
    rows = [[Fraction(x) for x in r] for r in k]
    n = len(rows)
    entries = {}
    for i in range(n):
        if len(rows[i]) != n:
            raise ValidationError("matrix is not square")
        if rows[i][i] != 0:
            raise ValidationError("asymmetric input: non-zero diagonal")
        for j in range(i + 1, n):
            if rows[i][j] != -rows[j][i]:
                raise ValidationError(f"asymmetric input at ({i}, {j})")
            if rows[i][j]:
                entries[(i, j)] = rows[i][j]
    return _pfaffian_sparse(n, entries)


def _pivot_order(rows: list[dict], alive: set[int]) -> tuple[int, int] | None:
    a = min(alive, key=lambda v: (len(rows[v]), v))
    if not rows[a]:
        return None
    b = min(rows[a], key=lambda v: (len(rows[v]), v))
    return a, b


def _pfaffian_rational(n: int, entries: Mapping[tuple[int, int], Fraction]) -> Fraction:
    """Skew elimination over the rationals: repeatedly pick a pivot pair (a, b),
    multiply by A[a][b] and replace the rest by the Schur complement

        A'[c][d] = A[c][d] + (A[b][c] A[a][d] - A[a][c] A[b][d]) / A[a][b].

    Pivots follow a minimum-degree rule to limit fill-in; the Pfaffian picks up
    the sign of the permutation (a1 b1 a2 b2 ...).
    """
    if n % 2:
        return ZERO
    rows: list[dict[int, Fraction]] = [{} for _ in range(n)]
    for (i, j), x in entries.items():
        if x:
            rows[i][j] = Fraction(x)
            rows[j][i] = -Fraction(x)
    alive = set(range(n))
    order: list[int] = []
    result = ONE
    while alive:
        pick = _pivot_order(rows, alive)
        if pick is None:
            return ZERO
        a, b = pick
        ra, rb = rows[a], rows[b]
        piv = ra[b]
        result *= piv
        order += (a, b)
        alive -= {a, b}
        for x in ra:
            if x != b:
                del rows[x][a]
        for x in rb:
            if x != a:
                del rows[x][b]
        support = sorted((set(ra) | set(rb)) - {a, b})
        for i, c in enumerate(support):
            ac, bc = ra.get(c, ZERO), rb.get(c, ZERO)
            rc = rows[c]
            for d in support[i + 1 :]:
                upd = (bc * ra.get(d, ZERO) - ac * rb.get(d, ZERO)) / piv
                if not upd:
                    continue
                val = rc.get(d, ZERO) + upd
                if val:
                    rc[d] = val
                    rows[d][c] = -val
                else:
                    rc.pop(d, None)
                    rows[d].pop(c, None)
        rows[a] = {}
        rows[b] = {}
    return result * _permutation_sign(order)


def _pfaffian_mod(
    n: int, entries: Mapping[tuple[int, int], int], p: int, hint: Sequence[int] | None = None
) -> tuple[int, list[int]]:
    """Same elimination over GF(p).  Returns ``(Pf mod p, pivot sequence)``.

    ``hint`` is a pivot sequence from an earlier run on the same sparsity
    pattern; it is followed as long as its pivots are nonzero, which skips the
    pivot search.  On the first vanishing pivot the search takes over.
    """
    rows: list[dict[int, int]] = [{} for _ in range(n)]
    for (i, j), x in entries.items():
        x %= p
        if x:
            rows[i][j] = x
            rows[j][i] = p - x
    alive = set(range(n))
    order: list[int] = []
    result = 1
    step = 0
    while alive:
        a = b = -1
        if hint is not None and step < len(hint):
            a, b = hint[step], hint[step + 1]
            if b not in rows[a]:
                hint = None
        if hint is None or step >= len(hint):
            pick = _pivot_order(rows, alive)
            if pick is None:
                return 0, order
            a, b = pick
        step += 2
        ra, rb = rows[a], rows[b]
        piv = ra[b]
        inv = pow(piv, -1, p)
        result = result * piv % p
        order += (a, b)
        alive.discard(a)
        alive.discard(b)
        for x in ra:
            if x != b:
                del rows[x][a]
        for x in rb:
            if x != a:
                del rows[x][b]
        del ra[b], rb[a]
        support = sorted(ra.keys() | rb.keys())
        for i, c in enumerate(support):
            ac = ra.get(c, 0)
            bc = rb.get(c, 0)
            rc = rows[c]
            for d in support[i + 1 :]:
                upd = (bc * ra.get(d, 0) - ac * rb.get(d, 0)) * inv % p
                if not upd:
                    continue
                val = (rc.get(d, 0) + upd) % p
                if val:
                    rc[d] = val
                    rows[d][c] = p - val
                else:
                    rc.pop(d, None)
                    rows[d].pop(c, None)
        rows[a] = {}
        rows[b] = {}
    if _permutation_sign(order) < 0:
        result = (p - result) % p
    return result, order


_SMALL_PRIMES = [q for q in range(2, 2000) if all(q % r for r in range(2, math.isqrt(q) + 1))]
_MR_BASES = _SMALL_PRIMES[:40]
_PRIMORIAL = math.prod(_SMALL_PRIMES)


def _is_prime(m: int) -> bool:
    """Miller-Rabin with the first 40 prime bases (error < 4^-40 for any m)."""
    if m < 2:
        return False
    if m <= _SMALL_PRIMES[-1]:
        return m in _SMALL_PRIMES
    if math.gcd(m, _PRIMORIAL) != 1:
        return False
    d, r = m - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(r - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


_PRIMES: dict[int, int] = {}


def _prime(bits: int) -> int:
    """Largest prime below ``2**bits`` (``bits`` a multiple of 64)."""
    if bits not in _PRIMES:
        m = (1 << bits) - 1
        while not _is_prime(m):
            m -= 2
        _PRIMES[bits] = m
    return _PRIMES[bits]


def _integer_entries(entries: Mapping[tuple[int, int], Fraction]) -> tuple[dict[tuple[int, int], int], int]:
    den = 1
    for x in entries.values():
        d = x.denominator if isinstance(x, Fraction) else 1
        if den % d:
            den = den * d // math.gcd(den, d)
    out = {}
    for e, x in entries.items():
        if x:
            x = Fraction(x)
            out[e] = x.numerator * (den // x.denominator)
    return out, den


def _pfaffian_int(n: int, ints: Mapping[tuple[int, int], int], hint=None) -> tuple[int, list[int]]:
    """Integer Pfaffian from one elimination modulo a prime above twice the
    Hadamard bound (|Pf|^2 = |det| <= product of row norms)."""
    norms = [0] * n
    for (i, j), x in ints.items():
        norms[i] += x * x
        norms[j] += x * x
    if not all(norms):
        return 0, []
    bits = sum(v.bit_length() for v in norms) // 2 + 2
    p = _prime(64 * (bits // 64 + 1))
    r, order = _pfaffian_mod(n, ints, p, hint)
    return (r - p if r > p // 2 else r), order


def _pfaffian_sparse(n: int, entries: Mapping[tuple[int, int], Fraction]) -> Fraction:
    """Exact Pfaffian: scale to integers by the common denominator D (so that
    Pf(D·K) = D^(n/2)·Pf(K)) and eliminate modulo a prime large enough that
    the symmetric residue is the integer Pfaffian itself."""
    if n % 2:
        return ZERO
    if n == 0:
        return ONE
    ints, den = _integer_entries(entries)
    value, _ = _pfaffian_int(n, ints)
    return Fraction(value, den ** (n // 2))


def _permutation_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class KasteleynSystem:
    """A plane graph prepared for repeated PerfMatch evaluation with varying weights.

    Orientation and sign calibration depend only on the edge set, so they are
    computed once per connected component, as is a pivot order for the
    elimination.  Edges whose weight becomes 0 simply drop out of the matrix.
    """

    def __init__(self, g: PlaneGraph):
        check(g)
        self.graph = g
        self._parts: list[_Part | None] = []
        for comp in g.components:
            if len(comp) % 2:
                self._parts.append(None)
                continue
            index = {v: i for i, v in enumerate(comp)}
            orient = kasteleyn_orient(_component(g, comp, index))
            signs = {(comp[i], comp[j]): s for (i, j), s in orient.direction.items()}
            unit, order = _pfaffian_int(len(comp), {(index[u], index[v]): s for (u, v), s in signs.items()})
            if unit == 0:
                self._parts.append(None)
                continue
            self._parts.append(_Part(comp, index, signs, 1 if unit > 0 else -1, order))

    @property
    def has_perfect_matching(self) -> bool:
        return all(p is not None for p in self._parts)

    def perfmatch(self, weights: Mapping[tuple[int, int], Fraction] | None = None) -> Fraction:
        """PerfMatch with the graph's weights, overridden by ``weights`` where given."""
        base = self.graph.weight
        total = ONE
        for part in self._parts:
            if part is None:
                return ZERO
            index = part.index
            picked = []
            den = 1
            for (u, v), s in part.signs.items():
                w = base[(u, v)] if weights is None else weights.get((u, v), base[(u, v)])
                if w:
                    d = w.denominator
                    if den % d:
                        den = den * d // math.gcd(den, d)
                    picked.append(((index[u], index[v]), s * w.numerator, d))
            ints = {e: x * (den // d) for e, x, d in picked}
            m = len(part.comp)
            value, order = _pfaffian_int(m, ints, part.order)
            if not value:
                return ZERO
            if order != part.order and len(order) == m:
                part.order = order
            total *= Fraction(value * part.sign, den ** (m // 2))
        return total


@dataclass
class _Part:
    comp: tuple[int, ...]
    index: dict[int, int]
    signs: dict[tuple[int, int], int]
    sign: int
    order: list[int]


def _component(g: PlaneGraph, comp: Sequence[int], index: Mapping[int, int]) -> PlaneGraph:
    edges = tuple(
        (index[u], index[v], w) for u, v, w in g.edges if u in index
    )
    rot = tuple(tuple(index[u] for u in g.rotation[v]) for v in comp)
    weights = tuple(g.vertex_weights[v] for v in comp)
    return PlaneGraph(len(comp), edges, weights, rot)


def perfmatch_planar(g: PlaneGraph) -> Fraction:
    """Exact weighted sum over perfect matchings of a plane graph.

    Per component: odd order gives 0; otherwise the Pfaffian of the Kasteleyn
    matrix, multiplied by the sign of the unit-weight Pfaffian on the same
    orientation (which is 0 exactly when no perfect matching exists).
    """
    return KasteleynSystem(g).perfmatch()
