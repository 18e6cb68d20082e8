"""PerfMatch of k-apex graphs whose apex neighbourhood lies on s faces of the planar part.

Outline for an independent apex set ``A`` with unit apex edges:

* every perfect matching of ``G`` splits into a k-defect matching of
  ``H = G - A`` (defects inside ``N(A)``) and a perfect matching between the
  defects and ``A``;
* the second part only depends on the multiset ``t`` of apex neighbourhoods of
  the defects, so PerfMatch(G) = Σ_t P_t · PerfMatch(S_t);
* the ``P_t`` are coefficients of ``X^k ∏ λ`` in a polynomial whose
  evaluations are face-restricted MatchSums of ``H``, recovered by sliced
  interpolation.

General apex sets reduce to this by enumerating the matchings inside ``A``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ._pool import Workers, chunks
from .brute import brute_perfmatch, matchings
from .errors import InvariantError, PromiseViolation, ValidationError
from .face_matchsum import FaceMatchSum
from .fkt import perfmatch_planar
from .gadgets import subdivide_apex_edges
from .plane_graph import ApexInstance, Graph
from .poly import sliced_interpolate

ZERO = Fraction(0)


@dataclass
class ApexStats:
    """Work counters filled in by the solver."""

    classes: int = 0
    grid_evals: int = 0
    terms: int = 0
    class_sets: list[tuple[int, ...]] = field(default_factory=list)


def small_perfmatch(k: int, t: Sequence[Sequence[int]]) -> int:
    """PerfMatch of the interface graph: apices ``0..k-1`` plus one vertex per
    element ``N`` of the multiset ``t``, joined to every apex in ``N``."""
    edges = [(j, k + i) for i, nb in enumerate(t) for j in sorted(set(nb))]
    for j, _ in edges:
        if not 0 <= j < k:
            raise ValidationError(f"apex {j} out of range")
    value = brute_perfmatch(Graph.from_edges(k + len(t), edges), max_vertices=2 * max(k, len(t)) + 1)
    return value.numerator


def _classes(inst: ApexInstance) -> tuple[list[frozenset[int]], dict[int, int]]:
    nbhd: dict[int, set[int]] = {}
    for a, v, _ in inst.apex_edges:
        nbhd.setdefault(v, set()).add(a)
    sets = sorted({frozenset(s) for s in nbhd.values()}, key=lambda s: (len(s), sorted(s)))
    index = {s: i for i, s in enumerate(sets)}
    return sets, {v: index[frozenset(s)] for v, s in nbhd.items()}


def _grid_values(args) -> list[tuple[tuple, Fraction]]:
    graph, faces, n, member, xs, xis = args
    fm = FaceMatchSum(graph, faces)
    out = []
    for xi in xis:
        for r in xs:
            w = [ZERO] * n
            for v, c in member.items():
                w[v] = Fraction(r * xi[c])
            out.append(((r,) + tuple(xi), fm.evaluate(w)))
    return out


def type_polynomial(inst: ApexInstance, stats: ApexStats | None = None, workers: Workers | None = None):
    """``(a_k, classes)``: the coefficient of ``X^k`` in ``p(X, λ)``, with one
    λ per occurring apex-neighbourhood class."""
    h = inst.planar
    k = inst.k
    sets, member = _classes(inst)
    c = len(sets)
    n_x = len(member)
    xs = list(range(n_x + 1))
    xis = list(itertools.product(range(k + 1), repeat=c))
    faces = tuple(h.face(f) for f in inst.faces)
    if workers is not None and workers.parallel:
        jobs = [(h, faces, h.n, member, xs, part) for part in chunks(xis, workers.count)]
        pairs = [p for part in workers.map(_grid_values, jobs) for p in part]
    else:
        pairs = _grid_values((h, faces, h.n, member, xs, xis))
    evals = dict(pairs)
    if stats is not None:
        stats.classes = max(stats.classes, c)
        stats.grid_evals += len(evals)
        stats.class_sets = [tuple(sorted(s)) for s in sets]
    variables = [f"lambda{i}" for i in range(c)]
    ak = sliced_interpolate(evals, k, n_x, variables)
    for exps in ak.terms:
        if sum(exps) != k:
            raise InvariantError(f"coefficient of X^{k} has a monomial of λ-degree {sum(exps)}")
    return ak, sets


def solve_independent(
    inst: ApexInstance, stats: ApexStats | None = None, workers: Workers | None = None
) -> Fraction:
    """PerfMatch(G) for an independent apex set whose edges all have weight 1."""
    problem = inst.validate()
    if problem is not None:
        raise ValidationError(problem)
    if inst.apex_pairs:
        raise PromiseViolation("apex set is not independent")
    if any(w != 1 for _, _, w in inst.apex_edges):
        raise PromiseViolation("apex edges must have unit weight; subdivide them first")
    k = inst.k
    if k == 0:
        return perfmatch_planar(inst.planar)
    if (inst.planar.n + k) % 2 or len({a for a, _, _ in inst.apex_edges}) < k:
        return ZERO
    ak, sets = type_polynomial(inst, stats, workers)
    total = ZERO
    for exps, coeff in ak.terms.items():
        t = [sorted(sets[j]) for j, m in enumerate(exps) for _ in range(m)]
        pm = small_perfmatch(k, t)
        if pm:
            total += coeff * pm
    return total


def solve(inst: ApexInstance, stats: ApexStats | None = None, workers: Workers | None = None) -> Fraction:
    """PerfMatch(G) for an arbitrary apex set with face-covered neighbourhood.

    Apex edges of non-unit weight are subdivided first; then every matching
    ``M`` inside the apex set contributes ``w(M) · PerfMatch(G_M)``, where
    ``G_M`` keeps only the apices left unmatched by ``M``.
    """
    problem = inst.validate()
    if problem is not None:
        raise ValidationError(problem)
    if (inst.planar.n + inst.k) % 2:
        return ZERO
    base = subdivide_apex_edges(inst)
    k = base.k
    core = Graph.from_edges(k, [(a, b, w) for a, b, w in base.apex_pairs])
    total = ZERO
    for m in matchings(core, max_vertices=max(k, 1)):
        weight = Fraction(1)
        for e in m:
            weight *= core.weight[e]
        if not weight:
            continue
        used = {x for e in m for x in e}
        keep = [a for a in range(k) if a not in used]
        relabel = {a: i for i, a in enumerate(keep)}
        sub = ApexInstance.build(
            base.planar,
            len(keep),
            [(relabel[a], v, w) for a, v, w in base.apex_edges if a in relabel],
            (),
            base.faces,
        )
        if stats is not None:
            stats.terms += 1
        total += weight * solve_independent(sub, stats, workers)
    return total
