"""Executable reduction chain: apex PerfMatch -> restricted defect counting -> defect counting.

Both reductions are Turing reductions driven by a caller-supplied oracle.
Oracles are plain callables:

* a *defect oracle* ``oracle(g, k) -> int`` counts the k-defect matchings of
  a plane graph;
* a *restricted oracle* ``oracle(g, forbidden, k) -> int`` counts those whose
  defects avoid ``forbidden``.

Every query is logged in an :class:`OracleTranscript`, so the parameter
blow-up can be audited.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from ._pool import Workers
from .errors import InvariantError, PromiseViolation, ValidationError
from .face_matchsum import defect_spectrum
from .gadgets import attach_rakes
from .plane_graph import ApexInstance, PlaneGraph, check
from .poly import (
    MultiPoly,
    TruncatedPoly,
    binomial_power_trunc,
    interpolate_univariate,
    substitute_ell,
    trunc_div,
)

DefectOracle = Callable[[PlaneGraph, int], int]
RestrictedOracle = Callable[[PlaneGraph, Iterable[int], int], int]

DEFECT = "PlanarDefectMatch"
RESTRICTED = "RestrDefectMatch"


@dataclass(frozen=True)
class RestrDefectInstance:
    """Count k-defect matchings of ``graph`` with no defect in ``forbidden``."""

    graph: PlaneGraph
    forbidden: frozenset[int]
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "forbidden", frozenset(self.forbidden))
        bad = [v for v in self.forbidden if not 0 <= v < self.graph.n]
        if bad:
            raise ValidationError(f"forbidden vertices {sorted(bad)} are not in the graph")
        if self.k < 0:
            raise ValidationError("k must be non-negative")


@dataclass(frozen=True)
class Query:
    problem: str
    size: int
    parameter: int


@dataclass
class OracleTranscript:
    """Append-only log of oracle queries."""

    queries: list[Query] = field(default_factory=list)

    def record(self, problem: str, size: int, parameter: int) -> None:
        self.queries.append(Query(problem, size, parameter))

    def extend(self, other: "OracleTranscript") -> None:
        self.queries.extend(other.queries)

    def of(self, problem: str) -> list[Query]:
        return [q for q in self.queries if q.problem == problem]


def audit(transcript: OracleTranscript, problem: str | None = None) -> tuple[int, int]:
    """``(max parameter, number of queries)``, optionally for one problem only."""
    qs = transcript.queries if problem is None else transcript.of(problem)
    return max((q.parameter for q in qs), default=0), len(qs)


# --- restricted -> plain defect counting ---------------------------------------


def _defect_job(args):
    oracle, g, j = args
    return int(oracle(g, j))


def restricted_to_defect(
    inst: RestrDefectInstance,
    oracle: DefectOracle,
    transcript: OracleTranscript | None = None,
    trace: dict | None = None,
    workers: Workers | None = None,
) -> int:
    """Solve a restricted instance with queries to a plain defect-counting oracle.

    Rakes of size ξ = 1..k+1 are attached to the forbidden vertices; the
    truncated defect polynomials of these graphs, divided by the rake factor,
    determine ``[p]_k`` by interpolation in ℓ.  Substituting ℓ = -(1+X²)
    kills every matching with a forbidden defect, and dividing by
    ``(1+X²)^|S|`` leaves the wanted count as the coefficient of ``X^k``.
    """
    g, S, k = inst.graph, sorted(inst.forbidden), inst.k
    check(g)
    transcript = transcript if transcript is not None else OracleTranscript()
    nodes = list(range(1, k + 2))
    graphs = [attach_rakes(g, S, xi) for xi in nodes]
    jobs = [(oracle, gx, j) for gx in graphs for j in range(k + 1)]
    answers = workers.map(_defect_job, jobs) if workers is not None else [_defect_job(j) for j in jobs]
    for (_, gx, j) in jobs:
        transcript.record(DEFECT, gx.n, j)
    evals = []
    for i, xi in enumerate(nodes):
        mu = TruncatedPoly.of(answers[i * (k + 1) : (i + 1) * (k + 1)], k)
        f = binomial_power_trunc(len(S) * (xi - 1), k)
        evals.append(trunc_div(f, mu, k))
    terms = {}
    for t in range(k + 1):
        a_t = interpolate_univariate([(xi, ev.coefficient(t)) for xi, ev in zip(nodes, evals)])
        for i, c in enumerate(a_t.coeffs):
            if c:
                if i > t:
                    raise InvariantError(f"[p]_k contains ell^{i} X^{t}")
                terms[(t, i)] = c
    pk = MultiPoly(("X", "ell"), terms)
    b = substitute_ell(pk, k)
    q = trunc_div(binomial_power_trunc(len(S), k), b, k)
    result = q.coefficient(k)
    if result.denominator != 1:
        raise InvariantError(f"non-integral count {result}")
    if trace is not None:
        trace.update(
            nodes=nodes,
            mu=[list(answers[i * (k + 1) : (i + 1) * (k + 1)]) for i in range(len(nodes))],
            p_nodes=[list(ev.coeffs) for ev in evals],
            p_k=pk,
            b=list(b.coeffs),
            q_prime=list(q.coeffs),
        )
    return result.numerator


# --- apex -> restricted ----------------------------------------------------------


def _check_apex_promise(inst: ApexInstance) -> dict[int, int]:
    """Colour map ``v -> apex`` after checking the source problem's promise."""
    from .plane_graph import validate

    problem = validate(inst.planar)
    if problem is not None:
        raise ValidationError(problem)
    if inst.apex_pairs:
        raise PromiseViolation("apex set must be independent")
    if any(w != 1 for _, _, w in inst.planar.edges) or any(w != 1 for _, _, w in inst.apex_edges):
        raise PromiseViolation("the graph must be unweighted")
    colour: dict[int, int] = {}
    for a, v, _ in inst.apex_edges:
        if not (0 <= a < inst.k and 0 <= v < inst.planar.n):
            raise ValidationError(f"apex edge {a}-{v} references an unknown vertex")
        if v in colour and colour[v] != a:
            raise PromiseViolation(f"vertex {v} has more than one apex neighbour")
        colour[v] = a
    return colour


def apex_to_restricted(
    inst: ApexInstance,
    oracle: RestrictedOracle,
    transcript: OracleTranscript | None = None,
) -> int:
    """#PM(G) by inclusion-exclusion over 2^k restricted queries.

    Perfect matchings of G correspond to k-defect matchings of H with one
    defect in each apex colour class; the i-th bad event is "no defect in
    class i", and each intersection of bad events is one restricted query.
    """
    colour = _check_apex_promise(inst)
    k = inst.k
    h = inst.planar
    transcript = transcript if transcript is not None else OracleTranscript()
    classes = [[v for v, a in sorted(colour.items()) if a == i] for i in range(k)]
    total = 0
    for mask in range(1 << k):
        forbidden = sorted(v for i in range(k) if mask >> i & 1 for v in classes[i])
        transcript.record(RESTRICTED, h.n, k)
        count = int(oracle(h, forbidden, k))
        total += -count if bin(mask).count("1") % 2 else count
    return total


def apex_to_defect(
    inst: ApexInstance,
    oracle: DefectOracle,
    transcript: OracleTranscript | None = None,
    workers: Workers | None = None,
) -> int:
    """The composed chain: each restricted query is answered by
    :func:`restricted_to_defect` on top of the plain defect oracle."""
    transcript = transcript if transcript is not None else OracleTranscript()

    def restricted(g, forbidden, k):
        return restricted_to_defect(RestrDefectInstance(g, frozenset(forbidden), k), oracle, transcript, workers=workers)

    return apex_to_restricted(inst, restricted, transcript)


# --- oracles ---------------------------------------------------------------------


class FaceSpectrumOracle:
    """Defect counts from :func:`defect_spectrum` with every face distinguished,
    which lets defects sit anywhere.  Polynomial per face subset, so only
    practical for graphs with few faces (trees and rake attachments add none)."""

    name = "spectrum"

    def __init__(self, max_faces: int = 12):
        self.max_faces = max_faces

    def __call__(self, g: PlaneGraph, k: int) -> int:
        faces = g.faces()
        if len(faces) > self.max_faces:
            raise ValidationError(f"spectrum oracle limited to {self.max_faces} faces (got {len(faces)})")
        spectrum = defect_spectrum(g, [f.id for f in faces])
        return spectrum[k] if 0 <= k < len(spectrum) else 0
