"""``pdcount`` command-line interface.

Every command prints one line of compact JSON on stdout.  Exit status is 0 on
success, 1 on invalid input and 2 when an internal check fails.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from ._pool import Workers
from .apex import ApexStats, solve
from .brute import (
    BruteDefectOracle,
    brute_defects,
    brute_matchsum,
    brute_perfmatch,
)
from .errors import InvariantError, PDCError, ValidationError
from .face_matchsum import FaceMatchSum, count_defects_on_faces_total, defect_spectrum
from .fkt import perfmatch_planar
from .gadgets import build_parity_gadget, signature, subset_lex_order
from .generators import grid_graph
from .io import Instance, dumps, graph_to_json, load_instance, resolve_face
from .plane_graph import PlaneGraph
from .poly import MultiPoly, Poly1, TruncatedPoly
from .rational import format_integer, format_rational
from .reductions import (
    DEFECT,
    RESTRICTED,
    FaceSpectrumOracle,
    OracleTranscript,
    RestrDefectInstance,
    apex_to_restricted,
    audit,
    restricted_to_defect,
)

PARITY = {"even": 0, "odd": 1}


class CommandFailed(InvariantError):
    """A verification command observed a disagreement."""

    def __init__(self, message: str, payload: dict):
        super().__init__(message)
        self.payload = payload


# --- helpers ---------------------------------------------------------------


def _jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, (Poly1, TruncatedPoly)):
        return [format_rational(c) for c in x.coeffs]
    if isinstance(x, MultiPoly):
        return {
            "variables": list(x.variables),
            "terms": [[list(e), format_rational(c)] for e, c in sorted(x.terms.items())],
        }
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _faces(inst: Instance, spec: str | None) -> tuple[str, ...]:
    g = inst.planar
    if spec is None:
        return inst.faces
    spec = spec.strip()
    if spec == "outer":
        return tuple(dict.fromkeys(g.outer_face(c).id for c in range(len(g.components))))
    if spec == "all":
        return tuple(f.id for f in g.faces())
    if spec == "":
        return ()
    local = inst.local
    out = []
    for ref in spec.split(","):
        fid = resolve_face(g, ref, local)
        if fid not in out:
            out.append(fid)
    return tuple(out)


def _int_list(text: str, name: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ValidationError(f"{name}: expected comma-separated integers, got {text!r}") from None


def _range(text: str, name: str) -> list[int]:
    text = text.strip()
    if "-" in text and not text.startswith("-"):
        lo, hi = text.split("-", 1)
        try:
            return list(range(int(lo), int(hi) + 1))
        except ValueError:
            raise ValidationError(f"{name}: bad range {text!r}") from None
    return _int_list(text, name)


def _workers(args) -> Workers:
    try:
        return Workers(args.threads, default=os.cpu_count() or 1)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def _planar_oracle_graph(inst: Instance) -> PlaneGraph:
    return inst.require_planar()


# --- commands ----------------------------------------------------------------


def cmd_perfmatch(args) -> dict:
    g = _planar_oracle_graph(load_instance(args.file))
    return {"perfmatch": format_rational(perfmatch_planar(g))}


def cmd_matchsum(args) -> dict:
    inst = load_instance(args.file)
    g = inst.require_planar()
    fm = FaceMatchSum(g, _faces(inst, args.faces))
    return {"matchsum": format_rational(fm.evaluate())}


def cmd_count_defects(args) -> dict:
    inst = load_instance(args.file)
    g = inst.require_planar()
    faces = _faces(inst, args.faces)
    if args.spectrum or args.k is not None:
        spectrum = defect_spectrum(g, faces, _workers(args))
        if args.spectrum:
            return {"spectrum": [str(c) for c in spectrum]}
        count = spectrum[args.k] if 0 <= args.k < len(spectrum) else 0
        return {"k": args.k, "count": str(count)}
    return {"count": str(count_defects_on_faces_total(g, faces))}


def cmd_apex(args) -> dict:
    inst = load_instance(args.file)
    if inst.apex is None:
        raise ValidationError("apices: the instance lists no apex vertices")
    stats = ApexStats()
    value = solve(inst.apex, stats, _workers(args))
    return {
        "perfmatch": format_rational(value),
        "k": inst.apex.k,
        "s": len(inst.apex.faces),
        "classes": stats.classes,
        "grid_evals": stats.grid_evals,
    }


def _defect_oracle(name: str):
    if name == "brute":
        return BruteDefectOracle(max_vertices=128)
    return FaceSpectrumOracle()


def _transcript_summary(transcript: OracleTranscript) -> dict:
    out = {}
    for problem in (RESTRICTED, DEFECT):
        top, count = audit(transcript, problem)
        if count:
            out[problem] = {"queries": count, "max_parameter": top}
    top, count = audit(transcript)
    out["total"] = {"queries": count, "max_parameter": top}
    return out


def cmd_reduce(args) -> dict:
    inst = load_instance(args.file)
    oracle = _defect_oracle(args.oracle)
    transcript = OracleTranscript()
    workers = _workers(args)
    stages: list[dict] = []
    if args.direction == "apex-to-defect":
        if inst.apex is None:
            raise ValidationError("apices: the instance lists no apex vertices")

        def restricted(g, forbidden, k):
            trace: dict = {}
            value = restricted_to_defect(
                RestrDefectInstance(g, frozenset(forbidden), k), oracle, transcript, trace, workers
            )
            stages.append({"forbidden": sorted(forbidden), "count": value, **trace})
            return value

        count = apex_to_restricted(inst.apex, restricted, transcript)
        result: dict[str, Any] = {"count": str(count), "k": inst.apex.k}
    else:
        g = inst.require_planar()
        if args.k is None:
            raise ValidationError("--k is required for restricted-to-defect")
        local = inst.local
        try:
            forbidden = frozenset(local[v] for v in _int_list(args.forbidden or "", "--forbidden"))
        except KeyError as exc:
            raise ValidationError(f"--forbidden: unknown vertex {exc.args[0]}") from None
        trace: dict = {}
        count = restricted_to_defect(RestrDefectInstance(g, forbidden, args.k), oracle, transcript, trace, workers)
        stages.append({"forbidden": sorted(forbidden), "count": count, **trace})
        result = {"count": str(count), "k": args.k}
    result["transcript"] = _transcript_summary(transcript)
    if args.trace:
        result["stages"] = _jsonable(stages)
    return result


def cmd_gadget(args) -> dict:
    b = PARITY[args.parity]
    if args.action == "emit":
        gadget = build_parity_gadget(args.arity, b)
        return graph_to_json(
            gadget.graph, extra={"externals": list(gadget.externals), "parity": args.parity}
        )
    gadget = build_parity_gadget(args.arity, b, verify=False)
    sig = signature(gadget)
    order = subset_lex_order(args.arity)
    table = [format_integer(sig[m]) for m in order]
    expected = ["1" if bin(m).count("1") % 2 == b else "0" for m in order]
    payload = {
        "arity": args.arity,
        "parity": args.parity,
        "vertices": gadget.graph.n,
        "subsets": [[i + 1 for i in range(args.arity) if m >> i & 1] for m in order],
        "signature": table,
        "ok": table == expected,
    }
    if table != expected:
        raise CommandFailed("gadget signature differs from the parity predicate", payload)
    return payload


def cmd_verify(args) -> dict:
    inst = load_instance(args.file)
    op = args.op or ("apex" if inst.apex is not None else "perfmatch")
    if op == "apex":
        if inst.apex is None:
            raise ValidationError("apices: the instance lists no apex vertices")
        fast = solve(inst.apex, None, _workers(args))
        slow = brute_perfmatch(inst.apex.to_graph())
    else:
        g = inst.require_planar()
        if op == "perfmatch":
            fast, slow = perfmatch_planar(g), brute_perfmatch(g)
        elif op == "matchsum":
            fast = FaceMatchSum(g, _faces(inst, args.faces)).evaluate()
            slow = brute_matchsum(g)
        else:
            faces = _faces(inst, args.faces)
            fm = FaceMatchSum(g, faces)
            fast = defect_spectrum(g, faces, _workers(args))
            banned = [v for v in range(g.n) if v not in fm.partition.covered]
            slow = [brute_defects(g, k, banned) for k in range(g.n + 1)]
    payload = {"op": op, "result": _jsonable(fast), "oracle": _jsonable(slow), "agree": fast == slow}
    if fast != slow:
        raise CommandFailed(f"{op}: fast result disagrees with the brute-force oracle", payload)
    return payload


def _spread_faces(g: PlaneGraph, s: int) -> list[str]:
    outer = g.outer_face().id
    inner = sorted((f for f in g.faces() if f.id != outer), key=lambda f: f.sort_key)
    if s > len(inner):
        raise ValidationError(f"grid has only {len(inner)} bounded faces")
    if s == 0:
        return []
    step = len(inner) // s
    return [inner[i * step].id for i in range(s)]


def _timed(fn) -> tuple[Any, int]:
    start = time.perf_counter_ns()
    value = fn()
    return value, (time.perf_counter_ns() - start) // 1000


def bench(
    grid_sizes: Sequence[int] = (20,),
    face_counts: Sequence[int] = range(1, 6),
    pm_sizes: Sequence[int] = (),
) -> list[dict]:
    """Timing table: MatchSum on ``n x n`` grids with ``s`` distinguished faces
    (unit weight on the face vertices), then PerfMatch on grids of ``n``
    vertices.  Times are integer microseconds."""
    rows = []
    for n in grid_sizes:
        g = grid_graph(n, n)
        for s in face_counts:
            faces = _spread_faces(g, s)
            fm = FaceMatchSum(g, faces)
            weights = fm.face_vertex_weights(1)
            value, micros = _timed(lambda: fm.evaluate(weights))
            rows.append({"op": "matchsum", "n": n, "s": s, "micros": micros, "value": format_rational(value)})
    for n in pm_sizes:
        height = max(d for d in range(1, math.isqrt(max(n, 1)) + 1) if n % d == 0)
        g = grid_graph(height, n // height)
        value, micros = _timed(lambda: perfmatch_planar(g))
        rows.append({"op": "perfmatch", "n": g.n, "micros": micros, "value": format_rational(value)})
    return rows


def cmd_bench(args) -> dict:
    return {
        "rows": bench(
            _int_list(args.sizes, "--sizes"),
            _range(args.faces, "--faces"),
            _int_list(args.pm_sizes, "--pm-sizes"),
        )
    }


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def add_common(p: argparse.ArgumentParser, default) -> None:
        p.add_argument(
            "--threads", type=int, default=default, help="worker processes (default: $PDC_THREADS, else all cores)"
        )
        p.add_argument(
            "--report",
            action="store_true",
            default=False if default is None else default,
            help="wrap the result with the operation name and input digest",
        )

    common = argparse.ArgumentParser(add_help=False)
    add_common(common, argparse.SUPPRESS)
    parser = argparse.ArgumentParser(prog="pdcount", description="Exact matching counts on planar and apex graphs.")
    parser.add_argument("--version", action="version", version=f"pdcount {__version__}")
    add_common(parser, None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("perfmatch", parents=[common], help="weighted perfect matchings of a plane graph")
    p.add_argument("file")
    p.set_defaults(func=cmd_perfmatch)

    faces_help = "comma-separated face references u->v, or 'outer' / 'all' (default: distinguished_faces)"
    p = sub.add_parser("matchsum", parents=[common], help="MatchSum with weights on distinguished faces")
    p.add_argument("file")
    p.add_argument("--faces", help=faces_help)
    p.set_defaults(func=cmd_matchsum)

    p = sub.add_parser("count-defects", parents=[common], help="matchings whose defects lie on the faces")
    p.add_argument("file")
    p.add_argument("--faces", help=faces_help)
    p.add_argument("--spectrum", action="store_true", help="print the count for every defect number")
    p.add_argument("--k", type=int, help="only matchings with exactly k defects")
    p.set_defaults(func=cmd_count_defects)

    p = sub.add_parser("apex", parents=[common], help="perfect matchings of a k-apex graph")
    p.add_argument("file")
    p.set_defaults(func=cmd_apex)

    p = sub.add_parser("reduce", parents=[common], help="run a reduction against a counting oracle")
    p.add_argument("direction", choices=["apex-to-defect", "restricted-to-defect"])
    p.add_argument("file")
    p.add_argument("--oracle", choices=["brute", "spectrum"], default="brute")
    p.add_argument("--trace", action="store_true", help="include per-stage intermediates")
    p.add_argument("--forbidden", help="restricted-to-defect: forbidden defect vertices")
    p.add_argument("--k", type=int, help="restricted-to-defect: number of defects")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gadget", parents=[common], help="parity gadgets")
    p.add_argument("action", choices=["emit", "check"])
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--parity", choices=sorted(PARITY), required=True)
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("verify", parents=[common], help="compare a fast algorithm with brute force")
    p.add_argument("file")
    p.add_argument("--op", choices=["perfmatch", "matchsum", "spectrum", "apex"])
    p.add_argument("--faces", help=faces_help)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", parents=[common], help="scaling probe on square grids")
    p.add_argument("--sizes", default="20", help="grid side lengths for the MatchSum probe")
    p.add_argument("--faces", default="1-5", help="numbers of distinguished faces, e.g. 1-5")
    p.add_argument("--pm-sizes", default="", help="vertex counts for the PerfMatch probe, e.g. 200,400,800")
    p.set_defaults(func=cmd_bench)
    return parser


def _digest(args) -> str | None:
    path = getattr(args, "file", None)
    if path is None:
        return None
    return load_instance(path).digest


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    code = 0
    try:
        payload = args.func(args)
    except CommandFailed as exc:
        payload, code = exc.payload, 2
        print(dumps({"error": str(exc)}), file=sys.stderr)
    except (ValidationError, PDCError) as exc:
        code = 2 if isinstance(exc, InvariantError) else 1
        print(dumps({"error": str(exc), "kind": type(exc).__name__}), file=sys.stderr)
        return code
    except (AssertionError, ArithmeticError) as exc:
        print(dumps({"error": str(exc), "kind": type(exc).__name__}), file=sys.stderr)
        return 2
    if args.report:
        report = {"op": args.command}
        digest = _digest(args)
        if digest is not None:
            report["input_sha256"] = digest
        report["result"] = payload
        payload = report
    print(dumps(payload))
    return code


run = main


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
