"""JSON instance files.

Format::

    {"vertices": [{"id": 0, "weight": "0/1"}, ...],
     "edges": [{"u": 0, "v": 1, "weight": "1/1"}, ...],
     "rotation": {"0": [1, 5, 3], ...},
     "apices": [7, 8],
     "distinguished_faces": ["0->1", ["2->3"], "5", ...]}

Ids are global.  Apex vertices need no rotation; the remaining vertices form
the plane graph H and are renumbered in increasing id order.  A face is named
by any directed edge ``"u->v"`` on its walk (or ``"v"`` for an isolated
vertex) and is resolved to its canonical id.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

from .errors import InstanceFormatError, ValidationError
from .plane_graph import ApexInstance, PlaneGraph, validate
from .rational import format_rational


@dataclass(frozen=True)
class Instance:
    """A parsed instance file."""

    planar: PlaneGraph
    apex: ApexInstance | None
    faces: tuple[str, ...]
    ids: tuple[int, ...]  # global id of each planar vertex
    digest: str

    @property
    def local(self) -> dict[int, int]:
        """Global id -> planar vertex index."""
        return {v: i for i, v in enumerate(self.ids)}

    def require_planar(self) -> PlaneGraph:
        if self.apex is not None and self.apex.k:
            raise ValidationError("instance has apices; use the apex command")
        return self.planar


def _weight(value: Any, where: str) -> Fraction:
    if value is None:
        return Fraction(1)
    if isinstance(value, bool) or isinstance(value, float):
        raise InstanceFormatError(f"{where}: weights must be exact (\"num/den\" string or integer)")
    try:
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        pass
    raise InstanceFormatError(f"{where}: cannot parse weight {value!r}")


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, str) and value.strip().lstrip("-").isdigit():
            return int(value)
        raise InstanceFormatError(f"{where}: expected an integer id, got {value!r}")
    return value


def parse_instance(data: Mapping[str, Any], digest: str = "") -> Instance:
    if not isinstance(data, Mapping):
        raise InstanceFormatError("instance: expected a JSON object")
    raw_vertices = data.get("vertices")
    if not isinstance(raw_vertices, list):
        raise InstanceFormatError("vertices: expected a list")
    weights: dict[int, Fraction] = {}
    for i, item in enumerate(raw_vertices):
        where = f"vertices[{i}]"
        if isinstance(item, Mapping):
            vid = _int(item.get("id"), f"{where}.id")
            w = _weight(item.get("weight", "0/1"), f"{where}.weight")
        else:
            vid, w = _int(item, where), Fraction(0)
        if vid in weights:
            raise InstanceFormatError(f"{where}.id: duplicate vertex id {vid}")
        weights[vid] = w
    raw_edges = data.get("edges", [])
    if not isinstance(raw_edges, list):
        raise InstanceFormatError("edges: expected a list")
    edges = []
    for i, item in enumerate(raw_edges):
        where = f"edges[{i}]"
        if isinstance(item, Mapping):
            u, v = _int(item.get("u"), f"{where}.u"), _int(item.get("v"), f"{where}.v")
            w = _weight(item.get("weight", "1/1"), f"{where}.weight")
        elif isinstance(item, list) and len(item) in (2, 3):
            u, v = _int(item[0], f"{where}[0]"), _int(item[1], f"{where}[1]")
            w = _weight(item[2] if len(item) == 3 else "1/1", f"{where}[2]")
        else:
            raise InstanceFormatError(f"{where}: expected {{\"u\",\"v\",\"weight\"}}")
        for x, name in ((u, "u"), (v, "v")):
            if x not in weights:
                raise InstanceFormatError(f"{where}.{name}: unknown vertex {x}")
        if u == v:
            raise InstanceFormatError(f"{where}: loop at vertex {u}")
        edges.append((u, v, w))
    raw_apices = data.get("apices", [])
    if not isinstance(raw_apices, list):
        raise InstanceFormatError("apices: expected a list")
    apices = []
    for i, a in enumerate(raw_apices):
        a = _int(a, f"apices[{i}]")
        if a not in weights:
            raise InstanceFormatError(f"apices[{i}]: unknown vertex {a}")
        apices.append(a)
    if len(set(apices)) != len(apices):
        raise InstanceFormatError("apices: duplicate apex")
    apex_pos = {a: i for i, a in enumerate(apices)}
    ids = tuple(sorted(v for v in weights if v not in apex_pos))
    local = {v: i for i, v in enumerate(ids)}
    raw_rot = data.get("rotation", {})
    if not isinstance(raw_rot, Mapping):
        raise InstanceFormatError("rotation: expected an object mapping vertex id to neighbour list")
    rotation: list[tuple[int, ...]] = [() for _ in ids]
    for key, seq in raw_rot.items():
        vid = _int(key, f"rotation key {key!r}")
        if vid in apex_pos:
            continue
        if vid not in local:
            raise InstanceFormatError(f"rotation[{key}]: unknown vertex {vid}")
        if not isinstance(seq, list):
            raise InstanceFormatError(f"rotation[{key}]: expected a list")
        out = []
        for j, x in enumerate(seq):
            x = _int(x, f"rotation[{key}][{j}]")
            if x not in local:
                raise InstanceFormatError(f"rotation[{key}][{j}]: {x} is not a planar vertex")
            out.append(local[x])
        rotation[local[vid]] = tuple(out)
    planar_edges = [(local[u], local[v], w) for u, v, w in edges if u in local and v in local]
    try:
        planar = PlaneGraph.from_edges(len(ids), planar_edges, rotation, [weights[v] for v in ids])
    except ValidationError as exc:
        raise InstanceFormatError(f"edges: {exc}") from None
    problem = validate(planar)
    if problem is not None:
        raise InstanceFormatError(f"rotation: {problem}")
    faces = _faces(planar, local, data.get("distinguished_faces", []))
    apex = None
    if apices:
        apex_edges, apex_pairs = [], []
        for u, v, w in edges:
            if u in apex_pos and v in apex_pos:
                apex_pairs.append((apex_pos[u], apex_pos[v], w))
            elif u in apex_pos:
                apex_edges.append((apex_pos[u], local[v], w))
            elif v in apex_pos:
                apex_edges.append((apex_pos[v], local[u], w))
        apex = ApexInstance.build(planar, len(apices), apex_edges, apex_pairs, faces)
    return Instance(planar, apex, faces, ids, digest)


def _faces(planar: PlaneGraph, local: Mapping[int, int], raw: Any) -> tuple[str, ...]:
    if not isinstance(raw, list):
        raise InstanceFormatError("distinguished_faces: expected a list")
    out = []
    for i, ref in enumerate(raw):
        if isinstance(ref, list) and len(ref) == 1:
            ref = ref[0]
        if not isinstance(ref, (str, int)) or isinstance(ref, bool):
            raise InstanceFormatError(f"distinguished_faces[{i}]: expected a face reference \"u->v\"")
        try:
            fid = resolve_face(planar, str(ref), local)
        except ValidationError as exc:
            raise InstanceFormatError(f"distinguished_faces[{i}]: {exc}") from None
        if fid not in out:
            out.append(fid)
    return tuple(out)


def resolve_face(planar: PlaneGraph, ref: str, local: Mapping[int, int] | None = None) -> str:
    """Canonical id of the face named by ``"u->v"`` (any dart on it) or ``"v"``."""
    ref = ref.strip()
    conv = (lambda x: local[x]) if local is not None else (lambda x: x)
    try:
        if "->" in ref:
            u, v = (int(x) for x in ref.split("->"))
            dart = (conv(u), conv(v))
            if dart[1] not in planar.rotation[dart[0]]:
                raise ValidationError(f"{ref} is not an edge of the planar part")
            return planar.face_of_dart(dart).id
        v = conv(int(ref))
    except (KeyError, ValueError, IndexError):
        raise ValidationError(f"cannot resolve face reference {ref!r}") from None
    if planar.rotation[v]:
        raise ValidationError(f"face reference {ref!r} names a non-isolated vertex")
    return planar.face(str(v)).id


def load_instance(path: str | Path) -> Instance:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InstanceFormatError(f"instance: invalid JSON ({exc})") from None
    return parse_instance(data, hashlib.sha256(raw).hexdigest())


def graph_to_json(
    g: PlaneGraph,
    apices: ApexInstance | None = None,
    faces: Sequence[str] = (),
    extra: Mapping[str, Any] | None = None,
) -> dict:
    """Instance document for a plane graph (optionally with apices appended as
    ids ``n..n+k-1``)."""
    n = g.n
    doc: dict[str, Any] = {
        "vertices": [{"id": v, "weight": format_rational(g.vertex_weights[v])} for v in range(n)],
        "edges": [{"u": u, "v": v, "weight": format_rational(w)} for u, v, w in g.edges],
        "rotation": {str(v): list(g.rotation[v]) for v in range(n)},
    }
    if apices is not None:
        doc["vertices"] += [{"id": n + a, "weight": "0/1"} for a in range(apices.k)]
        doc["edges"] += [
            {"u": v, "v": n + a, "weight": format_rational(w)} for a, v, w in apices.apex_edges
        ]
        doc["edges"] += [
            {"u": n + a, "v": n + b, "weight": format_rational(w)} for a, b, w in apices.apex_pairs
        ]
        doc["apices"] = [n + a for a in range(apices.k)]
        faces = faces or apices.faces
    doc["distinguished_faces"] = list(faces)
    if extra:
        doc.update(extra)
    return doc


def dumps(doc: Any) -> str:
    """Compact deterministic JSON (field order as constructed)."""
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)


def save_instance(path: str | Path, doc: Mapping[str, Any]) -> None:
    Path(path).write_text(dumps(doc) + "\n", encoding="utf-8")
