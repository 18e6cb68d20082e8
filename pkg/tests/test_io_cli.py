import json
import random
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from pdcount.brute import brute_perfmatch
from pdcount.cli import main
from pdcount.errors import InstanceFormatError
from pdcount.fkt import perfmatch_planar
from pdcount.generators import random_apex_instance, random_plane_graph, random_rational
from pdcount.io import dumps, graph_to_json, load_instance, parse_instance, save_instance

C4 = {
    "vertices": [{"id": i, "weight": "0/1"} for i in range(4)],
    "edges": [{"u": i, "v": (i + 1) % 4, "weight": "1/1"} for i in range(4)],
    "rotation": {"0": [1, 3], "1": [2, 0], "2": [3, 1], "3": [0, 2]},
    "distinguished_faces": [],
}


@pytest.fixture
def c4_file(tmp_path):
    path = tmp_path / "c4.json"
    path.write_text(json.dumps(C4))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_examples(c4_file, capsys):
    assert run(["perfmatch", c4_file], capsys)[:2] == (0, '{"perfmatch":"2/1"}\n')
    code, out, _ = run(["count-defects", c4_file, "--faces", "outer", "--spectrum"], capsys)
    assert (code, out) == (0, '{"spectrum":["2","0","4","0","1"]}\n')
    code, out, _ = run(["gadget", "check", "--arity", "3", "--parity", "even"], capsys)
    assert json.loads(out)["signature"] == ["1", "0", "0", "0", "1", "1", "1", "0"]


def test_output_is_deterministic_and_thread_independent(c4_file, capsys, monkeypatch):
    outs = set()
    for threads in ("1", "2"):
        monkeypatch.setenv("PDC_THREADS", threads)
        for argv in (["count-defects", c4_file, "--faces", "outer", "--spectrum"],):
            outs.add(run(argv, capsys)[1])
        outs.add(run(argv + ["--threads", threads], capsys)[1])
    assert len(outs) == 1


def test_exit_codes(tmp_path, c4_file, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices":[{"id":0}],"edges":[{"u":0,"v":3}]}')
    code, out, err = run(["perfmatch", str(bad)], capsys)
    assert code == 1 and out == "" and "edges[0].v" in err
    code, _, err = run(["perfmatch", str(tmp_path / "missing.json")], capsys)
    assert code == 1
    code, _, _ = run(["nonsense"], capsys)
    assert code == 1
    code, _, err = run(["matchsum", c4_file, "--faces", "9->10"], capsys)
    assert code == 1 and "9->10" in err


def test_matchsum_and_count(tmp_path, capsys):
    doc = dict(C4, vertices=[{"id": i, "weight": "1/1"} for i in range(4)], distinguished_faces=["0->1"])
    path = tmp_path / "w.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(["matchsum", str(path)], capsys)
    # every vertex lies on the face, so this counts all 7 matchings of C4
    assert (code, json.loads(out)) == (0, {"matchsum": "7/1"})
    code, out, _ = run(["count-defects", str(path), "--k", "2"], capsys)
    assert json.loads(out) == {"k": 2, "count": "4"}


def test_apex_reduce_verify(tmp_path, capsys):
    doc = {
        "vertices": [{"id": i, "weight": "0/1"} for i in range(5)],
        "edges": [{"u": 0, "v": 1}, {"u": 1, "v": 2}, {"u": 2, "v": 0}, {"u": 4, "v": 0}, {"u": 4, "v": 1},
                  {"u": 4, "v": 2}, {"u": 3, "v": 4}],
        "rotation": {"0": [1, 2], "1": [2, 0], "2": [0, 1], "3": []},
        "apices": [4],
        "distinguished_faces": [["0->1"], "3"],
    }
    path = tmp_path / "apex.json"
    path.write_text(json.dumps(doc))
    inst = load_instance(path)
    assert inst.ids == (0, 1, 2, 3)
    want = brute_perfmatch(inst.apex.to_graph())
    code, out, _ = run(["apex", str(path)], capsys)
    res = json.loads(out)
    assert code == 0 and res["perfmatch"] == f"{want.numerator}/{want.denominator}"
    assert res["k"] == 1 and res["s"] == 2
    code, out, _ = run(["verify", str(path)], capsys)
    assert code == 0 and json.loads(out)["agree"] is True
    code, out, _ = run(["reduce", "apex-to-defect", str(path), "--trace"], capsys)
    res = json.loads(out)
    assert code == 0 and res["count"] == str(want.numerator)
    assert res["transcript"]["total"]["max_parameter"] == 1
    assert len(res["stages"]) == 2


def test_reduce_restricted(c4_file, capsys):
    code, out, _ = run(["reduce", "restricted-to-defect", c4_file, "--forbidden", "0", "--k", "2"], capsys)
    res = json.loads(out)
    assert code == 0 and res["count"] == "2"
    assert res["transcript"]["PlanarDefectMatch"] == {"queries": 9, "max_parameter": 2}


def test_verify_ops(c4_file, capsys):
    for op in ("perfmatch", "matchsum", "spectrum"):
        code, out, _ = run(["verify", c4_file, "--op", op, "--faces", "outer"], capsys)
        assert code == 0 and json.loads(out)["agree"] is True


def test_gadget_emit_round_trip(tmp_path, capsys):
    code, out, _ = run(["gadget", "emit", "--arity", "4", "--parity", "odd"], capsys)
    doc = json.loads(out)
    inst = parse_instance(doc)
    assert len(doc["externals"]) == 4 and code == 0
    assert perfmatch_planar(inst.planar) == 0  # odd gadget with no external removed


def test_bench(capsys):
    code, out, _ = run(["bench", "--sizes", "", "--faces", ""], capsys)
    assert (code, out) == (0, '{"rows":[]}\n')
    code, out, _ = run(["bench", "--sizes", "4", "--faces", "1-2", "--pm-sizes", "8"], capsys)
    rows = json.loads(out)["rows"]
    assert [r["s"] for r in rows[:2]] == [1, 2] and rows[2]["n"] == 8
    assert all(isinstance(r["micros"], int) for r in rows)


def test_report_flag(c4_file, capsys):
    _, out, _ = run(["--report", "perfmatch", c4_file], capsys)
    res = json.loads(out)
    assert res["op"] == "perfmatch" and len(res["input_sha256"]) == 64


@given(st.integers(0, 10**6))
def test_instance_round_trip(seed):
    rng = random.Random(seed)
    g = random_plane_graph(rng.randint(1, 10), rng, weight=random_rational, connected=rng.random() < 0.7)
    g = g.with_vertex_weights([random_rational(rng) for _ in range(g.n)])
    inst = parse_instance(json.loads(dumps(graph_to_json(g, faces=[f.id for f in g.faces()][:2]))))
    h = inst.planar
    assert h.rotation == g.rotation and h.edges == g.edges and h.vertex_weights == g.vertex_weights
    assert inst.faces == tuple(f.id for f in g.faces())[:2]


@given(st.integers(0, 10**6))
def test_apex_instance_round_trip(seed):
    rng = random.Random(seed)
    inst = random_apex_instance(rng.randint(1, 8), rng.randint(1, 3), rng, s=2)
    back = parse_instance(json.loads(dumps(graph_to_json(inst.planar, inst)))).apex
    assert back.apex_edges == inst.apex_edges and back.apex_pairs == inst.apex_pairs
    assert set(back.faces) == set(inst.faces)


@pytest.mark.parametrize(
    "patch, field",
    [
        ({"vertices": "x"}, "vertices"),
        ({"edges": [{"u": 0, "v": 1, "weight": 0.5}]}, "edges[0].weight"),
        ({"edges": [{"u": 0, "v": 1, "weight": "1/0"}]}, "edges[0].weight"),
        ({"rotation": {"0": [2, 3]}}, "rotation"),
        ({"apices": [9]}, "apices[0]"),
        ({"distinguished_faces": ["0->2"]}, "distinguished_faces[0]"),
        ({"vertices": [{"id": 0}, {"id": 0}]}, "vertices[1].id"),
    ],
)
def test_format_errors_name_the_field(patch, field):
    with pytest.raises(InstanceFormatError, match=field.replace("[", r"\[").replace("]", r"\]")):
        parse_instance(dict(C4, **patch))


def test_save_and_load(tmp_path):
    path = tmp_path / "x.json"
    save_instance(path, C4)
    assert load_instance(path).planar.n == 4


def test_console_script_entry_point(c4_file):
    proc = subprocess.run(
        [sys.executable, "-m", "pdcount.cli", "perfmatch", c4_file], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout == '{"perfmatch":"2/1"}\n'


def test_library_bench_and_run_alias():
    from pdcount.cli import bench, main, run

    assert run is main
    rows = bench((4,), (1,), (8,))
    assert [r["op"] for r in rows] == ["matchsum", "perfmatch"]
    assert rows[1]["value"] == "5/1"
    assert bench((), (), ()) == []
