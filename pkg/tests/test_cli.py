import json

import pytest

from cubecoh.cells import Square
from cubecoh.cli import main
from cubecoh.codec import square_to_json

from conftest import DATA

GOLDEN = str(DATA / "golden.ars")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_golden(capsys):
    code, out, _ = run(capsys, "check", GOLDEN)
    assert code == 0
    rep = json.loads(out)
    assert rep["verdict"] == "convergent"
    assert set(rep["normal_forms"].values()) == {"z"}
    assert rep["sigma"]["x"]["steps"] == ["f1", "g1"]
    assert [[p["steps"] for p in b] for b in rep["critical_branchings"]["2"]] == [
        [["f1"], ["f2"]], [["f1"], ["f3"]], [["f2"], ["f3"]]
    ]
    assert len(rep["critical_branchings"]["3"]) == 1


def test_check_failures(capsys, tmp_path):
    loop = tmp_path / "loop.ars"
    loop.write_text("vertex a\nedge l : a -> a\n")
    code, out, _ = run(capsys, "check", str(loop))
    assert code == 1 and json.loads(out)["verdict"] == "not Noetherian"
    assert json.loads(out)["cycle"] == {"start": "a", "steps": ["l"]}
    fork = tmp_path / "fork.ars"
    fork.write_text("vertex x\nvertex a\nvertex b\nedge p : x -> a\nedge q : x -> b\n")
    code, out, _ = run(capsys, "check", str(fork))
    assert code == 1 and json.loads(out)["verdict"] == "not confluent"
    bad = tmp_path / "bad.ars"
    bad.write_text("vertex x\nedge p x a\n")
    assert run(capsys, "check", str(bad))[0] == 2
    assert run(capsys, "check", str(tmp_path / "missing.ars"))[0] == 2
    assert run(capsys, "fillers", str(fork))[0] == 1


def test_usage_errors(capsys):
    assert run(capsys, "resolve", "--truncated", "--mode", "paths", GOLDEN)[0] == 2
    assert run(capsys, "check", "--format", "dot", GOLDEN)[0] == 2
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_resolve_counts(capsys):
    code, out, _ = run(capsys, "resolve", "--max-dim", "3", "--mode", "local", GOLDEN)
    cert = json.loads(out)
    assert code == 0 and cert["verified"]
    assert {k: len(v) for k, v in cert["payload"]["keys"].items()} == {"2": 3, "3": 1}
    code, out, _ = run(capsys, "resolve", "--truncated", GOLDEN)
    cert = json.loads(out)
    assert code == 0 and cert["verified"]
    assert {k: len(v) for k, v in cert["payload"]["keys"].items()} == {"2": 2}
    assert len(cert["payload"]["replacements"]) == 2


def test_cube_law(capsys):
    code, out, _ = run(capsys, "cube-law", GOLDEN)
    cert = json.loads(out)
    assert code == 0
    (rec,) = cert["payload"]["branchings"]
    assert rec["holds"]
    assert all(i["lhs"] == i["rhs"] == {"start": "z", "steps": []} for i in rec["instances"])


def test_all_certificates_verify(capsys, tmp_path):
    paths = []
    for n, argv in enumerate([
        ("fillers",), ("fillers", "--mode", "local"), ("cube-law",), ("resolve",), ("resolve", "--truncated"),
        ("fill-square", "--random", "6"), ("witness", "--random", "5"),
    ]):
        out = tmp_path / f"c{n}.json"
        assert main([*argv, GOLDEN, "--out", str(out), "--verify"]) == 0
        paths.append(str(out))
    code, out, _ = run(capsys, "verify", *paths)
    assert code == 0 and json.loads(out)["ok"]
    cert = json.loads(open(paths[0]).read())
    cert["payload"]["items"][1]["cell"] = cert["payload"]["items"][0]["cell"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cert))
    code, out, _ = run(capsys, "verify", str(bad))
    assert code == 1 and not json.loads(out)["ok"]


def test_fill_square_from_file(capsys, tmp_path, golden_local):
    e = golden_local.ctx.edge
    S = Square(1, ((e("f3"), e("g2")), (e("f2"), e("g3"))))
    f = tmp_path / "sq.json"
    f.write_text(json.dumps(square_to_json(S)))
    code, out, _ = run(capsys, "fill-square", GOLDEN, str(f))
    assert code == 0 and json.loads(out)["verified"]
    code, out, _ = run(capsys, "witness", GOLDEN, str(f))
    assert code == 0 and json.loads(out)["verified"]
    f.write_text(json.dumps({"k": 1, "faces": "nope"}))
    assert run(capsys, "fill-square", GOLDEN, str(f))[0] == 2


def test_determinism(capsys):
    for argv in (("fill-square", "--random", "5", "--seed", "3"), ("witness", "--random", "4", "--seed", "9"),
                 ("fillers",), ("cube-law",)):
        first = run(capsys, *argv, GOLDEN)[1]
        assert run(capsys, *argv, GOLDEN)[1] == first
        assert run(capsys, *argv, "--jobs", "4", GOLDEN)[1] == first


def test_export(capsys, tmp_path):
    code, out, _ = run(capsys, "export", "--format", "dot", GOLDEN)
    assert code == 0 and out.startswith("digraph ars") and '"x" -> "y1"' in out
    code, out, _ = run(capsys, "export", GOLDEN)
    assert json.loads(out)["strategy"]["sigma"]["x"] == ["f1", "g1"]
    cell = tmp_path / "cell.json"
    cell.write_text(json.dumps({"op": "gen", "source": "x", "legs": [["f1"], ["f2"]]}))
    code, out, err = run(capsys, "export", "--format", "dot", "--cell", str(cell), GOLDEN)
    assert code == 0, err
    assert out.startswith("digraph pasting")
