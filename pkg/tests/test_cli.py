import json

import pytest

from vxc import io
from vxc.cli import FAILED, OK, USAGE, main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def a3(tmp_path, capsys):
    f = tmp_path / "a3.json"
    assert run(capsys, "lattice", "build", "A3", "-o", f)[0] == OK
    return f


def test_lattice_build_dual_product(a3, tmp_path, capsys):
    L = io.load(a3)
    assert L.rank == 3
    code, out, _ = run(capsys, "lattice", "dual", a3)
    assert code == OK and json.loads(out)["type"] == "lattice"
    code, out, _ = run(capsys, "lattice", "product", a3, a3)
    assert json.loads(out)["rank"] == 6
    code, out, _ = run(capsys, "lattice", "build", "--basis", "1 1; 0 2", "--label", "B")
    assert json.loads(out)["label"] == "B"


def test_output_is_byte_identical(a3, tmp_path, capsys):
    outs = [run(capsys, "voronoi", "cell", a3, "--vertices")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_cvp(tmp_path, capsys):
    f = tmp_path / "z2.json"
    run(capsys, "lattice", "build", "Z2", "-o", f)
    code, out, _ = run(capsys, "cvp", f, "--point", "1/2, 1/2")
    d = json.loads(out)
    assert code == OK and len(d["closest"]["coefficients"]) == 4 and d["dist2"] == "1/2"


def test_voronoi_commands(a3, capsys):
    code, out, _ = run(capsys, "voronoi", "relevant-vectors", a3)
    assert code == OK and json.loads(out)["count"] == 12
    code, out, _ = run(capsys, "voronoi", "cell", a3, "--vertices", "--dual")
    assert code == OK
    # the origin is interior, so the precondition check fails
    assert run(capsys, "voronoi", "polar-face", a3, "--point", "0 0 0")[0] == FAILED
    assert run(capsys, "voronoi", "polar-face", a3, "--point", "0 0")[0] == USAGE


def test_polar_face_command(tmp_path, capsys):
    f = tmp_path / "z2.json"
    run(capsys, "lattice", "build", "Z2", "-o", f)
    code, out, _ = run(capsys, "voronoi", "polar-face", f, "--point", "1/2 1/2")
    d = json.loads(out)
    assert code == OK and sorted(d["vertices"]) == [["0", "2"], ["1", "1"], ["2", "0"]]


def test_polytope_commands(tmp_path, capsys):
    f = tmp_path / "hex.json"
    io.save(io.from_json({"type": "polytope", "dim": 2, "vertices": [
        ["2", "0"], ["1", "2"], ["-1", "2"], ["-2", "0"], ["-1", "-2"], ["1", "-2"]]}), f)
    code, out, _ = run(capsys, "polytope", "slack", f, "--bounds")
    d = json.loads(out)
    assert code == OK and d["bounds"]["lower_bound"] == 5
    for action in ("dualize", "vertices", "facets"):
        assert run(capsys, "polytope", action, f)[0] == OK


def test_lift_build_verify_and_corrupt(tmp_path, capsys):
    f = tmp_path / "lift.json"
    assert run(capsys, "lift", "build", "--family", "D", "--d", 3, "-o", f)[0] == OK
    code, out, _ = run(capsys, "lift", "verify", f)
    assert code == OK and json.loads(out)["exact"] is True
    code, out, err = run(capsys, "lift", "verify", f, "--corrupt", "--seed", 4)
    d = json.loads(out)
    assert code == FAILED and (d["missed_vertices"] or d["escaped_vertices"])
    assert "failed" in err


def test_lift_union_and_face(tmp_path, capsys):
    f = tmp_path / "lift.json"
    run(capsys, "lift", "build", "--family", "A", "--d", 2, "-o", f)
    u = tmp_path / "u.json"
    assert run(capsys, "lift", "union", f, f, "-o", u)[0] == OK
    assert run(capsys, "lift", "verify", u)[0] == OK
    code, out, _ = run(capsys, "lift", "face", f, "--c", "1 0 0", "--delta", 1)
    assert code == OK
    # the inequality fails its validity check over the lift
    assert run(capsys, "lift", "face", f, "--c", "1 0 0", "--delta", "1/2")[0] == FAILED


def test_gadget_commands(tmp_path, capsys):
    g = tmp_path / "c5.edges"
    g.write_text("0 1\n1 2\n2 3\n3 4\n4 0\n")
    code, out, _ = run(capsys, "gadget", "stable-set", g, "--verify")
    d = json.loads(out)
    assert code == OK and d["X"] == 11 and d["ok"] and d["rank"] <= 6
    code, out, _ = run(capsys, "gadget", "stable-set", g, "--perturb-h", "--seed", 2)
    d = json.loads(out)
    assert code == FAILED and d["witnesses"]
    code, out, _ = run(capsys, "gadget", "correlation", "--n", 2, "--verify")
    assert code == OK and json.loads(out)["face_vertices"] == 4
    code, out, _ = run(capsys, "gadget", "raw", "--h", "1 0 1", "--verify")
    assert code == OK


def test_graph_json_input(tmp_path, capsys):
    g = tmp_path / "k3.json"
    g.write_text(json.dumps({"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]}))
    code, out, _ = run(capsys, "gadget", "stable-set", g, "--verify")
    assert code == OK and json.loads(out)["X"] == 4


def test_verify_suite_row(tmp_path, capsys):
    rep = tmp_path / "suite.json"
    code, out, _ = run(capsys, "verify", "suite", "--families", "A", "--min-d", 3, "--max-d", 3,
                       "--json", rep)
    assert code == OK
    assert out.strip() == "A3: relevant = 12, lift facets = 8, verified = exact"
    data = json.loads(rep.read_text())
    assert data["ok"] and "seconds" not in data["rows"][0]


def test_verify_suite_empty(capsys):
    code, out, _ = run(capsys, "verify", "suite", "--families", "")
    assert code == OK and out == ""


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "lattice", "build", "B3")[0] == USAGE
    assert run(capsys, "verify", "suite", "--families", "Q")[0] == USAGE
    assert run(capsys, "nonsense")[0] == USAGE
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run(capsys, "voronoi", "cell", bad)
    assert code == USAGE and "bad.json" in err
    assert run(capsys, "voronoi", "cell", tmp_path / "missing.json")[0] == USAGE


def test_rank_cap_env(tmp_path, capsys, monkeypatch):
    f = tmp_path / "z4.json"
    run(capsys, "lattice", "build", "Z4", "-o", f)
    monkeypatch.setenv("VXC_MAX_RANK", "3")
    assert run(capsys, "voronoi", "relevant-vectors", f)[0] == USAGE
