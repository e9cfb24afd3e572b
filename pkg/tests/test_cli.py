import json

import pytest

from energygames.cli import main
from energygames.io import save_game


@pytest.fixture
def files(tmp_path, g1, g3):
    p1, p3 = tmp_path / "fig1.game", tmp_path / "fig3.game"
    save_game(g1, str(p1))
    save_game(g3, str(p3))
    broken = tmp_path / "broken.game"
    broken.write_text('{"format": 1, "dimension": 1, "vertices": [{"id": "a", "owner": 1},'
                      ' {"id": "b", "owner": 2}], "edges": [{"src": "a", "dst": "b", "weight": [1]}]}')
    return {"fig1": str(p1), "fig3": str(p3), "broken": str(broken), "dir": tmp_path}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_solve_fig3(capsys, files):
    code, out = run(capsys, "solve", "--mode", "fcb", files["fig3"])
    doc = json.loads(out)
    assert code == 0 and doc["winner"] == 2 and doc["format"] == 1
    m = doc["manifest"]
    assert m["command"] == "solve" and len(m["input_sha256"]) == 64 and "timestamp" not in json.dumps(m)


def test_solve_variants(capsys, files):
    code, out = run(capsys, "solve", files["fig1"], "--v0", "v0", "--energy")
    assert code == 0 and json.loads(out)["winner"] == 1
    code, out = run(capsys, "solve", files["fig1"], "--v0", "v0", "--credit", "2,1")
    doc = json.loads(out)
    assert doc["winner"] == 1 and doc["game"] == "energy-given-credit"
    code, out = run(capsys, "solve", files["fig3"], "--mode", "fcb", "--dump-strategy")
    assert json.loads(out)["strategy"]


def test_bounds_prints_full_decimal(capsys, files):
    code, out = run(capsys, "bounds", files["fig1"])
    doc = json.loads(out)
    assert code == 0
    assert doc["B"]["value"] == str(48**128) and doc["B"]["digits"] == len(str(48**128))


def test_validate_broken(capsys, files):
    code, out = run(capsys, "validate", files["broken"])
    doc = json.loads(out)
    assert code == 2 and not doc["ok"] and "no outgoing edge" in doc["violations"][0]
    code, out = run(capsys, "validate", files["fig1"])
    assert code == 0


def test_simulate_and_trace(capsys, files):
    trace = files["dir"] / "trace.txt"
    code, out = run(capsys, "simulate", files["fig1"], "--v0", "v0", "--steps", "6", "--p1", "balance",
                    "--p2", "counterless:vL=-2,2;vR=4,-3", "--trace", str(trace))
    doc = json.loads(out)
    assert code == 0 and doc["final"] == {"vertex": "v0", "level": [0, 1]}
    assert trace.read_text().splitlines()[2] == "2 v0 -2 2"
    lossy1 = files["dir"] / "lossy1.game"
    code, out = run(capsys, "transform", files["fig1"], "--lossy")
    lossy1.write_text(out)
    code, out = run(capsys, "simulate", str(lossy1), "--v0", "v0", "--steps", "300",
                    "--p1", "auto:scaled", "--p2", "random", "--seed", "4")
    doc = json.loads(out)
    assert code == 0 and doc["failures"] == [] and doc["fallbacks"] == 0
    assert doc["checks"]["energy_identity"] == 301
    # Player 2 does not win the first-cycle game on the lossy graph
    assert main(["simulate", str(lossy1), "--v0", "v0", "--p2", "lift"]) == 2


def test_transform_and_enumerate(capsys, files):
    code, out = run(capsys, "transform", files["fig3"], "--lossy")
    assert code == 0 and len(json.loads(out)["edges"]) == 8
    code, out = run(capsys, "transform", files["fig3"], "--cap", "1", "--credit", "0,0")
    assert code == 0 and json.loads(out)["dimension"] == 2
    code, out = run(capsys, "enumerate", "--m", "1", "--dim", "2")
    assert code == 0 and len(out.splitlines()) == 16


def test_crosscheck_and_dot(capsys, files):
    code, out = run(capsys, "crosscheck", "--corpus", "random:4", "--seed", "3")
    doc = json.loads(out)
    assert code == 0 and doc["instances"] == 4 and doc["contradictions"] == 0
    code, out = run(capsys, "export-dot", files["fig1"])
    assert code == 0 and out.startswith("digraph")


def test_errors(capsys, files):
    assert main(["solve", str(files["dir"] / "missing.game")]) == 2
    assert main(["bogus"]) == 2
    assert main(["solve", files["fig1"], "--credit", "x"]) == 2
    assert main(["solve", files["fig1"], "--mode", "box", "--box-budget", "5"]) == 3
