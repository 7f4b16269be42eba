import csv
import json
import subprocess
import sys

import pytest

from schreierlab import (ParseError, PartialLabeledGraph, SchreierGraph, damage, parse_sgf,
                         random_schreier, torus_graph, write_sgf)
from schreierlab.cli import main

from conftest import corpus


# SGF -------------------------------------------------------------------------------------

def test_round_trip():
    for g in corpus(100, seed=50, max_v=60):
        h = parse_sgf(write_sgf(g))
        assert isinstance(h, SchreierGraph)
        assert h.perms == g.perms and h.root == g.root


def test_round_trip_partial_and_field():
    d = damage(torus_graph(2, 4), 0.2, seed=1)
    bits = [1, 0] * 8
    h, got = parse_sgf(write_sgf(d, bits), with_field=True)
    assert isinstance(h, PartialLabeledGraph)
    assert h.maps == d.maps and got == tuple(bits)


def test_parse_index2(index2):
    g = parse_sgf("# the index-2 graph\nschreier 2 2 0\n0 1\n1 0\n")
    assert g.perms == index2.perms


@pytest.mark.parametrize("text,line,col", [
    ("schreier 2 2 0\n0 1\n1 1\n", 3, 3),
    ("schreier 1 3 0\n  2  0   2\n", 2, 10),
    ("schreier 2 2 5\n0 1\n1 0\n", 1, 14),
    ("graph 2 2 0\n0 1\n1 0\n", 1, 1),
    ("schreier 2 2 0\n0 x\n1 0\n", 2, 3),
    ("schreier 2 2 0\n0 1\n1 0\nfield 012\n", 4, 7),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse_sgf(text)
    assert (exc.value.line, exc.value.column) == (line, col)


def test_parse_partial_graph_with_defects():
    g = parse_sgf("schreier 1 3 0\n1 2 -1\n")
    assert isinstance(g, PartialLabeledGraph) and g.maps == ((1, 2, -1),)


# CLI --------------------------------------------------------------------------------------

@pytest.fixture
def files(tmp_path):
    paths = {}
    def put(name, text):
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
        return str(p)
    put("a.json", json.dumps({"n": 2, "words": ["a"]}))
    put("abb.json", json.dumps({"n": 2, "words": ["a", "bb"]}))
    put("idx2.json", json.dumps({"n": 2, "words": ["a", "bb", "baB"]}))
    put("z2.json", json.dumps({"kind": "lattice", "d": 2}))
    put("idx2.sgf", "schreier 2 2 0\n0 1\n1 0\n")
    put("bad.sgf", "schreier 2 2 0\n0 1\n1 1\n")
    put("t20.sgf", write_sgf(torus_graph(2, 20)))
    put("t40.sgf", write_sgf(torus_graph(2, 40)))
    put("broken.sgf", write_sgf(damage(torus_graph(2, 20), 0.01, seed=1)))
    paths["dir"] = tmp_path
    return paths


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(files, capsys):
    assert run(["validate", files["idx2.sgf"]], capsys)[:2] == (0, "ok\n")
    code, _, err = run(["validate", files["bad.sgf"]], capsys)
    assert code == 2 and "line 3" in err


def test_sample_and_cosets(files, capsys):
    code, out, _ = run(["sample", files["idx2.json"]], capsys)
    assert code == 0 and out == "schreier 2 2 0\n0 1\n1 0\n"
    code, out, _ = run(["sample", "--random", "--rank", "3", "--vertices", "7", "--seed", "4"],
                       capsys)
    assert parse_sgf(out).perms == random_schreier(3, 7, 4).perms
    assert run(["cosets", files["abb.json"], "--budget-cosets", "10"], capsys)[0] == 3
    code, out, _ = run(["cosets", files["idx2.json"]], capsys)
    assert code == 0 and parse_sgf(out).vertex_count == 2


def test_analyze(files, capsys):
    code, out, _ = run(["analyze", files["a.json"], "--rmax", "12"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["delta_estimate"] == "1/2"
    assert rep["classification"] == "dissipative-part-positive"
    assert rep["cogrowth"]["cumulative"][12] == 25
    assert len(rep["input_digest"]) == 64
    assert rep["budgets"]["vertices"] > 0


def test_analyze_budget(files, capsys):
    code, _, err = run(["analyze", files["z2.json"], "--rmax", "12", "--budget-vertices", "50"],
                       capsys)
    assert code == 3 and "budget" in err


def test_reports_are_deterministic(files, capsys):
    for argv in (["analyze", files["abb.json"], "--rmax", "6"],
                 ["walk", files["z2.json"], "--steps", "500", "--trials", "10", "--seed", "3"],
                 ["cogrowth", files["idx2.sgf"], "--rmax", "6"],
                 ["bound", "--n", "2", "--k", "2", "--eps", "0.5"]):
        first = run(argv, capsys)
        second = run(argv, capsys)
        assert first == second and first[0] == 0
        assert "input_digest" in json.loads(first[1])


def test_stats_bsdist_and_check(files, capsys):
    census = str(files["dir"] / "census.json")
    assert run(["stats", files["t40.sgf"], "-r", "2", "--out", census], capsys)[0] == 0
    data = json.loads(open(census).read())
    assert list(data["census"].values()) == ["1/1"] and "input_digest" in data
    code, out, _ = run(["stats", files["t20.sgf"], "-r", "2", "--reference", census], capsys)
    assert code == 0 and json.loads(out)["check"]["passed"]
    code, out, _ = run(["bsdist", files["t20.sgf"], files["t40.sgf"], "-r", "3"], capsys)
    assert json.loads(out)["tv_distance"] == "0/1"

    stitched = str(files["dir"] / "stitched.sgf")
    report = str(files["dir"] / "report.json")
    assert run(["stitch", files["broken.sgf"], "-o", stitched, "--report", report], capsys)[0] == 0
    assert run(["validate", stitched], capsys)[0] == 0
    assert json.loads(open(report).read())["stitch"]["removed"] > 0
    code, out, err = run(["stats", stitched, "-r", "2", "--reference", census], capsys)
    assert code == 1 and "failed" in err


def test_bound_csv(files, capsys):
    path = str(files["dir"] / "b.csv")
    code, out, _ = run(["bound", "--n", "2", "--k", "2", "--eps", "0.5", "--m", "5",
                        "--csv", path], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["roots_float"][0] == pytest.approx(2.596291, abs=1e-6)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["m", "radius", "bound_float"] and len(rows) == 7
    assert run(["bound", "--k", "1"], capsys)[0] == 1


def test_density_command(files, capsys):
    code, out, _ = run(["density", files["idx2.sgf"], "--pred", "a-loop", "--rmax", "2"], capsys)
    rep = json.loads(out)
    assert rep["mean_rho"] == ["1/1"] * 3 and rep["field"] == "field 11"
    with_field = str(files["dir"] / "f.sgf")
    open(with_field, "w").write(write_sgf(random_schreier(2, 20, 1), [1, 0] * 10))
    rep = json.loads(run(["density", with_field, "--rmax", "3"], capsys)[1])
    assert rep["mean_rho"] == rep["tau_mass"]


def test_walk_command(files, capsys):
    code, out, _ = run(["walk", files["idx2.sgf"], "--steps", "50", "--trials", "20"], capsys)
    rep = json.loads(out)
    assert rep["label"] == "recurrent-like" and rep["returns"] == 20


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "schreierlab.cli", "validate", files["idx2.sgf"]],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "ok\n"
