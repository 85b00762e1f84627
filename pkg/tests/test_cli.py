import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from oblix.cli import main

GOLDEN = Path(__file__).parent / "golden"


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj), encoding="utf-8")
    return str(p)


@pytest.fixture
def files(tmp_path):
    return {
        "a": write(tmp_path, "a.json", {"rows": 2, "cols": 1, "entries": [[1, 0], [1, 0]]}),
        "d": write(tmp_path, "d.json", {"rows": 2, "cols": 1, "entries": [1, 2]}),
        "d0": write(tmp_path, "d0.json", {"rows": 2, "cols": 1, "entries": [1, 0]}),
        "s": write(tmp_path, "s.json", {"rows": 2, "cols": 1, "entries": [0.7071067811865476, 0.7071067811865476]}),
        "e1": write(tmp_path, "e1.json", {"rows": 2, "cols": 1, "entries": [1, 0]}),
        "a5": write(tmp_path, "a5.json", {"rows": 5, "cols": 2, "entries": [1, 0, 0, 1, 1, 1, 2, -1, 0, 3]}),
        "tail": write(tmp_path, "tail.json", {"kind": "nullspace_tail", "rule": "geometric", "ratio": 0.5, "dim": 4}),
        "bad": write(tmp_path, "bad.json", {"rows": 1, "cols": 1}),
        "dir": tmp_path,
    }


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_angles(capsys, files):
    code, out, _ = run(capsys, "angles", "--m", files["s"], "--n", files["e1"])
    assert code == 0 and out.endswith("\n")
    rep = json.loads(out)
    assert rep["friedrichs_cos"] == pytest.approx(2**-0.5)
    assert rep["dixmier_cos"] == pytest.approx(2**-0.5)
    assert rep["intersection_dim"] == 0


def test_project_and_hull(capsys, files, tmp_path):
    out_matrix = tmp_path / "p.json"
    code, out, _ = run(capsys, "project", "--a", files["a"], "--weight", files["d"], "--matrix-out", out_matrix)
    assert code == 0
    rep = json.loads(out)
    assert rep["norm"] == pytest.approx(10**0.5 / 3, abs=1e-12)
    assert json.loads(out_matrix.read_text())["entries"][1] == pytest.approx([2 / 3, 0])
    code, out, _ = run(capsys, "project", "--a", files["a"], "--weight", files["d0"])
    assert code == 0 and json.loads(out)["norm"] == pytest.approx(2**0.5)
    code, out, _ = run(capsys, "hull", "--a", files["a"], "--weight", files["d"])
    rep = json.loads(out)
    assert code == 0 and rep["weights"] == pytest.approx([1 / 3, 2 / 3])
    assert rep["index_sets"] == ["0", "1"]


def test_bounds_report(capsys, files):
    code, out, _ = run(capsys, "bounds", "--subspace", files["s"], "--samples", 200, "--seed", 7)
    rep = json.loads(out)
    assert code == 0
    for key in ("max_over_Q", "min_mI", "K", "sup_sampled", "samples", "seed", "witness_Q", "witness_I", "rel_rank", "abs_eq"):
        assert key in rep
    assert rep["seed"] == 7 and rep["samples"] == 200
    assert all(not isinstance(v, dict) for v in rep.values())
    _, again, _ = run(capsys, "bounds", "--subspace", files["s"], "--samples", 200, "--seed", 7)
    assert again == out


def test_seed_required(capsys, files):
    code, _, err = run(capsys, "bounds", "--subspace", files["s"])
    assert code == 1 and "seed" in err
    code, _, _ = run(capsys, "bounds", "--subspace", files["s"], "--samples", 0)
    assert code == 0
    code, _, _ = run(capsys, "duality", "--a", files["a5"], "--mu", 1)
    assert code == 1


def test_duality(capsys, files):
    code, out, _ = run(capsys, "duality", "--a", files["a5"], "--mu", 1, "--samples", 100, "--seed", 3)
    rep = json.loads(out)
    assert code == 0 and rep["max_discrepancy"] <= 1e-7 and rep["accepted"] + rep["rejected"] == 100


def test_frames(capsys, files, tmp_path):
    code, out, _ = run(capsys, "frames", "--frame", files["tail"])
    rep = json.loads(out)
    assert code == 0 and rep["riesz_constant"] == pytest.approx(1 / 85, rel=1e-10)
    mb = tmp_path / "mb.csv"
    mb.write_text("0,-0.8660254037844386,0.8660254037844386\n1,-0.5,-0.5\n")
    code, out, _ = run(capsys, "frames", "--frame", mb)
    rep = json.loads(out)
    assert code == 0 and rep["lower"] == pytest.approx(1.5) and rep["riesz_constant"] == pytest.approx(0.5)


def read_csv(text):
    return list(csv.reader(text.splitlines()))


@pytest.mark.parametrize("kind, rule, extra, golden", [
    ("truncation", "geometric", [], "truncation_geometric.csv"),
    ("riesz", "geometric", [], "riesz_geometric.csv"),
    ("truncation", "finite", ["--values", "1", "2", "-1"], "truncation_finite.csv"),
    ("riesz", "finite", ["--values", "1", "2", "-1"], "riesz_finite.csv"),
])
def test_experiment_matches_golden(capsys, kind, rule, extra, golden):
    code, out, _ = run(capsys, "experiment", "--kind", kind, "--rule", rule, "--dims", "2..8", *extra)
    assert code == 0
    got = read_csv(out)
    want = read_csv((GOLDEN / golden).read_text())
    assert got[0][: len(want[0])] == want[0]
    for g, w in zip(got[1:], want[1:]):
        assert int(g[0]) == int(w[0])
        for a, b in zip(g[1:], w[1:]):
            assert float(a) == pytest.approx(float(b), rel=1e-10)


def test_experiment_output_file(capsys, tmp_path):
    target = tmp_path / "curve.csv"
    code, out, _ = run(capsys, "-o", target, "experiment", "--dims", "2,3")
    assert code == 0 and out == ""
    assert target.read_text().startswith("m,K,min_mI\n2,")


def test_usage_and_input_errors_exit_1(capsys, files):
    assert run(capsys, "angles", "--m", "missing.json", "--n", files["s"])[0] == 1
    assert run(capsys, "angles", "--m", files["bad"], "--n", files["s"])[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "experiment", "--dims", "5..2")[0] == 1


def test_identity_violation_exits_2(capsys, files, monkeypatch):
    from oblix import cli
    from oblix.exceptions import IdentityViolation

    def broken(*args, **kwargs):
        raise IdentityViolation("stewart-oleary", "forced", {"witness_Q": [0]})

    monkeypatch.setattr(cli, "stewart_oleary", broken)
    code, _, err = run(capsys, "bounds", "--subspace", files["s"], "--samples", 0)
    assert code == 2
    rep = json.loads(err)
    assert rep["identity"] == "stewart-oleary" and rep["witness"] == {"witness_Q": [0]}


def test_console_script_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "oblix.cli", "angles", "--m", files["s"], "--n", files["s"]],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["intersection_dim"] == 1
