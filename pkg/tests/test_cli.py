import json

import numpy as np
import pytest

from simplicial_qsvt.cli import main


@pytest.fixture
def files(tmp_path):
    (tmp_path / "k3.txt").write_text("3\n1 2\n1 3\n2 3\n")
    (tmp_path / "c4.txt").write_text("4\n1 2\n2 3\n3 4\n1 4\n")
    (tmp_path / "empty.txt").write_text("5\n")
    (tmp_path / "s.json").write_text(json.dumps([{"simplex": [1, 2], "value": 1.0}, {"simplex": [1, 3], "value": 2.0},
                                                 {"simplex": [2, 3], "value": 3.0}]))
    (tmp_path / "h.json").write_text(json.dumps([{"simplex": [1, 2], "value": 1}, {"simplex": [2, 3], "value": 1},
                                                 {"simplex": [3, 4], "value": 1}, {"simplex": [1, 4], "value": -1}]))
    (tmp_path / "spec.json").write_text(json.dumps({"h0": 0.5, "lower": [0.5, -0.3], "upper": [0.5, 0.2],
                                                    "convention": "rescaled"}))
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_complex_square(files, capsys):
    code, out = run(capsys, "complex", "--graph", files / "c4.txt")
    assert code == 0
    assert (out["counts"]["0"], out["counts"]["1"], out["counts"]["2"]) == (4, 4, 0)
    assert out["betti"]["1"] == 1


def test_complex_triangle_and_points(files, capsys):
    assert run(capsys, "complex", "--graph", files / "k3.txt")[1]["betti"]["1"] == 0
    out = run(capsys, "complex", "--graph", files / "empty.txt")[1]
    assert out["counts"]["1"] == 0 and out["betti"]["0"] == 5


def test_identity_filter(files, capsys):
    code, out = run(capsys, "filter", "--graph", files / "k3.txt", "--signal", files / "s.json", "--spec", "identity")
    assert code == 0
    s = np.array([1.0, 2.0, 3.0])
    np.testing.assert_allclose(out["amplitudes"], s / np.linalg.norm(s), atol=1e-12)
    assert out["success_probability"] == pytest.approx(1 / 9)


def test_spec_file_filter_compact(files, capsys):
    code, out = run(capsys, "filter", "--graph", files / "k3.txt", "--signal", files / "s.json",
                    "--spec", files / "spec.json", "--encoding", "compact")
    assert code == 0 and out["passed"]


def test_classical_only_omits_quantum_fields(files, capsys):
    code, out = run(capsys, "filter", "--graph", files / "k3.txt", "--signal", files / "s.json", "--classical-only")
    assert code == 0 and out["mode"] == "classical"
    assert "success_probability" not in out and "query_counts" not in out


def test_gradient_projection_of_harmonic_is_infeasible(files, capsys):
    code, out = run(capsys, "filter", "--graph", files / "c4.txt", "--signal", files / "h.json",
                    "--spec", "gradient-proj", "--eps", "1e-2")
    assert code == 1 and out["postselection_infeasible"]


def test_project_command(files, capsys):
    code, out = run(capsys, "project", "--graph", files / "k3.txt", "--signal", files / "s.json",
                    "--component", "G", "--eps", "1e-3")
    assert code == 0 and out["error"] <= 1e-3


def test_resources_command(files, capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, _ = run(capsys, "resources", "--n", 8, "--k", 2, "--E", 10, "--encoding", "compact",
                  "--d-lower", 3, "--d-upper", 2, "--h0", 0.5, "--out", dest)
    out = json.loads(dest.read_text())
    assert code == 0
    assert out["exact"]["queries"]["U_Bk_total"] == 12 and out["exact"]["ancillas"]["a_k"] == 2
    assert out["beta"] == 2.5


def test_missing_file_is_input_error(files, capsys):
    assert main(["complex", "--graph", str(files / "nope.txt")]) == 2


def test_unknown_simplex_is_input_error(files, capsys):
    (files / "bad.json").write_text(json.dumps([{"simplex": [1, 3], "value": 1}]))
    assert main(["filter", "--graph", str(files / "c4.txt"), "--signal", str(files / "bad.json")]) == 2


def test_output_is_deterministic(files, capsys):
    argv = ["filter", "--graph", files / "k3.txt", "--signal", files / "s.json", "--spec", files / "spec.json"]
    assert run(capsys, *argv) == run(capsys, *argv)
