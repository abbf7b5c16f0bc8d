import json

import numpy as np
import pytest

from digispace import io
from digispace.cli import main, parse_times
from digispace.experiments import load_trajectory


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def moebius_inputs(tmp_path):
    space = tmp_path / "m.json"
    assert main(["catalog", "build", "moebius12", "--out", str(space)]) == 0
    coeffs = write(tmp_path / "c.json", {"scheme": "lazy_uniform", "w": 0.03})
    init = write(tmp_path / "i.json", {"1": 12})
    return str(space), coeffs, init


def test_catalog_list(capsys):
    assert main(["catalog", "list"]) == 0
    names = capsys.readouterr().out.split()
    assert "moebius12" in names and "projective-plane-11" in names


def test_catalog_build(tmp_path):
    out = tmp_path / "m.json"
    assert main(["catalog", "build", "moebius12", "--out", str(out)]) == 0
    G = io.load_space(out)
    assert len(G) == 12 and G.n_edges == 28
    out = tmp_path / "s.json"
    assert main(["catalog", "build", "min-sphere-2", "--out", str(out)]) == 0
    assert len(io.load_space(out)) == 6


def test_catalog_unknown(capsys):
    assert main(["catalog", "build", "klein-bottle"]) == 2
    assert "unknown" in capsys.readouterr().err


def test_catalog_selftest():
    assert main(["catalog", "selftest"]) == 0


def test_validate(tmp_path, capsys):
    grid = tmp_path / "g.json"
    main(["catalog", "build", "square-grid-3x3", "--out", str(grid)])
    capsys.readouterr()
    assert main(["validate", str(grid), "--dim", "2"]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert rep["points"]["5"] == "defective"

    assert main(["validate", "moebius12", "--dim", "2", "--allow-boundary"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["euler"] == 0 and rep["orientable"] is False
    assert main(["validate", "moebius12", "--dim", "2"]) == 1
    capsys.readouterr()

    out = tmp_path / "rep.json"
    assert main(["validate", "projective-plane-11", "--dim", "2", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["euler"] == 1 and rep["orientable"] is False
    assert rep["boundary_components"] == []


def test_validate_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"points": [1,\n 2,, 3]}')
    assert main(["validate", str(bad), "--dim", "1"]) == 2
    assert "bad.json:2" in capsys.readouterr().err


def test_solve(tmp_path, moebius_inputs, capsys):
    space, coeffs, init = moebius_inputs
    out, rep = tmp_path / "t.csv", tmp_path / "r.json"
    assert main(["solve", "--space", space, "--coeffs", coeffs, "--init", init,
                 "--steps", "100", "--out", str(out), "--report", str(rep)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 102
    traj = load_trajectory(out)
    assert np.all(np.abs(traj.sums() - 12) <= 1e-9)
    report = json.loads(rep.read_text())
    assert report["conserved"] and report["stable"]
    assert report["spectral_max_deviation"] <= 1e-9


def test_solve_projective(tmp_path, capsys):
    coeffs = write(tmp_path / "c.json", {"scheme": "lazy_uniform", "w": 0.1})
    init = write(tmp_path / "i.json", {"1": 11})
    out = tmp_path / "t.csv"
    assert main(["solve", "--space", "projective-plane-11", "--coeffs", coeffs,
                 "--init", init, "--steps", "30", "--out", str(out)]) == 0
    traj = load_trajectory(out)
    assert len(traj) == 31 and np.all(np.abs(traj.sums() - 11) <= 1e-9)


def test_solve_bad_w(tmp_path, moebius_inputs, capsys):
    space, _, init = moebius_inputs
    coeffs = write(tmp_path / "bad.json", {"scheme": "lazy_uniform", "w": 0.5})
    assert main(["solve", "--space", space, "--coeffs", coeffs, "--init", init,
                 "--steps", "5"]) == 2
    assert "out of range" in capsys.readouterr().err


def test_solve_invalid_entries(tmp_path, moebius_inputs, capsys):
    space, _, init = moebius_inputs
    coeffs = write(tmp_path / "e.json", {"entries": [[1, 1, 0.5], [3, 1, 0.5]]})
    assert main(["solve", "--space", space, "--coeffs", coeffs, "--init", init,
                 "--steps", "5"]) == 2
    assert "not in the ball" in capsys.readouterr().err


def test_config_precedence(tmp_path, moebius_inputs, capsys):
    space, coeffs, init = moebius_inputs
    cfg = write(tmp_path / "cfg.json", {"space": space, "coeffs": coeffs,
                                        "init": init, "steps": 7})
    assert main(["solve", "--config", cfg, "--steps", "3", "--dump-config"]) == 0
    resolved = json.loads(capsys.readouterr().out)
    assert resolved["steps"] == 3 and resolved["space"] == space
    assert main(["solve", "--steps", "3"]) == 2


def test_experiment_outputs(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["experiment", "moebius", "--out", str(a)]) == 0
    capsys.readouterr()
    assert main(["experiment", "moebius", "--out", str(b)]) == 0
    for name in ("moebius_trajectory.csv", "moebius_point3.dat", "moebius_point10.dat"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    series = (a / "moebius_point10.dat").read_text().splitlines()
    assert len(series) == 101 and series[0].split() == ["0", "0"]
    rep = json.loads((a / "moebius_report.json").read_text())
    assert rep["extra"]["extended_stationary_distance"] < 1e-6
    assert all(rep["extra"]["shape"].values())


def test_experiment_projective(tmp_path, capsys):
    assert main(["experiment", "projective", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "projective_report.json").read_text())
    assert rep["steps"] == 30 and rep["conserved"]
    assert len((tmp_path / "projective_point3.dat").read_text().splitlines()) == 31


def test_experiment_dump_config(capsys):
    assert main(["experiment", "moebius", "--dump-config"]) == 0
    cfg = json.loads(capsys.readouterr().out)
    assert cfg["steps"] == 100 and cfg["init"] == {"1": 12.0}


def test_spectral(tmp_path, moebius_inputs, capsys):
    space, coeffs, init = moebius_inputs
    out = tmp_path / "s.csv"
    assert main(["spectral", "--space", space, "--coeffs", coeffs, "--init", init,
                 "--times", "0:100", "--compare", "--out", str(out)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["max_deviation"] <= 1e-9
    _, times, values = io.read_trajectory_csv(out)
    assert times[0] == 0 and abs(values[0][0] - 12) <= 1e-10


def test_spectral_asymmetric(tmp_path, capsys):
    space = write(tmp_path / "p.json", {"name": "p", "points": [1, 2, 3],
                                         "edges": [[1, 2], [2, 3]]})
    coeffs = write(tmp_path / "c.json", {"entries": [
        [1, 1, 0.5], [2, 1, 0.5], [1, 2, 0.25], [2, 2, 0.5], [3, 2, 0.25],
        [2, 3, 0.5], [3, 3, 0.5]]})
    init = write(tmp_path / "i.json", {"1": 1})
    assert main(["spectral", "--space", space, "--coeffs", coeffs, "--init", init,
                 "--times", "0,1"]) == 2
    assert "symmetric" in capsys.readouterr().err


def test_parse_times():
    assert parse_times("0,2:4,9") == [0, 2, 3, 4, 9]
