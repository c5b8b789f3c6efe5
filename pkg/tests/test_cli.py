import json

import numpy as np

from kcone.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_metric_example(capsys):
    code, out, _ = run_cli(capsys, "metric", "P1XP1", "--at", "1,1")
    assert code == 0
    rep = json.loads(out)
    assert rep["command"] == "metric" and rep["form"] == "P1XP1"
    assert rep["outputs"]["vol"] == 1.0
    assert rep["outputs"]["gram"] == [[1.0, 0.0], [0.0, 1.0]]


def test_curvature_sectional_example(capsys):
    code, out, _ = run_cli(
        capsys, "curvature", "LOR3", "--at", "1,0,0", "--sectional", "0,1,0", "0,0,1"
    )
    assert code == 0
    rep = json.loads(out)
    assert abs(rep["outputs"]["sectional"] + 0.5) <= 1e-8


def test_curvature_ricci_scalar_flags(capsys):
    code, out, _ = run_cli(capsys, "curvature", "LOR3", "--ricci", "--scalar")
    rep = json.loads(out)
    assert code == 0
    assert abs(rep["outputs"]["scalar"] + 1.0) <= 1e-7
    assert len(rep["outputs"]["ricci"]) == 3


def test_connection_output(capsys):
    code, out, _ = run_cli(
        capsys, "connection", "P1XP1", "--at", "1,1", "--z", "1,0", "--u", "1,0"
    )
    rep = json.loads(out)
    assert code == 0
    assert np.allclose(rep["outputs"]["christoffel"], [-1.0, 0.0])


def test_geodesic_csv(capsys, tmp_path):
    csv = tmp_path / "path.csv"
    code, out, _ = run_cli(
        capsys,
        "geodesic", "QUINTIC", "--at", "1", "--v", "0.3333333333333333",
        "--T", "1", "--steps", "100", "--csv", str(csv),
    )
    rep = json.loads(out)
    assert code == 0
    assert rep["outputs"]["speed_drift"] <= 1e-8
    lines = csv.read_text().strip().splitlines()
    assert lines[0] == "t,x1,speed"
    assert len(lines) == 102
    t, x, s = (float(p) for p in lines[-1].split(","))
    assert t == 1.0 and abs(x - np.exp(1.0 / 3.0)) <= 1e-6


def test_probe_divergent(capsys):
    code, out, _ = run_cli(
        capsys,
        "probe", "P1XP1", "--alpha", "1,0", "--omega", "1,1",
        "--t-max", "1", "--halvings", "10",
    )
    rep = json.loads(out)
    assert code == 0
    assert rep["outputs"]["classification"] == "DIVERGENT"


def test_algebra_flags(capsys):
    code, out, _ = run_cli(
        capsys, "algebra", "LOR3", "--derivations", "--kn", "--constant-curvature"
    )
    rep = json.loads(out)
    assert code == 0
    assert rep["outputs"]["derivations"]["dimension"] == 1
    assert rep["outputs"]["kulkarni_nomizu"]["reconstruction_residual"] <= 1e-10
    assert rep["outputs"]["constant_curvature"]["is_constant"] is False


def test_split_output(capsys):
    code, out, _ = run_cli(capsys, "split", "QUINTIC", "--at", "1")
    rep = json.loads(out)
    assert code == 0
    assert abs(rep["outputs"]["t"] - np.log(5.0 / 6.0)) <= 1e-12
    assert abs(rep["outputs"]["dt2_coefficient"] - 1.0 / 3.0) <= 1e-8


def test_pullback_swap(capsys):
    code, out, _ = run_cli(
        capsys, "pullback", "P1XP1", "P1XP1", "--matrix", "0,1;1,0", "--degree", "1"
    )
    rep = json.loads(out)
    assert code == 0
    assert rep["checks"][0]["pass"] is True


def test_info_catalog_and_form(capsys):
    code, out, _ = run_cli(capsys, "info")
    rep = json.loads(out)
    assert code == 0
    assert {e["name"] for e in rep["outputs"]["catalog"]} >= {"P1XP1", "LOR3"}
    code, out, _ = run_cli(capsys, "info", "BLP2")
    rep = json.loads(out)
    assert rep["outputs"]["h11"] == 2
    assert rep["outputs"]["default_omega"] == [2.0, -1.0]


def test_manifold_file_loading(capsys, tmp_path):
    path = tmp_path / "form.json"
    path.write_text(
        json.dumps(
            {
                "name": "custom",
                "dim": 2,
                "h11": 1,
                "intersection": [{"index": [1, 1], "value": "3/2"}],
            }
        )
    )
    code, out, _ = run_cli(capsys, "metric", str(path), "--at", "1")
    rep = json.loads(out)
    assert code == 0
    assert rep["outputs"]["vol"] == 0.75


def test_exit_code_usage_error(capsys):
    code, _, err = run_cli(capsys, "metric", "NOSUCH", "--at", "1")
    assert code == 1
    assert "unknown form" in err


def test_exit_code_inadmissible(capsys):
    code, out, _ = run_cli(capsys, "metric", "P1XP1", "--at", "1,-1")
    assert code == 2
    rep = json.loads(out)
    assert rep["error"] == "NonPositiveVolume"
    code, out, _ = run_cli(capsys, "metric", "CY3GEN", "--at", "1,-1")
    assert code == 2
    assert json.loads(out)["error"] == "IndefiniteMetric"


def test_exit_code_left_cone(capsys):
    code, out, _ = run_cli(
        capsys, "geodesic", "CY3GEN", "--v", "0,-2", "--T", "1", "--steps", "400"
    )
    assert code == 2
    assert json.loads(out)["error"] == "LeftCone"


def test_verify_subset(capsys):
    code, out, _ = run_cli(capsys, "verify", "P3")
    rep = json.loads(out)
    assert code == 0
    assert rep["outputs"]["all_pass"] is True
    assert all(c["pass"] for c in rep["checks"])
    names = [c["name"] for c in rep["checks"]]
    assert "P3:hessian_vs_gram" in names and "pullback:identity" in names


def test_report_determinism(capsys):
    _, out1, _ = run_cli(capsys, "curvature", "LOR3", "--ricci", "--scalar")
    _, out2, _ = run_cli(capsys, "curvature", "LOR3", "--ricci", "--scalar")
    assert out1 == out2
