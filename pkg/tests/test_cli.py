"""Command-line interface: subcommands, reports, exit-code contract."""

import json

import pytest

from hopfcm.cli import build_parser, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_catalog_lists_builtins(capsys):
    code, out, _ = run_cli(capsys, "catalog")
    assert code == 0
    names = {row["name"] for row in json.loads(out)["systems"]}
    assert {
        "khaled-original",
        "e1-shifted",
        "e1-normal",
        "e1-normal-trace",
        "e1-center",
        "e1-center-perturbed",
        "e4-normal",
        "e5-normal",
    } <= names


def test_hopf_report_at_first_equilibrium(capsys):
    code, out, _ = run_cli(
        capsys, "hopf", "--system", "khaled-original", "--point", "E1",
        "--params", "a=1,c=1,b=0,d=1",
    )
    assert code == 0
    report = json.loads(out)
    assert report["is_hopf"] is True
    assert report["omega_squared"] == "1"
    assert report["lambda3"] == "-1"


def test_hopf_exit_code_on_non_hopf_point(capsys):
    code, out, _ = run_cli(
        capsys, "hopf", "--system", "khaled-original", "--point", "E1",
        "--params", "a=2,c=1,b=0,d=1",
    )
    assert code == 2


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["definitely-not-a-command"])
    assert exc.value.code == 1


def test_focus_subcommand_center(capsys):
    code, out, _ = run_cli(
        capsys, "focus", "--system", "e1-center", "--params", "d=3", "--order", "2"
    )
    assert code == 0
    report = json.loads(out)
    assert report["quantities"] == ["0", "0"]


def test_focus_subcommand_jets(capsys):
    code, out, _ = run_cli(
        capsys, "focus", "--system", "e1-normal", "--order", "1",
        "--jet-degree", "1", "--small", "k,c,d", "--params", "k=1,c=0,d=1",
    )
    assert code == 0
    report = json.loads(out)
    assert "k" in report["quantities"][0]


def test_period_subcommand(capsys):
    code, out, _ = run_cli(
        capsys, "period", "--system", "e1-center", "--params", "d=1", "--order", "2"
    )
    assert code == 0
    report = json.loads(out)
    assert report["constants"] == ["0", "1/40"]
    assert report["isochronous"] is False


def test_period_obstruction_exit_code(capsys):
    code, out, _ = run_cli(
        capsys, "period", "--system", "e4-normal", "--params", "c=0.25,h=2",
        "--order", "2",
    )
    assert code == 2
    report = json.loads(out)
    assert report["focus_obstruction"]["order"] == 3


def test_cyclicity_modes(capsys):
    code, out, _ = run_cli(capsys, "cyclicity", "--mode", "teo4", "--d0", "1/2")
    assert code == 0
    report = json.loads(out)
    assert report["total"] == 3 and report["trace_bonus"] is True

    code, out, _ = run_cli(capsys, "cyclicity", "--mode", "teo5")
    assert code == 0
    report = json.loads(out)
    assert report["total"] == 5 and report["k"] == 3 and report["l"] == 2


def test_simulate_and_displacement(tmp_path, capsys):
    out_csv = tmp_path / "traj.csv"
    code, out, _ = run_cli(
        capsys, "simulate", "--system", "e1-center", "--params", "d=1",
        "--x0", "0.5,-0.75,0.1", "--tmax", "10", "--tol", "1e-10",
        "--plot-script", "--out", str(out_csv),
    )
    assert code == 0
    assert out_csv.exists()
    assert out_csv.read_text().startswith("t,u,v,w\n")
    assert (tmp_path / "traj_plot.py").exists()

    sweep = tmp_path / "sweep.csv"
    code, out, _ = run_cli(
        capsys, "displacement", "--system", "e1-center", "--params", "d=1",
        "--rho0-grid", "0.1", "--csv", str(sweep),
    )
    assert code == 0
    report = json.loads(out)
    assert abs(report["samples"][0]["dbar"]) < 1e-9
    assert sweep.exists()


def test_normalize_with_transform_file(tmp_path, capsys):
    doc = {
        "matrix": [
            ["k*(c*d+1)/(c^2*d^2+k^2)", "c*d*(c*d+1)/(c^2*d^2+k^2)", "0"],
            ["0", "1", "0"],
            ["0", "0", "1"],
        ],
        "time_scale": "k/d",
    }
    path = tmp_path / "transform.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli(
        capsys, "normalize", "--system", "e1-shifted", "--transform", str(path)
    )
    assert code == 0
    report = json.loads(out)
    assert report["lambda"] == "(-d^2)/(k)"
    assert report["orientation"] == -1


def test_verify_subcommand_exit_codes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--claim", "teo1-center")
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_custom_system_document(tmp_path, capsys):
    doc = {
        "backend": "exact",
        "params": {"d": "1"},
        "state_vars": ["u", "v", "w"],
        "equations": [
            [{"exp": [0, 1, 0], "coeff": "1"}, {"exp": [0, 1, 1], "coeff": "d"}],
            [{"exp": [1, 0, 0], "coeff": "-1"}, {"exp": [1, 0, 1], "coeff": "-d"}],
            [{"exp": [0, 0, 1], "coeff": "-d^2"}, {"exp": [1, 1, 0], "coeff": "d"}],
        ],
    }
    path = tmp_path / "center.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "focus", "--system", str(path), "--order", "2")
    assert code == 0
    assert json.loads(out)["quantities"] == ["0", "0"]
