from __future__ import annotations

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from fracperiod.cli import EXIT_CONFIG, EXIT_DOMAIN, EXIT_OK, EXIT_SELFTEST, format_value, main, parse_z
from fracperiod.report import load_trajectory_csv, verdict_from_report
from fracperiod.special_functions import mittag_leffler


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def classified(tmp_path_factory):
    """report.json of every classifiable bundled scenario, computed once."""
    out = {}
    for name in ("example_2_k2", "example_3_18", "anti_periodic_odd_modes", "negative_control"):
        d = tmp_path_factory.mktemp(name)
        assert main(["classify", "--config", name, "--out", str(d)]) == EXIT_OK
        out[name] = json.loads((d / "report.json").read_text())
    return out


# {{{ ml


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["--alpha", "1", "--beta", "1", "--z", "1"], "2.718281828459045"),
        (["--alpha", "0.5", "--beta", "1", "--z", "-1"], "0.427583576155807"),
    ],
)
def test_ml_values(capsys, argv, expected):
    code, out, _ = run(capsys, "ml", *argv)
    assert code == EXIT_OK
    assert out.strip() == expected


def test_ml_expression_argument(capsys):
    # cos(pi); an argument with a leading minus is passed as --z=...
    code, out, _ = run(capsys, "ml", "--alpha", "2", "--z=-pi**2")
    assert code == EXIT_OK
    assert float(out) == pytest.approx(-1.0, abs=1e-14)


def test_ml_complex_needs_flag(capsys):
    code, _, err = run(capsys, "ml", "--alpha", "0.5", "--z", "3+4i")
    assert code == EXIT_DOMAIN
    assert "|z| <= 10" in err
    code, out, _ = run(capsys, "ml", "--alpha", "0.5", "--z", "3+4i", "--complex")
    assert code == EXIT_OK
    expected = complex(mittag_leffler(3 + 4j, 0.5, 1.0))
    assert complex(out.strip().replace("i", "j")) == pytest.approx(expected, rel=1e-14)


def test_ml_complex_outside_series_disk(capsys):
    code, _, _ = run(capsys, "ml", "--alpha", "0.5", "--z", "30+4i", "--complex")
    assert code == EXIT_DOMAIN


@pytest.mark.parametrize("argv", [["--alpha", "0", "--z", "1"], ["--alpha", "0.5", "--z", "abc"]])
def test_ml_domain_errors(capsys, argv):
    assert run(capsys, "ml", *argv)[0] == EXIT_DOMAIN


def test_format_value():
    assert format_value(math.e) == "2.718281828459045"
    assert format_value(1.5e-10) == "1.50000000000000e-10"
    assert format_value(0.0) == "0.000000000000000"


def test_parse_z():
    assert parse_z("3+4i") == 3 + 4j
    assert parse_z("-pi") == -math.pi
    assert parse_z(" 2.5e-3 ") == 2.5e-3


# }}}

# {{{ solve


def test_solve_scalar_relaxation(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", "--config", "scalar_relaxation", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert str(tmp_path / "trajectory.csv") in out
    t, modes = load_trajectory_csv(tmp_path / "trajectory.csv")
    ref = mittag_leffler(-np.sqrt(t), 0.5, 1.0)
    assert np.max(np.abs(modes[1] - ref)) <= 1e-6
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["verdict"] is None
    assert report["mild_residual"] <= 5e-3


def test_solve_csv_layout(capsys, tmp_path):
    assert run(capsys, "solve", "--config", "example_2_k2", "--out", str(tmp_path))[0] == EXIT_OK
    lines = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "t,mode,re,im"
    assert [ln.split(",")[:2] for ln in lines[1:5]] == [["0.0", "1"], ["0.0", "2"], ["0.0", "3"], ["0.001", "1"]]
    for ln in lines[1:50]:
        for field in ln.split(",")[2:]:
            assert repr(float(field)) == field


def test_solve_dirichlet_two_thirds_sigma(capsys, tmp_path):
    assert run(capsys, "solve", "--config", "example_3_18", "--out", str(tmp_path))[0] == EXIT_OK
    report = json.loads((tmp_path / "report.json").read_text())
    expected = [[0.0, -math.pi * n**3] for n in range(1, 6)]
    got = sorted(report["sigma_i"], key=lambda p: -p[1])
    np.testing.assert_allclose(got, expected, rtol=1e-12)
    assert report["truncation_N"] == 5
    assert report["branch"]["principal_branch_points"] == 0


def test_solve_is_deterministic(capsys, tmp_path):
    for d in ("a", "b"):
        assert run(capsys, "solve", "--config", "example_3_18", "--out", str(tmp_path / d))[0] == EXIT_OK
    for fname in ("trajectory.csv", "report.json"):
        assert (tmp_path / "a" / fname).read_bytes() == (tmp_path / "b" / fname).read_bytes()


def test_solve_threads_deterministic(capsys, tmp_path, monkeypatch):
    assert run(capsys, "solve", "--config", "example_2_k2", "--out", str(tmp_path / "a"))[0] == EXIT_OK
    monkeypatch.setenv("FRACPERIOD_THREADS", "4")
    assert run(capsys, "solve", "--config", "example_2_k2", "--out", str(tmp_path / "b"))[0] == EXIT_OK
    for fname in ("trajectory.csv", "report.json"):
        assert (tmp_path / "a" / fname).read_bytes() == (tmp_path / "b" / fname).read_bytes()


def write_config(path, **changes):
    raw = json.loads(
        json.dumps(
            {
                "alpha": 0.5,
                "operator": {"kind": "explicit", "eigenvalues": [-1.0]},
                "initial": [1.0],
                "grid": {"t_max": 13, "dt": 0.001},
            }
        )
    )
    raw.update(changes)
    path.write_text(json.dumps(raw))
    return str(path)


def test_zero_mode_config(capsys, tmp_path):
    cfg = write_config(tmp_path / "c.json", operator={"kind": "explicit", "eigenvalues": []}, initial=[])
    code, _, err = run(capsys, "solve", "--config", cfg, "--out", str(tmp_path))
    assert code == EXIT_CONFIG
    assert "operator.eigenvalues" in err
    assert not (tmp_path / "report.json").exists()


def test_missing_config(capsys, tmp_path):
    assert run(capsys, "solve", "--config", str(tmp_path / "nope.json"))[0] == EXIT_CONFIG


# }}}

# {{{ classify


@pytest.mark.parametrize(
    "name,verdict",
    [
        ("example_2_k2", "AllAsymptotic1Periodic"),
        ("example_3_18", "MasseraExistence"),
        ("anti_periodic_odd_modes", "AllAsymptoticAnti1Periodic"),
        ("negative_control", "Inconclusive"),
    ],
)
def test_classify_verdicts(classified, name, verdict):
    report = classified[name]
    assert report["verdict"] == verdict
    assert verdict_from_report(report) == verdict


def test_classify_report_schema(classified):
    report = classified["example_3_18"]
    for key in (
        "tool", "sigma_i", "exp_sigma", "hypothesis_flags", "verdict", "profiles",
        "mild_residual", "truncation_N", "branch", "notes", "massera_truncation_check",
    ):
        assert key in report
    massera = report["hypothesis_flags"]["massera"]
    assert {"a_exponentially_stable", "b_sector_in_resolvent", "c_exp_sigma_minus_one_closed",
            "d_forcing_in_2piZ"} <= set(massera)
    assert report["tool"]["name"] == "fracperiod"


def test_classify_prints_verdict(capsys, tmp_path):
    code, out, _ = run(capsys, "classify", "--config", "negative_control", "--out", str(tmp_path), "--trajectory")
    assert code == EXIT_OK
    assert out.strip() == "Inconclusive"
    assert (tmp_path / "trajectory.csv").exists()


def test_classify_bad_dt(capsys, tmp_path):
    cfg = write_config(tmp_path / "c.json", grid={"t_max": 13, "dt": 0.003})
    code, _, err = run(capsys, "classify", "--config", cfg, "--out", str(tmp_path))
    assert code == EXIT_CONFIG
    assert "grid.dt" in err


# }}}

# {{{ selftest


def test_selftest_passes(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == EXIT_OK
    assert "FAIL" not in out
    assert "example-3.18-sigma" in out


def test_selftest_principal_branch_fails(capsys):
    code, out, err = run(capsys, "selftest", "--branch", "principal")
    assert code == EXIT_SELFTEST
    assert "example-3.18-sigma" in err
    assert any(ln.startswith("example-3.18-sigma") and "FAIL" in ln for ln in out.splitlines())


def test_selftest_bad_config(capsys, tmp_path):
    cfg = write_config(tmp_path / "c.json", grid={"t_max": 13, "dt": 0.003}, classify={})
    assert run(capsys, "selftest", "--config", cfg)[0] == EXIT_CONFIG


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fracperiod.cli", "ml", "--alpha", "1", "--z", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "2.718281828459045"


# }}}
