"""End-to-end checks of the command line entry point.

Every test drives ``main`` with an explicit argv list and inspects the
exit code plus whatever landed on stdout or on disk.  Commands that
print a JSON document are parsed back and compared against the same
oracles the library tests use.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from singular_sense.cli import ConfigError, RunConfig, main

HBAR_PS = np.array(
    [
        [0.0, 1.0, 1.0, 0.0],
        [1.0, 0.0, 0.0, -1.0],
        [-1.0, 0.0, 0.0, 1.0],
        [0.0, 1.0, 1.0, 0.0],
    ]
)


def run_json(capsys, argv):
    """Run the CLI and parse its stdout as a single JSON document."""
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


# ---------------------------------------------------------------------------
# classify / steady-state


def test_classify_balanced_ep_defaults(capsys):
    code, doc = run_json(capsys, ["classify"])
    assert code == 0
    assert doc["singular"] and doc["ep"] and doc["balanced"]
    assert doc["at_lasing_threshold"] and not doc["stable"]
    assert doc["det_m"] < 1e-20
    assert doc["lasing_threshold"] == pytest.approx(1.0)
    # both eigenvalues collapse onto zero at the balanced EP
    for re, im in doc["eigenvalues"]:
        assert abs(re) < 1e-12 and abs(im) < 1e-12
    assert doc["steady_state"]["at_threshold"] is True


def test_classify_stable_point(capsys):
    code, doc = run_json(capsys, ["classify", "--gamma2", "0.25"])
    assert code == 0
    assert doc["stable"] and not doc["singular"]
    assert not doc["at_lasing_threshold"]
    for _, im in doc["eigenvalues"]:
        assert im < 0.0
    assert doc["steady_state"]["n1"] == pytest.approx(4.0 / 9.0)
    assert doc["steady_state"]["n2"] == pytest.approx(16.0 / 9.0)


def test_steady_state_reference_occupations(capsys):
    code, doc = run_json(capsys, ["steady-state", "--gamma2", "0.25"])
    assert code == 0
    assert doc["stable"]
    assert doc["n1"] == pytest.approx(4.0 / 9.0, abs=1e-14)
    assert doc["n2"] == pytest.approx(16.0 / 9.0, abs=1e-14)


def test_steady_state_at_threshold_exits_2(capsys):
    # the default configuration sits exactly on the lasing threshold
    code = main(["steady-state"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# configuration validation


def test_kappa_zero_rejected(capsys):
    code = main(["classify", "--kappa", "0"])
    assert code == 2
    assert "kappa" in capsys.readouterr().err


def test_unknown_perturbation_rejected(capsys):
    code = main(["expand", "--perturbation", "sideways"])
    assert code == 2
    assert "sideways" in capsys.readouterr().err


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text('{"theta0": 0.1, "gamma3": 2.0}')
    code = main(["bounds", "--config", str(cfg)])
    assert code == 2
    assert "gamma3" in capsys.readouterr().err


def test_malformed_config_rejected(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text('{"theta0": 0.1,')
    assert main(["bounds", "--config", str(cfg)]) == 2
    cfg.write_text("[1, 2, 3]")
    assert main(["bounds", "--config", str(cfg)]) == 2


def test_flags_override_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text('{"theta0": 0.2}')
    _, doc = run_json(capsys, ["bounds", "--config", str(cfg)])
    assert doc["theta0"] == pytest.approx(0.2)
    _, doc = run_json(
        capsys, ["bounds", "--config", str(cfg), "--theta0", "0.3"]
    )
    assert doc["theta0"] == pytest.approx(0.3)


def test_grid_validation():
    assert main(["sweep", "--points", "1"]) == 2
    assert main(["sweep", "--theta-min", "0.5", "--theta-max", "0.1"]) == 2
    assert main(["mc-check", "--tol", "1.5"]) == 2


def test_run_config_defaults_are_executable():
    cfg = RunConfig()
    cfg.check()
    assert cfg.perturbation == "two_mode_symmetric"
    with pytest.raises(ConfigError):
        RunConfig(kappa=-1.0).check()


# ---------------------------------------------------------------------------
# expand


def test_expand_balanced_ep_series(capsys):
    code, doc = run_json(capsys, ["expand"])
    assert code == 0
    assert doc["pole_order"] == 2
    assert doc["includes_symplectic_prefactor"] is True
    coeffs = [np.array(c) for c in doc["coefficients"]]
    # theta^2 M^{-1} = Hbar + theta Id exactly: the series terminates
    assert np.allclose(coeffs[0], HBAR_PS, atol=1e-12)
    assert np.allclose(coeffs[1], np.eye(4), atol=1e-12)
    for extra in coeffs[2:]:
        assert np.allclose(extra, 0.0, atol=1e-12)
    assert "note" not in doc


def test_expand_check_residual(capsys):
    code, doc = run_json(capsys, ["expand", "--check", "0.05"])
    assert code == 0
    assert doc["check"]["theta0"] == pytest.approx(0.05)
    assert doc["check"]["relative_residual"] < 1e-8


def test_expand_regular_point_uses_neumann(capsys):
    code, doc = run_json(capsys, ["expand", "--gamma2", "0.25"])
    assert code == 0
    assert doc["pole_order"] == 0
    assert "Neumann" in doc["note"]


# ---------------------------------------------------------------------------
# bounds


def test_bounds_single_parameter_prefactor(capsys):
    code, doc = run_json(capsys, ["bounds", "--theta0", "0.01"])
    assert code == 0
    assert doc["theta1"] is None
    assert doc["delta_q"] == pytest.approx(0.01**2 / 3.0, rel=1e-4)
    # no nuisance: the joint bound collapses onto the single-parameter one
    assert doc["Delta_q"] == pytest.approx(doc["delta_q"], rel=1e-12)
    assert doc["delta_c"] >= doc["delta_q"]


def test_bounds_with_s_nuisance(capsys):
    code, doc = run_json(
        capsys, ["bounds", "--nuisance", "nuisance_S", "--theta0", "0.01"]
    )
    assert code == 0
    assert doc["theta1"] == pytest.approx(0.0)
    assert doc["Delta_q"] == pytest.approx(0.01 / np.sqrt(8.0), rel=1e-2)
    assert doc["Delta_c"] >= doc["Delta_q"]


# ---------------------------------------------------------------------------
# sweep / figure


def test_sweep_writes_csv_and_verdict(tmp_path, capsys):
    code = main(
        [
            "sweep",
            "--theta-min",
            "1e-3",
            "--theta-max",
            "1e-1",
            "--points",
            "7",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 0
    csv_path = tmp_path / "sweep_two_mode_symmetric.csv"
    assert csv_path.exists()
    header = csv_path.read_text().splitlines()[0]
    assert header.startswith("theta0,delta_c,delta_q")
    verdict = json.loads((tmp_path / "sweep_verdict.json").read_text())
    (curve,) = verdict["curves"]
    assert curve["name"] == "two_mode_symmetric"
    assert curve["slope"] == pytest.approx(2.0, abs=0.1)
    assert "sweep:two_mode_symmetric" in capsys.readouterr().out


def test_sweep_name_includes_nuisance(tmp_path, capsys):
    code = main(
        [
            "sweep",
            "--nuisance",
            "nuisance_S",
            "--points",
            "5",
            "--theta-min",
            "1e-3",
            "--theta-max",
            "1e-2",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 0
    assert (tmp_path / "sweep_two_mode_symmetric_with_nuisance_S.csv").exists()


def test_figure_fig3_passes_and_is_reproducible(tmp_path, capsys):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert main(["figure", "fig3", "--out", str(out_a)]) == 0
    text = capsys.readouterr().out
    assert "0 failed" in text
    assert text.count("[pass]") == 6
    assert main(["figure", "fig3", "--out", str(out_b)]) == 0
    for path_a in sorted(out_a.iterdir()):
        path_b = out_b / path_a.name
        assert path_a.read_bytes() == path_b.read_bytes()


def test_unknown_figure_id_rejected(capsys):
    code = main(["figure", "fig9"])
    assert code == 2
    assert "fig9" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# mc-check and output plumbing


def test_mc_check_fails_with_few_samples(tmp_path, capsys):
    code = main(
        [
            "mc-check",
            "--samples",
            "10000",
            "--seed",
            "7",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 1
    doc = json.loads((tmp_path / "mc_check.json").read_text())
    assert doc["pass"] is False
    assert doc["max_relative_error"] > doc["tolerance"]
    assert "FAIL" in capsys.readouterr().out


def test_mc_check_passes_with_many_samples(tmp_path, capsys):
    code = main(
        [
            "mc-check",
            "--samples",
            "200000",
            "--seed",
            "7",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 0
    doc = json.loads((tmp_path / "mc_check.json").read_text())
    assert doc["pass"] is True
    assert doc["max_relative_error"] < 0.05
    assert doc["samples"] == 200000
    assert np.array(doc["analytic"]).shape == (1, 1)


def test_out_defaults_to_environment_variable(tmp_path, monkeypatch):
    target = tmp_path / "envout"
    monkeypatch.setenv("SINGULAR_SENSE_OUT", str(target))
    code = main(
        [
            "sweep",
            "--points",
            "5",
            "--theta-min",
            "1e-3",
            "--theta-max",
            "1e-2",
        ]
    )
    assert code == 0
    assert (target / "sweep_verdict.json").exists()


def test_out_path_collision_exits_3(tmp_path, capsys):
    blocked = tmp_path / "blocked"
    blocked.write_text("")
    code = main(
        [
            "sweep",
            "--points",
            "5",
            "--theta-min",
            "1e-3",
            "--theta-max",
            "1e-2",
            "--out",
            str(blocked),
        ]
    )
    assert code == 3
    assert "error:" in capsys.readouterr().err
