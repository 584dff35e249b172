"""Benchmark sweeps, closed-form coefficients, and verdict artifacts."""

from __future__ import annotations

import csv
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singular_sense.channel import InputSpec, effective_input_noise
from singular_sense.expansion import MatrixFamily, sm_expansion
from singular_sense.fisher import qfim_asymptotic, qfim_response
from singular_sense.scenarios import (
    CSV_COLUMNS,
    closed_form_coefficients,
    error_asymptote,
    figure_config,
    figure_ids,
    fit_slope,
    ns_thermal_f00,
    point_errors,
    reproduce_figure,
    s_coefficients,
    sweep_error,
    theta1zero_coeffs,
    write_sweep_csv,
)
from singular_sense.sensor import SensorParams, classify, perturbation, perturbed_generator
from singular_sense.expansion import direct_response

FIG3 = figure_config("fig3")

occupations = st.floats(0.1, 6.0, allow_nan=False, allow_infinity=False)
theta1s = st.floats(0.0, 0.8, allow_nan=False, allow_infinity=False)


# ---------------------------------------------------------------------------
# closed-form coefficients


def test_balanced_reference_coefficients():
    alpha, beta, gamma = s_coefficients(0.0, FIG3.inputs, FIG3.params)
    assert alpha == pytest.approx(9.0, rel=1e-12)
    assert beta == 0.0
    assert gamma == pytest.approx(8.0, rel=1e-12)


def test_alpha_scales_with_singularity_shift():
    alpha0, _, _ = s_coefficients(0.0, FIG3.inputs, FIG3.params)
    alpha25, _, _ = s_coefficients(0.25, FIG3.inputs, FIG3.params)
    assert alpha25 == pytest.approx(alpha0 * 0.75**2, rel=1e-12)


def test_theta1zero_reference_values():
    assert theta1zero_coeffs(FIG3.inputs, FIG3.params) == pytest.approx(
        (9.0, 4.0, 17.0, 17.0, 5.0), rel=1e-12
    )


def test_ns_closed_form_reference_value():
    val = ns_thermal_f00(0.1, FIG3.inputs, FIG3.params)
    assert val == pytest.approx(148.26520180376107, rel=1e-12)


def test_ns_closed_form_rejects_zero_shift():
    with pytest.raises(ValueError):
        ns_thermal_f00(0.0, FIG3.inputs, FIG3.params)


@given(n_a=occupations, n_b=occupations, theta1=theta1s)
@settings(max_examples=80, deadline=None)
def test_coefficient_positivity(n_a, n_b, theta1):
    inputs = InputSpec(n_a=n_a, n_b=n_b)
    alpha, beta, gamma = s_coefficients(theta1, inputs, FIG3.params)
    assert alpha >= 0.0 and gamma >= 0.0
    assert alpha * gamma >= beta**2 - 1e-12
    coeffs = closed_form_coefficients(inputs, FIG3.params, theta1=theta1)
    assert coeffs.alpha == alpha


def test_coefficients_match_fitted_powers():
    """Fit F00 = a/theta^4 + c/theta^2 on the response path and compare."""
    spec = perturbation("two_mode_symmetric")
    lam = effective_input_noise(FIG3.params, FIG3.inputs)
    thetas = np.geomspace(1e-3, 1e-2, 7)
    f00 = np.array(
        [
            qfim_response(
                direct_response(perturbed_generator(FIG3.params, [spec], [t])),
                [spec.phase_space],
                lam,
            )[0, 0]
            for t in thetas
        ]
    )
    # Fit theta^4 * F00 = a + c theta^2; the raw 1/theta^4 basis is too
    # ill-conditioned over a decade for the tolerance below.
    basis = np.column_stack([np.ones_like(thetas), thetas**2])
    fitted, *_ = np.linalg.lstsq(basis, thetas**4 * f00, rcond=None)
    coeffs = closed_form_coefficients(FIG3.inputs, FIG3.params)
    assert fitted[0] == pytest.approx(coeffs.alpha, rel=1e-6)
    assert fitted[1] == pytest.approx(coeffs.gamma, rel=1e-6)
    assert coeffs.alpha00 == pytest.approx(coeffs.alpha, rel=1e-12)


def test_error_asymptote_kinds():
    coeffs = closed_form_coefficients(FIG3.inputs, FIG3.params)
    assert error_asymptote("single_singular", coeffs) == pytest.approx(
        (2.0, 1.0 / 3.0), rel=1e-12
    )
    assert error_asymptote("nuisance_S", coeffs) == pytest.approx(
        (1.0, 8.0**-0.5), rel=1e-12
    )
    with pytest.raises(ValueError):
        error_asymptote("sideways", coeffs)


# ---------------------------------------------------------------------------
# sweeps


def test_registry_ids_and_grids():
    ids = figure_ids()
    assert "fig3" in ids and "fig5" in ids and "fig6" in ids
    assert FIG3.grid[0] == pytest.approx(1e-4) and FIG3.grid[-1] == pytest.approx(1.0)
    assert FIG3.grid.size == 60
    with pytest.raises(ValueError):
        figure_config("fig9")


def test_point_errors_finite_and_ordered():
    delta_c, delta_q, big_c, big_q = point_errors(
        FIG3.params,
        FIG3.inputs,
        perturbation("two_mode_symmetric"),
        1e-3,
    )
    assert delta_c >= delta_q > 0.0
    assert big_c == delta_c and big_q == delta_q


def test_classical_never_beats_quantum_on_fig3():
    for result in sweep_error(FIG3):
        mask = np.isfinite(result.delta_c)
        assert np.all(result.delta_c[mask] >= result.delta_q[mask] - 1e-9)
        assert np.all(
            result.big_delta_c[mask] >= result.big_delta_q[mask] - 1e-9
        )


def test_cross_path_consistency_all_singular_configs():
    """Truncated-series information within 1% of the exact-response path."""
    for fig_id in figure_ids():
        if fig_id == "fig5":
            continue
        cfg = figure_config(fig_id)
        if classify(cfg.params).det_m >= 1e-9:
            continue
        lam = effective_input_noise(cfg.params, cfg.inputs)
        for sweep in cfg.sweeps:
            base = perturbed_generator(cfg.params)
            if sweep.nuisance is not None:
                base = base + sweep.theta1 * sweep.nuisance.phase_space
            perts = [sweep.primary.phase_space]
            specs = [sweep.primary]
            if sweep.nuisance is not None:
                perts.append(sweep.nuisance.phase_space)
                specs.append(sweep.nuisance)
            exp = sm_expansion(
                MatrixFamily.linear(base, sweep.primary.phase_space)
            )
            theta0 = 1e-3
            series = qfim_asymptotic(exp, perts, lam, theta0)
            thetas = [theta0] + ([sweep.theta1] if sweep.nuisance else [])
            g = direct_response(perturbed_generator(cfg.params, specs, thetas))
            exact = qfim_response(g, perts, lam)
            rel = np.linalg.norm(series.matrix - exact.matrix) / np.linalg.norm(
                exact.matrix
            )
            assert rel < 1e-2, (fig_id, sweep.name, rel)


def test_fit_slope_recovers_power_law():
    theta = np.geomspace(1e-4, 1.0, 40)
    err = 5.0 * theta**2
    slope, pref = fit_slope(theta, err, (1e-4, 1e-1))
    assert slope == pytest.approx(2.0, abs=1e-9)
    assert pref == pytest.approx(5.0, rel=1e-9)


def test_fit_slope_ignores_nan_rows():
    theta = np.geomspace(1e-4, 1.0, 30)
    err = 3.0 * theta
    err[5] = np.nan
    slope, _ = fit_slope(theta, err, (1e-4, 1e-1))
    assert slope == pytest.approx(1.0, abs=1e-9)


def test_sweep_csv_round_trip(tmp_path):
    results = sweep_error(FIG3)
    path = tmp_path / "single.csv"
    write_sweep_csv(results[0], path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 1 + FIG3.grid.size
    first = rows[1]
    assert float(first[0]) == FIG3.grid[0]
    assert float(first[2]) == results[0].delta_q[0]
    assert first[5] in {"0", "1"} and first[6] == "1"


def test_verdict_bitwise_reproducible(tmp_path):
    a_dir, b_dir = tmp_path / "a", tmp_path / "b"
    va = reproduce_figure("fig6", a_dir)
    vb = reproduce_figure("fig6", b_dir)
    assert va == vb
    for name in ("fig6_plus.csv", "fig6_minus.csv", "fig6_verdict.json"):
        assert (a_dir / name).read_bytes() == (b_dir / name).read_bytes()


def test_fig3_verdict_structure(tmp_path):
    verdict = reproduce_figure("fig3", tmp_path)
    assert verdict["figure"] == "fig3"
    assert len(verdict["curves"]) == 6
    for curve in verdict["curves"]:
        assert {"name", "slope", "expected_slope", "pass"} <= set(curve)
        assert curve["pass"] is True
    meta = verdict["metadata"]
    assert meta["inputs"] == {"n_a": 1.0, "n_b": 1.0}
    assert meta["quantum_pipeline"] == "noisy"
    on_disk = json.loads((tmp_path / "fig3_verdict.json").read_text())
    assert on_disk == verdict


def test_fig5_panel_dichotomy(tmp_path):
    verdict = reproduce_figure("fig5", tmp_path)
    assert len(verdict["curves"]) == 12
    by_name = {c["name"]: c for c in verdict["curves"]}
    assert by_name["lt1a_two_mode"]["expected_slope"] == 2.0
    assert by_name["una_one_mode"]["expected_slope"] == 1.0
    assert "plateau_ratio" in by_name["unb_two_mode"]
    assert by_name["lt1b_two_mode"]["dip_near_unit_detuning"] is True
    assert by_name["lt2b_two_mode"]["dip_near_unit_detuning"] is True
    assert all(c["pass"] for c in verdict["curves"])
    assert verdict["metadata"]["panels"] == [
        "lt1a", "lt2a", "una", "lt1b", "lt2b", "unb",
    ]


def test_exact_sld_pipeline_agrees_midrange():
    """The scoring pipelines coincide where theta0 is not yet asymptotic."""
    delta_noisy = point_errors(
        FIG3.params, FIG3.inputs, perturbation("two_mode_symmetric"), 1e-2
    )[1]
    delta_sld = point_errors(
        FIG3.params,
        FIG3.inputs,
        perturbation("two_mode_symmetric"),
        1e-2,
        exact_qfim=True,
    )[1]
    assert delta_sld == pytest.approx(delta_noisy, rel=0.35)
    assert delta_sld >= delta_noisy


def test_unstable_plateau_panel_flags():
    results = sweep_error(figure_config("una"))
    assert all(not r.stable for r in results)
    assert all(r.singular for r in results)
    results = sweep_error(figure_config("unb"))
    assert all(not r.singular for r in results)
