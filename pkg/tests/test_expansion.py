"""Sain-Massey and Neumann series of the inverse response."""

from __future__ import annotations

import numpy as np
import pytest

from singular_sense.expansion import (
    MatrixFamily,
    NotInvertibleFamilyError,
    PoleAtZeroError,
    augmented_matrix,
    direct_response,
    evaluate,
    neumann_expansion,
    pole_order,
    sm_expansion,
)
from singular_sense.linalg import symplectic_form
from singular_sense.sensor import SensorParams, perturbation, perturbed_generator

BALANCED_EP = SensorParams(g=1.0, gamma1=1.0, gamma2=1.0)

# the five perturbation rows of the scaling summary, in order
TABLE_ROWS = (
    ("two_mode_symmetric", 2),
    ("two_mode_asymmetric", 1),
    ("one_mode", 1),
    ("coupling", 1),
    ("nonreciprocal", 1),
)


def family(name: str, theta1: float = 0.0) -> MatrixFamily:
    base = perturbed_generator(BALANCED_EP)
    if theta1:
        base = base + theta1 * perturbation("nuisance_S").phase_space
    return MatrixFamily.linear(base, perturbation(name).phase_space)


def test_family_needs_a_leading_coefficient():
    with pytest.raises(ValueError):
        MatrixFamily(())


def test_augmented_matrix_blocks():
    fam = family("one_mode")
    aug = augmented_matrix(fam, 1)
    assert aug.matrix.shape == (8, 8)
    assert np.array_equal(aug.block(0, 0), fam.term(0))
    assert np.array_equal(aug.block(1, 0), fam.term(1))
    assert np.array_equal(aug.block(0, 1), np.zeros((4, 4)))


@pytest.mark.parametrize("name,order", TABLE_ROWS)
def test_pole_orders(name, order):
    assert pole_order(family(name)) == order


@pytest.mark.parametrize("rel_tol", [1e-12, 1e-10, 1e-8])
def test_pole_order_tolerance_invariance(rel_tol):
    orders = tuple(pole_order(family(n), rel_tol=rel_tol) for n, _ in TABLE_ROWS)
    assert orders == tuple(o for _, o in TABLE_ROWS)


def test_two_mode_coefficients_exact():
    exp = sm_expansion(family("two_mode_symmetric"))
    hbar = -perturbed_generator(BALANCED_EP)
    assert exp.pole_order == 2
    assert len(exp.coeffs) == 2
    assert np.abs(exp.coeffs[0] - hbar).max() < 1e-10
    assert np.abs(exp.coeffs[1] - np.eye(4)).max() < 1e-10
    assert exp.includes_symplectic_prefactor


def test_one_mode_coefficients_exact():
    exp = sm_expansion(family("one_mode"))
    x0 = np.array(
        [[1, 0, 0, -1], [0, -1, -1, 0], [0, 1, 1, 0], [1, 0, 0, -1]], dtype=float
    )
    x1 = np.array(
        [[0, 0, 0, 0], [0, 0, 0, -1], [0, 0, 0, 0], [0, 1, 0, 0]], dtype=float
    )
    assert exp.pole_order == 1
    assert len(exp.coeffs) == 2
    assert np.abs(exp.coeffs[0] - x0).max() < 1e-10
    assert np.abs(exp.coeffs[1] - x1).max() < 1e-10


def test_trimmed_series_terminate():
    # the balanced-EP families with Id and one-mode directions end at r = 1
    for name in ("two_mode_symmetric", "one_mode"):
        assert len(sm_expansion(family(name)).coeffs) == 2


@pytest.mark.parametrize("name,_", TABLE_ROWS)
def test_expansion_matches_direct_inverse(name, _):
    theta0 = 1e-3
    exp = sm_expansion(family(name))
    approx = evaluate(exp, theta0)
    spec = perturbation(name)
    exact = direct_response(perturbed_generator(BALANCED_EP, [spec], [theta0]))
    rel = np.linalg.norm(approx - exact) / np.linalg.norm(exact)
    assert rel < 1e-6


@pytest.mark.parametrize("theta1", [0.0, 0.25])
def test_expansion_matches_direct_inverse_with_s_nuisance(theta1):
    theta0 = 1e-3
    fam = family("two_mode_symmetric", theta1=theta1)
    exp = sm_expansion(fam)
    approx = evaluate(exp, theta0)
    m = fam.term(0) + theta0 * fam.term(1)
    exact = direct_response(m)
    rel = np.linalg.norm(approx - exact) / np.linalg.norm(exact)
    assert rel < 1e-6


def test_s_nuisance_preserves_double_pole():
    exp = sm_expansion(family("two_mode_symmetric", theta1=0.25))
    assert exp.pole_order == 2
    hbar = -perturbed_generator(BALANCED_EP)
    assert np.abs(exp.coeffs[0] - 0.75 * hbar).max() < 1e-10


def test_random_singular_family_inverse():
    rng = np.random.default_rng(41)
    for _ in range(10):
        u, _q = np.linalg.qr(rng.standard_normal((4, 4)))
        a0 = u @ np.diag([1.7, 0.9, 0.4, 0.0]) @ u.T
        fam = MatrixFamily.linear(a0, np.eye(4))
        exp = sm_expansion(fam)
        theta0 = 1e-4
        exact = direct_response(a0 + theta0 * np.eye(4))
        rel = np.linalg.norm(evaluate(exp, theta0) - exact) / np.linalg.norm(exact)
        assert rel < 1e-6


def test_evaluate_refuses_pole_at_zero():
    exp = sm_expansion(family("two_mode_symmetric"))
    with pytest.raises(PoleAtZeroError):
        evaluate(exp, 0.0)


def test_never_invertible_family():
    nil = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NotInvertibleFamilyError):
        pole_order(MatrixFamily((nil,)))


class TestNeumann:
    PARAMS = SensorParams(g=1.0, gamma1=2.0, gamma2=1.0)

    def test_rejects_singular_generator(self):
        with pytest.raises(np.linalg.LinAlgError):
            neumann_expansion(
                -perturbed_generator(BALANCED_EP), np.eye(4)
            )

    def test_matches_direct_inverse(self):
        m0 = perturbed_generator(self.PARAMS)
        exp = neumann_expansion(-m0, np.eye(4))
        assert exp.pole_order == 0
        theta0 = 0.05
        exact = direct_response(m0 + theta0 * np.eye(4))
        rel = np.linalg.norm(evaluate(exp, theta0) - exact) / np.linalg.norm(exact)
        assert rel < 1e-10

    def test_partial_sums_converge_monotonically(self):
        m0 = perturbed_generator(self.PARAMS)
        h = -m0
        n0 = np.eye(4)
        rho = np.max(np.abs(np.linalg.eigvals(n0 @ np.linalg.inv(h))))
        theta0 = 0.5 / rho
        exact = direct_response(m0 + theta0 * n0)
        errs = []
        for order in range(1, 9):
            exp = neumann_expansion(h, n0, order=order)
            errs.append(np.linalg.norm(evaluate(exp, theta0) - exact))
        assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_prefactor_convention_consistent_with_sm(self):
        # both paths must agree when a family is expandable either way:
        # compare at a regular point using the identity direction
        m0 = perturbed_generator(self.PARAMS)
        neu = neumann_expansion(-m0, np.eye(4))
        assert not neu.includes_symplectic_prefactor
        j = symplectic_form(2)
        assert np.allclose(neu.coeffs[0], j @ np.linalg.inv(m0), atol=1e-12)
