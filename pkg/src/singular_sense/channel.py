"""Gaussian input states and the frequency-domain input-output maps.

Quadratures are ordered (q1, q2, p1, p2) with vacuum covariance Id, so a
thermal state has V = (1 + 2*nbar) Id.  The probe enters through the
measured waveguide at rate kappa; the internal gain and loss baths enter
through the 4x8 coupling block Xi = (K_B1 | K_B2) acting on independent
thermal inputs at +/- the probe frequency.  The output means and
covariances follow from the response matrix G:

    S_out = (Id - kappa G) S_in
    V_out = (Id - kappa G) V_A (Id - kappa G)^T + kappa G Xi Vt_B Xi^T G^T

and derivatives with respect to the estimated parameters are obtained by
the product rule from dG (exact mode) or from the G-dominant form that
keeps only the terms quadratic in the diverging response.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import williamson
from .sensor import SensorParams

__all__ = [
    "InputSpec",
    "GaussianState",
    "thermal_input",
    "xi_matrix",
    "output_state",
    "output_derivatives",
    "dominant_output_derivatives",
    "effective_input_noise",
]


@dataclass(frozen=True)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=float))
        object.__setattr__(self, "cov", np.asarray(self.cov, dtype=float))

    def symplectic_eigenvalues(self) -> np.ndarray:
        return williamson(self.cov).values

    def is_physical(self, tol: float = 1e-9) -> bool:
        """Covariance admits a quantum state: symplectic eigenvalues >= 1."""
        try:
            values = self.symplectic_eigenvalues()
        except np.linalg.LinAlgError:
            return False
        return bool(np.all(values >= 1.0 - tol))


@dataclass(frozen=True)
class InputSpec:
    """Thermal occupations of the probe (A) and scattering (B) inputs."""

    n_a: float = 0.0
    n_b: float = 0.0
    displacement: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "displacement", np.asarray(self.displacement, dtype=float)
        )
        if self.n_a < 0 or self.n_b < 0:
            raise ValueError("thermal occupations must be non-negative")
        if self.displacement.shape != (4,):
            raise ValueError("displacement must be a 4-vector")


def thermal_input(spec: InputSpec) -> tuple[GaussianState, np.ndarray]:
    """Probe state and the 8x8 scattering-input covariance."""
    probe = GaussianState(
        mean=spec.displacement, cov=(1.0 + 2.0 * spec.n_a) * np.eye(4)
    )
    scatter_cov = (1.0 + 2.0 * spec.n_b) * np.eye(8)
    return probe, scatter_cov


def xi_matrix(p: SensorParams) -> np.ndarray:
    """Coupling block (K_B1 | K_B2) with K_B1 = diag(sqrt(eta1), 0, sqrt(eta1), 0)
    and K_B2 = diag(0, -sqrt(eta2), 0, sqrt(eta2))."""
    p.validate()
    r1 = np.sqrt(p.eta1)
    r2 = np.sqrt(p.eta2)
    k_b1 = np.diag([r1, 0.0, r1, 0.0])
    k_b2 = np.diag([0.0, -r2, 0.0, r2])
    return np.hstack([k_b1, k_b2])


def output_state(
    g_response: np.ndarray,
    p: SensorParams,
    probe: GaussianState,
    scatter_cov: np.ndarray,
) -> GaussianState:
    """Push the inputs through the sensor for a given response matrix."""
    filt = np.eye(4) - p.kappa * g_response
    xi = xi_matrix(p)
    cov = (
        filt @ probe.cov @ filt.T
        + p.kappa * g_response @ xi @ scatter_cov @ xi.T @ g_response.T
    )
    return GaussianState(mean=filt @ probe.mean, cov=cov)


def output_derivatives(
    g_response: np.ndarray,
    dg_list: list[np.ndarray],
    p: SensorParams,
    probe: GaussianState,
    scatter_cov: np.ndarray,
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Exact parameter derivatives of the output mean and covariance."""
    filt = np.eye(4) - p.kappa * g_response
    xi = xi_matrix(p)
    noise = xi @ scatter_cov @ xi.T
    dmeans = []
    dcovs = []
    for dg in dg_list:
        dmeans.append(-p.kappa * dg @ probe.mean)
        dcovs.append(
            -p.kappa * (dg @ probe.cov @ filt.T + filt @ probe.cov @ dg.T)
            + p.kappa * (dg @ noise @ g_response.T + g_response @ noise @ dg.T)
        )
    return dmeans, dcovs


def dominant_output_derivatives(
    g_response: np.ndarray,
    dg_list: list[np.ndarray],
    p: SensorParams,
    spec: InputSpec,
) -> list[np.ndarray]:
    """Covariance derivatives keeping only terms quadratic in the response.

    Near a singular point V_out is dominated by G Lambda G^T with the
    effective input noise Lambda, so dV ~= dG Lambda G^T + G Lambda dG^T.
    """
    lam = effective_input_noise(p, spec)
    return [dg @ lam @ g_response.T + g_response @ lam @ dg.T for dg in dg_list]


def effective_input_noise(p: SensorParams, spec: InputSpec) -> np.ndarray:
    """Lambda = kappa^2 V_A + kappa Xi Vt_B Xi^T, the noise seen by G."""
    xi = xi_matrix(p)
    v_a = (1.0 + 2.0 * spec.n_a) * np.eye(4)
    vt_b = (1.0 + 2.0 * spec.n_b) * np.eye(8)
    return p.kappa**2 * v_a + p.kappa * xi @ vt_b @ xi.T
