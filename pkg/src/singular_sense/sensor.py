"""Two-mode cavity sensor: dynamical generator, regimes, and perturbations.

The sensor is a pair of coupled bosonic modes with gain on mode 1 and loss
on mode 2, described in the frequency domain by the non-Hermitian generator

    H = [[-i*gamma1, g], [g, +i*gamma2]],

with coupling rate g and effective half-widths gamma1 = (eta1 + kappa)/2,
gamma2 = (eta2 - kappa)/2.  The probe waveguide couples at rate kappa, so
the bath rates eta1 = 2*gamma1 - kappa and eta2 = 2*gamma2 + kappa must be
non-negative for the model to be physical.

Everything downstream is controlled by a handful of regime conditions:

* singular:     det H = gamma1*gamma2 - g^2 = 0
* PT-symmetric: gamma1 = gamma2 and g >= (gamma1 + gamma2)/2
* exceptional:  g = (gamma1 + gamma2)/2 (eigenvalues and eigenvectors merge)
* stable:       both eigenvalues of -iH decay, i.e. Im(lambda) < 0, which
                reduces to gamma2 < min(gamma1, g^2/gamma1)

Parametrised perturbations enter as H -> H - sum_i theta_i * n_i with 2x2
direction matrices n_i; in phase space the response is read off from
M = (omega - omega0) Id - Hs + sum_i theta_i Ns_i, where Hs, Ns_i are the
4x4 real representations from :mod:`singular_sense.linalg`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import phase_space_rep

__all__ = [
    "PhysicalityError",
    "AtThresholdError",
    "SensorParams",
    "EigenData",
    "RegimeReport",
    "SteadyState",
    "PerturbationSpec",
    "build_generator",
    "eigensystem",
    "classify",
    "lasing_threshold",
    "steady_state_occupations",
    "singular_detunings",
    "perturbation",
    "perturbation_names",
    "perturbed_generator",
]

REGIME_TOL = 1e-9

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


class PhysicalityError(ValueError):
    """Parameters violate eta1 >= 0 or eta2 >= 0."""


class AtThresholdError(ArithmeticError):
    """Steady-state denominator vanishes identically (lasing threshold)."""


@dataclass(frozen=True)
class SensorParams:
    """Canonical sensor parameters.

    The bath rates are derived quantities: eta1 = 2*gamma1 - kappa and
    eta2 = 2*gamma2 + kappa.
    """

    g: float
    gamma1: float
    gamma2: float
    kappa: float = 1.0
    omega0: float = 0.0
    omega: float = 0.0

    @property
    def eta1(self) -> float:
        return 2.0 * self.gamma1 - self.kappa

    @property
    def eta2(self) -> float:
        return 2.0 * self.gamma2 + self.kappa

    @property
    def gamma_plus(self) -> float:
        return 0.5 * (self.gamma2 + self.gamma1)

    @property
    def gamma_minus(self) -> float:
        return 0.5 * (self.gamma2 - self.gamma1)

    @property
    def detuning(self) -> float:
        return self.omega - self.omega0

    def validate(self) -> None:
        if self.g < 0 or self.gamma1 < 0 or self.gamma2 < 0 or self.kappa < 0:
            raise PhysicalityError(
                "rates g, gamma1, gamma2, kappa must be non-negative"
            )
        if self.eta1 < 0 or self.eta2 < 0:
            raise PhysicalityError(
                f"bath rates must be non-negative: eta1={self.eta1}, eta2={self.eta2}"
            )


@dataclass(frozen=True)
class EigenData:
    """Eigenvalues and unnormalised eigenvectors of the 2x2 generator."""

    lambda_plus: complex
    lambda_minus: complex
    e_plus: np.ndarray
    e_minus: np.ndarray


@dataclass(frozen=True)
class RegimeReport:
    is_singular: bool
    is_pt_symmetric: bool
    is_ep: bool
    is_balanced: bool
    is_stable: bool
    at_lasing_threshold: bool
    det_m: float


@dataclass(frozen=True)
class SteadyState:
    """Mean occupations of the two modes, or an instability marker."""

    stable: bool
    n1: float | None = None
    n2: float | None = None


@dataclass(frozen=True)
class PerturbationSpec:
    """A named 2x2 perturbation direction and its phase-space image."""

    name: str
    matrix: np.ndarray
    phase_space: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "phase_space", phase_space_rep(np.asarray(self.matrix, dtype=complex))
        )


_PERTURBATIONS: dict[str, np.ndarray] = {
    "two_mode_symmetric": np.eye(2, dtype=complex),
    "two_mode_asymmetric": _SIGMA_Z,
    "one_mode": np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex),
    "coupling": _SIGMA_X,
    "nonreciprocal": np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex),
    "nuisance_NS": _SIGMA_X,
    "nuisance_S": _SIGMA_X - 1j * _SIGMA_Z,
}


def build_generator(p: SensorParams) -> np.ndarray:
    """Return the 2x2 complex generator H for validated parameters."""
    p.validate()
    return np.array(
        [[-1j * p.gamma1, p.g], [p.g, 1j * p.gamma2]], dtype=complex
    )


def eigensystem(h: np.ndarray) -> EigenData:
    """Eigenvalues lambda_pm = i*gamma_minus +/- sqrt(g^2 - gamma_plus^2)
    and the matching unnormalised eigenvectors (-i*gamma_plus +/- sqrt, g).

    At an exceptional point the square root vanishes and both pairs
    coalesce; the returned vectors are then parallel.
    """
    gamma1 = -h[0, 0].imag
    gamma2 = h[1, 1].imag
    g = h[0, 1].real
    gamma_plus = 0.5 * (gamma2 + gamma1)
    gamma_minus = 0.5 * (gamma2 - gamma1)
    root = np.sqrt(complex(g * g - gamma_plus * gamma_plus))
    lam_p = 1j * gamma_minus + root
    lam_m = 1j * gamma_minus - root
    e_p = np.array([-1j * gamma_plus + root, g], dtype=complex)
    e_m = np.array([-1j * gamma_plus - root, g], dtype=complex)
    return EigenData(lam_p, lam_m, e_p, e_m)


def lasing_threshold(p: SensorParams) -> float:
    """Critical loss rate gamma2_LT = min(gamma1, g^2/gamma1)."""
    if p.gamma1 == 0.0:
        return 0.0
    return min(p.gamma1, p.g * p.g / p.gamma1)


def classify(p: SensorParams, tol: float = REGIME_TOL) -> RegimeReport:
    """Compute all regime flags and the phase-space determinant det M.

    det M is evaluated at the configured detuning omega - omega0 with no
    perturbations switched on; it equals |det((omega-omega0) Id - H)|^2.
    """
    h = build_generator(p)
    eig = eigensystem(h)
    det_h = p.gamma1 * p.gamma2 - p.g * p.g
    lam = p.detuning
    det2 = np.linalg.det(lam * np.eye(2) - h)
    im_max = max(eig.lambda_plus.imag, eig.lambda_minus.imag)
    return RegimeReport(
        is_singular=bool(abs(det_h) < tol),
        is_pt_symmetric=bool(abs(p.gamma_minus) < tol and p.g >= p.gamma_plus - tol),
        is_ep=bool(abs(p.g - p.gamma_plus) < tol),
        is_balanced=bool(abs(p.gamma1 - p.gamma2) < tol),
        is_stable=bool(im_max < -tol),
        at_lasing_threshold=bool(abs(im_max) <= tol),
        det_m=float(abs(det2) ** 2),
    )


def steady_state_occupations(p: SensorParams) -> SteadyState:
    """Mean steady-state photon numbers of the two modes.

    n1 = g^2 gamma2 / ((gamma1-gamma2)(g^2 - gamma1 gamma2)) and
    n2 = ((g^2 - gamma1 gamma2) + g^2 gamma2) / (same denominator).
    Both diverge as gamma2 approaches the lasing threshold from below and
    the stationary state ceases to exist above it, where an unstable
    marker is returned instead.  A denominator that vanishes identically
    raises :class:`AtThresholdError`.
    """
    p.validate()
    denom = (p.gamma1 - p.gamma2) * (p.g * p.g - p.gamma1 * p.gamma2)
    if denom == 0.0:
        raise AtThresholdError(
            "steady-state occupations diverge at the lasing threshold"
        )
    if p.gamma2 > lasing_threshold(p):
        return SteadyState(stable=False)
    n1 = p.g * p.g * p.gamma2 / denom
    n2 = ((p.g * p.g - p.gamma1 * p.gamma2) + p.g * p.g * p.gamma2) / denom
    if n1 < 0 or n2 < 0:
        return SteadyState(stable=False)
    return SteadyState(stable=True, n1=n1, n2=n2)


def singular_detunings(p: SensorParams, tol: float = REGIME_TOL) -> list[float]:
    """Detunings omega - omega0 at which det M vanishes.

    These are the real eigenvalues of H: none exist for an unbalanced,
    non-singular generator; a singular generator always admits 0; a
    balanced generator beyond the exceptional point admits the pair
    +/- sqrt(g^2 - gamma^2).
    """
    eig = eigensystem(build_generator(p))
    found: list[float] = []
    for lam in (eig.lambda_minus, eig.lambda_plus):
        if abs(lam.imag) < tol:
            if not any(abs(lam.real - v) < tol for v in found):
                found.append(float(lam.real))
    return sorted(found)


def perturbation(name: str) -> PerturbationSpec:
    """Look up a named perturbation direction."""
    try:
        mat = _PERTURBATIONS[name]
    except KeyError:
        raise ValueError(
            f"unknown perturbation {name!r}; choose from {sorted(_PERTURBATIONS)}"
        ) from None
    return PerturbationSpec(name=name, matrix=mat)


def perturbation_names() -> list[str]:
    return sorted(_PERTURBATIONS)


def perturbed_generator(
    p: SensorParams,
    specs: list[PerturbationSpec] = (),
    thetas: list[float] = (),
) -> np.ndarray:
    """Assemble M = (omega - omega0) Id - Hs + sum_i theta_i Ns_i.

    The response function is J M^{-1}, see
    :func:`singular_sense.expansion.direct_response`.
    """
    if len(specs) != len(thetas):
        raise ValueError(
            f"{len(specs)} perturbations but {len(thetas)} parameter values"
        )
    m = p.detuning * np.eye(4) - phase_space_rep(build_generator(p))
    for spec, theta in zip(specs, thetas):
        m = m + theta * spec.phase_space
    return m
