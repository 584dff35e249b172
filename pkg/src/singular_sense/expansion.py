"""Laurent expansion of the response function around a singular point.

The response G = J M^{-1} with M = theta0 * N0 - Hs blows up as theta0 -> 0
whenever Hs is singular.  Writing A(theta0) = A0 + theta0 * A1 (+ higher
terms), the inverse admits a Laurent series

    A(theta0)^{-1} = theta0^{-s} * (X0 + X1 theta0 + X2 theta0^2 + ...),

whose pole order s and matrix coefficients X_k follow from the Sain-Massey
construction: stack the coefficients into block lower-triangular Toeplitz
"augmented" matrices A^(t) and find the smallest t at which the rank grows
by the full matrix dimension; the X_k then come out of a recursion on the
top block row of the pseudoinverse of A^(s).

For a regular family (A0 invertible) the plain Neumann series applies and
is provided separately, as is a diagnostic for the tempting-but-wrong
series in inverse powers of theta0, which terminates only when Hs * N0^{-1}
is nilpotent and otherwise diverges term by term.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import numerical_rank, pseudo_inverse, symplectic_form

__all__ = [
    "NotInvertibleFamilyError",
    "PoleAtZeroError",
    "MatrixFamily",
    "AugmentedMatrix",
    "LaurentExpansion",
    "SeriesDiagnostic",
    "augmented_matrix",
    "pole_order",
    "sm_expansion",
    "neumann_expansion",
    "evaluate",
    "direct_response",
    "inverse_series_diagnostic",
]

DEFAULT_RANK_TOL = 1e-10
TRIM_TOL = 1e-12
MAX_POLE_ORDER = 8

_J = symplectic_form(2)


class NotInvertibleFamilyError(np.linalg.LinAlgError):
    """No pole order up to the search cap; A(z) is singular as a family."""


class PoleAtZeroError(ZeroDivisionError):
    """A singular expansion cannot be evaluated at theta0 = 0."""


@dataclass(frozen=True)
class MatrixFamily:
    """Coefficients [A0, A1, ...] of the matrix polynomial A(z) = sum A_k z^k."""

    coeffs: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) == 0:
            raise ValueError("a matrix family needs at least A0")
        object.__setattr__(
            self, "coeffs", tuple(np.asarray(c, dtype=float) for c in self.coeffs)
        )

    @classmethod
    def linear(cls, a0: np.ndarray, a1: np.ndarray) -> "MatrixFamily":
        return cls((a0, a1))

    def term(self, k: int) -> np.ndarray:
        """A_k, treating missing coefficients as zero."""
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return np.zeros_like(self.coeffs[0])

    @property
    def dim(self) -> int:
        return self.coeffs[0].shape[0]


@dataclass(frozen=True)
class AugmentedMatrix:
    level: int
    matrix: np.ndarray

    def block(self, i: int, j: int) -> np.ndarray:
        n = self.matrix.shape[0] // (self.level + 1)
        return self.matrix[n * i : n * (i + 1), n * j : n * (j + 1)]


@dataclass(frozen=True)
class LaurentExpansion:
    """Truncated series theta0^{-s} sum_k X_k theta0^k for the inverse.

    When ``includes_symplectic_prefactor`` is true the coefficients are the
    bare inverse-series matrices and evaluation multiplies by J on the
    left; when false the J is already folded in (Neumann convention).
    """

    pole_order: int
    coeffs: tuple[np.ndarray, ...]
    includes_symplectic_prefactor: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "coeffs", tuple(np.asarray(c, dtype=float) for c in self.coeffs)
        )


def augmented_matrix(fam: MatrixFamily, t: int) -> AugmentedMatrix:
    """Block Toeplitz A^(t) with block (i, j) = A_{i-j} below the diagonal."""
    if t < 0:
        raise ValueError("level must be non-negative")
    n = fam.dim
    out = np.zeros(((t + 1) * n, (t + 1) * n))
    for i in range(t + 1):
        for j in range(i + 1):
            out[n * i : n * (i + 1), n * j : n * (j + 1)] = fam.term(i - j)
    return AugmentedMatrix(level=t, matrix=out)


def pole_order(fam: MatrixFamily, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    """Smallest t at which rank A^(t) - rank A^(t-1) reaches the dimension."""
    n = fam.dim
    prev = 0
    for t in range(MAX_POLE_ORDER + 1):
        rank = numerical_rank(augmented_matrix(fam, t).matrix, rel_tol=rel_tol)
        if rank - prev == n:
            return t
        prev = rank
    raise NotInvertibleFamilyError(
        f"rank never saturates up to level {MAX_POLE_ORDER}; "
        "the family appears singular for all z"
    )


def sm_expansion(
    fam: MatrixFamily,
    r_max: int = 6,
    rel_tol: float = DEFAULT_RANK_TOL,
) -> LaurentExpansion:
    """Sain-Massey inverse series of a singular matrix family.

    X0 is the top-right block of the pseudoinverse of A^(s); the higher
    coefficients follow from

        X_k = sum_j G_0j (delta_{j+k,s} Id - sum_{i>=1} A_{i+j} X_{k-i}),

    where G_0j are the top-row blocks of that pseudoinverse.  Trailing
    coefficients with negligible norm are trimmed, so families whose series
    terminates (such as a nilpotent A0 with A1 = Id) come out exact.
    """
    s = pole_order(fam, rel_tol=rel_tol)
    n = fam.dim
    pinv = pseudo_inverse(augmented_matrix(fam, s).matrix, rel_tol=rel_tol)
    g_row = [pinv[:n, n * j : n * (j + 1)] for j in range(s + 1)]

    coeffs = [g_row[s]]
    eye = np.eye(n)
    for k in range(1, r_max + 1):
        acc = np.zeros((n, n))
        for j in range(s + 1):
            term = eye * (1.0 if j + k == s else 0.0)
            for i in range(1, k + 1):
                a = fam.term(i + j)
                if a.any():
                    term = term - a @ coeffs[k - i]
            acc += g_row[j] @ term
        coeffs.append(acc)

    while len(coeffs) > 1 and np.linalg.norm(coeffs[-1]) < TRIM_TOL:
        coeffs.pop()
    return LaurentExpansion(pole_order=s, coeffs=tuple(coeffs))


def neumann_expansion(
    h: np.ndarray, n0: np.ndarray, order: int = 20
) -> LaurentExpansion:
    """Regular-point series G = sum_k theta0^k g_k, g_k = -J H^{-1} (N0 H^{-1})^k.

    Requires an invertible phase-space generator; singular generators need
    :func:`sm_expansion` instead.
    """
    h = np.asarray(h, dtype=float)
    if numerical_rank(h) < h.shape[0]:
        raise np.linalg.LinAlgError(
            "phase-space generator is singular; use sm_expansion"
        )
    h_inv = np.linalg.inv(h)
    step = np.asarray(n0, dtype=float) @ h_inv
    coeffs = []
    power = np.eye(h.shape[0])
    for _ in range(order + 1):
        coeffs.append(-_J @ h_inv @ power)
        power = power @ step
    while len(coeffs) > 1 and np.linalg.norm(coeffs[-1]) < TRIM_TOL:
        coeffs.pop()
    return LaurentExpansion(
        pole_order=0, coeffs=tuple(coeffs), includes_symplectic_prefactor=False
    )


def evaluate(exp: LaurentExpansion, theta0: float) -> np.ndarray:
    """Sum the series at theta0, including the J prefactor when flagged."""
    if exp.pole_order >= 1 and theta0 == 0.0:
        raise PoleAtZeroError(
            f"series has a pole of order {exp.pole_order} at theta0 = 0"
        )
    acc = np.zeros_like(exp.coeffs[0])
    for k, x in enumerate(exp.coeffs):
        acc = acc + x * theta0**k
    if exp.pole_order:
        acc = acc / theta0**exp.pole_order
    if exp.includes_symplectic_prefactor:
        acc = _J @ acc
    return acc


def direct_response(m: np.ndarray) -> np.ndarray:
    """Exact response G = J M^{-1}."""
    return _J @ np.linalg.inv(np.asarray(m, dtype=float))


@dataclass(frozen=True)
class SeriesDiagnostic:
    applicable: bool
    terminates: bool
    spectral_radius_divergent: bool


def inverse_series_diagnostic(h: np.ndarray, n0: np.ndarray) -> SeriesDiagnostic:
    """Judge the formal series for G in inverse powers of theta0.

    Expanding (theta0 N0 - Hs)^{-1} in 1/theta0 produces terms
    N0^{-1} (Hs N0^{-1})^k; the series is only meaningful when it
    terminates, i.e. when Hs N0^{-1} is nilpotent.  Otherwise the terms
    grow geometrically with the spectral radius and the small-theta0 limit
    does not exist.  Not applicable when N0 itself is singular.
    """
    n0 = np.asarray(n0, dtype=float)
    if numerical_rank(n0) < n0.shape[0]:
        return SeriesDiagnostic(
            applicable=False, terminates=False, spectral_radius_divergent=False
        )
    step = np.asarray(h, dtype=float) @ np.linalg.inv(n0)
    power = np.linalg.matrix_power(step, step.shape[0])
    terminates = bool(np.linalg.norm(power) < TRIM_TOL)
    radius = float(np.max(np.abs(np.linalg.eigvals(step))))
    return SeriesDiagnostic(
        applicable=True,
        terminates=terminates,
        spectral_radius_divergent=not terminates and radius > 0.0,
    )
