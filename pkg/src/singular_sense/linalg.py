"""Dense linear algebra on two-mode phase space.

Everything downstream works with 4x4 real matrices acting on the quadrature
vector (q1, q2, p1, p2), where q = b + b^dag and p = -i(b - b^dag), so the
vacuum covariance is the identity.  A complex 2x2 mode-space operator m is
lifted to its real phase-space image

    S(m) = [[Re m, -Im m],
            [Im m,  Re m]],

and the symplectic form is J = S(i * Id).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur


def phase_space_rep(m: np.ndarray) -> np.ndarray:
    """Real phase-space image of a complex n x n matrix.

    Satisfies det S(m) = |det m|^2, S(m1 m2) = S(m1) S(m2) and real
    linearity, which together make it a faithful embedding of the complex
    matrix algebra.
    """
    m = np.asarray(m, dtype=complex)
    return np.block([[m.real, -m.imag], [m.imag, m.real]])


def symplectic_form(n_modes: int = 2) -> np.ndarray:
    """Symplectic form J = S(i * Id) for `n_modes` modes; J^2 = -Id, J^T = -J."""
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    return phase_space_rep(1j * np.eye(n_modes))


def numerical_rank(m: np.ndarray, rel_tol: float = 1e-10) -> int:
    """Rank of `m` counting singular values above rel_tol * s_max.

    The tolerance is relative to the largest singular value, so the zero
    matrix has rank 0 and scaling `m` does not change the answer.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    s = np.linalg.svd(np.asarray(m, dtype=float), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))


def pseudo_inverse(m: np.ndarray, rel_tol: float = 1e-10) -> np.ndarray:
    """Moore-Penrose pseudoinverse with the same singular-value cutoff
    convention as :func:`numerical_rank`."""
    return np.linalg.pinv(np.asarray(m, dtype=float), rcond=rel_tol)


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Williamson decomposition of a covariance matrix.

    Attributes:
        matrix: symplectic congruence D with D J D^T = J.
        values: symplectic eigenvalues (v_1, ..., v_n), ascending.

    The diagonal form in the (q-block, p-block) ordering is
    diag(v_1, ..., v_n, v_1, ..., v_n), i.e. each v_k appears once in the
    q block and once in the p block, and V = D diag D^T.
    """

    matrix: np.ndarray
    values: np.ndarray

    def diagonal(self) -> np.ndarray:
        """The diagonal covariance D^-1 V D^-T as a full matrix."""
        return np.diag(np.concatenate([self.values, self.values]))


def williamson(v: np.ndarray, tol: float = 1e-10) -> SymplecticSpectrum:
    """Symplectic diagonalization of a positive-definite covariance matrix.

    Computes the eigenstructure of J V, whose eigenvalues come in pairs
    +/- i v_k.  Rather than pairing complex eigenvectors directly (fragile
    when v_k are degenerate, e.g. thermal V = nu * Id), the same spectrum is
    obtained from the real Schur form of the antisymmetric matrix
    V^(1/2) J V^(1/2), which is similar to J V and whose Schur blocks give
    the symplectic basis explicitly.

    Returns a :class:`SymplecticSpectrum` with D J D^T = J and
    V = D diag(v, v) D^T, values sorted ascending.
    """
    v = np.asarray(v, dtype=float)
    n2 = v.shape[0]
    if v.shape != (n2, n2) or n2 % 2:
        raise ValueError("covariance must be square with even dimension")
    if np.linalg.norm(v - v.T) > tol * max(1.0, np.linalg.norm(v)):
        raise ValueError("covariance must be symmetric")
    n = n2 // 2

    eigvals, eigvecs = np.linalg.eigh((v + v.T) / 2.0)
    if eigvals[0] <= 0.0:
        raise ValueError(
            f"covariance not positive definite (min eigenvalue {eigvals[0]:.3e})"
        )
    root = (eigvecs * np.sqrt(eigvals)) @ eigvecs.T

    j = symplectic_form(n)
    a = root @ j @ root  # antisymmetric, similar to J V
    t, q = schur(a, output="real")

    # The Schur form of an invertible antisymmetric matrix is block diagonal
    # with 2x2 blocks [[0, w], [-w, 0]]; flip each block's columns if needed
    # so that the upper-right entry is positive, then w = v_k.  Roundoff in
    # the Schur step is relative to the largest block, so the structure
    # checks must use the global scale, not the block's own size.
    a_scale = max(1.0, np.linalg.norm(a, 2))
    values = np.empty(n)
    for k in range(n):
        i0, i1 = 2 * k, 2 * k + 1
        w = t[i0, i1]
        if abs(w) <= tol * a_scale or abs(t[i1, i0] + w) > 100 * tol * a_scale:
            raise np.linalg.LinAlgError("unexpected Schur structure for J V")
        if w < 0:
            q[:, [i0, i1]] = q[:, [i1, i0]]
            w = -w
        values[k] = w

    order = np.argsort(values)
    values = values[order]
    pair_cols = np.empty(n2, dtype=int)
    for k, src in enumerate(order):
        pair_cols[2 * k : 2 * k + 2] = (2 * src, 2 * src + 1)
    q = q[:, pair_cols]

    # D in mode-pair ordering; the second column of each pair picks up a sign
    # so that the congruence maps the block form onto J, then columns are
    # reordered pairwise -> (all q, all p).
    scale = np.repeat(1.0 / np.sqrt(values), 2)
    d_pair = root @ q * scale
    d_pair[:, 1::2] *= -1.0
    cols = np.concatenate([np.arange(0, n2, 2), np.arange(1, n2, 2)])
    d = d_pair[:, cols]
    return SymplecticSpectrum(matrix=d, values=values)
