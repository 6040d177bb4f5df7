"""Dense SVD, quaternion nuclear norm, and singular value thresholding.

Quaternion spectra are read off the full block embedding: every quaternion
singular value shows up four times among the real singular values of the
embedded matrix, so the quaternion nuclear norm is one quarter of the real
one and quaternion singular value shrinkage reduces to real shrinkage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quaternion import QMatrix, embed_full, unembed_full


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD A = U diag(s) V^T with p = min(m, n) columns."""

    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.singular_values) @ self.v.T


def svd(A: np.ndarray) -> SvdResult:
    """Thin SVD of a real matrix with finite entries."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError("svd expects a matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("svd input contains non-finite entries")
    u, s, vt = np.linalg.svd(A, full_matrices=False)
    return SvdResult(u, s, vt.T)


def nuclear_norm(A: np.ndarray) -> float:
    """Sum of singular values of a real matrix."""
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise ValueError("nuclear norm input contains non-finite entries")
    return float(np.sum(np.linalg.svd(A, compute_uv=False)))


def q_nuclear_norm(X: QMatrix) -> float:
    """Quaternion nuclear norm: one quarter of the embedded nuclear norm.

    The embedded singular values come in quadruples of equal value, one
    quadruple per quaternion singular value, so the division by four returns
    exactly the sum of quaternion singular values.
    """
    return nuclear_norm(embed_full(X)) / 4.0


def group_quadruples(sigma: np.ndarray, rel_floor: float = 1e-12):
    """Split embedded singular values into quadruples.

    Returns (representatives, max_relative_spread). Values below
    ``rel_floor`` times the largest singular value are treated as zero when
    measuring the spread.
    """
    sigma = np.sort(np.asarray(sigma, dtype=float))[::-1]
    if sigma.size % 4:
        raise ValueError("embedded spectrum length must be a multiple of 4")
    top = sigma[0] if sigma.size else 0.0
    quads = sigma.reshape(-1, 4)
    reps = quads.mean(axis=1)
    if top <= 0.0:
        return reps, 0.0
    spread = quads[:, 0] - quads[:, 3]
    live = quads[:, 0] > rel_floor * top
    max_spread = float(spread[live].max()) if live.any() else 0.0
    return reps, max_spread / top


def svt(A: np.ndarray, tau: float) -> np.ndarray:
    """Soft-threshold the singular values of A by tau.

    Exact minimizer of tau * ||Y||_* + 0.5 * ||Y - A||_F^2.
    """
    if tau < 0:
        raise ValueError("threshold must be nonnegative")
    res = svd(A)
    shrunk = np.maximum(res.singular_values - tau, 0.0)
    return (res.u * shrunk) @ res.v.T


def qtsvt_slice(H: QMatrix, beta: float, rho2: float) -> QMatrix:
    """Proximal step for the quaternion nuclear norm of one slice.

    Minimizes ||Y||_*^Q + (beta + rho2)/2 * ||Y - H||_F^Q,2 by thresholding
    the embedded singular values at 1 / (beta + rho2); the output embedding
    stays structured because shrinkage is a spectral function of the
    structured input.
    """
    c = beta + rho2
    if c <= 0:
        raise ValueError("beta + rho2 must be positive")
    R = svt(embed_full(H), 1.0 / c)
    return unembed_full(R, tol=np.inf)
