"""Element-wise nonlinearities, semi-orthogonal transforms, and their updates.

The composite transform first contracts the third tensor mode with a real
semi-orthogonal matrix T (rows orthonormal, r <= n3), then applies a scalar
nonlinearity to every entry of the real embedding. Odd nonlinearities (tanh)
preserve the quaternion block structure exactly; the others do not, which is
measurable and is surfaced as a structure deviation rather than hidden.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .qtensor import QTensor3, RealTensor3, embed_tensor, mode3_product, mode3_unfold
from .spectral import nuclear_norm

ACTIVATION_NAMES = ("tanh", "sigmoid", "relu", "elu", "swish")


@dataclass(frozen=True)
class Activation:
    """Scalar nonlinearity applied element-wise in the real domain.

    ``elu_alpha`` only affects the elu branch for nonpositive inputs.
    """

    name: str
    elu_alpha: float = 1.0

    def __post_init__(self):
        if self.name not in ACTIVATION_NAMES:
            raise ValueError(
                f"unknown activation {self.name!r}; choose from {ACTIVATION_NAMES}"
            )

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.name == "tanh":
            return np.tanh(x)
        if self.name == "sigmoid":
            return expit(x)
        if self.name == "relu":
            return np.maximum(x, 0.0)
        if self.name == "elu":
            return np.where(x > 0, x, self.elu_alpha * np.expm1(np.minimum(x, 0.0)))
        sig = expit(x)
        return x * sig

    def derivative(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.name == "tanh":
            t = np.tanh(x)
            return 1.0 - t * t
        if self.name == "sigmoid":
            sig = expit(x)
            return sig * (1.0 - sig)
        if self.name == "relu":
            return (x > 0).astype(float)
        if self.name == "elu":
            return np.where(x > 0, 1.0, self.elu_alpha * np.exp(np.minimum(x, 0.0)))
        sig = expit(x)
        return sig + x * sig * (1.0 - sig)

    __call__ = value


def get_activation(name: str, elu_alpha: float = 1.0) -> Activation:
    return Activation(name, elu_alpha)


def activation_apply(A, phi: Activation):
    """Apply the nonlinearity element-wise; same kind and shape out."""
    if isinstance(A, RealTensor3):
        return RealTensor3(phi.value(A.data), A.qshape)
    return phi.value(np.asarray(A, dtype=float))


def activation_derivative(A, phi: Activation):
    if isinstance(A, RealTensor3):
        return RealTensor3(phi.derivative(A.data), A.qshape)
    return phi.derivative(np.asarray(A, dtype=float))


@dataclass(frozen=True)
class TransformMatrix:
    """Real semi-orthogonal transform T (r x n3) with T T^T = I_r."""

    matrix: np.ndarray
    ortho_tol: float = 1e-10

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2:
            raise ValueError("transform must be a matrix")
        r, n3 = m.shape
        if r > n3:
            raise ValueError(f"row dimension {r} exceeds column dimension {n3}")
        gap = np.max(np.abs(m @ m.T - np.eye(r)))
        if gap > self.ortho_tol:
            raise ValueError(f"rows not orthonormal: residual {gap:.3e}")

    @property
    def r(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_in(self) -> int:
        return self.matrix.shape[1]


def init_transform(X0: RealTensor3, r: int) -> TransformMatrix:
    """Transform initialization from the top mode-3 subspace of X0.

    Rows of the result are the leading r left singular vectors of the mode-3
    unfolding, obtained from the (small) n3 x n3 Gram matrix of the unfolding
    so the wide factor is never materialized.
    """
    n3 = X0.depth
    if not (1 <= r <= n3):
        raise ValueError(f"transform rank {r} must satisfy 1 <= r <= {n3}")
    unf = mode3_unfold(X0)
    gram = unf @ unf.T
    w, v = np.linalg.eigh(gram)
    top = v[:, ::-1][:, :r]
    return TransformMatrix(top.T)


def composite_transform(X: QTensor3, T: TransformMatrix, phi: Activation) -> RealTensor3:
    """Nonlinear composite: embed(X x3 T) passed through the nonlinearity."""
    return activation_apply(embed_tensor(mode3_product(X, T.matrix)), phi)


def nonlinear_transform_nuclear_norm(
    X: QTensor3, T: TransformMatrix, phi: Activation
) -> float:
    """Sum of quaternion nuclear norms of the nonlinearly transformed slices.

    Diagnostic value only; the completion solver minimizes the relaxed
    objective rather than this quantity directly.
    """
    W = composite_transform(X, T, phi)
    return sum(nuclear_norm(W.frontal_slice(i)) for i in range(W.depth)) / 4.0


def procrustes_update(
    Z: RealTensor3,
    X: RealTensor3,
    T_prev: TransformMatrix,
    alpha: float,
    rho4: float,
) -> TransformMatrix:
    """Closed-form transform update as an orthogonal Procrustes problem.

    Builds the coupling D = (alpha / 4) * unfold3(Z) unfold3(X)^T
    + rho4 * T_prev and returns the polar factor U V^T of its thin SVD, the
    semi-orthogonal maximizer of the trace coupling.
    """
    if Z.qshape != X.qshape:
        raise ValueError("Z and X must share the quaternion face shape")
    if Z.depth != T_prev.r or X.depth != T_prev.n_in:
        raise ValueError(
            f"depths ({Z.depth}, {X.depth}) inconsistent with transform "
            f"({T_prev.r} x {T_prev.n_in})"
        )
    D = (alpha / 4.0) * (mode3_unfold(Z) @ mode3_unfold(X).T) + rho4 * T_prev.matrix
    u, _, vt = np.linalg.svd(D, full_matrices=False)
    return TransformMatrix(u @ vt)
