"""Scikit-learn style estimator wrapping the completion solver.

The completer behaves like an imputer: ``fit`` runs the solver on an observed
tensor and ``transform`` returns the recovered tensor. Hyperparameters are
stored verbatim so ``get_params`` / ``set_params`` / ``clone`` work as usual.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .qtensor import QTensor3
from .solver import SolverConfig, run_pam
from .transforms import Activation


def as_qtensor(X) -> QTensor3:
    """Coerce a QTensor3 or an (n1, n2, n3, 4) array into a QTensor3.

    The trailing axis orders components as (s, x, y, z).
    """
    if isinstance(X, QTensor3):
        return X
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 4 or arr.shape[3] != 4:
        raise ValueError(
            f"expected QTensor3 or array of shape (n1, n2, n3, 4), got {arr.shape}"
        )
    return QTensor3(arr[..., 0], arr[..., 1], arr[..., 2], arr[..., 3])


def tensor_to_array(t: QTensor3) -> np.ndarray:
    """Stack component planes onto a trailing axis, inverse of as_qtensor."""
    return np.stack(t.planes(), axis=-1)


def resolve_mask(M: QTensor3, mask) -> tuple[QTensor3, np.ndarray]:
    """Validate or infer the observation mask.

    With ``mask=None``, entries where any component is NaN are treated as
    missing. Unobserved entries are zeroed so no stray values leak into the
    solver; observed entries must be finite.
    """
    if mask is None:
        nan_any = np.zeros(M.shape, dtype=bool)
        for p in M.planes():
            nan_any |= np.isnan(p)
        mask = ~nan_any
    else:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != M.shape:
            raise ValueError(
                f"mask shape {mask.shape} does not match tensor shape {M.shape}"
            )
    for p in M.planes():
        if not np.all(np.isfinite(p[mask])):
            raise ValueError("observed entries must be finite")
    cleaned = QTensor3(*(np.where(mask, p, 0.0) for p in M.planes()))
    return cleaned, mask


class QuaternionTensorCompleter(BaseEstimator, TransformerMixin):
    """Recover missing entries of a quaternion-valued third-order tensor.

    Parameters
    ----------
    alpha, beta : float
        Fit penalties for transform consistency and the nonlinearity link.
    r : int
        Transform row count (third-mode compression), r <= n3.
    rho : float
        Proximal damping used for all four block updates.
    eps : float
        Relative-change stopping tolerance.
    max_iters : int
        Iteration cap.
    activation : str
        One of tanh, sigmoid, relu, elu, swish.
    elu_alpha : float
        Negative-branch scale of elu.
    newton_iters, newton_tol : int, float
        Inner Newton controls for the Z block.
    diagnostics : bool
        Assert monotone decrease and feasibility every iteration.

    Attributes
    ----------
    tensor_ : QTensor3
        Recovered tensor.
    history_ : list
        Per-iteration records (objective, relative change, margins, time).
    structure_dev_ : float
        Inverse-embedding structure deviation of the final iterate.
    n_iter_ : int
        Iterations actually run.
    """

    def __init__(
        self,
        alpha: float = 10.0,
        beta: float = 10.0,
        r: int = 5,
        rho: float = 1e-3,
        eps: float = 1e-4,
        max_iters: int = 200,
        activation: str = "tanh",
        elu_alpha: float = 1.0,
        newton_iters: int = 5,
        newton_tol: float = 1e-10,
        diagnostics: bool = False,
    ):
        self.alpha = alpha
        self.beta = beta
        self.r = r
        self.rho = rho
        self.eps = eps
        self.max_iters = max_iters
        self.activation = activation
        self.elu_alpha = elu_alpha
        self.newton_iters = newton_iters
        self.newton_tol = newton_tol
        self.diagnostics = diagnostics

    def _config(self) -> SolverConfig:
        return SolverConfig(
            alpha=self.alpha,
            beta=self.beta,
            r=self.r,
            rho1=self.rho,
            rho2=self.rho,
            rho3=self.rho,
            rho4=self.rho,
            eps=self.eps,
            max_iters=self.max_iters,
            newton_iters=self.newton_iters,
            newton_tol=self.newton_tol,
            activation=Activation(self.activation, self.elu_alpha),
        )

    def fit(self, X, y=None, mask=None):
        """Run the solver on an observed tensor.

        X may be a QTensor3 or an (n1, n2, n3, 4) array; missing entries are
        given by ``mask`` (True = observed) or inferred from NaN components.
        """
        M, mask = resolve_mask(as_qtensor(X), mask)
        tensor, history, dev = run_pam(
            M, mask, self._config(), diagnostics=self.diagnostics
        )
        self.tensor_ = tensor
        self.history_ = history
        self.structure_dev_ = dev
        self.n_iter_ = len(history)
        return self

    def transform(self, X=None) -> np.ndarray:
        """Return the recovered tensor as an (n1, n2, n3, 4) array."""
        if not hasattr(self, "tensor_"):
            raise NotFittedError("call fit before transform")
        if X is not None:
            shape = as_qtensor(X).shape
            if shape != self.tensor_.shape:
                raise ValueError(
                    f"transform input shape {shape} differs from fitted "
                    f"shape {self.tensor_.shape}"
                )
        return tensor_to_array(self.tensor_)

    def fit_transform(self, X, y=None, mask=None) -> np.ndarray:
        return self.fit(X, mask=mask).transform()
