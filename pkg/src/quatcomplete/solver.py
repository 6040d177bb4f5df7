"""Proximal alternating minimization for quaternion tensor completion.

One iteration updates the four blocks in order:

  X  pin observed entries, blend the back-transformed Z elsewhere;
  Y  slice-wise singular value thresholding of a proximal center;
  Z  entry-wise damped Newton on a scalar quadratic-plus-nonlinearity;
  T  closed-form orthogonal Procrustes step.

Everything runs on the real embeddings; the quaternion result is extracted
once at the end together with the residual structure deviation. A monitor
can assert per-iteration sufficient decrease, observed-entry feasibility and
structure preservation; it is off by default and enabled in tests.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DivergenceError
from .qtensor import (
    QTensor3,
    RealTensor3,
    embed_mask,
    embed_tensor,
    mode3_product,
    unembed_tensor,
)
from .spectral import nuclear_norm, svd
from .transforms import (
    Activation,
    TransformMatrix,
    activation_apply,
    init_transform,
    procrustes_update,
)


class InfeasibleStateError(ValueError):
    """A state violates the pinned-entry or orthogonality constraints."""


@dataclass(frozen=True)
class SolverConfig:
    """Penalties, transform rank, and stopping controls.

    alpha weighs the transform-consistency fit, beta the nonlinearity fit;
    rho1..rho4 are the proximal damping weights of the four block updates.
    """

    alpha: float = 10.0
    beta: float = 10.0
    r: int = 5
    rho1: float = 1e-3
    rho2: float = 1e-3
    rho3: float = 1e-3
    rho4: float = 1e-3
    eps: float = 1e-4
    max_iters: int = 200
    newton_iters: int = 5
    newton_tol: float = 1e-10
    activation: Activation = field(default_factory=lambda: Activation("tanh"))

    def __post_init__(self):
        for name in ("alpha", "beta", "rho1", "rho2", "rho3", "rho4", "eps"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.r < 1:
            raise ValueError("transform rank must be at least 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.newton_iters < 1:
            raise ValueError("newton_iters must be at least 1")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    objective: float
    rel_change: float
    decrease_margin: float
    elapsed_s: float
    structure_dev: float | None = None


@dataclass(frozen=True)
class SolverState:
    """Current blocks (real embeddings), transform, and iteration history."""

    X: RealTensor3
    Z: RealTensor3
    Y: RealTensor3
    T: TransformMatrix
    iteration: int = 0
    history: tuple[IterationRecord, ...] = ()


def interpolate_missing(M: QTensor3, mask: np.ndarray) -> QTensor3:
    """Fill unobserved entries by linear interpolation along the tubes.

    Each (i, j) tube of each component plane is interpolated over its
    observed third-mode indices with constant extrapolation at the ends;
    tubes with no observation are filled with the plane's observed mean.
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != M.shape:
        raise ValueError("mask shape must match the tensor")
    if not mask.any():
        raise ValueError("mask has no observed entries")
    n1, n2, n3 = M.shape
    ks = np.arange(n3, dtype=float)
    out = []
    for plane in M.planes():
        filled = np.array(plane, dtype=float)
        observed_mean = plane[mask].mean()
        for i in range(n1):
            for j in range(n2):
                obs = mask[i, j, :]
                if obs.all():
                    continue
                if not obs.any():
                    filled[i, j, :] = observed_mean
                else:
                    filled[i, j, :] = np.interp(ks, ks[obs], plane[i, j, obs])
        out.append(filled)
    return QTensor3(*out)


def init_state(M: QTensor3, mask: np.ndarray, cfg: SolverConfig) -> SolverState:
    """Initial blocks: interpolated X, spectral T, transformed Z, Y = phi(Z)."""
    n3 = M.shape[2]
    if cfg.r > n3:
        raise ValueError(f"transform rank {cfg.r} exceeds tensor depth {n3}")
    X0 = embed_tensor(interpolate_missing(M, mask))
    T0 = init_transform(X0, cfg.r)
    Z0 = mode3_product(X0, T0.matrix)
    Y0 = activation_apply(Z0, cfg.activation)
    return SolverState(X=X0, Z=Z0, Y=Y0, T=T0)


def _check_feasible(state: SolverState, MR: np.ndarray, maskR: np.ndarray) -> None:
    pin_gap = 0.0
    if maskR.any():
        pin_gap = float(np.max(np.abs(state.X.data[maskR] - MR[maskR])))
    Tm = state.T.matrix
    ortho_gap = float(np.max(np.abs(Tm @ Tm.T - np.eye(Tm.shape[0]))))
    if pin_gap > 1e-8 or ortho_gap > 1e-8:
        raise InfeasibleStateError(
            f"infeasible state: pinned-entry gap {pin_gap:.3e}, "
            f"orthogonality gap {ortho_gap:.3e}"
        )


def objective(
    state: SolverState, MR: np.ndarray, mask: np.ndarray, cfg: SolverConfig
) -> float:
    """Relaxed objective in the real domain.

    (1/4) sum_i ||Y_i||_* + (alpha/8) ||X - Z x3 T^T||^2
    + (beta/8) ||Y - phi(Z)||^2, valid when the indicator constraints hold
    (they then contribute zero); raises InfeasibleStateError otherwise.
    """
    _check_feasible(state, MR, embed_mask(mask))
    nuc = sum(nuclear_norm(state.Y.frontal_slice(i)) for i in range(state.Y.depth))
    back = mode3_product(state.Z, state.T.matrix.T)
    fit_t = float(np.sum((state.X.data - back.data) ** 2))
    fit_n = float(
        np.sum((state.Y.data - cfg.activation.value(state.Z.data)) ** 2)
    )
    return nuc / 4.0 + cfg.alpha / 8.0 * fit_t + cfg.beta / 8.0 * fit_n


def update_X(
    state: SolverState, MR: np.ndarray, mask: np.ndarray, cfg: SolverConfig
) -> RealTensor3:
    """Pin observed entries to M; blend Z x3 T^T with the previous X elsewhere."""
    maskR = embed_mask(mask)
    back = mode3_product(state.Z, state.T.matrix.T)
    blend = (cfg.alpha * back.data + cfg.rho1 * state.X.data) / (
        cfg.alpha + cfg.rho1
    )
    return RealTensor3(np.where(maskR, MR, blend), state.X.qshape)


def _update_Y_with_nuclear(
    state: SolverState, cfg: SolverConfig
) -> tuple[RealTensor3, float]:
    """Slice-wise SVT of the proximal center; also returns (1/4) sum ||Y_i||_*.

    The shrunk singular values are the new Y's singular values, so the
    nuclear part of the objective comes out of the same decompositions.
    """
    c = cfg.beta + cfg.rho2
    tau = 1.0 / c
    phiZ = cfg.activation.value(state.Z.data)
    H = (cfg.beta * phiZ + cfg.rho2 * state.Y.data) / c
    out = np.empty_like(H)
    nuc = 0.0
    for i in range(H.shape[2]):
        res = svd(H[:, :, i])
        shrunk = np.maximum(res.singular_values - tau, 0.0)
        out[:, :, i] = (res.u * shrunk) @ res.v.T
        nuc += float(shrunk.sum())
    return RealTensor3(out, state.Y.qshape), nuc / 4.0


def update_Y(state: SolverState, cfg: SolverConfig) -> RealTensor3:
    return _update_Y_with_nuclear(state, cfg)[0]


def _scalar_objective(z, g, y, a, beta, phi: Activation):
    resid = phi.value(z) - y
    return (a / 8.0) * (z - g) ** 2 + (beta / 8.0) * resid * resid


def newton_minimize(
    z0: np.ndarray,
    g: np.ndarray,
    y: np.ndarray,
    a: float,
    beta: float,
    phi: Activation,
    iters: int,
    tol: float,
) -> np.ndarray:
    """Damped entry-wise Newton for (a/8)(z-g)^2 + (beta/8)(phi(z)-y)^2.

    The Gauss-Newton denominator a + beta phi'(z)^2 is at least a > 0; steps
    that would increase the objective are halved up to 20 times and rejected
    if still uphill, so no entry's objective increases beyond rounding noise.
    Uphill tests carry a relative slack so that rounding-level ties take the
    same branch for sign-mirrored entries, which keeps the iteration from
    amplifying structure deviations of the embedded inputs.
    """
    z = np.array(z0, dtype=float)
    hz = _scalar_objective(z, g, y, a, beta, phi)
    for _ in range(iters):
        resid = phi.value(z) - y
        slope = phi.derivative(z)
        grad = a * (z - g) + beta * resid * slope
        step = grad / (a + beta * slope * slope)
        if float(np.max(np.abs(step))) < tol:
            break
        cand = z - step
        hc = _scalar_objective(cand, g, y, a, beta, phi)
        slack = 1e-12 * hz
        for _halving in range(20):
            uphill = hc > hz + slack
            if not uphill.any():
                break
            step = np.where(uphill, 0.5 * step, step)
            cand = z - step
            hc = _scalar_objective(cand, g, y, a, beta, phi)
        keep = hc <= hz + slack
        z = np.where(keep, cand, z)
        hz = np.where(keep, np.minimum(hc, hz), hz)
    return z


def update_Z(state: SolverState, cfg: SolverConfig) -> RealTensor3:
    """Entry-wise Newton around the center G = (alpha X x3 T + rho3 Z) / (alpha + rho3)."""
    a = cfg.alpha + cfg.rho3
    forward = mode3_product(state.X, state.T.matrix)
    G = (cfg.alpha * forward.data + cfg.rho3 * state.Z.data) / a
    z = newton_minimize(
        state.Z.data,
        G,
        state.Y.data,
        a,
        cfg.beta,
        cfg.activation,
        cfg.newton_iters,
        cfg.newton_tol,
    )
    return RealTensor3(z, state.Z.qshape)


def update_T(state: SolverState, cfg: SolverConfig) -> TransformMatrix:
    return procrustes_update(state.Z, state.X, state.T, cfg.alpha, cfg.rho4)


def _theta_sq_distance(new: SolverState, old: SolverState) -> float:
    """Squared quaternion-domain distance between consecutive block tuples."""
    d = 0.0
    for a, b in ((new.X, old.X), (new.Y, old.Y), (new.Z, old.Z)):
        d += 0.25 * float(np.sum((a.data - b.data) ** 2))
    d += float(np.sum((new.T.matrix - old.T.matrix) ** 2))
    return d


def run_pam(
    M: QTensor3,
    mask: np.ndarray,
    cfg: SolverConfig,
    diagnostics: bool = False,
) -> tuple[QTensor3, list[IterationRecord], float]:
    """Run the full completion loop.

    Parameters
    ----------
    M : QTensor3
        Observed tensor; entries outside the mask are never read.
    mask : ndarray of bool
        True marks observed quaternion entries.
    cfg : SolverConfig
    diagnostics : bool
        When set, assert sufficient decrease, exact feasibility of the
        pinned entries, transform orthogonality, and record per-iteration
        structure deviations. Adds per-iteration cost.

    Returns
    -------
    (recovered, history, structure_dev)
        The quaternion tensor from the final X, the per-iteration records,
        and the final inverse-embedding structure deviation.
    """
    mask = np.asarray(mask, dtype=bool)
    state = init_state(M, mask, cfg)
    MR = embed_tensor(M).data
    maskR = embed_mask(mask)
    rho_min_half = 0.5 * min(cfg.rho1, cfg.rho2, cfg.rho3, cfg.rho4)
    f_prev = objective(state, MR, mask, cfg)

    history: list[IterationRecord] = []
    start = time.perf_counter()
    for k in range(1, cfg.max_iters + 1):
        old = state
        X = update_X(state, MR, mask, cfg)
        state = replace(state, X=X)
        Y, nuc = _update_Y_with_nuclear(state, cfg)
        state = replace(state, Y=Y)
        Z = update_Z(state, cfg)
        state = replace(state, Z=Z)
        T = update_T(state, cfg)
        state = replace(state, T=T, iteration=k)

        back = mode3_product(state.Z, state.T.matrix.T)
        fit_t = float(np.sum((state.X.data - back.data) ** 2))
        fit_n = float(
            np.sum((state.Y.data - cfg.activation.value(state.Z.data)) ** 2)
        )
        f_new = nuc + cfg.alpha / 8.0 * fit_t + cfg.beta / 8.0 * fit_n
        if not np.isfinite(f_new):
            raise DivergenceError(k, f_prev)

        denom = old.X.norm()
        diff = float(np.linalg.norm((state.X.data - old.X.data).ravel()))
        rel_change = diff / denom if denom > 0 else (0.0 if diff == 0 else np.inf)
        margin = f_prev - f_new - rho_min_half * _theta_sq_distance(state, old)

        struct_dev = None
        if diagnostics:
            slack = 1e-8 * (1.0 + abs(f_prev))
            if margin < -slack:
                raise AssertionError(
                    f"sufficient decrease violated at iteration {k}: "
                    f"margin {margin:.3e} < -{slack:.3e}"
                )
            if not np.array_equal(state.X.data[maskR], MR[maskR]):
                raise AssertionError(f"observed entries not pinned at iteration {k}")
            Tm = state.T.matrix
            ortho = float(np.max(np.abs(Tm @ Tm.T - np.eye(Tm.shape[0]))))
            if ortho > 1e-10:
                raise AssertionError(
                    f"transform rows lost orthonormality at iteration {k}: {ortho:.3e}"
                )
            struct_dev = max(
                state.X.structure_deviation(),
                state.Y.structure_deviation(),
                state.Z.structure_deviation(),
            )

        history.append(
            IterationRecord(
                iteration=k,
                objective=f_new,
                rel_change=rel_change,
                decrease_margin=margin,
                elapsed_s=time.perf_counter() - start,
                structure_dev=struct_dev,
            )
        )
        f_prev = f_new
        if rel_change < cfg.eps:
            break

    state = replace(state, history=tuple(history))
    recovered, dev = unembed_tensor(state.X)
    return recovered, history, dev
