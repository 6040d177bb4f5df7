"""Reconstruction quality metrics for quaternion tensors.

PSNR follows the convention of aggregating all color channels inside one
quaternion Frobenius norm with a single peak range taken over the reference
tensor's nonzero component planes; a conventional per-channel-MSE PSNR
differs from it by a constant offset. SSIM is the standard single-scale
index evaluated per frame and RGB channel on the x/y/z planes.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.ndimage import correlate1d

from .qtensor import QTensor3

_SSIM_WINDOW = 11
_SSIM_SIGMA = 1.5
_SSIM_K1 = 0.01
_SSIM_K2 = 0.03


def rse(Xhat: QTensor3, X0: QTensor3) -> float:
    """Relative squared error ||Xhat - X0||_F / ||X0||_F."""
    if Xhat.shape != X0.shape:
        raise ValueError("tensor shapes must agree")
    denom = X0.frobenius_norm()
    if denom == 0.0:
        raise ValueError("reference tensor is zero")
    return (Xhat - X0).frobenius_norm() / denom


def psnr(Xhat: QTensor3, X0: QTensor3) -> float:
    """Peak signal-to-noise ratio in dB.

    Uses 10 log10(n1 n2 n3 (m1 - m2)^2 / err^2) with err the quaternion
    Frobenius error norm and m1, m2 the max and min over the nonzero
    component planes of the reference. Returns +inf for an exact match.
    """
    if Xhat.shape != X0.shape:
        raise ValueError("tensor shapes must agree")
    live = [p for p in X0.planes() if np.any(p != 0.0)]
    if not live:
        raise ValueError("reference tensor is constant (all zero)")
    m1 = max(float(p.max()) for p in live)
    m2 = min(float(p.min()) for p in live)
    if m1 == m2:
        raise ValueError("reference tensor is constant")
    err2 = sum(float(np.sum(d * d)) for d in (Xhat - X0).planes())
    if err2 == 0.0:
        return math.inf
    n = float(np.prod(X0.shape))
    return 10.0 * math.log10(n * (m1 - m2) ** 2 / err2)


def _gaussian_kernel1d() -> np.ndarray:
    half = _SSIM_WINDOW // 2
    t = np.arange(-half, half + 1, dtype=float)
    g = np.exp(-(t * t) / (2.0 * _SSIM_SIGMA**2))
    return g / g.sum()


def _window_mean(img: np.ndarray, g: np.ndarray) -> np.ndarray:
    # Separable 11x11 Gaussian, valid region only (crop half-window borders).
    half = _SSIM_WINDOW // 2
    t = correlate1d(img, g, axis=0, mode="constant")
    t = correlate1d(t, g, axis=1, mode="constant")
    return t[half:-half, half:-half]


def _ssim_channel(a: np.ndarray, b: np.ndarray, g: np.ndarray) -> float:
    c1 = _SSIM_K1**2
    c2 = _SSIM_K2**2
    mu_a = _window_mean(a, g)
    mu_b = _window_mean(b, g)
    var_a = _window_mean(a * a, g) - mu_a * mu_a
    var_b = _window_mean(b * b, g) - mu_b * mu_b
    cov = _window_mean(a * b, g) - mu_a * mu_b
    num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


def ssim(Xhat: QTensor3, X0: QTensor3) -> float:
    """Mean structural similarity over frames.

    Per frame and per RGB channel (the x/y/z planes): 11x11 Gaussian window
    with sigma 1.5, K1 = 0.01, K2 = 0.03, dynamic range 1.0; channel values
    are averaged per frame, then frames are averaged.
    """
    if Xhat.shape != X0.shape:
        raise ValueError("tensor shapes must agree")
    n1, n2, n3 = X0.shape
    if min(n1, n2) < _SSIM_WINDOW:
        raise ValueError(
            f"frames must be at least {_SSIM_WINDOW}x{_SSIM_WINDOW} for SSIM"
        )
    g = _gaussian_kernel1d()
    frame_vals = []
    for k in range(n3):
        chans = [
            _ssim_channel(pa[:, :, k], pb[:, :, k], g)
            for pa, pb in (
                (Xhat.x, X0.x),
                (Xhat.y, X0.y),
                (Xhat.z, X0.z),
            )
        ]
        frame_vals.append(np.mean(chans))
    return float(np.mean(frame_vals))
