"""Reproducible sampling: masks and synthetic low-rank quaternion tensors.

Randomness comes from a counter-based splitmix64 stream, a fully specified
integer recurrence, so masks and synthetic data are bit-identical across
platforms and languages for one seed. numpy generators are deliberately not
used here; their streams are implementation details of numpy versions.
"""

from __future__ import annotations

import numpy as np

from .qtensor import QTensor3

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


class SplitMix64:
    """Counter-based splitmix64 stream of uniforms and normals.

    Output word for counter i is mix(seed + i * 0x9E3779B97F4A7C15) with the
    standard xor-shift-multiply finalizer; uniforms take the top 53 bits.
    """

    def __init__(self, seed: int):
        self._seed = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self._counter = 0

    def _words(self, n: int) -> np.ndarray:
        idx = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        z = self._seed + idx * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))

    def uniforms(self, n: int) -> np.ndarray:
        """n doubles in [0, 1)."""
        return (self._words(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def normals(self, n: int) -> np.ndarray:
        """n standard normals via Box-Muller on consecutive uniform pairs."""
        m = (n + 1) // 2
        u1 = self.uniforms(m)
        u2 = self.uniforms(m)
        radius = np.sqrt(-2.0 * np.log1p(-u1))
        angle = 2.0 * np.pi * u2
        out = np.empty(2 * m)
        out[0::2] = radius * np.cos(angle)
        out[1::2] = radius * np.sin(angle)
        return out[:n]


def sample_mask(shape: tuple[int, int, int], rate: float, seed: int) -> np.ndarray:
    """Bernoulli(rate) observation mask, one draw per quaternion entry.

    Parameters
    ----------
    shape : tuple of int
        Tensor shape (n1, n2, n3).
    rate : float
        Observation probability, in (0, 1]. rate = 1 observes everything.
    seed : int
        Stream seed; equal seeds give identical masks on any platform.
    """
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"sampling rate must lie in (0, 1], got {rate}")
    n = int(np.prod(shape))
    u = SplitMix64(seed).uniforms(n).reshape(shape)
    return u < rate


def synth_lowrank(
    n1: int, n2: int, n3: int, slice_rank: int, seed: int
) -> QTensor3:
    """Synthetic pure-quaternion tensor with every frontal slice of rank <= s.

    Each slice is A @ C_k + d_k * (i + j + k) * ones: a shared pure-quaternion
    left factor A (n1 x (s-1), components standard normal) times a per-slice
    real right factor mixed from a few random basis factors, plus a per-slice
    constant. One rank dimension is reserved for the constant, so the final
    affine normalization of the x/y/z planes into [0, 1] folds into it and
    cannot raise the slice rank. The scalar plane is identically zero, which
    matches the pure RGB encoding and lets the tensor round-trip through
    frame files.
    """
    if slice_rank < 1:
        raise ValueError("slice rank must be at least 1")
    if slice_rank > min(n1, n2):
        raise ValueError(
            f"slice rank {slice_rank} exceeds min(n1, n2) = {min(n1, n2)}"
        )
    stream = SplitMix64(seed)
    inner = slice_rank - 1
    n_mix = min(n3, slice_rank + 1)

    planes = [np.zeros((n1, n2, n3)) for _ in range(3)]
    if inner > 0:
        # Shared pure left factor: one (n1, inner) block per vector component.
        A = [stream.normals(n1 * inner).reshape(n1, inner) for _ in range(3)]
        basis = [
            stream.normals(inner * n2).reshape(inner, n2) for _ in range(n_mix)
        ]
        weights = stream.normals(n3 * n_mix).reshape(n3, n_mix)
        mixed = np.einsum("km,mrj->rjk", weights, np.stack(basis))
        for c in range(3):
            planes[c] = np.einsum("ir,rjk->ijk", A[c], mixed)
    dc = stream.normals(n3)
    for c in range(3):
        planes[c] = planes[c] + dc[None, None, :]

    lo = min(p.min() for p in planes)
    hi = max(p.max() for p in planes)
    if hi > lo:
        planes = [(p - lo) / (hi - lo) for p in planes]
    else:
        planes = [np.full((n1, n2, n3), 0.5) for _ in range(3)]
    return QTensor3(np.zeros((n1, n2, n3)), *planes)
