"""Third-order quaternion tensors, mode-3 algebra, and tensor embeddings.

A quaternion tensor keeps four real planes of shape (n1, n2, n3); its real
embedding keeps one array of shape (4 n1, 4 n2, n3) whose frontal slices are
the block embeddings of the quaternion frontal slices. Masks are boolean per
quaternion entry and broadcast to all 16 block positions when projected in
the embedded domain, so an observed entry pins a whole quaternion and never
an individual real component.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quaternion import QMatrix, _assemble_blocks, _split_blocks


class QTensor3:
    """Quaternion third-order tensor stored as four real planes.

    Parameters
    ----------
    s, x, y, z : ndarray
        Real arrays of identical shape (n1, n2, n3).
    """

    __slots__ = ("s", "x", "y", "z")

    def __init__(self, s, x, y, z):
        s, x, y, z = (np.asarray(p, dtype=float) for p in (s, x, y, z))
        if not (s.shape == x.shape == y.shape == z.shape):
            raise ValueError("component planes must share one shape")
        if s.ndim != 3:
            raise ValueError("QTensor3 planes must be 3-D")
        self.s, self.x, self.y, self.z = s, x, y, z

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.s.shape

    @classmethod
    def zeros(cls, n1: int, n2: int, n3: int) -> "QTensor3":
        return cls(*(np.zeros((n1, n2, n3)) for _ in range(4)))

    def planes(self):
        return self.s, self.x, self.y, self.z

    def frontal_slice(self, i: int) -> QMatrix:
        return QMatrix(
            self.s[:, :, i], self.x[:, :, i], self.y[:, :, i], self.z[:, :, i]
        )

    def frobenius_norm(self) -> float:
        return float(np.sqrt(sum(np.sum(p * p) for p in self.planes())))

    def __add__(self, other: "QTensor3") -> "QTensor3":
        return QTensor3(
            self.s + other.s, self.x + other.x, self.y + other.y, self.z + other.z
        )

    def __sub__(self, other: "QTensor3") -> "QTensor3":
        return QTensor3(
            self.s - other.s, self.x - other.x, self.y - other.y, self.z - other.z
        )


@dataclass(frozen=True)
class RealTensor3:
    """Real working tensor of shape (4 n1, 4 n2, d) with its quaternion shape.

    Frontal slices may or may not satisfy the quaternion block structure;
    ``structure_deviation`` measures how far they stray.
    """

    data: np.ndarray
    qshape: tuple[int, int]

    def __post_init__(self):
        d = np.asarray(self.data, dtype=float)
        object.__setattr__(self, "data", d)
        n1, n2 = self.qshape
        if d.ndim != 3 or d.shape[0] != 4 * n1 or d.shape[1] != 4 * n2:
            raise ValueError(
                f"data shape {d.shape} inconsistent with quaternion shape {self.qshape}"
            )

    @property
    def depth(self) -> int:
        return self.data.shape[2]

    def frontal_slice(self, i: int) -> np.ndarray:
        return self.data[:, :, i]

    def norm(self) -> float:
        return float(np.linalg.norm(self.data.ravel()))

    def structure_deviation(self) -> float:
        """Largest deviation of any slice from the quaternion block structure."""
        _, _, _, _, dev = _split_blocks(self.data)
        return dev


def embed_tensor(A: QTensor3) -> RealTensor3:
    """Slice-wise block embedding; squared norm is 4x the quaternion one."""
    n1, n2, _ = A.shape
    return RealTensor3(_assemble_blocks(A.s, A.x, A.y, A.z), (n1, n2))


def unembed_tensor(R: RealTensor3) -> tuple[QTensor3, float]:
    """Slice-wise inverse embedding by signed averaging.

    Returns the quaternion tensor together with the maximum structure
    deviation across all slices; nothing is raised, so callers always get a
    quaternion result plus one diagnostics number.
    """
    s, x, y, z, dev = _split_blocks(R.data)
    return QTensor3(s, x, y, z), dev


def mode3_unfold(A) -> np.ndarray:
    """Mode-3 unfolding: row l is the vectorized l-th frontal slice."""
    arr = A.data if isinstance(A, RealTensor3) else np.asarray(A, dtype=float)
    if arr.ndim != 3:
        raise ValueError("mode-3 unfolding requires a third-order tensor")
    d = arr.shape[2]
    return np.moveaxis(arr, 2, 0).reshape(d, -1)


def mode3_fold(M: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`mode3_unfold` for slices of shape (rows, cols)."""
    d = M.shape[0]
    return np.moveaxis(M.reshape(d, rows, cols), 0, 2)


def mode3_product(A, D: np.ndarray):
    """Contract the third mode with the columns of a real matrix D (r x d).

    For quaternion tensors the product acts plane-wise because D is real, so
    embedding and mode-3 product commute. Returns the same kind as ``A`` with
    third dimension r.
    """
    D = np.asarray(D, dtype=float)
    if D.ndim != 2:
        raise ValueError("transform must be a matrix")
    if isinstance(A, QTensor3):
        if D.shape[1] != A.shape[2]:
            raise ValueError(f"transform columns {D.shape[1]} != depth {A.shape[2]}")
        return QTensor3(*(np.tensordot(p, D, axes=([2], [1])) for p in A.planes()))
    if isinstance(A, RealTensor3):
        if D.shape[1] != A.depth:
            raise ValueError(f"transform columns {D.shape[1]} != depth {A.depth}")
        return RealTensor3(np.tensordot(A.data, D, axes=([2], [1])), A.qshape)
    arr = np.asarray(A, dtype=float)
    if D.shape[1] != arr.shape[2]:
        raise ValueError(f"transform columns {D.shape[1]} != depth {arr.shape[2]}")
    return np.tensordot(arr, D, axes=([2], [1]))


def embed_mask(mask: np.ndarray) -> np.ndarray:
    """Broadcast a per-quaternion-entry mask to all 16 block positions."""
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 3:
        raise ValueError("mask must be a third-order boolean tensor")
    return np.tile(mask, (4, 4, 1))


def project_mask(A, M, mask: np.ndarray):
    """Combine observed entries of M with unobserved entries of A.

    Computes P(M) + Pc(A) where P keeps masked entries. Idempotent in A.
    """
    mask = np.asarray(mask, dtype=bool)
    if isinstance(A, QTensor3):
        if A.shape != M.shape or mask.shape != A.shape:
            raise ValueError("tensor and mask shapes must agree")
        return QTensor3(
            *(np.where(mask, pm, pa) for pa, pm in zip(A.planes(), M.planes()))
        )
    if isinstance(A, RealTensor3):
        if A.data.shape != M.data.shape:
            raise ValueError("tensor shapes must agree")
        big = embed_mask(mask)
        if big.shape != A.data.shape:
            raise ValueError("mask shape inconsistent with embedded tensors")
        return RealTensor3(np.where(big, M.data, A.data), A.qshape)
    A = np.asarray(A, dtype=float)
    M = np.asarray(M, dtype=float)
    if A.shape != M.shape or mask.shape != A.shape:
        raise ValueError("array and mask shapes must agree")
    return np.where(mask, M, A)
