"""Quaternion scalars and matrices realized through a real block embedding.

A quaternion q = s + x i + y j + z k is stored as four real components and a
quaternion matrix as four real planes of one shape. Every product is carried
out on the 4x-larger real block representation

    [ S  -X  -Y  -Z ]
    [ X   S  -Z   Y ]
    [ Y   Z   S  -X ]
    [ Z  -Y   X   S ]

under which quaternion matrix products become ordinary real matrix products,
so a single battle-tested real linear algebra stack serves the whole library.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class StructureViolation(ValueError):
    """A real matrix strayed too far from the quaternion block structure."""

    def __init__(self, max_deviation: float):
        self.max_deviation = float(max_deviation)
        super().__init__(
            f"block structure deviation {self.max_deviation:.3e} exceeds tolerance"
        )


@dataclass(frozen=True)
class Quaternion:
    """A single quaternion s + x i + y j + z k."""

    s: float
    x: float
    y: float
    z: float

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.s, -self.x, -self.y, -self.z)

    def modulus(self) -> float:
        return float(np.sqrt(self.s**2 + self.x**2 + self.y**2 + self.z**2))

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        return hamilton_product(self, other)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(
            self.s + other.s, self.x + other.x, self.y + other.y, self.z + other.z
        )

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(
            self.s - other.s, self.x - other.x, self.y - other.y, self.z - other.z
        )


def hamilton_product(a: Quaternion, b: Quaternion) -> Quaternion:
    """Multiply two quaternions; non-commutative (i j = k but j i = -k)."""
    return Quaternion(
        a.s * b.s - a.x * b.x - a.y * b.y - a.z * b.z,
        a.s * b.x + a.x * b.s + a.y * b.z - a.z * b.y,
        a.s * b.y - a.x * b.z + a.y * b.s + a.z * b.x,
        a.s * b.z + a.x * b.y - a.y * b.x + a.z * b.s,
    )


class QMatrix:
    """Quaternion matrix stored as four real component planes.

    Parameters
    ----------
    s, x, y, z : ndarray
        Real matrices of identical shape (n1, n2) holding the scalar and the
        three vector components.
    """

    __slots__ = ("s", "x", "y", "z")

    def __init__(self, s: np.ndarray, x: np.ndarray, y: np.ndarray, z: np.ndarray):
        s, x, y, z = (np.asarray(p, dtype=float) for p in (s, x, y, z))
        if not (s.shape == x.shape == y.shape == z.shape):
            raise ValueError("component planes must share one shape")
        if s.ndim != 2:
            raise ValueError("QMatrix planes must be 2-D")
        self.s, self.x, self.y, self.z = s, x, y, z

    @property
    def shape(self) -> tuple[int, int]:
        return self.s.shape

    @classmethod
    def zeros(cls, n1: int, n2: int) -> "QMatrix":
        return cls(*(np.zeros((n1, n2)) for _ in range(4)))

    @classmethod
    def from_quaternion(cls, q: Quaternion) -> "QMatrix":
        return cls(*(np.array([[c]], dtype=float) for c in (q.s, q.x, q.y, q.z)))

    def item(self) -> Quaternion:
        """Return the sole entry of a 1x1 matrix as a Quaternion."""
        if self.shape != (1, 1):
            raise ValueError("item() requires a 1x1 matrix")
        return Quaternion(self.s[0, 0], self.x[0, 0], self.y[0, 0], self.z[0, 0])

    def conjugate_transpose(self) -> "QMatrix":
        return QMatrix(self.s.T, -self.x.T, -self.y.T, -self.z.T)

    def frobenius_norm(self) -> float:
        """Quaternion Frobenius norm: sqrt of the summed squared components."""
        return float(
            np.sqrt(sum(np.sum(p * p) for p in (self.s, self.x, self.y, self.z)))
        )

    def __add__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(
            self.s + other.s, self.x + other.x, self.y + other.y, self.z + other.z
        )

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(
            self.s - other.s, self.x - other.x, self.y - other.y, self.z - other.z
        )


def _assemble_blocks(s, x, y, z) -> np.ndarray:
    """Stack component arrays into the 4x4 signed block layout.

    Works for 2-D planes (matrices) and 3-D planes (slice-wise tensors);
    blocks are joined along the first two axes either way.
    """
    row0 = np.concatenate([s, -x, -y, -z], axis=1)
    row1 = np.concatenate([x, s, -z, y], axis=1)
    row2 = np.concatenate([y, z, s, -x], axis=1)
    row3 = np.concatenate([z, -y, x, s], axis=1)
    return np.concatenate([row0, row1, row2, row3], axis=0)


def _split_blocks(R: np.ndarray):
    """Invert the block layout by signed averaging over the four occurrences.

    Returns (s, x, y, z, max_deviation) where the deviation is the largest
    absolute gap between any single signed occurrence and its average. The
    averaging is the orthogonal projection back onto the embedded manifold,
    so slightly off-structure inputs are repaired rather than misread.
    """
    if R.shape[0] % 4 or R.shape[1] % 4:
        raise ValueError("embedded matrix dimensions must be divisible by 4")
    n1, n2 = R.shape[0] // 4, R.shape[1] // 4

    def blk(i, j):
        return R[i * n1 : (i + 1) * n1, j * n2 : (j + 1) * n2]

    groups = (
        (blk(0, 0), blk(1, 1), blk(2, 2), blk(3, 3)),
        (blk(1, 0), -blk(0, 1), blk(3, 2), -blk(2, 3)),
        (blk(2, 0), -blk(0, 2), blk(1, 3), -blk(3, 1)),
        (blk(3, 0), -blk(0, 3), blk(2, 1), -blk(1, 2)),
    )
    comps = []
    dev = 0.0
    for occ in groups:
        avg = (occ[0] + occ[1] + occ[2] + occ[3]) / 4.0
        for o in occ:
            d = np.max(np.abs(o - avg)) if avg.size else 0.0
            dev = max(dev, float(d))
        comps.append(avg)
    return comps[0], comps[1], comps[2], comps[3], dev


def embed_full(X: QMatrix) -> np.ndarray:
    """Full block embedding of a quaternion matrix, shape (4 n1, 4 n2).

    The map is a ring homomorphism: products of embeddings are embeddings of
    quaternion products. Its Frobenius norm is twice the quaternion one.
    """
    return _assemble_blocks(X.s, X.x, X.y, X.z)


def embed_col(X: QMatrix) -> np.ndarray:
    """Column-stacked embedding [s; x; y; z], shape (4 n1, n2).

    Norm-preserving: the real Frobenius norm of the stack equals the
    quaternion Frobenius norm of X.
    """
    return np.concatenate([X.s, X.x, X.y, X.z], axis=0)


def unembed_full(R: np.ndarray, tol: float = 1e-8) -> QMatrix:
    """Recover a QMatrix from a (4 n1, 4 n2) real matrix.

    Components are signed averages over their four block occurrences.

    Raises
    ------
    StructureViolation
        If any occurrence deviates from its average by more than ``tol``,
        meaning the input is not (close to) a valid embedding.
    """
    s, x, y, z, dev = _split_blocks(np.asarray(R, dtype=float))
    if dev > tol:
        raise StructureViolation(dev)
    return QMatrix(s, x, y, z)


def qmat_multiply(X: QMatrix, Z: QMatrix) -> QMatrix:
    """Quaternion matrix product, computed plane-wise via Hamilton's rules."""
    if X.shape[1] != Z.shape[0]:
        raise ValueError(
            f"inner dimensions differ: {X.shape} x {Z.shape}"
        )
    return QMatrix(
        X.s @ Z.s - X.x @ Z.x - X.y @ Z.y - X.z @ Z.z,
        X.s @ Z.x + X.x @ Z.s + X.y @ Z.z - X.z @ Z.y,
        X.s @ Z.y - X.x @ Z.z + X.y @ Z.s + X.z @ Z.x,
        X.s @ Z.z + X.x @ Z.y - X.y @ Z.x + X.z @ Z.s,
    )
