import numpy as np
import pytest

from quatcomplete import QMatrix, QTensor3, hamilton_product, qmat_multiply


def random_qmatrix(rng, n1, n2):
    return QMatrix(*rng.standard_normal((4, n1, n2)))


def random_qtensor(rng, n1, n2, n3):
    return QTensor3(*rng.standard_normal((4, n1, n2, n3)))


def random_semiorthogonal(rng, r, n):
    """Random T (r x n) with orthonormal rows, r <= n."""
    q, _ = np.linalg.qr(rng.standard_normal((n, r)))
    return q.T


def reference_qmat_multiply(X: QMatrix, Z: QMatrix) -> QMatrix:
    """Entry-wise sums of Hamilton products; slow oracle for qmat_multiply."""
    n1, m = X.shape
    _, n2 = Z.shape
    out = QMatrix.zeros(n1, n2)
    for i in range(n1):
        for k in range(n2):
            acc = None
            for j in range(m):
                term = hamilton_product(_entry(X, i, j), _entry(Z, j, k))
                acc = term if acc is None else acc + term
            out.s[i, k], out.x[i, k], out.y[i, k], out.z[i, k] = (
                acc.s,
                acc.x,
                acc.y,
                acc.z,
            )
    return out


def _entry(X: QMatrix, i, j):
    from quatcomplete import Quaternion

    return Quaternion(X.s[i, j], X.x[i, j], X.y[i, j], X.z[i, j])


def q_orthonormal_columns(rng, n, k):
    """QMatrix (n x k) with quaternion-orthonormal columns via Gram-Schmidt."""
    cols = []
    while len(cols) < k:
        v = random_qmatrix(rng, n, 1)
        for u in cols:
            coef = qmat_multiply(u.conjugate_transpose(), v)  # 1x1 quaternion
            v = v - qmat_multiply(u, coef)
        norm = v.frobenius_norm()
        if norm < 1e-8:
            continue
        cols.append(
            QMatrix(v.s / norm, v.x / norm, v.y / norm, v.z / norm)
        )
    return QMatrix(
        np.hstack([c.s for c in cols]),
        np.hstack([c.x for c in cols]),
        np.hstack([c.y for c in cols]),
        np.hstack([c.z for c in cols]),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
