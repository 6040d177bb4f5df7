import numpy as np
import pytest

from quatcomplete import (
    QMatrix,
    embed_full,
    mode3_product,
    nuclear_norm,
    q_nuclear_norm,
    qtsvt_slice,
    svd,
    svt,
)
from quatcomplete.spectral import group_quadruples
from conftest import q_orthonormal_columns, random_qmatrix, random_qtensor, random_semiorthogonal


def test_svd_identity():
    res = svd(np.eye(3))
    assert np.allclose(res.singular_values, np.ones(3))


def test_svd_diagonal():
    res = svd(np.diag([3.0, 2.0, 1.0]))
    assert np.allclose(res.singular_values, [3.0, 2.0, 1.0])
    assert np.allclose(np.abs(res.u), np.eye(3), atol=1e-12)
    assert np.allclose(np.abs(res.v), np.eye(3), atol=1e-12)
    assert np.allclose(res.u @ res.v.T, np.eye(3), atol=1e-12)


def test_svd_reconstruction_and_invariants(rng):
    A = rng.standard_normal((6, 4))
    res = svd(A)
    assert np.max(np.abs(res.reconstruct() - A)) < 1e-10 * np.max(np.abs(A))
    assert np.max(np.abs(res.u.T @ res.u - np.eye(4))) < 1e-10
    assert np.max(np.abs(res.v.T @ res.v - np.eye(4))) < 1e-10
    assert np.all(np.diff(res.singular_values) <= 0)


def test_svd_rejects_non_finite():
    bad = np.array([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(ValueError):
        svd(bad)


def test_q_nuclear_norm_zero_and_identity():
    assert q_nuclear_norm(QMatrix.zeros(3, 2)) == 0.0
    n = 4
    eye = QMatrix(np.eye(n), np.zeros((n, n)), np.zeros((n, n)), np.zeros((n, n)))
    assert q_nuclear_norm(eye) == pytest.approx(n, rel=1e-12)


def test_q_nuclear_norm_quadruple_grouping(rng):
    X = random_qmatrix(rng, 3, 3)
    sigma = np.linalg.svd(embed_full(X), compute_uv=False)
    reps, spread = group_quadruples(sigma)
    assert spread < 1e-8
    assert q_nuclear_norm(X) == pytest.approx(float(reps.sum()), rel=1e-10)


def test_svt_zero_threshold(rng):
    A = rng.standard_normal((4, 5))
    assert np.max(np.abs(svt(A, 0.0) - A)) < 1e-12


def test_svt_diagonal_shrink():
    out = svt(np.diag([3.0, 1.0]), 2.0)
    assert np.allclose(out, np.diag([1.0, 0.0]), atol=1e-12)


def test_svt_rejects_negative_threshold(rng):
    with pytest.raises(ValueError):
        svt(rng.standard_normal((2, 2)), -0.1)


def test_svt_local_optimality(rng):
    A = rng.standard_normal((5, 4))
    tau = 0.3
    Y = svt(A, tau)

    def objective(M):
        return tau * nuclear_norm(M) + 0.5 * np.sum((M - A) ** 2)

    base = objective(Y)
    for _ in range(200):
        probe = Y + 1e-3 * rng.standard_normal(Y.shape)
        assert objective(probe) >= base - 1e-12


def test_svt_nonexpansive(rng):
    for _ in range(20):
        A = rng.standard_normal((4, 4))
        B = rng.standard_normal((4, 4))
        tau = float(rng.uniform(0.05, 2.0))
        lhs = np.linalg.norm(svt(A, tau) - svt(B, tau))
        assert lhs <= np.linalg.norm(A - B) + 1e-12


def test_qtsvt_zero():
    out = qtsvt_slice(QMatrix.zeros(3, 2), 1.0, 0.5)
    assert out.frobenius_norm() == 0.0


def test_qtsvt_shrinks_quaternion_singular_values(rng):
    U = q_orthonormal_columns(rng, 5, 2)
    V = q_orthonormal_columns(rng, 4, 2)
    D = QMatrix(np.diag([3.0, 1.0]), np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 2)))
    from quatcomplete import qmat_multiply

    H = qmat_multiply(qmat_multiply(U, D), V.conjugate_transpose())
    sigma_h, _ = group_quadruples(np.linalg.svd(embed_full(H), compute_uv=False))
    assert np.allclose(sigma_h[:2], [3.0, 1.0], atol=1e-10)

    out = qtsvt_slice(H, beta=0.7, rho2=0.3)  # beta + rho2 = 1, tau = 1
    sigma_out, _ = group_quadruples(np.linalg.svd(embed_full(out), compute_uv=False))
    assert np.allclose(sigma_out[:2], [2.0, 0.0], atol=1e-10)


def test_qtsvt_vanishing_regularizer_limit(rng):
    U = q_orthonormal_columns(rng, 4, 2)
    V = q_orthonormal_columns(rng, 4, 2)
    D = QMatrix(np.eye(2), np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 2)))
    from quatcomplete import qmat_multiply

    H = qmat_multiply(qmat_multiply(U, D), V.conjugate_transpose())
    out = qtsvt_slice(H, beta=1e4, rho2=0.0)
    assert (out - H).frobenius_norm() < 1e-3


def test_qtsvt_scalar_oracle(rng):
    # 1x1 quaternion prox reduces to soft-thresholding of the modulus.
    for c in (0.5, 1.0, 2.0, 10.0):
        for _ in range(25):
            h = random_qmatrix(rng, 1, 1)
            q = h.item()
            mod = q.modulus()
            scale = max(1.0 - 1.0 / (c * mod), 0.0) if mod > 0 else 0.0
            out = qtsvt_slice(h, beta=c, rho2=0.0).item()
            for f in ("s", "x", "y", "z"):
                assert getattr(out, f) == pytest.approx(
                    scale * getattr(q, f), abs=1e-10
                )


def test_qtsvt_idempotent_shrink(rng):
    H = random_qmatrix(rng, 4, 3)
    beta, rho2 = 2.0, 1.0
    tau = 1.0 / (beta + rho2)
    once = qtsvt_slice(H, beta, rho2)
    twice = qtsvt_slice(once, beta, rho2)
    s_once, _ = group_quadruples(np.linalg.svd(embed_full(once), compute_uv=False))
    s_twice, _ = group_quadruples(np.linalg.svd(embed_full(twice), compute_uv=False))
    assert np.allclose(s_twice, np.maximum(s_once - tau, 0.0), atol=1e-10)


def test_qtsvt_requires_positive_weight(rng):
    with pytest.raises(ValueError):
        qtsvt_slice(random_qmatrix(rng, 2, 2), beta=0.0, rho2=0.0)


def test_transform_nuclear_norm_two_paths_agree(rng):
    X = random_qtensor(rng, 3, 4, 5)
    T = random_semiorthogonal(rng, 3, 5)
    W = mode3_product(X, T)
    quat_path = sum(q_nuclear_norm(W.frontal_slice(i)) for i in range(3))
    from quatcomplete import embed_tensor

    WR = embed_tensor(W)
    real_path = sum(nuclear_norm(WR.frontal_slice(i)) for i in range(3)) / 4.0
    assert quat_path == pytest.approx(real_path, rel=1e-10)
