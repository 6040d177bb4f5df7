import numpy as np
import pytest

from quatcomplete import (
    ACTIVATION_NAMES,
    Activation,
    QTensor3,
    RealTensor3,
    TransformMatrix,
    activation_apply,
    activation_derivative,
    composite_transform,
    embed_tensor,
    get_activation,
    init_transform,
    mode3_product,
    mode3_unfold,
    nonlinear_transform_nuclear_norm,
    procrustes_update,
    q_nuclear_norm,
    unembed_tensor,
)
from conftest import random_qtensor, random_semiorthogonal

AT_ZERO = {"tanh": 0.0, "sigmoid": 0.5, "relu": 0.0, "elu": 0.0, "swish": 0.0}


def test_activation_values_at_zero():
    z = np.zeros(3)
    for name, expected in AT_ZERO.items():
        out = get_activation(name).value(z)
        assert np.allclose(out, expected)


def test_activation_unknown_name():
    with pytest.raises(ValueError):
        Activation("softplus")


def test_tanh_derivative_at_zero_and_relu_negative():
    assert get_activation("tanh").derivative(np.array([0.0]))[0] == 1.0
    assert get_activation("relu").derivative(np.array([-1.0]))[0] == 0.0


@pytest.mark.parametrize("name", ACTIVATION_NAMES)
def test_derivative_matches_finite_differences(rng, name):
    act = get_activation(name)
    x = rng.uniform(-3.0, 3.0, size=100)
    if name == "relu":
        x = x[np.abs(x) >= 1e-3]
    h = 1e-6
    fd = (act.value(x + h) - act.value(x - h)) / (2 * h)
    assert np.max(np.abs(fd - act.derivative(x))) < 1e-6


def test_elu_alpha_scales_negative_branch():
    x = np.array([-1.0])
    a1 = get_activation("elu", elu_alpha=1.0).value(x)[0]
    a2 = get_activation("elu", elu_alpha=2.0).value(x)[0]
    assert a2 == pytest.approx(2 * a1, rel=1e-12)


def test_tanh_preserves_embedding_structure(rng):
    A = random_qtensor(rng, 2, 3, 4)
    out = activation_apply(embed_tensor(A), get_activation("tanh"))
    assert out.structure_deviation() == 0.0


@pytest.mark.parametrize("name", ["sigmoid", "relu", "elu", "swish"])
def test_non_odd_activations_break_structure(rng, name):
    # a pure-i entry embeds with both +x and -x occurrences; non-odd maps
    # send them to asymmetric values
    A = QTensor3.zeros(1, 1, 1)
    A.x[0, 0, 0] = 1.0
    out = activation_apply(embed_tensor(A), get_activation(name))
    assert out.structure_deviation() > 1e-3


def test_activation_apply_plain_arrays(rng):
    x = rng.standard_normal((3, 3))
    act = get_activation("sigmoid")
    assert np.array_equal(activation_apply(x, act), act.value(x))
    assert np.array_equal(activation_derivative(x, act), act.derivative(x))


def test_transform_matrix_validation(rng):
    with pytest.raises(ValueError):
        TransformMatrix(np.ones((2, 3)))
    with pytest.raises(ValueError):
        TransformMatrix(np.eye(4)[:, :3])  # 4x3: more rows than columns
    T = TransformMatrix(random_semiorthogonal(rng, 2, 5))
    assert T.r == 2 and T.n_in == 5


def test_init_transform_square_case(rng):
    A = random_qtensor(rng, 3, 3, 4)
    T = init_transform(embed_tensor(A), 4)
    M = T.matrix
    assert np.max(np.abs(M @ M.T - np.eye(4))) < 1e-10
    assert np.max(np.abs(M.T @ M - np.eye(4))) < 1e-10


def test_init_transform_rank_one(rng):
    u = rng.standard_normal(5)
    u /= np.linalg.norm(u)
    v = rng.standard_normal(16 * 2 * 3)
    unf = np.outer(u, v)  # rank-1 mode-3 unfolding (n3=5)
    data = np.moveaxis(unf.reshape(5, 8, 12), 0, 2)
    X0 = RealTensor3(data, (2, 3))
    T = init_transform(X0, 1)
    row = T.matrix[0]
    sign = np.sign(row @ u)
    assert np.max(np.abs(sign * row - u)) < 1e-10


def test_init_transform_semi_orthogonal_random(rng):
    A = random_qtensor(rng, 3, 4, 6)
    T = init_transform(embed_tensor(A), 3)
    M = T.matrix
    assert np.linalg.norm(M @ M.T - np.eye(3)) < 1e-10


def test_init_transform_rank_bounds(rng):
    A = random_qtensor(rng, 2, 2, 3)
    with pytest.raises(ValueError):
        init_transform(embed_tensor(A), 4)


def test_composite_transform_zero_input(rng):
    X = QTensor3.zeros(2, 3, 4)
    T = TransformMatrix(random_semiorthogonal(rng, 2, 4))
    for name in ("tanh", "relu", "swish"):
        out = composite_transform(X, T, get_activation(name))
        assert np.all(out.data == 0.0)


def test_composite_transform_structured_under_tanh(rng):
    X = random_qtensor(rng, 2, 3, 5)
    T = TransformMatrix(random_semiorthogonal(rng, 3, 5))
    out = composite_transform(X, T, get_activation("tanh"))
    assert out.structure_deviation() == 0.0


def test_composite_transform_identity_small_input(rng):
    X = random_qtensor(rng, 2, 2, 3)
    tiny = QTensor3(*(1e-7 * p for p in X.planes()))
    T = TransformMatrix(np.eye(3))
    out = composite_transform(tiny, T, get_activation("tanh"))
    target = embed_tensor(tiny).data
    assert np.max(np.abs(out.data - target)) < 1e-6 * np.max(np.abs(target))


def test_transform_nuclear_norm_zero(rng):
    T = TransformMatrix(random_semiorthogonal(rng, 2, 4))
    assert nonlinear_transform_nuclear_norm(
        QTensor3.zeros(2, 3, 4), T, get_activation("tanh")
    ) == 0.0


def test_transform_nuclear_norm_linearizes_for_tiny_input(rng):
    X = random_qtensor(rng, 3, 3, 4)
    small = QTensor3(*(1e-4 * p / np.max(np.abs(p)) for p in X.planes()))
    T = TransformMatrix(random_semiorthogonal(rng, 2, 4))
    nonlinear = nonlinear_transform_nuclear_norm(small, T, get_activation("tanh"))
    W = mode3_product(small, T.matrix)
    linear = sum(q_nuclear_norm(W.frontal_slice(i)) for i in range(2))
    assert nonlinear == pytest.approx(linear, rel=1e-4)


def test_transform_nuclear_norm_monotone_scaling(rng):
    T = TransformMatrix(random_semiorthogonal(rng, 2, 4))
    act = get_activation("tanh")
    for _ in range(10):
        planes = [np.abs(rng.standard_normal((3, 3, 4))) for _ in range(1)]
        X = QTensor3(planes[0], *(np.zeros((3, 3, 4)) for _ in range(3)))
        lo = nonlinear_transform_nuclear_norm(X, T, act)
        hi = nonlinear_transform_nuclear_norm(
            QTensor3(1.7 * X.s, X.x, X.y, X.z), T, act
        )
        assert hi >= lo - 1e-12


def test_procrustes_fixed_point():
    T_prev = TransformMatrix(np.hstack([np.eye(2), np.zeros((2, 3))]))
    Z = RealTensor3(np.zeros((4, 4, 2)), (1, 1))
    X = RealTensor3(np.zeros((4, 4, 5)), (1, 1))
    out = procrustes_update(Z, X, T_prev, alpha=1.0, rho4=0.5)
    assert np.allclose(out.matrix, T_prev.matrix, atol=1e-12)


def test_procrustes_output_semi_orthogonal(rng):
    Z = RealTensor3(rng.standard_normal((8, 8, 3)), (2, 2))
    X = RealTensor3(rng.standard_normal((8, 8, 6)), (2, 2))
    T_prev = TransformMatrix(random_semiorthogonal(rng, 3, 6))
    out = procrustes_update(Z, X, T_prev, alpha=2.0, rho4=0.001)
    M = out.matrix
    assert np.max(np.abs(M @ M.T - np.eye(3))) < 1e-10


def test_procrustes_beats_random_competitors(rng):
    alpha, rho4 = 2.0, 0.01
    Z = RealTensor3(rng.standard_normal((8, 8, 3)), (2, 2))
    X = RealTensor3(rng.standard_normal((8, 8, 6)), (2, 2))
    T_prev = TransformMatrix(random_semiorthogonal(rng, 3, 6))
    D = (alpha / 4.0) * (mode3_unfold(Z) @ mode3_unfold(X).T) + rho4 * T_prev.matrix
    out = procrustes_update(Z, X, T_prev, alpha, rho4)
    best = float(np.sum(out.matrix * D))
    for _ in range(100):
        comp = random_semiorthogonal(rng, 3, 6)
        assert float(np.sum(comp * D)) <= best + 1e-10


def test_procrustes_does_not_increase_subproblem(rng):
    alpha, rho4 = 2.0, 0.01

    def subproblem(Tm, Z, X, T_prev):
        fit = np.sum((mode3_unfold(X) - Tm.T @ mode3_unfold(Z)) ** 2)
        prox = np.sum((Tm - T_prev.matrix) ** 2)
        return alpha / 8.0 * fit + rho4 / 2.0 * prox

    for _ in range(10):
        Z = RealTensor3(rng.standard_normal((8, 8, 3)), (2, 2))
        X = RealTensor3(rng.standard_normal((8, 8, 6)), (2, 2))
        T_prev = TransformMatrix(random_semiorthogonal(rng, 3, 6))
        out = procrustes_update(Z, X, T_prev, alpha, rho4)
        assert subproblem(out.matrix, Z, X, T_prev) <= subproblem(
            T_prev.matrix, Z, X, T_prev
        ) + 1e-10


def test_procrustes_shape_validation(rng):
    Z = RealTensor3(rng.standard_normal((8, 8, 4)), (2, 2))
    X = RealTensor3(rng.standard_normal((8, 8, 6)), (2, 2))
    T_prev = TransformMatrix(random_semiorthogonal(rng, 3, 6))
    with pytest.raises(ValueError):
        procrustes_update(Z, X, T_prev, 1.0, 1.0)
