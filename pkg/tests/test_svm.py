import math
import warnings

import numpy as np
import pytest
from scipy import sparse

from banglatc.classifiers import (
    ConvergenceWarning,
    Kernel,
    SvmBinaryModel,
    kernel_eval,
    svm_decisions,
    svm_predict,
    train_binary_svm,
    train_svm,
)
from banglatc.classifiers.svm import SvmModel, smo_solve, svm_predict_many
from banglatc.errors import ValidationError
from banglatc.features import SparseVector
from conftest import dense_dataset


def sv(d):
    return SparseVector.from_dict(d)


def test_kernel_eval():
    u, v = sv({0: 1.0, 1: 2.0}), sv({1: 0.4})
    assert kernel_eval(Kernel("linear"), u, v) == pytest.approx(0.8)
    assert kernel_eval(Kernel("sigmoid", 0.0, 0.3), u, v) == pytest.approx(math.tanh(0.3))
    assert kernel_eval(Kernel("sigmoid", 2.0, 0.0), sv({0: 1.0}), sv({1: 1.0})) == 0.0
    assert kernel_eval(Kernel("sigmoid", 0.5, 0.0), u, v) == pytest.approx(0.379948962255225, abs=1e-12)
    with pytest.raises(ValidationError):
        Kernel("rbf")


def test_sigmoid_gamma_defaults_to_inverse_dimension():
    assert Kernel("sigmoid").resolved(200).gamma == 1 / 200


def test_symmetric_two_points():
    X = sparse.csr_matrix(np.array([[-1.0], [1.0]]))
    m = train_binary_svm(X, [-1, 1], Kernel("linear"), C=10)
    assert abs(m.decision(SparseVector())) < 1e-6
    assert m.decision(sv({0: 1.0})) > 0 > m.decision(sv({0: -1.0}))
    # w = 1 needs alpha = 1/2 on both points
    assert m.coef == pytest.approx((-0.5, 0.5))


def test_single_class_rejected():
    X = sparse.csr_matrix(np.eye(2))
    with pytest.raises(ValidationError):
        train_binary_svm(X, [1, 1])
    with pytest.raises(ValidationError):
        train_binary_svm(X, [0, 1])


def separable_problem(seed, n=40, margin=0.3):
    rng = np.random.default_rng(seed)
    angle = rng.uniform(0, 2 * np.pi)
    w = np.array([np.cos(angle), np.sin(angle)])
    b = rng.uniform(-0.5, 0.5)
    X, y = [], []
    while len(X) < n:
        p = rng.uniform(-2, 2, 2)
        f = p @ w + b
        if abs(f) >= margin:
            X.append(p)
            y.append(1 if f > 0 else -1)
    if len(set(y)) < 2:
        return separable_problem(seed + 1000, n, margin)
    return np.array(X), np.array(y)


def kkt_violation(alpha, y, f, C):
    """Largest violation of the KKT conditions given margins y_i f(x_i)."""
    yf = y * f
    worst = 0.0
    for a, m in zip(alpha, yf):
        if a <= 1e-12:
            worst = max(worst, 1 - m)
        elif a >= C - 1e-12:
            worst = max(worst, m - 1)
        else:
            worst = max(worst, abs(m - 1))
    return worst


@pytest.mark.parametrize("seed", range(10))
def test_separable_problems(seed):
    X, y = separable_problem(seed)
    C, tol = 10.0, 1e-3
    Xs = sparse.csr_matrix(X)
    model = train_binary_svm(Xs, y, Kernel("linear"), C=C, tol=tol)
    assert model.converged
    f = model.decision_many(Xs)
    assert np.mean(np.sign(f) == y) >= 0.99
    K = (Xs @ Xs.T).toarray()
    res = smo_solve(K, y, C, tol)
    assert np.all((res.alpha >= 0) & (res.alpha <= C))
    f_dual = (res.alpha * y) @ K - res.rho
    assert np.allclose(f_dual, f, atol=1e-9)
    assert kkt_violation(res.alpha, y, f_dual, C) <= tol


def test_soft_margin_kkt_with_overlap():
    rng = np.random.default_rng(3)
    X = np.vstack([rng.normal(0.5, 1, (30, 2)), rng.normal(-0.5, 1, (30, 2))])
    y = np.array([1] * 30 + [-1] * 30)
    res = smo_solve(X @ X.T, y, 1.0, 1e-3)
    assert res.converged
    assert (res.alpha >= 1.0 - 1e-12).any()
    f = (res.alpha * y) @ (X @ X.T) - res.rho
    assert kkt_violation(res.alpha, y, f, 1.0) <= 1e-3
    assert abs(res.alpha @ y) < 1e-9


def test_iteration_cap_warns():
    X, y = separable_problem(1, n=60)
    with pytest.warns(ConvergenceWarning):
        m = train_binary_svm(sparse.csr_matrix(X), y, Kernel("linear"), C=1000, tol=1e-12, max_passes=1)
    assert not m.converged


def test_linear_weights_match_kernel_expansion():
    X, y = separable_problem(2)
    m = train_binary_svm(sparse.csr_matrix(X), y, Kernel("linear"), C=10)
    x = sv({0: 0.3, 1: -1.2})
    manual = sum(c * kernel_eval(m.kernel, s, x) for c, s in zip(m.coef, m.support_vectors)) + m.bias
    assert m.decision(x) == pytest.approx(manual, abs=1e-12)


def test_hand_set_model():
    k = Kernel("sigmoid", 0.5, 0.1)
    svs = (sv({0: 1.0}), sv({1: 2.0}))
    binary = SvmBinaryModel(svs, (0.7, -0.4), 0.05, k, 1.0, 2)
    x = sv({0: 0.5, 1: 0.5})
    want = 0.7 * math.tanh(0.5 * 0.5 + 0.1) - 0.4 * math.tanh(0.5 * 1.0 + 0.1) + 0.05
    assert binary.decision(x) == pytest.approx(want, abs=1e-14)


def test_ties_take_lowest_category():
    k = Kernel("linear")
    same = SvmBinaryModel((), (), 0.5, k, 1.0, 2)
    assert svm_predict(SvmModel((same, same, same)), sv({0: 1.0})) == 0


def test_two_class_ovr_equals_sign_rule():
    X, y = separable_problem(5, n=50)
    labels = [0 if t > 0 else 1 for t in y]
    d = dense_dataset(X, labels)
    model = train_svm(d, Kernel("linear"), C=10)
    assert model.num_categories == 2
    binary = train_binary_svm(d.matrix, y, Kernel("linear"), C=10, dim=2)
    rng = np.random.default_rng(6)
    for p in rng.uniform(-2, 2, (200, 2)):
        x = sv({0: p[0], 1: p[1]})
        f = binary.decision(x)
        dec = svm_decisions(model, x)
        assert dec[0] == pytest.approx(f, abs=1e-9)
        assert dec[1] == -dec[0]
        assert svm_predict(model, x) == (0 if f >= 0 else 1)


def test_three_class_separable():
    rng = np.random.default_rng(8)
    centres = np.eye(3) * 3
    X = np.vstack([c + rng.normal(0, 0.3, (15, 3)) for c in centres])
    labels = [c for c in range(3) for _ in range(15)]
    d = dense_dataset(X, labels)
    with warnings.catch_warnings():
        warnings.simplefilter("error", ConvergenceWarning)
        model = train_svm(d, Kernel("linear"), C=1)
    assert model.num_categories == 3
    assert list(svm_predict_many(model, d.matrix)) == labels


def test_sigmoid_scaling_invariance():
    rng = np.random.default_rng(9)
    X = rng.normal(0, 1, (20, 3))
    y = np.where(X[:, 0] > 0, 1, -1)
    s = 3.0
    a = train_binary_svm(sparse.csr_matrix(X), y, Kernel("sigmoid", 0.2, 0.0), C=1)
    b = train_binary_svm(sparse.csr_matrix(X * s), y, Kernel("sigmoid", 0.2 / s**2, 0.0), C=1)
    q = rng.normal(0, 1, (10, 3))
    assert np.allclose(a.decision_many(sparse.csr_matrix(q)), b.decision_many(sparse.csr_matrix(q * s)), atol=1e-9)
