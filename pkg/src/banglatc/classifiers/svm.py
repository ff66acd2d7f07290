"""Soft-margin support vector classification solved by SMO, one-vs-rest for multiclass.

The dual

    min_a  1/2 a'Qa - e'a   s.t.  0 <= a_i <= C,  y'a = 0,   Q_ij = y_i y_j K(x_i, x_j)

is solved two multipliers at a time.  The working pair is the maximal
violating index i plus the j with the largest second-order decrease
(Fan, Chen & Lin, JMLR 2005); the two-variable subproblem is solved in
closed form and clipped to the box.  Iteration stops once the KKT gap
m(a) - M(a) drops below `tol`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy import sparse

from ..errors import ValidationError
from ..features import Dataset, SparseVector, stack
from ._util import argmax_first, argmax_rows

_TAU = 1e-12
SV_THRESHOLD = 1e-12


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Kernel:
    kind: str = "linear"           # "linear" | "sigmoid"
    gamma: float | None = None     # sigmoid only; None -> 1 / number of features
    coef0: float = 0.0

    def __post_init__(self):
        if self.kind not in ("linear", "sigmoid"):
            raise ValidationError(f"unknown kernel {self.kind!r}")

    def resolved(self, dim: int) -> "Kernel":
        if self.kind == "sigmoid" and self.gamma is None:
            return Kernel("sigmoid", 1.0 / max(dim, 1), self.coef0)
        return self

    def apply(self, gram: np.ndarray) -> np.ndarray:
        """Kernel values from inner products."""
        if self.kind == "linear":
            return gram
        return np.tanh(self.gamma * gram + self.coef0)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "gamma": self.gamma, "coef0": self.coef0}


def kernel_eval(kernel: Kernel, u: SparseVector, v: SparseVector) -> float:
    dot = u.dot(v)
    if kernel.kind == "linear":
        return dot
    if kernel.gamma is None:
        raise ValidationError("sigmoid kernel needs gamma")
    return math.tanh(kernel.gamma * dot + kernel.coef0)


@dataclass(frozen=True)
class SvmBinaryModel:
    support_vectors: tuple[SparseVector, ...]
    coef: tuple[float, ...]        # alpha_i * y_i
    bias: float
    kernel: Kernel
    C: float
    dim: int
    converged: bool = True
    iterations: int = 0

    @cached_property
    def sv_matrix(self) -> sparse.csr_matrix:
        return stack(self.support_vectors, self.dim)

    @cached_property
    def weights(self) -> np.ndarray | None:
        """Primal weight vector, linear kernel only."""
        if self.kernel.kind != "linear":
            return None
        return np.asarray(self.sv_matrix.T @ np.asarray(self.coef)).ravel()

    def decision_many(self, X: sparse.csr_matrix) -> np.ndarray:
        X = _fit_dim(X, self.dim)
        if not self.support_vectors:
            return np.full(X.shape[0], self.bias)
        if self.weights is not None:
            return np.asarray(X @ self.weights).ravel() + self.bias
        K = self.kernel.apply((X @ self.sv_matrix.T).toarray())
        return K @ np.asarray(self.coef) + self.bias

    def decision(self, x: SparseVector) -> float:
        return float(self.decision_many(stack([x], self.dim))[0])


def _fit_dim(X, dim):
    if X.shape[1] == dim:
        return X
    if X.shape[1] > dim:
        return X[:, :dim]
    X = X.tocsr(copy=True)
    X.resize((X.shape[0], dim))
    return X


@dataclass
class SmoResult:
    alpha: np.ndarray
    rho: float
    converged: bool
    iterations: int
    gradient: np.ndarray = field(repr=False)


def smo_solve(K: np.ndarray, y: np.ndarray, C: float, tol: float = 1e-3,
              max_iter: int = 100_000) -> SmoResult:
    """Solve the dual for a precomputed kernel matrix and labels in {-1, +1}."""
    n = len(y)
    y = y.astype(float)
    Q = (y[:, None] * y[None, :]) * K
    diag = np.diag(Q).copy()
    alpha = np.zeros(n)
    G = -np.ones(n)
    converged = False
    it = 0
    while it < max_iter:
        at_upper = alpha >= C
        at_lower = alpha <= 0
        pos = y > 0
        up = np.where(pos, ~at_upper, ~at_lower)
        low = np.where(pos, ~at_lower, ~at_upper)
        v = -y * G
        if not up.any() or not low.any():
            converged = True
            break
        vu = np.where(up, v, -np.inf)
        i = int(np.argmax(vu))
        gmax = vu[i]
        vl = np.where(low, v, np.inf)
        gmin = vl.min()
        if gmax - gmin < tol:
            converged = True
            break
        # second-order choice of j among violators in I_low
        b = gmax - v
        cand = low & (b > 0)
        a = diag[i] + diag - 2.0 * y[i] * y * Q[i]
        a = np.where(a > 0, a, _TAU)
        obj = np.where(cand, -(b * b) / a, np.inf)
        j = int(np.argmin(obj))

        ai_old, aj_old = alpha[i], alpha[j]
        Qi, Qj = Q[i], Q[j]
        if y[i] != y[j]:
            quad = diag[i] + diag[j] + 2.0 * Qi[j]
            quad = quad if quad > 0 else _TAU
            delta = (-G[i] - G[j]) / quad
            diff = ai_old - aj_old
            ai, aj = ai_old + delta, aj_old + delta
            if diff > 0:
                if aj < 0:
                    aj, ai = 0.0, diff
            elif ai < 0:
                ai, aj = 0.0, -diff
            if diff > 0:
                if ai > C:
                    ai, aj = C, C - diff
            elif aj > C:
                aj, ai = C, C + diff
        else:
            quad = diag[i] + diag[j] - 2.0 * Qi[j]
            quad = quad if quad > 0 else _TAU
            delta = (G[i] - G[j]) / quad
            total = ai_old + aj_old
            ai, aj = ai_old - delta, aj_old + delta
            if total > C:
                if ai > C:
                    ai, aj = C, total - C
            elif aj < 0:
                aj, ai = 0.0, total
            if total > C:
                if aj > C:
                    aj, ai = C, total - C
            elif ai < 0:
                ai, aj = 0.0, total
        alpha[i], alpha[j] = ai, aj
        G += Qi * (ai - ai_old) + Qj * (aj - aj_old)
        it += 1

    return SmoResult(alpha, _rho(alpha, y, G, C), converged, it, G)


def _rho(alpha, y, G, C) -> float:
    yG = y * G
    free = (alpha > 0) & (alpha < C)
    if free.any():
        return float(yG[free].mean())
    upper = alpha >= C
    # bound multipliers only bracket rho
    ub_mask = (upper & (y < 0)) | (~upper & (y > 0))
    lb_mask = (upper & (y > 0)) | (~upper & (y < 0))
    ub = yG[ub_mask].min() if ub_mask.any() else np.inf
    lb = yG[lb_mask].max() if lb_mask.any() else -np.inf
    if not np.isfinite(ub):
        return float(lb)
    if not np.isfinite(lb):
        return float(ub)
    return float((ub + lb) / 2)


def train_binary_svm(
    vectors: Sequence[SparseVector] | sparse.csr_matrix,
    y: Sequence[int],
    kernel: Kernel = Kernel(),
    C: float = 1.0,
    tol: float = 1e-3,
    max_passes: int = 100,
    dim: int | None = None,
    gram: np.ndarray | None = None,
) -> SvmBinaryModel:
    """Train one binary machine on labels in {-1, +1}.

    The solver runs at most ``max_passes * n`` pair updates.  A model that
    stops there is returned with ``converged=False`` and a
    `ConvergenceWarning`.
    """
    y = np.asarray(y, dtype=np.int64)
    if not set(np.unique(y)) <= {-1, 1}:
        raise ValidationError("binary labels must be -1 or +1")
    if len(np.unique(y)) < 2:
        raise ValidationError("binary training needs both +1 and -1 examples")
    X = vectors if sparse.issparse(vectors) else stack(list(vectors), dim)
    X = X.tocsr()
    dim = X.shape[1] if dim is None else dim
    X = _fit_dim(X, dim)
    kernel = kernel.resolved(dim)
    if gram is None:
        gram = (X @ X.T).toarray()
    K = kernel.apply(gram)
    n = len(y)
    res = smo_solve(K, y, C, tol, max_iter=max_passes * max(n, 1))
    if not res.converged:
        warnings.warn(
            f"SMO stopped after {res.iterations} updates without reaching tol={tol}",
            ConvergenceWarning,
            stacklevel=2,
        )
    keep = np.flatnonzero(res.alpha > SV_THRESHOLD)
    sv_rows = X[keep]
    svs = tuple(
        SparseVector(
            tuple(sv_rows.indices[sv_rows.indptr[r]:sv_rows.indptr[r + 1]].tolist()),
            tuple(sv_rows.data[sv_rows.indptr[r]:sv_rows.indptr[r + 1]].tolist()),
        )
        for r in range(len(keep))
    )
    coef = tuple((res.alpha[keep] * y[keep]).tolist())
    return SvmBinaryModel(svs, coef, -res.rho, kernel, C, dim, res.converged, res.iterations)


@dataclass(frozen=True)
class SvmModel:
    binaries: tuple[SvmBinaryModel, ...]

    @property
    def num_categories(self) -> int:
        return len(self.binaries)

    @property
    def converged(self) -> bool:
        return all(b.converged for b in self.binaries)


def train_svm(
    d: Dataset,
    kernel: Kernel = Kernel(),
    C: float = 1.0,
    tol: float = 1e-3,
    max_passes: int = 100,
) -> SvmModel:
    """One binary machine per category, that category against all others.

    With two categories the second problem is the first with labels
    flipped, so its solution is the exact negation of the first.
    """
    if d.num_categories < 2:
        raise ValidationError("SVM training needs at least two categories")
    X = d.matrix
    gram = (X @ X.T).toarray()
    labels = d.label_array
    models = []
    for c in range(d.num_categories):
        if c == 1 and d.num_categories == 2:
            models.append(_negated(models[0]))
            break
        y = np.where(labels == c, 1, -1)
        if not (y > 0).any():
            raise ValidationError(f"category {d.categories[c]!r} has no training documents")
        models.append(train_binary_svm(X, y, kernel, C, tol, max_passes, dim=len(d.vocab), gram=gram))
    return SvmModel(tuple(models))


def _negated(b: SvmBinaryModel) -> SvmBinaryModel:
    return SvmBinaryModel(b.support_vectors, tuple(-c for c in b.coef), -b.bias,
                          b.kernel, b.C, b.dim, b.converged, b.iterations)


def svm_decisions_many(m: SvmModel, X: sparse.csr_matrix) -> np.ndarray:
    return np.column_stack([b.decision_many(X) for b in m.binaries])


def svm_decisions(m: SvmModel, x: SparseVector) -> np.ndarray:
    return np.array([b.decision(x) for b in m.binaries])


def svm_predict(m: SvmModel, x: SparseVector) -> int:
    return argmax_first(svm_decisions(m, x))


def svm_predict_many(m: SvmModel, X: sparse.csr_matrix) -> np.ndarray:
    return argmax_rows(svm_decisions_many(m, X))
