"""K-nearest-neighbour voting with Euclidean distance.

Each of the k nearest training documents adds 1 / (1 + distance) to the
score of its category.  Equal distances at the k-th place resolve to the
lower training index; equal category scores to the lower category index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from ..errors import ValidationError
from ..features import Dataset, SparseVector, stack
from ..folds import stratified_assignments
from ..metrics import ConfusionMatrix, macro_f1_of
from ._util import argmax_first, argmax_rows

DEFAULT_K_RANGE = tuple(range(1, 11))
# distances closer than this count as equal when ranking neighbours
DIST_TIE = 1e-9


def euclidean_distance(a: SparseVector, b: SparseVector) -> float:
    da, db = a.to_dict(), b.to_dict()
    keys = da.keys() | db.keys()
    return math.sqrt(math.fsum((da.get(i, 0.0) - db.get(i, 0.0)) ** 2 for i in keys))


@dataclass(frozen=True)
class KnnModel:
    train_vectors: tuple[SparseVector, ...]
    train_labels: tuple[int, ...]
    k: int
    num_categories: int
    dim: int

    def __post_init__(self):
        if len(self.train_vectors) != len(self.train_labels):
            raise ValidationError("training vectors and labels differ in length")
        if not 1 <= self.k <= len(self.train_vectors):
            raise ValidationError(
                f"k={self.k} outside 1..{len(self.train_vectors)} (training size)"
            )

    @cached_property
    def matrix(self) -> sparse.csr_matrix:
        return stack(self.train_vectors, self.dim)

    @cached_property
    def sq_norms(self) -> np.ndarray:
        return np.asarray(self.matrix.multiply(self.matrix).sum(axis=1)).ravel()

    @cached_property
    def label_array(self) -> np.ndarray:
        return np.asarray(self.train_labels, dtype=np.int64)


def train_knn(d: Dataset, k: int) -> KnnModel:
    return KnnModel(d.vectors, d.labels, k, d.num_categories, len(d.vocab))


def _distances(train: sparse.csr_matrix, train_sq: np.ndarray, X: sparse.csr_matrix) -> np.ndarray:
    """(n_query, n_train) Euclidean distances."""
    q_sq = np.asarray(X.multiply(X).sum(axis=1)).ravel()
    cross = (X @ train.T).toarray()
    d2 = q_sq[:, None] + train_sq[None, :] - 2.0 * cross
    return np.sqrt(np.maximum(d2, 0.0))


def _neighbour_order(dist: np.ndarray) -> np.ndarray:
    # Documents sharing no terms with the query are all at the same distance
    # in exact arithmetic but differ in the last bits here; snap to a grid so
    # such ties resolve by training order (the sort is stable).
    return np.argsort(np.rint(dist / DIST_TIE), axis=1, kind="stable")


def _scores_from_order(dist, order, labels, k, m) -> np.ndarray:
    rows = np.arange(dist.shape[0])[:, None]
    nn = order[:, :k]
    sims = 1.0 / (1.0 + dist[rows, nn])
    scores = np.zeros((dist.shape[0], m))
    np.add.at(scores, (np.broadcast_to(rows, nn.shape), labels[nn]), sims)
    return scores


def knn_scores_many(m: KnnModel, X: sparse.csr_matrix) -> np.ndarray:
    dist = _distances(m.matrix, m.sq_norms, _fit_dim(X, m.dim))
    return _scores_from_order(dist, _neighbour_order(dist), m.label_array, m.k, m.num_categories)


def knn_scores(m: KnnModel, x: SparseVector) -> np.ndarray:
    return knn_scores_many(m, stack([x], m.dim))[0]


def knn_predict(m: KnnModel, x: SparseVector) -> int:
    return argmax_first(knn_scores(m, x))


def knn_predict_many(m: KnnModel, X: sparse.csr_matrix) -> np.ndarray:
    return argmax_rows(knn_scores_many(m, X))


def _fit_dim(X: sparse.csr_matrix, dim: int) -> sparse.csr_matrix:
    if X.shape[1] == dim:
        return X
    if X.shape[1] > dim:
        return X[:, :dim]
    X = X.tocsr(copy=True)
    X.resize((X.shape[0], dim))
    return X


def tune_k(
    d: Dataset,
    k_range: Iterable[int] = DEFAULT_K_RANGE,
    folds: int = 3,
    seed: int = 0,
) -> int:
    """Pick k by stratified cross-validation inside `d`; ties go to the smaller k.

    Folds shrink to the size of the smallest category; with fewer than two
    documents in some category no validation split exists and the smallest
    candidate is returned.
    """
    ks = sorted(set(k_range))
    if not ks:
        raise ValidationError("empty k range")
    if len(ks) == 1:
        return ks[0]
    counts = np.bincount(d.label_array, minlength=d.num_categories)
    folds = min(folds, int(counts[counts > 0].min()))
    if folds < 2:
        return ks[0]
    plan = stratified_assignments(d.labels, folds, seed)
    m = d.num_categories
    pooled = {k: ConfusionMatrix.zeros(m) for k in ks}
    X, y = d.matrix, d.label_array
    for train_idx, test_idx in plan.splits():
        tr = X[train_idx]
        tr_sq = np.asarray(tr.multiply(tr).sum(axis=1)).ravel()
        dist = _distances(tr, tr_sq, X[test_idx])
        order = _neighbour_order(dist)
        for k in ks:
            if k > len(train_idx):
                continue
            pred = argmax_rows(_scores_from_order(dist, order, y[train_idx], k, m))
            pooled[k] += ConfusionMatrix.from_predictions(y[test_idx], pred, m)
    best_k, best = ks[0], -1.0
    for k in ks:
        if pooled[k].total == 0:
            continue
        score = macro_f1_of(pooled[k])
        if score > best + 1e-12:
            best_k, best = k, score
    return best_k


def sweep_k(d: Dataset, k_range: Sequence[int], folds: int = 3, seed: int = 0) -> dict[int, float]:
    """Inner-CV macro F1 of each candidate k (same folds for all)."""
    return {k: _single_k_score(d, k, folds, seed) for k in k_range}


def _single_k_score(d: Dataset, k: int, folds: int, seed: int) -> float:
    plan = stratified_assignments(d.labels, folds, seed)
    cm = ConfusionMatrix.zeros(d.num_categories)
    for train_idx, test_idx in plan.splits():
        model = train_knn(d.subset(train_idx), k)
        pred = knn_predict_many(model, d.subset(test_idx).matrix)
        cm += ConfusionMatrix.from_predictions([d.labels[i] for i in test_idx], pred, d.num_categories)
    return macro_f1_of(cm)
