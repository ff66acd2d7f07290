"""C4.5-style decision tree on continuous TF-IDF features.

Splits are binary thresholds ``x[f] <= t`` at midpoints between consecutive
distinct observed values, chosen by gain ratio (information gain divided
by split information, both in bits).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy import sparse

from ..features import Dataset, SparseVector
from ._util import argmax_first

# gains and ratios closer than this are treated as equal
_EPS = 1e-12
_FEATURE_BLOCK = 256


@dataclass(frozen=True)
class Leaf:
    category: int
    histogram: tuple[int, ...]


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Split]


def _entropy_rows(counts: np.ndarray, totals: np.ndarray) -> np.ndarray:
    """Entropy in bits of class-count vectors along the last axis."""
    with np.errstate(divide="ignore", invalid="ignore"):
        p = counts / totals[..., None]
        terms = np.where(counts > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -terms.sum(axis=-1)


def _scan(values: np.ndarray, labels: np.ndarray, m: int, min_leaf: int):
    """Best split of each column of `values` (n, F).

    Returns (ratio, threshold, gain) arrays of shape (F,); ratio is -inf
    where no split has positive gain.
    """
    n, F = values.shape
    order = np.argsort(values, axis=0, kind="stable")
    sv = np.take_along_axis(values, order, axis=0)
    sy = labels[order]                                   # (n, F)
    onehot = np.zeros((n, F, m))
    np.put_along_axis(onehot, sy[..., None], 1.0, axis=2)
    left = np.cumsum(onehot, axis=0)[:-1]                # (n-1, F, m): first i+1 samples
    total = left[-1] + onehot[-1]                        # (F, m)
    right = total[None] - left
    n_left = np.arange(1, n, dtype=float)[:, None]       # (n-1, 1)
    n_right = n - n_left
    parent = _entropy_rows(total[0:1], np.array([float(n)]))[0]
    h_left = _entropy_rows(left, np.broadcast_to(n_left, left.shape[:2]))
    h_right = _entropy_rows(right, np.broadcast_to(n_right, right.shape[:2]))
    gain = parent - (n_left / n) * h_left - (n_right / n) * h_right
    pl, pr = n_left / n, n_right / n
    split_info = -(pl * np.log2(pl) + pr * np.log2(pr))  # (n-1, 1), > 0
    ratio = gain / split_info

    valid = (sv[1:] > sv[:-1]) & (gain > _EPS)
    valid &= (n_left >= min_leaf) & (n_right >= min_leaf)
    ratio = np.where(valid, ratio, -np.inf)

    best_ratio = ratio.max(axis=0)                       # (F,)
    has = np.isfinite(best_ratio)
    near = ratio >= (best_ratio - _EPS)[None, :]
    pos = np.argmax(near & valid, axis=0)                # first (lowest threshold) near-best
    cols = np.arange(F)
    lo, hi = sv[pos, cols], sv[pos + 1, cols]
    thr = lo + (hi - lo) / 2.0
    thr = np.where(thr >= hi, lo, thr)
    best_gain = np.where(has, gain[pos, cols], 0.0)
    return np.where(has, best_ratio, -np.inf), thr, best_gain


def best_split(
    values: Sequence[float], labels: Sequence[int], min_leaf: int = 1
) -> tuple[float, float] | None:
    """(threshold, gain ratio) of the best split of one feature, or None.

    Near-equal ratios resolve to the lowest threshold.
    """
    v = np.asarray(values, dtype=float)
    y = np.asarray(labels, dtype=np.int64)
    if len(v) < 2:
        return None
    ratio, thr, _ = _scan(v[:, None], y, int(y.max()) + 1, min_leaf)
    if not np.isfinite(ratio[0]):
        return None
    return float(thr[0]), float(ratio[0])


def _node_best(X: sparse.csr_matrix, y: np.ndarray, m: int, min_leaf: int):
    """Best (feature, threshold, ratio) over the features with a nonzero value here.

    Near-equal ratios resolve to the lowest feature index.
    """
    best = None
    cols = np.unique(X.indices)
    for start in range(0, len(cols), _FEATURE_BLOCK):
        block = cols[start:start + _FEATURE_BLOCK]
        ratio, thr, _ = _scan(X[:, block].toarray(), y, m, min_leaf)
        if not np.isfinite(ratio).any():
            continue
        j = int(np.flatnonzero(ratio >= ratio.max() - _EPS)[0])
        if best is None or ratio[j] > best[2] + _EPS:
            best = (int(block[j]), float(thr[j]), float(ratio[j]))
    return best


def _balanced_split(X: sparse.csr_matrix, min_leaf: int):
    """Most even (feature, threshold) cut of the rows, or None if no feature varies.

    Used when every cut has zero information gain (XOR-like nodes), so that
    growth continues until leaves are pure or hold identical vectors.
    """
    n = X.shape[0]
    best = None
    for f in np.unique(X.indices):
        v = np.sort(X[:, [f]].toarray().ravel())
        pos = np.flatnonzero(v[1:] > v[:-1])
        pos = pos[(pos + 1 >= min_leaf) & (n - pos - 1 >= min_leaf)]
        if len(pos) == 0:
            continue
        smaller = np.minimum(pos + 1, n - pos - 1)
        i = int(pos[np.argmax(smaller)])
        size = int(smaller.max())
        if best is None or size > best[0]:
            lo, hi = v[i], v[i + 1]
            thr = lo + (hi - lo) / 2.0
            best = (size, int(f), float(lo if thr >= hi else thr))
    return None if best is None else best[1:]


def _leaf(y: np.ndarray, m: int) -> Leaf:
    hist = np.bincount(y, minlength=m)
    return Leaf(argmax_first(hist), tuple(int(h) for h in hist))


def train_c45(d: Dataset, min_leaf: int = 1, max_depth: int | None = None) -> TreeNode:
    """Grow a tree by best gain ratio.

    A node becomes a leaf when it is pure, too small to split into two
    `min_leaf` halves, at `max_depth`, or when no feature varies within it.
    If features vary but none gives positive gain, the most even cut is
    taken instead of stopping.
    """
    if len(d) == 0:
        raise ValueError("cannot train a tree on an empty dataset")
    m = d.num_categories
    X, y = d.matrix, d.label_array

    def grow(rows: np.ndarray, depth: int) -> TreeNode:
        ys = y[rows]
        if (
            np.all(ys == ys[0])
            or len(rows) < 2 * min_leaf
            or (max_depth is not None and depth >= max_depth)
        ):
            return _leaf(ys, m)
        Xs = X[rows]
        found = _node_best(Xs, ys, m, min_leaf)
        if found is None:
            found = _balanced_split(Xs, min_leaf)
            if found is None:
                return _leaf(ys, m)
        f, t = found[:2]
        col = Xs[:, f].toarray().ravel()
        go_left = col <= t
        return Split(f, t, grow(rows[go_left], depth + 1), grow(rows[~go_left], depth + 1))

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * len(d) + 100))
    try:
        return grow(np.arange(len(d)), 0)
    finally:
        sys.setrecursionlimit(limit)


def tree_predict(t: TreeNode, x: SparseVector) -> int:
    return leaf_for(t, x).category


def tree_predict_many(t: TreeNode, X: sparse.csr_matrix) -> np.ndarray:
    X = X.tocsr()
    out = np.empty(X.shape[0], dtype=np.int64)
    for r in range(X.shape[0]):
        lo, hi = X.indptr[r], X.indptr[r + 1]
        values = dict(zip(X.indices[lo:hi].tolist(), X.data[lo:hi].tolist()))
        node = t
        while isinstance(node, Split):
            node = node.left if values.get(node.feature, 0.0) <= node.threshold else node.right
        out[r] = node.category
    return out


def leaf_for(t: TreeNode, x: SparseVector) -> Leaf:
    values = x.to_dict()
    while isinstance(t, Split):
        t = t.left if values.get(t.feature, 0.0) <= t.threshold else t.right
    return t


def tree_depth(t: TreeNode) -> int:
    if isinstance(t, Leaf):
        return 0
    return 1 + max(tree_depth(t.left), tree_depth(t.right))


def tree_size(t: TreeNode) -> int:
    if isinstance(t, Leaf):
        return 1
    return 1 + tree_size(t.left) + tree_size(t.right)
