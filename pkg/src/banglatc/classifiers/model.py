"""One train/predict surface over the four methods, plus JSON model files."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Union

import numpy as np
from scipy import sparse

from ..errors import InputError, ValidationError
from ..features import Dataset, SparseVector, Vocabulary, build_dataset
from ..preprocess import PipelineConfig, preprocess_document
from .knn import DEFAULT_K_RANGE, KnnModel, knn_scores_many, train_knn, tune_k
from .nb import NbModel, nb_scores_many, train_nb
from .svm import Kernel, SvmBinaryModel, SvmModel, svm_decisions_many, train_svm
from .tree import Leaf, Split, TreeNode, leaf_for, train_c45, tree_predict_many
from ._util import argmax_rows

CLASSIFIERS = ("nb", "knn", "c45", "svm")
FORMAT_VERSION = 1

Model = Union[NbModel, KnnModel, Leaf, Split, SvmModel]


@dataclass(frozen=True)
class Params:
    """Hyperparameters for all four methods.

    ``k=None`` selects k by inner cross-validation over `k_range`.
    """

    k: int | None = None
    k_range: tuple[int, ...] = DEFAULT_K_RANGE
    tune_folds: int = 3
    C: float = 1.0
    kernel: str = "sigmoid"
    gamma: float | None = None
    coef0: float = 0.0
    tol: float = 1e-3
    max_passes: int = 100
    min_leaf: int = 1
    max_depth: int | None = None
    seed: int = 0

    def svm_kernel(self) -> Kernel:
        return Kernel(self.kernel, self.gamma, self.coef0)


def check_names(names) -> list[str]:
    names = list(names)
    bad = [n for n in names if n not in CLASSIFIERS]
    if bad:
        raise InputError(f"unknown classifier(s) {', '.join(bad)}; choose from {', '.join(CLASSIFIERS)}")
    return names


def train(name: str, d: Dataset, params: Params = Params()) -> Model:
    if name == "nb":
        return train_nb(d)
    if name == "knn":
        k = params.k
        if k is None:
            k = tune_k(d, [k for k in params.k_range if k <= len(d)] or [1],
                       params.tune_folds, params.seed)
        return train_knn(d, min(k, len(d)))
    if name == "c45":
        return train_c45(d, params.min_leaf, params.max_depth)
    if name == "svm":
        return train_svm(d, params.svm_kernel(), params.C, params.tol, params.max_passes)
    raise InputError(f"unknown classifier {name!r}")


def kind_of(model: Model) -> str:
    if isinstance(model, NbModel):
        return "nb"
    if isinstance(model, KnnModel):
        return "knn"
    if isinstance(model, (Leaf, Split)):
        return "c45"
    if isinstance(model, SvmModel):
        return "svm"
    raise TypeError(f"not a model: {type(model).__name__}")


def scores_many(model: Model, d: Dataset) -> np.ndarray:
    """(n, m) decision values: NB log scores, KNN vote sums, SVM margins, tree leaf fractions."""
    kind = kind_of(model)
    if kind == "nb":
        return nb_scores_many(model, d)
    if kind == "knn":
        return knn_scores_many(model, d.matrix)
    if kind == "svm":
        return svm_decisions_many(model, d.matrix)
    return _leaf_fractions(model, d.matrix)


def _leaf_fractions(tree: TreeNode, X: sparse.csr_matrix) -> np.ndarray:
    rows = []
    for r in range(X.shape[0]):
        lo, hi = X.indptr[r], X.indptr[r + 1]
        leaf = leaf_for(tree, SparseVector(tuple(X.indices[lo:hi].tolist()), tuple(X.data[lo:hi].tolist())))
        h = np.asarray(leaf.histogram, dtype=float)
        rows.append(h / h.sum())
    return np.array(rows).reshape(X.shape[0], -1)


def predict_many(model: Model, d: Dataset) -> np.ndarray:
    if kind_of(model) == "c45":
        return tree_predict_many(model, d.matrix)
    return argmax_rows(scores_many(model, d))


@dataclass(frozen=True)
class TextClassifier:
    """A trained model together with everything needed to classify raw text."""

    kind: str
    model: Model
    vocab: Vocabulary
    categories: tuple[str, ...]
    pipeline: PipelineConfig
    params: Params = Params()

    def dataset(self, texts: list[str]) -> Dataset:
        terms = [preprocess_document(t, self.pipeline) for t in texts]
        return build_dataset(terms, [0] * len(terms), self.vocab, self.categories)

    def predict_texts(self, texts: list[str]) -> list[str]:
        pred = predict_many(self.model, self.dataset(texts))
        return [self.categories[i] for i in pred]

    def predict_text(self, text: str) -> str:
        return self.predict_texts([text])[0]

    def scores_text(self, text: str) -> dict[str, float]:
        s = scores_many(self.model, self.dataset([text]))[0]
        return {c: float(v) for c, v in zip(self.categories, s)}

    def to_dict(self) -> dict:
        return {
            "format": FORMAT_VERSION,
            "type": self.kind,
            "categories": list(self.categories),
            "vocabulary": self.vocab.to_dict(),
            "pipeline": self.pipeline.to_dict(),
            "params": _params_to_dict(self.params),
            "model": _model_to_dict(self.model),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TextClassifier":
        try:
            kind = d["type"]
            if kind not in CLASSIFIERS:
                raise ValidationError(f"unknown model type {kind!r}")
            vocab = Vocabulary.from_dict(d["vocabulary"])
            categories = tuple(d["categories"])
            model = _model_from_dict(kind, d["model"], len(vocab), len(categories))
            return cls(kind, model, vocab, categories,
                       PipelineConfig.from_dict(d["pipeline"]), _params_from_dict(d.get("params", {})))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ValidationError(f"malformed model file: {type(exc).__name__}: {exc}") from None

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), ensure_ascii=False) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "TextClassifier":
        p = Path(path)
        if not p.is_file():
            raise InputError(f"model file not found: {p}")
        try:
            data = json.loads(p.read_text(encoding="utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ValidationError(f"malformed model file {p}: {exc}") from None
        if not isinstance(data, dict):
            raise ValidationError(f"malformed model file {p}: not a JSON object")
        return cls.from_dict(data)


def fit_text_classifier(kind: str, d: Dataset, pipeline: PipelineConfig,
                        params: Params = Params()) -> TextClassifier:
    return TextClassifier(kind, train(kind, d, params), d.vocab, d.categories, pipeline, params)


def _params_to_dict(p: Params) -> dict:
    d = asdict(p)
    d["k_range"] = list(p.k_range)
    return d


def _params_from_dict(d: dict) -> Params:
    d = dict(d)
    if "k_range" in d:
        d["k_range"] = tuple(d["k_range"])
    return Params(**d)


def _vec_to_json(v: SparseVector) -> list:
    return [list(v.indices), list(v.weights)]


def _vec_from_json(x) -> SparseVector:
    return SparseVector(tuple(int(i) for i in x[0]), tuple(float(w) for w in x[1]))


def _sparse_rows(a: np.ndarray) -> list:
    return [[np.flatnonzero(row).tolist(), row[row != 0].tolist()] for row in a]


def _tree_to_nodes(t: TreeNode) -> list[list]:
    """Preorder node list: ``[category, histogram]`` or ``[feature, threshold, left, right]``."""
    nodes: list[list] = []
    todo = [(t, None, 0)]
    while todo:
        node, parent, slot = todo.pop()
        if parent is not None:
            nodes[parent][slot] = len(nodes)
        if isinstance(node, Leaf):
            nodes.append([node.category, list(node.histogram)])
        else:
            nodes.append([node.feature, node.threshold, -1, -1])
            here = len(nodes) - 1
            todo.append((node.right, here, 3))
            todo.append((node.left, here, 2))
    return nodes


def _tree_from_nodes(nodes: list[list]) -> TreeNode:
    built: list[TreeNode | None] = [None] * len(nodes)
    # children always follow their parent in preorder
    for i in range(len(nodes) - 1, -1, -1):
        n = nodes[i]
        if len(n) == 2:
            built[i] = Leaf(int(n[0]), tuple(int(h) for h in n[1]))
        else:
            built[i] = Split(int(n[0]), float(n[1]), built[int(n[2])], built[int(n[3])])
    return built[0]


def _model_to_dict(model: Model) -> dict:
    kind = kind_of(model)
    if kind == "nb":
        return {
            "log_priors": model.log_priors.tolist(),
            "class_doc_counts": model.class_doc_counts.tolist(),
            "df_counts": _sparse_rows(model.df_counts),
        }
    if kind == "knn":
        return {
            "k": model.k,
            "train_labels": list(model.train_labels),
            "train_vectors": [_vec_to_json(v) for v in model.train_vectors],
        }
    if kind == "c45":
        return {"nodes": _tree_to_nodes(model)}
    return {
        "binaries": [
            {
                "kernel": b.kernel.to_dict(),
                "C": b.C,
                "bias": b.bias,
                "converged": b.converged,
                "iterations": b.iterations,
                "coef": list(b.coef),
                "support_vectors": [_vec_to_json(v) for v in b.support_vectors],
            }
            for b in model.binaries
        ]
    }


def _model_from_dict(kind: str, d: dict, dim: int, m: int) -> Model:
    if kind == "nb":
        df = np.zeros((m, dim), dtype=np.int64)
        for c, (idx, vals) in enumerate(d["df_counts"]):
            df[c, np.asarray(idx, dtype=np.int64)] = np.asarray(vals, dtype=np.int64)
        return NbModel(np.asarray(d["log_priors"], dtype=float), df,
                       np.asarray(d["class_doc_counts"], dtype=np.int64))
    if kind == "knn":
        return KnnModel(tuple(_vec_from_json(v) for v in d["train_vectors"]),
                        tuple(int(y) for y in d["train_labels"]), int(d["k"]), m, dim)
    if kind == "c45":
        return _tree_from_nodes(d["nodes"])
    binaries = []
    for b in d["binaries"]:
        k = b["kernel"]
        binaries.append(SvmBinaryModel(
            tuple(_vec_from_json(v) for v in b["support_vectors"]),
            tuple(float(c) for c in b["coef"]),
            float(b["bias"]),
            Kernel(k["kind"], k["gamma"], k["coef0"]),
            float(b["C"]),
            dim,
            bool(b["converged"]),
            int(b["iterations"]),
        ))
    return SvmModel(tuple(binaries))
