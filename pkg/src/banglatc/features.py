"""Vocabulary and length-normalized TF-IDF vectors."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterable, Sequence

import numpy as np
from scipy import sparse

from .corpus import Corpus
from .errors import ValidationError
from .preprocess import PipelineConfig, preprocess_document


@dataclass(frozen=True)
class Vocabulary:
    """Terms in index order with their document frequencies over `num_docs` documents."""

    terms: tuple[str, ...]
    doc_freq: tuple[int, ...]
    num_docs: int

    def __post_init__(self):
        if self.num_docs < 1:
            raise ValidationError("vocabulary needs at least one document")
        if len(self.terms) != len(self.doc_freq):
            raise ValidationError("terms and doc_freq differ in length")
        if any(not 1 <= n <= self.num_docs for n in self.doc_freq):
            raise ValidationError("document frequency out of range")

    def __len__(self) -> int:
        return len(self.terms)

    @cached_property
    def term_to_index(self) -> dict[str, int]:
        return {t: i for i, t in enumerate(self.terms)}

    @cached_property
    def idf(self) -> np.ndarray:
        return np.log(self.num_docs / np.asarray(self.doc_freq, dtype=float))

    def index_of(self, term: str) -> int | None:
        return self.term_to_index.get(term)

    def to_dict(self) -> dict:
        return {"terms": list(self.terms), "doc_freq": list(self.doc_freq), "num_docs": self.num_docs}

    @classmethod
    def from_dict(cls, d: dict) -> "Vocabulary":
        return cls(tuple(d["terms"]), tuple(d["doc_freq"]), d["num_docs"])


@dataclass(frozen=True)
class SparseVector:
    indices: tuple[int, ...] = ()
    weights: tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.indices) != len(self.weights):
            raise ValidationError("indices and weights differ in length")
        if any(a >= b for a, b in zip(self.indices, self.indices[1:])):
            raise ValidationError("indices must be strictly increasing")
        if self.indices and self.indices[0] < 0:
            raise ValidationError("negative index")
        if any(w == 0.0 or not math.isfinite(w) for w in self.weights):
            raise ValidationError("weights must be finite and nonzero")

    @classmethod
    def from_dict(cls, entries: dict[int, float]) -> "SparseVector":
        items = sorted((i, w) for i, w in entries.items() if w != 0.0)
        return cls(tuple(i for i, _ in items), tuple(w for _, w in items))

    def to_dict(self) -> dict[int, float]:
        return dict(zip(self.indices, self.weights))

    def get(self, index: int) -> float:
        return self.to_dict().get(index, 0.0)

    def __len__(self) -> int:
        return len(self.indices)

    def dot(self, other: "SparseVector") -> float:
        b = other.to_dict()
        return math.fsum(w * b[i] for i, w in zip(self.indices, self.weights) if i in b)

    def norm(self) -> float:
        return math.sqrt(math.fsum(w * w for w in self.weights))


def stack(vectors: Sequence[SparseVector], dim: int | None = None) -> sparse.csr_matrix:
    """Rows of a CSR matrix, one per vector."""
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(v) for v in vectors])
    indices = np.fromiter((i for v in vectors for i in v.indices), dtype=np.int64, count=indptr[-1])
    data = np.fromiter((w for v in vectors for w in v.weights), dtype=float, count=indptr[-1])
    if dim is None:
        dim = int(indices.max()) + 1 if len(indices) else 0
    return sparse.csr_matrix((data, indices, indptr), shape=(len(vectors), dim))


def build_vocabulary(docs: Sequence[Sequence[str]]) -> Vocabulary:
    df: Counter[str] = Counter()
    for terms in docs:
        df.update(set(terms))
    if not df:
        raise ValidationError("cannot build a vocabulary: no document has any terms")
    terms = tuple(sorted(df))
    return Vocabulary(terms, tuple(df[t] for t in terms), len(docs))


def tfidf_vector(terms: Iterable[str], v: Vocabulary) -> SparseVector:
    """TF-IDF weights scaled to unit L2 length; terms outside `v` are ignored."""
    index = v.term_to_index
    tf = Counter(index[t] for t in terms if t in index)
    raw = {}
    for i, count in tf.items():
        r = count * math.log(v.num_docs / v.doc_freq[i])
        if r != 0.0:
            raw[i] = r
    if not raw:
        return SparseVector()
    norm = math.sqrt(math.fsum(r * r for r in raw.values()))
    return SparseVector.from_dict({i: r / norm for i, r in raw.items()})


@dataclass(frozen=True)
class Dataset:
    """Vectorized documents.

    `term_sets` holds each document's distinct in-vocabulary term indices,
    including terms whose TF-IDF weight is zero; naive Bayes reads those.
    """

    vectors: tuple[SparseVector, ...]
    labels: tuple[int, ...]
    term_sets: tuple[frozenset[int], ...]
    vocab: Vocabulary
    categories: tuple[str, ...]

    def __post_init__(self):
        if not len(self.vectors) == len(self.labels) == len(self.term_sets):
            raise ValidationError("vectors, labels and term sets differ in length")
        m = len(self.categories)
        if any(not 0 <= y < m for y in self.labels):
            raise ValidationError("label outside the category range")

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def num_categories(self) -> int:
        return len(self.categories)

    @cached_property
    def matrix(self) -> sparse.csr_matrix:
        return stack(self.vectors, len(self.vocab))

    @cached_property
    def presence(self) -> sparse.csr_matrix:
        """0/1 matrix of distinct in-vocabulary terms, zero-weight ones included."""
        rows = np.repeat(np.arange(len(self)), [len(s) for s in self.term_sets])
        cols = np.fromiter((t for s in self.term_sets for t in s), dtype=np.int64, count=len(rows))
        return sparse.csr_matrix(
            (np.ones(len(rows)), (rows, cols)), shape=(len(self), len(self.vocab))
        )

    @cached_property
    def label_array(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=np.int64)

    def relabel(self, labels: Sequence[int], categories: Sequence[str] | None = None) -> "Dataset":
        """Same documents under new labels; cached matrices are shared."""
        out = Dataset(self.vectors, tuple(labels), self.term_sets, self.vocab,
                      tuple(self.categories if categories is None else categories))
        out.__dict__["presence"] = self.presence
        if "matrix" in self.__dict__:
            out.__dict__["matrix"] = self.__dict__["matrix"]
        return out

    def subset(self, idx: Sequence[int]) -> "Dataset":
        return Dataset(
            tuple(self.vectors[i] for i in idx),
            tuple(self.labels[i] for i in idx),
            tuple(self.term_sets[i] for i in idx),
            self.vocab,
            self.categories,
        )


def build_dataset(
    term_lists: Sequence[Sequence[str]],
    labels: Sequence[int],
    vocab: Vocabulary,
    categories: Sequence[str],
) -> Dataset:
    index = vocab.term_to_index
    return Dataset(
        tuple(tfidf_vector(t, vocab) for t in term_lists),
        tuple(labels),
        tuple(frozenset(index[w] for w in t if w in index) for t in term_lists),
        vocab,
        tuple(categories),
    )


def preprocess_corpus(c: Corpus, cfg: PipelineConfig) -> list[list[str]]:
    return [preprocess_document(d.text, cfg) for d in c.documents]


def vectorize_corpus(
    c: Corpus, cfg: PipelineConfig, train_indices: Sequence[int] | None = None
) -> Dataset:
    """Vectorize every document of `c` against a vocabulary fit on `train_indices` (default: all)."""
    term_lists = preprocess_corpus(c, cfg)
    fit_on = term_lists if train_indices is None else [term_lists[i] for i in train_indices]
    vocab = build_vocabulary(fit_on)
    return build_dataset(term_lists, c.labels, vocab, c.categories)


def write_sparse_matrix(d: Dataset, fh: IO[str]) -> None:
    """One line per document: ``label index:weight ...`` with 1-based feature indices."""
    for y, v in zip(d.labels, d.vectors):
        fields = [str(y)] + [f"{i + 1}:{w!r}" for i, w in zip(v.indices, v.weights)]
        fh.write(" ".join(fields) + "\n")
