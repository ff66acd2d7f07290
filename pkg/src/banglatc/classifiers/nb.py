"""Naive Bayes over document-level term presence.

Class-conditional term probabilities are (df + 1) / |C|, where df counts the
class documents containing the term and |C| is the class size.  This is not
the multinomial estimator: it ignores term frequency, and the add-one is
not balanced in the denominator, so a term present in every class document
gets a "probability" above one.  Scores are log prior plus the sum of log
probabilities over a document's distinct vocabulary terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ..errors import ValidationError
from ..features import Dataset
from ._util import argmax_first, argmax_rows


@dataclass(frozen=True)
class NbModel:
    log_priors: np.ndarray          # (m,)
    df_counts: np.ndarray           # (m, V) documents of class c containing term t
    class_doc_counts: np.ndarray    # (m,)

    @cached_property
    def log_cond(self) -> np.ndarray:
        return np.log(self.df_counts + 1.0) - np.log(self.class_doc_counts.astype(float))[:, None]

    @property
    def num_categories(self) -> int:
        return len(self.log_priors)


def train_nb(d: Dataset, term_docs: Sequence[Iterable[int]] | None = None) -> NbModel:
    m, V = d.num_categories, len(d.vocab)
    sizes = np.bincount(d.label_array, minlength=m)
    for c in range(m):
        if sizes[c] == 0:
            raise ValidationError(f"category {d.categories[c]!r} has no training documents")
    df = np.zeros((m, V), dtype=np.int64)
    if term_docs is None:
        P = d.presence
        doc_of_entry = np.repeat(np.arange(len(d)), np.diff(P.indptr))
        np.add.at(df, (d.label_array[doc_of_entry], P.indices), 1)
    else:
        for y, terms in zip(d.labels, term_docs):
            df[y, np.fromiter(set(terms), dtype=np.int64)] += 1
    log_priors = np.log(sizes / sizes.sum())
    return NbModel(log_priors, df, sizes)


def nb_scores(m: NbModel, terms: Iterable[int]) -> np.ndarray:
    """Per-category log score for one document given its vocabulary term indices."""
    idx = np.fromiter(sorted(set(terms)), dtype=np.int64)
    return m.log_priors + m.log_cond[:, idx].sum(axis=1)


def predict_nb(m: NbModel, terms: Iterable[int]) -> int:
    return argmax_first(nb_scores(m, terms))


def nb_scores_many(m: NbModel, d: Dataset) -> np.ndarray:
    # presence comes from term sets, not weights: zero-weight terms still count
    return d.presence @ m.log_cond.T + m.log_priors


def predict_nb_many(m: NbModel, d: Dataset) -> np.ndarray:
    return argmax_rows(nb_scores_many(m, d))
