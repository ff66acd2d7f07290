"""Confusion matrices, precision/recall/F1 and macro averaging."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ValidationError


@dataclass
class ConfusionMatrix:
    """Rows are true categories, columns predicted ones."""

    counts: np.ndarray

    @classmethod
    def zeros(cls, m: int) -> "ConfusionMatrix":
        return cls(np.zeros((m, m), dtype=np.int64))

    @classmethod
    def from_predictions(cls, true: Sequence[int], pred: Sequence[int], m: int) -> "ConfusionMatrix":
        cm = cls.zeros(m)
        np.add.at(cm.counts, (np.asarray(true, dtype=np.int64), np.asarray(pred, dtype=np.int64)), 1)
        return cm

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(self.counts + other.counts)

    @property
    def size(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def precision_recall(cm: ConfusionMatrix, category: int) -> tuple[float, float]:
    """Precision and recall as fractions; an empty denominator gives 0."""
    hit = cm.counts[category, category]
    actual = cm.counts[category, :].sum()
    predicted = cm.counts[:, category].sum()
    p = hit / predicted if predicted else 0.0
    r = hit / actual if actual else 0.0
    return float(p), float(r)


def f1(p: float, r: float) -> float:
    if p < 0 or r < 0:
        raise ValidationError("precision and recall must be nonnegative")
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def macro_f1(per_category_f1: Sequence[float]) -> float:
    if len(per_category_f1) == 0:
        raise ValidationError("macro average of an empty list")
    return sum(per_category_f1) / len(per_category_f1)


def macro_f1_of(cm: ConfusionMatrix) -> float:
    """Macro F1 in percent."""
    return macro_f1([100 * f1(*precision_recall(cm, c)) for c in range(cm.size)])


@dataclass
class MetricsReport:
    classifier: str
    categories: list[str]
    precision: list[float]
    recall: list[float]
    f1: list[float]
    macro_f1: float
    confusion: list[list[int]]
    train_seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_confusion(cls, classifier: str, categories: Sequence[str], cm: ConfusionMatrix,
                       train_seconds: float = 0.0) -> "MetricsReport":
        ps, rs, fs = [], [], []
        for c in range(cm.size):
            p, r = precision_recall(cm, c)
            ps.append(100 * p)
            rs.append(100 * r)
            fs.append(100 * f1(p, r))
        return cls(classifier, list(categories), ps, rs, fs, macro_f1(fs),
                   cm.counts.tolist(), train_seconds)

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "classifier": self.classifier,
            "categories": [
                {"category": c, "precision": p, "recall": r, "f1": f}
                for c, p, r, f in zip(self.categories, self.precision, self.recall, self.f1)
            ],
            "macro_f1": self.macro_f1,
            "confusion": self.confusion,
        }
        if self.extra:
            d.update(self.extra)
        if include_timing:
            d["train_seconds"] = self.train_seconds
        return d

    def format_table(self) -> str:
        width = max([len("Category"), len("Macro Average")] + [len(c) for c in self.categories])
        lines = [f"{self.classifier}",
                 f"{'Category':<{width}}  Precision %  Recall %  F-measure %"]
        for c, p, r, f in zip(self.categories, self.precision, self.recall, self.f1):
            lines.append(f"{c:<{width}}  {p:11.2f}  {r:8.2f}  {f:11.2f}")
        lines.append(f"{'Macro Average':<{width}}  {'':11}  {'':8}  {self.macro_f1:11.2f}")
        return "\n".join(lines)
