"""Stratified fold assignment."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: tuple[int, ...]
    seed: int

    def test_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignments) if f == fold]

    def train_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignments) if f != fold]

    def splits(self):
        for f in range(self.k):
            yield self.train_indices(f), self.test_indices(f)


def stratified_assignments(
    labels: Sequence[int], k: int, seed: int, names: Sequence[str] | None = None
) -> FoldPlan:
    """Shuffle each category with `seed` and deal its documents round-robin into `k` folds.

    The dealing position carries over from one category to the next so that
    overall fold sizes stay balanced as well.
    """
    if k < 2:
        raise ValidationError(f"need at least 2 folds (got {k})")
    by_label: dict[int, list[int]] = {}
    for i, y in enumerate(labels):
        by_label.setdefault(y, []).append(i)
    for y, members in sorted(by_label.items()):
        if len(members) < k:
            name = names[y] if names is not None else str(y)
            raise ValidationError(
                f"category {name!r} has {len(members)} documents, fewer than {k} folds"
            )
    rng = random.Random(seed)
    assignments = [0] * len(labels)
    pos = 0
    for _, members in sorted(by_label.items()):
        members = list(members)
        rng.shuffle(members)
        for i in members:
            assignments[i] = pos % k
            pos += 1
    return FoldPlan(k, tuple(assignments), seed)


def stratified_kfold(corpus, k: int = 10, seed: int = 0) -> FoldPlan:
    return stratified_assignments(corpus.labels, k, seed, corpus.categories)
