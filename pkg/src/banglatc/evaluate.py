"""Cross-validated evaluation, learning curves and training-time benchmarks."""

from __future__ import annotations

import random
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .classifiers.model import Params, check_names, predict_many, train
from .corpus import Corpus
from .errors import ValidationError
from .features import build_dataset, build_vocabulary, preprocess_corpus
from .folds import FoldPlan
from .metrics import ConfusionMatrix, MetricsReport, macro_f1_of
from .preprocess import PipelineConfig


def _fold_datasets(terms, labels, categories, train_idx, test_idx):
    vocab = build_vocabulary([terms[i] for i in train_idx])
    tr = build_dataset([terms[i] for i in train_idx], [labels[i] for i in train_idx], vocab, categories)
    te = build_dataset([terms[i] for i in test_idx], [labels[i] for i in test_idx], vocab, categories)
    return tr, te


def _fit_and_score(names, params, tr, te):
    m = len(tr.categories)
    out = {}
    for name in names:
        start = time.perf_counter()
        model = train(name, tr, params)
        elapsed = time.perf_counter() - start
        pred = predict_many(model, te)
        out[name] = (ConfusionMatrix.from_predictions(te.labels, pred, m), elapsed)
    return out


def run_cv(
    c: Corpus,
    cfg: PipelineConfig,
    classifiers: Sequence[str],
    plan: FoldPlan,
    params: Params = Params(),
    threads: int = 1,
) -> dict[str, MetricsReport]:
    """Pooled-confusion cross-validation; the vocabulary is refit on every training fold."""
    names = check_names(classifiers)
    if len(plan.assignments) != len(c):
        raise ValidationError("fold plan does not match the corpus size")
    terms = preprocess_corpus(c, cfg)
    labels = c.labels

    def one_fold(fold):
        tr, te = _fold_datasets(terms, labels, c.categories,
                                plan.train_indices(fold), plan.test_indices(fold))
        return _fit_and_score(names, params, tr, te)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_fold = list(pool.map(one_fold, range(plan.k)))
    else:
        per_fold = [one_fold(f) for f in range(plan.k)]

    m = len(c.categories)
    reports = {}
    for name in names:
        cm = ConfusionMatrix.zeros(m)
        seconds = 0.0
        for result in per_fold:
            cm += result[name][0]
            seconds += result[name][1]
        reports[name] = MetricsReport.from_confusion(name, c.categories, cm, seconds)
    return reports


@dataclass(frozen=True)
class CurvePoint:
    classifier: str
    train_size: int
    macro_f1: float


def _stratified_holdout(labels: Sequence[int], fraction: float, rng: random.Random):
    by_label: dict[int, list[int]] = {}
    for i, y in enumerate(labels):
        by_label.setdefault(y, []).append(i)
    holdout, pool = [], []
    for _, members in sorted(by_label.items()):
        members = list(members)
        rng.shuffle(members)
        n_hold = max(1, round(fraction * len(members))) if fraction > 0 else 0
        holdout += members[:n_hold]
        pool.append(members[n_hold:])
    return sorted(holdout), pool


def _interleave(pool: list[list[int]]) -> list[int]:
    """Order documents so that every prefix is close to stratified.

    A document at position r of a category with n remaining documents gets
    key (r + 0.5) / n; sorting by key interleaves categories in proportion.
    """
    keyed = []
    for label, members in enumerate(pool):
        n = len(members)
        keyed += [((r + 0.5) / n, label, i) for r, i in enumerate(members)]
    keyed.sort()
    return [i for _, _, i in keyed]


def learning_curve(
    c: Corpus,
    cfg: PipelineConfig,
    classifiers: Sequence[str],
    steps: int = 5,
    step_size: int = 30,
    holdout_fraction: float = 0.3,
    seed: int = 0,
    params: Params = Params(),
) -> list[CurvePoint]:
    """Macro F1 on a fixed stratified holdout for nested training sets of step_size, 2*step_size, ..."""
    names = check_names(classifiers)
    if steps < 1 or step_size < 1:
        raise ValidationError("steps and step_size must be positive")
    if not 0 < holdout_fraction < 1:
        raise ValidationError("holdout_fraction must be in (0, 1)")
    labels = c.labels
    holdout, pool = _stratified_holdout(labels, holdout_fraction, random.Random(seed))
    order = _interleave(pool)
    needed = steps * step_size
    if len(order) < needed:
        raise ValidationError(
            f"learning curve needs {needed} training documents plus a holdout; "
            f"only {len(order)} remain after holding out {len(holdout)}"
        )
    terms = preprocess_corpus(c, cfg)
    points = []
    for s in range(1, steps + 1):
        train_idx = sorted(order[: s * step_size])
        tr, te = _fold_datasets(terms, labels, c.categories, train_idx, holdout)
        for name, (cm, _) in _fit_and_score(names, params, tr, te).items():
            points.append(CurvePoint(name, s * step_size, macro_f1_of(cm)))
    points.sort(key=lambda p: (names.index(p.classifier), p.train_size))
    return points


def format_curve_csv(points: Sequence[CurvePoint]) -> str:
    lines = ["classifier,train_size,macro_f1"]
    lines += [f"{p.classifier},{p.train_size},{p.macro_f1!r}" for p in points]
    return "\n".join(lines) + "\n"


def bench_training(
    c: Corpus,
    cfg: PipelineConfig,
    classifiers: Sequence[str],
    repeats: int = 3,
    params: Params = Params(),
) -> dict[str, float]:
    """Median wall-clock seconds to train each classifier on the whole corpus."""
    names = check_names(classifiers)
    if repeats < 1:
        raise ValidationError("repeats must be at least 1")
    terms = preprocess_corpus(c, cfg)
    d = build_dataset(terms, c.labels, build_vocabulary(terms), c.categories)
    out = {}
    for name in names:
        times = []
        for _ in range(repeats):
            start = time.perf_counter()
            train(name, d, params)
            times.append(time.perf_counter() - start)
        out[name] = statistics.median(times)
    return out


def reports_to_dict(reports: dict[str, MetricsReport], include_timing: bool = False) -> dict:
    return {name: r.to_dict(include_timing) for name, r in reports.items()}
