"""Command-line interface.

Settings come from built-in defaults, then an optional INI config file
(``--config``, section ``[banglatc]``, keys named like the long options with
underscores), then command-line flags; later sources win.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .classifiers.model import CLASSIFIERS, Params, TextClassifier, check_names, fit_text_classifier
from .corpus import (
    VocabProfile,
    corpus_stats,
    format_stats,
    generate_synthetic_corpus,
    load_corpus,
    write_corpus,
)
from .errors import BanglaTCError, InputError
from .evaluate import bench_training, format_curve_csv, learning_curve, reports_to_dict, run_cv
from .features import build_dataset, build_vocabulary, preprocess_corpus, write_sparse_matrix
from .folds import stratified_kfold
from .preprocess import (
    PipelineConfig,
    Steps,
    default_stopwords,
    default_suffix_rules,
    load_stopwords,
    load_suffix_rules,
)

DEFAULT_SEED = 0


def _k_value(s: str) -> int | None:
    if s == "auto":
        return None
    k = int(s)
    if k < 1:
        raise ValueError("k must be positive")
    return k


def _opt_int(s: str) -> int | None:
    return None if s in ("none", "None", "") else int(s)


def _opt_float(s: str) -> float | None:
    return None if s in ("none", "None", "auto", "") else float(s)


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


# option -> (converter for config-file strings, default)
SETTINGS = {
    "seed": (int, DEFAULT_SEED),
    "threads": (int, None),
    "stopwords": (str, None),
    "suffixes": (str, None),
    "no_digits": (_bool, False),
    "no_punctuation": (_bool, False),
    "no_stopwords": (_bool, False),
    "no_stem": (_bool, False),
    "keep_single_letters": (_bool, False),
    "k": (_k_value, None),
    "C": (float, 1.0),
    "kernel": (str, "sigmoid"),
    "gamma": (_opt_float, None),
    "coef0": (float, 0.0),
    "tol": (float, 1e-3),
    "max_passes": (int, 100),
    "min_leaf": (int, 1),
    "max_depth": (_opt_int, None),
    "folds": (int, 10),
    "classifiers": (str, "all"),
    "classifier": (str, "nb"),
}


def _common(p: argparse.ArgumentParser, pipeline: bool = True, hyper: bool = True) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--config", help="INI file with a [banglatc] section of option defaults")
    p.add_argument("--seed", type=int, default=S, help=f"random seed (default {DEFAULT_SEED})")
    p.add_argument("--threads", type=int, default=S, help="worker threads (default: CPU count)")
    if pipeline:
        g = p.add_argument_group("preprocessing")
        g.add_argument("--stopwords", default=S, help="stop-word file, one term per line")
        g.add_argument("--suffixes", default=S, help="suffix-rule file, suffix<TAB>min_stem_length")
        g.add_argument("--no-digits", action="store_true", default=S, help="keep digits")
        g.add_argument("--no-punctuation", action="store_true", default=S, help="keep punctuation")
        g.add_argument("--no-stopwords", action="store_true", default=S,
                       help="skip stop-word and single-letter removal")
        g.add_argument("--no-stem", action="store_true", default=S, help="skip stemming")
        g.add_argument("--keep-single-letters", action="store_true", default=S,
                       help="do not drop one-letter words")
    if hyper:
        g = p.add_argument_group("classifier hyperparameters")
        g.add_argument("--k", type=_k_value, default=S, help="KNN neighbours, or 'auto' (default) to tune 1..10")
        g.add_argument("--C", type=float, default=S, help="SVM penalty (default 1)")
        g.add_argument("--kernel", choices=["linear", "sigmoid"], default=S, help="SVM kernel (default sigmoid)")
        g.add_argument("--gamma", type=_opt_float, default=S, help="sigmoid gamma (default 1/vocabulary size)")
        g.add_argument("--coef0", type=float, default=S, help="sigmoid offset r (default 0)")
        g.add_argument("--tol", type=float, default=S, help="SMO KKT tolerance (default 1e-3)")
        g.add_argument("--max-passes", type=int, default=S, help="SMO update budget in passes over the data")
        g.add_argument("--min-leaf", type=int, default=S, help="C4.5 minimum documents per leaf (default 1)")
        g.add_argument("--max-depth", type=_opt_int, default=S, help="C4.5 depth limit (default none)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="banglatc", description="Bangla document categorization with NB, KNN, C4.5 and SVM."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one classifier on a corpus and save the model")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True, help="model JSON path")
    p.add_argument("--classifier", choices=CLASSIFIERS, default=argparse.SUPPRESS)
    _common(p)

    p = sub.add_parser("predict", help="classify documents with a saved model")
    p.add_argument("model")
    p.add_argument("inputs", nargs="*", help="document files; '-' or nothing reads standard input")
    p.add_argument("--scores", action="store_true", help="also print per-category decision values")

    p = sub.add_parser("evaluate", help="stratified k-fold cross-validation")
    p.add_argument("corpus")
    p.add_argument("--classifiers", default=argparse.SUPPRESS, help="comma list or 'all' (default)")
    p.add_argument("--folds", type=int, default=argparse.SUPPRESS, help="number of folds (default 10)")
    p.add_argument("--json", dest="json_out", help="write the JSON report here")
    p.add_argument("--include-timing", action="store_true",
                   help="put training seconds in the JSON (makes it run-dependent)")
    _common(p)

    p = sub.add_parser("learning-curve", help="macro F1 against training-set size")
    p.add_argument("corpus")
    p.add_argument("--classifiers", default=argparse.SUPPRESS)
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--step-size", type=int, default=30)
    p.add_argument("--holdout", type=float, default=0.3, help="holdout fraction (default 0.3)")
    p.add_argument("-o", "--output", help="CSV path (default: standard output)")
    _common(p)

    p = sub.add_parser("bench", help="median training time per classifier")
    p.add_argument("corpus")
    p.add_argument("--classifiers", default=argparse.SUPPRESS)
    p.add_argument("--repeats", type=int, default=3)
    _common(p)

    p = sub.add_parser("generate-corpus", help="write a seeded synthetic corpus")
    p.add_argument("output", help="directory to create")
    p.add_argument("--categories", type=int, default=5)
    p.add_argument("--docs-per-category", type=int, default=200)
    p.add_argument("--signature-terms", type=int, default=VocabProfile.signature_terms)
    p.add_argument("--background-terms", type=int, default=VocabProfile.background_terms)
    p.add_argument("--signature-rate", type=float, default=VocabProfile.signature_rate)
    p.add_argument("--overlap", type=float, default=VocabProfile.overlap)
    _common(p, pipeline=False, hyper=False)

    p = sub.add_parser("stats", help="documents per category")
    p.add_argument("corpus")

    p = sub.add_parser("vectorize", help="dump TF-IDF vectors as 'label index:weight ...' lines")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", help="output path (default: standard output)")
    _common(p, hyper=False)
    return parser


def resolve_settings(args: argparse.Namespace) -> dict:
    """Defaults, overridden by the config file, overridden by explicit flags."""
    settings = {k: v for k, (_, v) in SETTINGS.items()}
    config = getattr(args, "config", None)
    if config:
        path = Path(config)
        if not path.is_file():
            raise InputError(f"config file not found: {path}")
        cp = configparser.ConfigParser()
        cp.optionxform = str
        cp.read(path, encoding="utf-8")
        if cp.has_section("banglatc"):
            for key, raw in cp.items("banglatc"):
                name = key.replace("-", "_")
                if name not in SETTINGS:
                    raise InputError(f"{path}: unknown setting {key!r}")
                try:
                    settings[name] = SETTINGS[name][0](raw)
                except ValueError as exc:
                    raise InputError(f"{path}: bad value for {key}: {exc}") from None
    for name in SETTINGS:
        if hasattr(args, name):
            settings[name] = getattr(args, name)
    if settings["threads"] is None:
        settings["threads"] = os.cpu_count() or 1
    return settings


def pipeline_from(s: dict) -> PipelineConfig:
    return PipelineConfig(
        stopwords=load_stopwords(s["stopwords"]) if s["stopwords"] else default_stopwords(),
        suffix_rules=load_suffix_rules(s["suffixes"]) if s["suffixes"] else default_suffix_rules(),
        remove_single_letter=not s["keep_single_letters"],
        steps=Steps(
            digits=not s["no_digits"],
            punctuation=not s["no_punctuation"],
            stopwords=not s["no_stopwords"],
            stem=not s["no_stem"],
        ),
    )


def params_from(s: dict) -> Params:
    return Params(
        k=s["k"], C=s["C"], kernel=s["kernel"], gamma=s["gamma"], coef0=s["coef0"],
        tol=s["tol"], max_passes=s["max_passes"], min_leaf=s["min_leaf"],
        max_depth=s["max_depth"], seed=s["seed"],
    )


def classifier_list(names: str) -> list[str]:
    if names == "all":
        return list(CLASSIFIERS)
    return check_names(n.strip() for n in names.split(",") if n.strip())


def _check_output_dir(path: str | None) -> None:
    if path:
        parent = Path(path).resolve().parent
        if not parent.is_dir():
            raise InputError(f"output directory does not exist: {parent}")


def _write_or_print(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_train(args, s) -> None:
    _check_output_dir(args.output)
    cfg = pipeline_from(s)
    corpus = load_corpus(args.corpus)
    terms = preprocess_corpus(corpus, cfg)
    data = build_dataset(terms, corpus.labels, build_vocabulary(terms), corpus.categories)
    start = time.perf_counter()
    clf = fit_text_classifier(s["classifier"], data, cfg, params_from(s))
    elapsed = time.perf_counter() - start
    clf.save(args.output)
    print(f"vocabulary size\t{len(data.vocab)}")
    print(f"training seconds\t{elapsed:.3f}")


def _read_inputs(inputs: list[str]) -> list[tuple[str, str]]:
    if not inputs:
        inputs = ["-"]
    docs = []
    for name in inputs:
        if name == "-":
            docs.append(("-", sys.stdin.read()))
            continue
        p = Path(name)
        if not p.is_file():
            raise InputError(f"no such document: {p}")
        try:
            docs.append((name, p.read_bytes().decode("utf-8-sig")))
        except UnicodeDecodeError as exc:
            raise InputError(f"{p}: not valid UTF-8 ({exc.reason})") from None
    return docs


def cmd_predict(args, s) -> None:
    clf = TextClassifier.load(args.model)
    docs = _read_inputs(args.inputs)
    labels = clf.predict_texts([text for _, text in docs])
    for (name, text), label in zip(docs, labels):
        prefix = f"{name}\t" if len(docs) > 1 else ""
        print(f"{prefix}{label}")
        if args.scores:
            for cat, v in clf.scores_text(text).items():
                print(f"{prefix}{cat}\t{v!r}")


def cmd_evaluate(args, s) -> None:
    _check_output_dir(args.json_out)
    names = classifier_list(s["classifiers"])
    cfg = pipeline_from(s)
    corpus = load_corpus(args.corpus)
    plan = stratified_kfold(corpus, s["folds"], s["seed"])
    reports = run_cv(corpus, cfg, names, plan, params_from(s), threads=s["threads"])
    for r in reports.values():
        print(r.format_table())
        print(f"training seconds (sum over folds): {r.train_seconds:.3f}")
        print()
    if args.json_out:
        doc = {
            "folds": plan.k,
            "seed": plan.seed,
            "reports": reports_to_dict(reports, include_timing=args.include_timing),
        }
        Path(args.json_out).write_text(
            json.dumps(doc, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )


def cmd_learning_curve(args, s) -> None:
    _check_output_dir(args.output)
    names = classifier_list(s["classifiers"])
    corpus = load_corpus(args.corpus)
    points = learning_curve(corpus, pipeline_from(s), names, args.steps, args.step_size,
                            args.holdout, s["seed"], params_from(s))
    _write_or_print(format_curve_csv(points), args.output)


def cmd_bench(args, s) -> None:
    names = classifier_list(s["classifiers"])
    corpus = load_corpus(args.corpus)
    times = bench_training(corpus, pipeline_from(s), names, args.repeats, params_from(s))
    print("classifier\tmedian_seconds")
    for name, t in times.items():
        print(f"{name}\t{t:.4f}")


def cmd_generate(args, s) -> None:
    out = Path(args.output)
    if out.exists() and any(out.iterdir()):
        raise InputError(f"output directory is not empty: {out}")
    profile = VocabProfile(
        signature_terms=args.signature_terms,
        background_terms=args.background_terms,
        signature_rate=args.signature_rate,
        overlap=args.overlap,
    )
    corpus = generate_synthetic_corpus(s["seed"], args.categories, args.docs_per_category, profile)
    write_corpus(corpus, out)
    sys.stdout.write(format_stats(corpus_stats(corpus)))


def cmd_stats(args, s) -> None:
    sys.stdout.write(format_stats(corpus_stats(load_corpus(args.corpus))))


def cmd_vectorize(args, s) -> None:
    _check_output_dir(args.output)
    corpus = load_corpus(args.corpus)
    terms = preprocess_corpus(corpus, pipeline_from(s))
    data = build_dataset(terms, corpus.labels, build_vocabulary(terms), corpus.categories)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            write_sparse_matrix(data, fh)
    else:
        write_sparse_matrix(data, sys.stdout)


COMMANDS = {
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "learning-curve": cmd_learning_curve,
    "bench": cmd_bench,
    "generate-corpus": cmd_generate,
    "stats": cmd_stats,
    "vectorize": cmd_vectorize,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = resolve_settings(args)
        COMMANDS[args.command](args, settings)
    except (BanglaTCError, OSError) as exc:
        msg = " ".join(str(exc).split())
        print(f"banglatc: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
