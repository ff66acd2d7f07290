"""Labeled document collections: on-disk loading, statistics, synthetic generation.

On disk a corpus is one directory per category holding UTF-8 ``.txt`` files::

    root/
      খেলা/0001.txt
      শিক্ষা/0001.txt
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DecodeError, InputError, ValidationError
from .preprocess import default_stopwords, default_suffix_rules, stem_fully

# category names used by the synthetic generator when it needs at most five
NEWS_CATEGORIES = ("বাণিজ্য", "খেলা", "স্বাস্থ্য", "প্রযুক্তি", "শিক্ষা")


@dataclass(frozen=True)
class LabeledDocument:
    id: str
    text: str
    category: str


@dataclass(frozen=True)
class Corpus:
    categories: tuple[str, ...]
    documents: tuple[LabeledDocument, ...]

    def __post_init__(self):
        cats = tuple(self.categories)
        if list(cats) != sorted(set(cats)):
            raise ValidationError("categories must be sorted and duplicate-free")
        known = set(cats)
        for doc in self.documents:
            if doc.category not in known:
                raise ValidationError(f"{doc.id}: unknown category {doc.category!r}")
            if not doc.text.strip():
                raise ValidationError(f"{doc.id}: empty document")

    @property
    def counts(self) -> dict[str, int]:
        c = Counter(d.category for d in self.documents)
        return {cat: c[cat] for cat in self.categories}

    @property
    def labels(self) -> list[int]:
        index = {c: i for i, c in enumerate(self.categories)}
        return [index[d.category] for d in self.documents]

    def __len__(self) -> int:
        return len(self.documents)

    @classmethod
    def from_documents(cls, docs: Iterable[LabeledDocument]) -> "Corpus":
        docs = tuple(docs)
        return cls(tuple(sorted({d.category for d in docs})), docs)


def load_corpus(root: str | Path) -> Corpus:
    root = Path(root)
    if not root.is_dir():
        raise InputError(f"corpus directory not found: {root}")
    categories = sorted(
        p.name for p in root.iterdir() if p.is_dir() and not p.name.startswith(".")
    )
    if not categories:
        raise ValidationError(f"{root}: no category subdirectories")
    docs = []
    for cat in categories:
        files = sorted(f for f in (root / cat).iterdir() if f.is_file() and f.suffix == ".txt")
        if not files:
            raise ValidationError(f"category {cat!r} contains no .txt files")
        for f in files:
            rel = f"{cat}/{f.name}"
            try:
                text = f.read_bytes().decode("utf-8-sig")
            except UnicodeDecodeError as exc:
                raise DecodeError(f"{rel}: not valid UTF-8 ({exc.reason})") from None
            docs.append(LabeledDocument(rel, text, cat))
    return Corpus(tuple(categories), tuple(docs))


def write_corpus(corpus: Corpus, root: str | Path) -> None:
    """Write `corpus` in the directory-per-category layout; ids become relative paths."""
    root = Path(root)
    for doc in corpus.documents:
        path = root / doc.id
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(doc.text, encoding="utf-8")


def corpus_stats(c: Corpus) -> list[tuple[str, int]]:
    rows = list(c.counts.items())
    rows.append(("total", len(c)))
    return rows


def format_stats(rows: Sequence[tuple[str, int]]) -> str:
    lines = ["category\tdocuments"]
    lines += [f"{name}\t{n}" for name, n in rows]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VocabProfile:
    """Knobs for the synthetic generator.

    Each token of a document is a signature term with probability
    `signature_rate`, otherwise a shared background term.  A signature
    slot borrows from another category's pool with probability `overlap`.
    """

    signature_terms: int = 20
    background_terms: int = 300
    signature_rate: float = 0.35
    overlap: float = 0.02
    min_length: int = 40
    max_length: int = 80
    # stop words, numbers and punctuation sprinkled in to exercise preprocessing
    noise_rate: float = 0.1

    def __post_init__(self):
        if self.signature_terms < 1 or self.background_terms < 1:
            raise InputError("term pools must be non-empty")
        if not 0 <= self.overlap <= 1 or not 0 < self.signature_rate <= 1:
            raise InputError("overlap must be in [0, 1] and signature_rate in (0, 1]")
        if not 0 <= self.noise_rate < 1:
            raise InputError("noise_rate must be in [0, 1)")
        if not 1 <= self.min_length <= self.max_length:
            raise InputError("need 1 <= min_length <= max_length")


_CONSONANTS = "কখগঘচছজঝটঠডঢতথদধনপফবভমযরলশষসহ"
_VOWEL_SIGNS = ("", "া", "ি", "ী", "ু", "ূ", "ো")
_NOISE = ("২০১৪", "১২", "৩৫০", "2015", "।", "-", "(", ")", ",", "?")


class _TermFactory:
    """Draws distinct pseudo-words that the default pipeline keeps intact."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.seen: set[str] = set()
        self.stopwords = default_stopwords()
        self.rules = default_suffix_rules()

    def draw(self) -> str:
        while True:
            n = self.rng.randint(2, 4)
            term = "".join(
                self.rng.choice(_CONSONANTS) + self.rng.choice(_VOWEL_SIGNS) for _ in range(n)
            )
            if (
                term not in self.seen
                and term not in self.stopwords
                and stem_fully(term, self.rules) == term
            ):
                self.seen.add(term)
                return term

    def pool(self, size: int) -> list[str]:
        return [self.draw() for _ in range(size)]


def generate_synthetic_corpus(
    seed: int,
    categories: int = 5,
    docs_per_category: int = 200,
    profile: VocabProfile | None = None,
) -> Corpus:
    if categories < 2:
        raise InputError("need at least 2 categories")
    if docs_per_category < 1:
        raise InputError("need at least 1 document per category")
    profile = profile or VocabProfile()
    rng = random.Random(seed)
    terms = _TermFactory(rng)
    names = _category_names(categories)
    signatures = [terms.pool(profile.signature_terms) for _ in names]
    background = terms.pool(profile.background_terms)
    noise = sorted(default_stopwords().words) + list(_NOISE)

    docs = []
    for ci, name in enumerate(names):
        others = [j for j in range(categories) if j != ci]
        for di in range(docs_per_category):
            length = rng.randint(profile.min_length, profile.max_length)
            tokens = []
            for _ in range(length):
                u = rng.random()
                if u < profile.signature_rate:
                    src = ci
                    if rng.random() < profile.overlap:
                        src = rng.choice(others)
                    tokens.append(rng.choice(signatures[src]))
                elif u < profile.signature_rate + profile.noise_rate * (1 - profile.signature_rate):
                    tokens.append(rng.choice(noise))
                else:
                    tokens.append(rng.choice(background))
            # signature draws can all miss; keep at least one per document
            if not any(t in signatures[ci] for t in tokens):
                tokens[0] = rng.choice(signatures[ci])
            docs.append(LabeledDocument(f"{name}/{di:04d}.txt", " ".join(tokens) + "\n", name))
    # same order load_corpus would produce from the written files
    docs.sort(key=lambda d: (d.category, d.id))
    return Corpus.from_documents(docs)


def signature_pools(
    seed: int, categories: int = 5, profile: VocabProfile | None = None
) -> dict[str, list[str]]:
    """Signature terms the generator uses for `seed`, by category name."""
    profile = profile or VocabProfile()
    terms = _TermFactory(random.Random(seed))
    return {name: terms.pool(profile.signature_terms) for name in _category_names(categories)}


def _category_names(categories: int) -> list[str]:
    if categories <= len(NEWS_CATEGORIES):
        return list(NEWS_CATEGORIES[:categories])
    return [f"category{i:02d}" for i in range(categories)]
