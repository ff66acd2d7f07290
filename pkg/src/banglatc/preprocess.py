"""Text preprocessing: tokenization, digit/punctuation/stop-word removal, stemming.

Each step maps a term list to a (possibly shorter) term list.  Lengths of
Bengali words are measured in grapheme clusters, since a vowel sign or
virama is a separate code point but not a separate letter.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import regex

from .errors import InputError, ValidationError

ASCII_DIGITS = "0123456789"
BENGALI_DIGITS = "".join(chr(c) for c in range(0x09E6, 0x09F0))
DANDA = "।"
# the symbols listed for removal, kept explicitly even though all are P*/S*
SYMBOLS = "<>:{}[]^&*()|"

_DIGIT_TABLE = str.maketrans("", "", ASCII_DIGITS + BENGALI_DIGITS)
_GRAPHEME = regex.compile(r"\X")


def grapheme_len(term: str) -> int:
    return len(_GRAPHEME.findall(term))


def is_punctuation(ch: str) -> bool:
    return ch == DANDA or ch in SYMBOLS or unicodedata.category(ch)[0] in "PS"


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str] = frozenset()

    def __post_init__(self):
        for w in self.words:
            if not w or any(c.isspace() for c in w):
                raise ValidationError(f"invalid stop word {w!r}")

    def __contains__(self, term: str) -> bool:
        return term in self.words

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "StopwordList":
        words = set()
        for line in lines:
            line = unicodedata.normalize("NFC", line.strip())
            if line and not line.startswith("#"):
                words.add(line)
        return cls(frozenset(words))


@dataclass(frozen=True)
class SuffixRule:
    suffix: str
    min_stem_length: int = 2

    def __post_init__(self):
        if not self.suffix:
            raise ValidationError("suffix must be non-empty")
        if self.min_stem_length < 2:
            raise ValidationError(
                f"min_stem_length must be >= 2 (got {self.min_stem_length} for {self.suffix!r})"
            )


def sort_rules(rules: Iterable[SuffixRule]) -> tuple[SuffixRule, ...]:
    """Order rules longest suffix first; equal lengths keep their input order."""
    return tuple(sorted(rules, key=lambda r: -len(r.suffix)))


def _read_lines(path: str | Path) -> list[str]:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"no such file: {p}")
    try:
        return p.read_text(encoding="utf-8-sig").splitlines()
    except UnicodeDecodeError as exc:
        raise InputError(f"{p}: not valid UTF-8 ({exc.reason})") from None


def load_stopwords(path: str | Path) -> StopwordList:
    return StopwordList.from_lines(_read_lines(path))


def parse_suffix_rules(lines: Iterable[str], source: str = "<rules>") -> tuple[SuffixRule, ...]:
    rules = []
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        suffix = unicodedata.normalize("NFC", parts[0].strip())
        try:
            min_len = int(parts[1]) if len(parts) > 1 and parts[1].strip() else 2
        except ValueError:
            raise ValidationError(f"{source}:{lineno}: bad min_stem_length {parts[1]!r}") from None
        rules.append(SuffixRule(suffix, min_len))
    return sort_rules(rules)


def load_suffix_rules(path: str | Path) -> tuple[SuffixRule, ...]:
    return parse_suffix_rules(_read_lines(path), source=str(path))


def default_stopwords() -> StopwordList:
    text = resources.files("banglatc").joinpath("data/stopwords_bn.txt").read_text("utf-8")
    return StopwordList.from_lines(text.splitlines())


def default_suffix_rules() -> tuple[SuffixRule, ...]:
    text = resources.files("banglatc").joinpath("data/suffixes_bn.tsv").read_text("utf-8")
    return parse_suffix_rules(text.splitlines(), source="suffixes_bn.tsv")


@dataclass(frozen=True)
class Steps:
    digits: bool = True
    punctuation: bool = True
    stopwords: bool = True
    stem: bool = True


@dataclass(frozen=True)
class PipelineConfig:
    stopwords: StopwordList = field(default_factory=default_stopwords)
    suffix_rules: tuple[SuffixRule, ...] = field(default_factory=default_suffix_rules)
    remove_single_letter: bool = True
    steps: Steps = Steps()

    def __post_init__(self):
        lengths = [len(r.suffix) for r in self.suffix_rules]
        if lengths != sorted(lengths, reverse=True):
            raise ValidationError("suffix rules must be ordered longest suffix first")

    def to_dict(self) -> dict:
        return {
            "stopwords": sorted(self.stopwords.words),
            "suffix_rules": [[r.suffix, r.min_stem_length] for r in self.suffix_rules],
            "remove_single_letter": self.remove_single_letter,
            "steps": {
                "digits": self.steps.digits,
                "punctuation": self.steps.punctuation,
                "stopwords": self.steps.stopwords,
                "stem": self.steps.stem,
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        return cls(
            stopwords=StopwordList(frozenset(d["stopwords"])),
            suffix_rules=tuple(SuffixRule(s, n) for s, n in d["suffix_rules"]),
            remove_single_letter=d["remove_single_letter"],
            steps=Steps(**d["steps"]),
        )


def tokenize(text: str) -> list[str]:
    # NFC first so that stop words and suffixes match regardless of input encoding
    return unicodedata.normalize("NFC", text).split()


def remove_digits(tokens: Sequence[str]) -> list[str]:
    out = (t.translate(_DIGIT_TABLE) for t in tokens)
    return [t for t in out if t]


def remove_punctuation(tokens: Sequence[str]) -> list[str]:
    out = ("".join(c for c in t if not is_punctuation(c)) for t in tokens)
    return [t for t in out if t]


def remove_stopwords(
    tokens: Sequence[str], sw: StopwordList, remove_single_letter: bool = True
) -> list[str]:
    return [
        t for t in tokens
        if t not in sw and not (remove_single_letter and grapheme_len(t) == 1)
    ]


def stem(token: str, rules: Sequence[SuffixRule]) -> str:
    """Strip the longest listed suffix that leaves a long enough stem.

    At most one rule fires.  A token whose only matches would leave too
    short a stem comes back unchanged.
    """
    for rule in rules:
        if token.endswith(rule.suffix):
            base = token[: -len(rule.suffix)]
            if grapheme_len(base) >= rule.min_stem_length:
                return base
    return token


def stem_fully(token: str, rules: Sequence[SuffixRule]) -> str:
    """Apply `stem` until no rule fires (e.g. a plural marker followed by a case ending)."""
    while True:
        base = stem(token, rules)
        if base == token:
            return token
        token = base


def preprocess_document(text: str, cfg: PipelineConfig) -> list[str]:
    terms = tokenize(text)
    if cfg.steps.digits:
        terms = remove_digits(terms)
    if cfg.steps.punctuation:
        terms = remove_punctuation(terms)
    if cfg.steps.stopwords:
        terms = remove_stopwords(terms, cfg.stopwords, cfg.remove_single_letter)
    if cfg.steps.stem:
        terms = [stem_fully(t, cfg.suffix_rules) for t in terms]
        if cfg.steps.stopwords:
            # a stem can coincide with a stop word ("আমিকে" -> "আমি")
            terms = [t for t in terms if t not in cfg.stopwords]
    return terms
