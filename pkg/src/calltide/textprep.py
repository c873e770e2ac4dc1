"""Deterministic text normalization for transcripts.

The pipeline is lowercase -> strip punctuation -> whitespace tokenize ->
drop stopwords -> stem.  Token counting for the density report happens
before stopword removal, on the same tokenizer the models' budgets are
quoted against.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Iterable

from .errors import ConfigurationError
from .porter import porter_stem
from .validation import ParamsMixin, check_text_list

if TYPE_CHECKING:
    from .ingest import Transcript

# ASCII punctuation plus the typographic quotes, dashes and ellipsis that
# show up in formatted transcripts.
PUNCTUATION = string.punctuation + "‘’‚‛“”„‟‐‑‒–—―…"

_PUNCT_TABLE = str.maketrans({ch: " " for ch in PUNCTUATION})
_VERSION_RE = re.compile(r"version:\s*(\S+)")


@dataclass(frozen=True)
class StopwordList:
    """A versioned set of lowercase words to drop before modeling."""

    words: frozenset[str]
    version: str = "custom"

    def __post_init__(self):
        for word in self.words:
            if not word or word != word.lower():
                raise ConfigurationError(f"stopword {word!r} must be lowercase and non-empty")

    def __contains__(self, word: str) -> bool:
        return word in self.words


@dataclass
class TokenSequence:
    """Ordered word tokens tied back to their source transcript."""

    tokens: list[str] = field(default_factory=list)
    source_id: str = ""

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


def load_stopwords(path: str | Path | None = None) -> StopwordList:
    """Load a stopword list (one word per line, ``#`` comments allowed).

    With no path, loads the list bundled with the package.
    """
    if path is None:
        text = resources.files("calltide.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    version = "custom"
    words = []
    for line in text.splitlines():
        if "#" in line:
            comment = line[line.index("#") :]
            match = _VERSION_RE.search(comment)
            if match:
                version = match.group(1)
            line = line[: line.index("#")]
        line = line.strip()
        if line:
            words.append(line)
    return StopwordList(words=frozenset(words), version=version)


def normalize(text: str) -> str:
    """Lowercase and replace every punctuation character with a space.

    Digits are kept; character positions are preserved (no collapsing),
    so ``Q4-2023`` becomes ``q4 2023``.
    """
    return text.lower().translate(_PUNCT_TABLE)


def tokenize(text: str, source_id: str = "") -> TokenSequence:
    """Split normalized text on whitespace runs, dropping empty fragments."""
    return TokenSequence(tokens=text.split(), source_id=source_id)


def remove_stopwords(seq: TokenSequence, stopwords: StopwordList) -> TokenSequence:
    return TokenSequence(
        tokens=[t for t in seq.tokens if t not in stopwords],
        source_id=seq.source_id,
    )


def stem_tokens(seq: TokenSequence) -> TokenSequence:
    return TokenSequence(
        tokens=[porter_stem(t) for t in seq.tokens],
        source_id=seq.source_id,
    )


def preprocess(
    text: str,
    stopwords: StopwordList | None = None,
    source_id: str = "",
) -> TokenSequence:
    """Full normalization pipeline: lowercase, de-punctuate, tokenize,
    drop stopwords, stem."""
    if stopwords is None:
        stopwords = load_stopwords()
    seq = tokenize(normalize(text), source_id=source_id)
    return stem_tokens(remove_stopwords(seq, stopwords))


def token_count(transcript: "Transcript", mode: str = "qa") -> int:
    """Whitespace-token count of the selected text field, before stopword
    removal (sequence budgets apply to unfiltered text)."""
    if mode == "qa":
        text = transcript.qa_text
    elif mode == "full":
        text = transcript.full_text
    else:
        raise ConfigurationError(f"unknown text mode {mode!r} (expected 'qa' or 'full')")
    return len(tokenize(normalize(text)).tokens)


class TranscriptPreprocessor(ParamsMixin):
    """Estimator-style transformer from raw text to preprocessed token lists.

    Parameters
    ----------
    stopword_path : str or None
        Path to an alternative stopword file; None uses the bundled list.
    stem : bool
        Apply the suffix stripper after stopword removal.
    """

    def __init__(self, stopword_path: str | None = None, stem: bool = True):
        self.stopword_path = stopword_path
        self.stem = stem

    def fit(self, X: Iterable[str], y=None):
        self.stopwords_ = load_stopwords(self.stopword_path)
        return self

    def transform(self, X: Iterable[str]) -> list[list[str]]:
        if not hasattr(self, "stopwords_"):
            raise ConfigurationError("TranscriptPreprocessor is unfitted (call fit first)")
        out = []
        for text in check_text_list(X):
            seq = remove_stopwords(tokenize(normalize(text)), self.stopwords_)
            if self.stem:
                seq = stem_tokens(seq)
            out.append(seq.tokens)
        return out

    def fit_transform(self, X: Iterable[str], y=None) -> list[list[str]]:
        return self.fit(X, y).transform(X)
