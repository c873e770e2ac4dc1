"""Classifier abstraction and the built-in trainable baseline.

Every classifier — builtin or external plugin — presents a ClassifierHandle
(name, version, declared sequence budget) and turns text into a 3-way score
distribution.  The builtin baseline is a multinomial naive Bayes over
stemmed unigrams: fast, deterministic, and fully checkable by hand, so the
pipeline runs end to end without any model download.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, InsufficientExamples
from .labeling import LABELS
from .validation import ParamsMixin, check_labels, check_token_lists

BUILTIN_NAME = "nb-baseline"
BUILTIN_VERSION = "1"
BUILTIN_MAX_TOKENS = 512


@dataclass(frozen=True)
class ClassifierHandle:
    name: str
    version: str
    max_tokens: int
    mode: str  # "builtin" | "plugin"
    wants: str = "raw"  # input flavor: "raw" | "preprocessed"

    def __post_init__(self):
        if self.max_tokens < 16:
            raise ConfigurationError(f"max_tokens must be >= 16, got {self.max_tokens}")
        if self.mode not in ("builtin", "plugin"):
            raise ConfigurationError(f"unknown classifier mode {self.mode!r}")
        if self.wants not in ("raw", "preprocessed"):
            raise ConfigurationError(f"unknown input flavor {self.wants!r}")


def argmax_label(scores) -> int:
    """Index of the highest score; exact ties go to the lowest class index."""
    best = 0
    for i in (1, 2):
        if scores[i] > scores[best]:
            best = i
    return best


class NaiveBayesBaseline(ParamsMixin):
    """Multinomial naive Bayes over preprocessed (stemmed) unigram lists,
    with the scikit-learn fit/predict/predict_proba surface.

    Parameters
    ----------
    alpha : float
        Additive smoothing constant, > 0.

    Tokens unseen in training are ignored at prediction time; a document
    with no known tokens scores exactly the class priors.
    """

    _estimator_type = "classifier"

    def __init__(self, alpha: float = 1.0):
        self.alpha = alpha

    def fit(self, X: list[list[str]], y):
        if self.alpha <= 0:
            raise ConfigurationError(f"alpha must be > 0, got {self.alpha}")
        X = check_token_lists(X)
        y = check_labels(y)
        if len(X) != len(y):
            raise ConfigurationError("X and y length mismatch")
        missing = [label for label in LABELS if label not in y]
        if missing:
            raise InsufficientExamples(f"no training examples for classes {missing}")

        vocab = sorted({token for doc in X for token in doc})
        self.vocabulary_ = {token: i for i, token in enumerate(vocab)}
        counts = np.zeros((3, len(vocab)), dtype=np.float64)
        class_docs = np.zeros(3, dtype=np.float64)
        for doc, label in zip(X, y):
            class_docs[label] += 1
            for token in doc:
                counts[label, self.vocabulary_[token]] += 1
        self.class_prior_ = class_docs / class_docs.sum()
        self.class_log_prior_ = np.log(self.class_prior_)
        totals = counts.sum(axis=1, keepdims=True)
        self.feature_log_prob_ = np.log(
            (counts + self.alpha) / (totals + self.alpha * len(vocab))
        )
        self.classes_ = np.array(LABELS)
        return self

    def _check_fitted(self):
        if not hasattr(self, "vocabulary_"):
            raise ConfigurationError("baseline is not trained (call fit first)")

    def predict_scores(self, tokens: list[str]) -> tuple[float, float, float]:
        """Normalized posterior over the three classes for one document."""
        self._check_fitted()
        log_scores = self.class_log_prior_.copy()
        for token in tokens:
            idx = self.vocabulary_.get(token)
            if idx is not None:
                log_scores += self.feature_log_prob_[:, idx]
        shifted = log_scores - log_scores.max()
        probs = np.exp(shifted)
        probs /= probs.sum()
        return tuple(float(p) for p in probs)

    def predict_proba(self, X: list[list[str]]) -> np.ndarray:
        return np.array([self.predict_scores(doc) for doc in X])

    def predict(self, X: list[list[str]]) -> np.ndarray:
        return np.array([argmax_label(self.predict_scores(doc)) for doc in X])

    def score(self, X: list[list[str]], y) -> float:
        """Mean accuracy, matching the classifier-mixin convention."""
        y = np.asarray(check_labels(y))
        return float(np.mean(self.predict(X) == y))

    # --- persistence ------------------------------------------------------

    def to_dict(self) -> dict:
        self._check_fitted()
        vocab = [""] * len(self.vocabulary_)
        for token, idx in self.vocabulary_.items():
            vocab[idx] = token
        return {
            "format": "nb-baseline/1",
            "alpha": self.alpha,
            "vocabulary": vocab,
            "class_log_prior": self.class_log_prior_.tolist(),
            "feature_log_prob": self.feature_log_prob_.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NaiveBayesBaseline":
        if data.get("format") != "nb-baseline/1":
            raise ConfigurationError("unrecognized baseline model file")
        model = cls(alpha=data["alpha"])
        model.vocabulary_ = {token: i for i, token in enumerate(data["vocabulary"])}
        model.class_log_prior_ = np.asarray(data["class_log_prior"], dtype=np.float64)
        model.class_prior_ = np.exp(model.class_log_prior_)
        model.feature_log_prob_ = np.asarray(data["feature_log_prob"], dtype=np.float64)
        model.classes_ = np.array(LABELS)
        return model

    def save(self, path) -> None:
        from pathlib import Path

        Path(path).write_text(json.dumps(self.to_dict()), "utf-8")

    @classmethod
    def load(cls, path) -> "NaiveBayesBaseline":
        from pathlib import Path

        try:
            return cls.from_dict(json.loads(Path(path).read_text("utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot load baseline model {path}: {exc}") from exc


def builtin_handle(max_tokens: int = BUILTIN_MAX_TOKENS) -> ClassifierHandle:
    return ClassifierHandle(
        name=BUILTIN_NAME,
        version=BUILTIN_VERSION,
        max_tokens=max_tokens,
        mode="builtin",
        wants="preprocessed",
    )


def validate_scores(scores) -> tuple[float, float, float]:
    """Shared score-triple contract: 3 nonnegative reals summing to 1 (1e-6)."""
    if not isinstance(scores, (list, tuple)) or len(scores) != 3:
        raise ValueError("scores must be a list of 3 numbers")
    values = []
    for s in scores:
        if not isinstance(s, (int, float)) or isinstance(s, bool) or not math.isfinite(s):
            raise ValueError(f"score {s!r} is not a finite number")
        if s < 0:
            raise ValueError(f"score {s} is negative")
        values.append(float(s))
    if abs(sum(values) - 1.0) > 1e-6:
        raise ValueError(f"scores sum to {sum(values)}, expected 1")
    return tuple(values)
