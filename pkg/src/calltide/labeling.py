"""Truth-label assignment from share-price movement.

The label measures the move from two trading days before the report to two
trading days after: below the negative threshold is negative (0), above the
positive threshold is positive (2), anything in between — boundaries
included — is neutral (1).  Default thresholds are -3% / +3%.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import ConfigurationError
from .market import PriceWindow

LABEL_NEGATIVE = 0
LABEL_NEUTRAL = 1
LABEL_POSITIVE = 2
LABELS = (LABEL_NEGATIVE, LABEL_NEUTRAL, LABEL_POSITIVE)
LABEL_NAMES = {LABEL_NEGATIVE: "negative", LABEL_NEUTRAL: "neutral", LABEL_POSITIVE: "positive"}

DEFAULT_NEG_THRESHOLD = -3.0
DEFAULT_POS_THRESHOLD = 3.0


@dataclass(frozen=True)
class LabeledExample:
    transcript_id: str
    price_movement: float
    label: int
    neg_threshold: float = DEFAULT_NEG_THRESHOLD
    pos_threshold: float = DEFAULT_POS_THRESHOLD

    def __post_init__(self):
        if self.neg_threshold >= self.pos_threshold:
            raise ConfigurationError("neg_threshold must be below pos_threshold")
        expected = assign_label(self.price_movement, self.neg_threshold, self.pos_threshold)
        if self.label != expected:
            raise ValueError(
                f"label {self.label} inconsistent with movement {self.price_movement}"
            )


def price_movement(window: PriceWindow) -> float:
    """Percent change in share close from t-2 to t+2."""
    if window.sp_m2 <= 0:
        raise ConfigurationError("sp_m2 must be positive")
    return (window.sp_p2 - window.sp_m2) / window.sp_m2 * 100.0


def assign_label(
    movement: float,
    neg_threshold: float = DEFAULT_NEG_THRESHOLD,
    pos_threshold: float = DEFAULT_POS_THRESHOLD,
) -> int:
    if neg_threshold >= pos_threshold:
        raise ConfigurationError("neg_threshold must be below pos_threshold")
    if movement < neg_threshold:
        return LABEL_NEGATIVE
    if movement > pos_threshold:
        return LABEL_POSITIVE
    return LABEL_NEUTRAL


def label_example(
    transcript_id: str,
    window: PriceWindow,
    neg_threshold: float = DEFAULT_NEG_THRESHOLD,
    pos_threshold: float = DEFAULT_POS_THRESHOLD,
) -> LabeledExample:
    movement = price_movement(window)
    return LabeledExample(
        transcript_id=transcript_id,
        price_movement=movement,
        label=assign_label(movement, neg_threshold, pos_threshold),
        neg_threshold=neg_threshold,
        pos_threshold=pos_threshold,
    )


@dataclass(frozen=True)
class ClassBalance:
    counts: dict[int, int]
    proportions: dict[int, float]
    total: int


def class_balance(examples: Iterable[LabeledExample | int]) -> ClassBalance:
    """Exact per-label counts and proportions (all-zero for an empty input)."""
    labels = [ex.label if isinstance(ex, LabeledExample) else int(ex) for ex in examples]
    counter = Counter(labels)
    unknown = set(counter) - set(LABELS)
    if unknown:
        raise ConfigurationError(f"labels outside {{0,1,2}}: {sorted(unknown)}")
    total = len(labels)
    counts = {label: counter.get(label, 0) for label in LABELS}
    proportions = {
        label: (counts[label] / total if total else 0.0) for label in LABELS
    }
    return ClassBalance(counts=counts, proportions=proportions, total=total)
