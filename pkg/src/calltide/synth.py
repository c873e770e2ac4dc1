"""Synthetic corpora for calibration and plugin training.

The separable corpus draws each document's words from a class-exclusive
vocabulary whose stems stay disjoint after preprocessing, so any competent
classifier should reach perfect accuracy on it and chance-level accuracy
once labels are shuffled.
"""

from __future__ import annotations

import json
import random

from .labeling import LabeledExample
from .store import DEFAULT_PROPORTIONS, stratified_split

CLASS_VOCABULARIES = {
    0: ["loss", "decline", "weak", "miss", "impairment", "writedown",
        "downturn", "shortfall", "churn", "headwind"],
    1: ["inline", "steady", "flat", "unchanged", "stable", "consistent",
        "maintain", "par", "typical", "ordinary"],
    2: ["growth", "beat", "record", "strong", "surge", "expansion",
        "momentum", "upside", "accelerate", "outperform"],
}

# movement values consistent with each label under default thresholds
_MOVEMENT_FOR_LABEL = {0: -5.0, 1: 0.0, 2: 5.0}


def make_separable_corpus(
    n: int = 300,
    seed: int = 7,
    words_per_doc: tuple[int, int] = (8, 20),
    class_weights: tuple[float, float, float] | None = None,
) -> tuple[list[str], list[int]]:
    """Build (texts, labels); balanced classes unless weights are given."""
    rng = random.Random(seed)
    texts, labels = [], []
    for i in range(n):
        if class_weights is None:
            label = i % 3
        else:
            label = rng.choices((0, 1, 2), weights=class_weights)[0]
        k = rng.randint(*words_per_doc)
        words = rng.choices(CLASS_VOCABULARIES[label], k=k)
        texts.append(" ".join(words))
        labels.append(label)
    return texts, labels


def corpus_to_jsonl(
    texts: list[str],
    labels: list[int],
    seed: int = 42,
    proportions: tuple[float, float, float] = DEFAULT_PROPORTIONS,
) -> str:
    """Serialize a corpus in the dataset-export format, split included."""
    examples = [
        LabeledExample(
            transcript_id=f"SYN{i:04d}",
            price_movement=_MOVEMENT_FOR_LABEL[label],
            label=label,
        )
        for i, label in enumerate(labels)
    ]
    split_of = {
        a.transcript_id: a.split
        for a in stratified_split(examples, proportions=proportions, seed=seed)
    }
    lines = [
        json.dumps(
            {
                "id": ex.transcript_id,
                "text": text,
                "label": ex.label,
                "split": split_of[ex.transcript_id],
            },
            ensure_ascii=False,
        )
        for ex, text in zip(examples, texts)
    ]
    return "\n".join(lines) + "\n"
