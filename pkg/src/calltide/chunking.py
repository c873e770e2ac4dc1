"""Fixed-budget document chunking and prediction regrouping.

Long transcripts are sliced into contiguous, non-overlapping word-token
chunks identified by (transcript_id, chunk_index) so per-chunk predictions
can be regrouped afterwards.  The transcript-level label is the most
frequent chunk label; count ties fall back to the larger total score mass,
and a residual tie lands on neutral.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .errors import ConfigurationError, EmptyPredictionSet

DEFAULT_BUDGET_RATIO = 0.75
MIN_WORD_BUDGET = 64


@dataclass(frozen=True)
class Chunk:
    transcript_id: str
    chunk_index: int
    tokens: tuple[str, ...]
    text: str = field(default="")

    def __post_init__(self):
        if not self.text:
            object.__setattr__(self, "text", " ".join(self.tokens))


@dataclass(frozen=True)
class ChunkPrediction:
    transcript_id: str
    chunk_index: int
    label: int
    scores: tuple[float, float, float]

    def __post_init__(self):
        if len(self.scores) != 3 or any(s < 0 for s in self.scores):
            raise ValueError("scores must be 3 nonnegative reals")
        if abs(sum(self.scores) - 1.0) > 1e-6:
            raise ValueError(f"scores must sum to 1 (got {sum(self.scores)})")
        if self.label != max(range(3), key=lambda i: (self.scores[i], -i)):
            raise ValueError("label must be the argmax of scores (lowest index on ties)")


def chunk(tokens: list[str], budget: int, transcript_id: str = "") -> list[Chunk]:
    """Slice tokens into ceil(n/budget) chunks; only the last may run short."""
    if budget < 1:
        raise ConfigurationError("chunk budget must be >= 1")
    return [
        Chunk(
            transcript_id=transcript_id,
            chunk_index=i,
            tokens=tuple(tokens[i * budget : (i + 1) * budget]),
        )
        for i in range(math.ceil(len(tokens) / budget))
    ]


def truncate(tokens: list[str], budget: int, transcript_id: str = "") -> Chunk:
    """Single chunk holding the first min(n, budget) tokens."""
    if budget < 1:
        raise ConfigurationError("truncation budget must be >= 1")
    return Chunk(transcript_id=transcript_id, chunk_index=0, tokens=tuple(tokens[:budget]))


def word_budget_for(max_tokens: int, ratio: float = DEFAULT_BUDGET_RATIO) -> int:
    """Conservative word budget for a classifier's declared subword budget."""
    return max(int(max_tokens * ratio), MIN_WORD_BUDGET)


def aggregate_majority(predictions: list[ChunkPrediction]) -> int:
    """Majority label over one transcript's chunk predictions.

    Tie chain: label count, then total score mass assigned to each tied
    label, then neutral.
    """
    if not predictions:
        raise EmptyPredictionSet("cannot aggregate zero chunk predictions")
    ids = {p.transcript_id for p in predictions}
    if len(ids) != 1:
        raise ValueError(f"predictions span multiple transcripts: {sorted(ids)}")
    indices = [p.chunk_index for p in predictions]
    if len(set(indices)) != len(indices):
        raise ValueError("duplicate chunk indices in prediction set")

    counts = Counter(p.label for p in predictions)
    top = max(counts.values())
    tied = [label for label, n in counts.items() if n == top]
    if len(tied) == 1:
        return tied[0]
    mass = {label: sum(p.scores[label] for p in predictions) for label in tied}
    best = max(mass.values())
    tied_again = [label for label in tied if mass[label] == best]
    if len(tied_again) == 1:
        return tied_again[0]
    return 1
