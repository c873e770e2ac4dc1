#!/usr/bin/env python3
"""Generate jsonl training fixtures for the frontend plugin tests.

Rows use the dataset-export schema ({"id","text","label","split"}).  One
balanced separable corpus for the accuracy checks, one 90%-positive-skewed
corpus for the degenerate-state logging check.

Run from the repository root:  python tools/gen_frontend_fixtures.py
"""

from __future__ import annotations

import sys
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from calltide.synth import corpus_to_jsonl, make_separable_corpus

OUT_DIR = Path(__file__).resolve().parent.parent / "frontend" / "fixtures"


def main() -> int:
    OUT_DIR.mkdir(parents=True, exist_ok=True)

    texts, labels = make_separable_corpus(300, seed=7)
    (OUT_DIR / "synthetic_300.jsonl").write_text(corpus_to_jsonl(texts, labels))
    print("synthetic_300:", dict(Counter(labels)))

    skew_texts, skew_labels = make_separable_corpus(
        300, seed=11, class_weights=(0.05, 0.05, 0.9)
    )
    (OUT_DIR / "skew_300.jsonl").write_text(corpus_to_jsonl(skew_texts, skew_labels))
    print("skew_300:", dict(Counter(skew_labels)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
