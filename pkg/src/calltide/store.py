"""Single-file SQLite dataset store and deterministic splits.

One connection owner does all writing; reads can come from anywhere.  Every
write is an idempotent upsert keyed by natural keys, so re-running a
pipeline stage with unchanged inputs leaves the file unchanged.
"""

from __future__ import annotations

import datetime as dt
import json
import random
import sqlite3
from dataclasses import dataclass
from math import floor
from pathlib import Path
from typing import Iterable

from .errors import (
    ConfigurationError,
    ConstraintViolation,
    InsufficientExamples,
    StoreCorrupt,
)
from .ingest import Transcript
from .labeling import LABELS, LabeledExample
from .market import PriceWindow
from .chunking import ChunkPrediction

SCHEMA_VERSION = 1
SPLITS = ("train", "validation", "test")
DEFAULT_SPLIT_SEED = 42
DEFAULT_PROPORTIONS = (0.8, 0.1, 0.1)

_SCHEMA = """
CREATE TABLE meta (key TEXT PRIMARY KEY, value TEXT NOT NULL);
CREATE TABLE transcripts (
    id TEXT PRIMARY KEY,
    ticker TEXT NOT NULL,
    report_date TEXT NOT NULL,
    full_text TEXT NOT NULL,
    qa_text TEXT NOT NULL
);
CREATE TABLE price_windows (
    transcript_id TEXT PRIMARY KEY REFERENCES transcripts(id),
    sp_m90 REAL NOT NULL, sp_m2 REAL NOT NULL,
    sp_p2 REAL NOT NULL, sp_p90 REAL NOT NULL,
    bench_m90 REAL NOT NULL, bench_m2 REAL NOT NULL,
    bench_p2 REAL NOT NULL, bench_p90 REAL NOT NULL,
    date_m90 TEXT NOT NULL, date_m2 TEXT NOT NULL,
    date_p2 TEXT NOT NULL, date_p90 TEXT NOT NULL
);
CREATE TABLE examples (
    transcript_id TEXT PRIMARY KEY REFERENCES transcripts(id),
    price_movement REAL NOT NULL,
    label INTEGER NOT NULL CHECK (label IN (0, 1, 2)),
    neg_threshold REAL NOT NULL,
    pos_threshold REAL NOT NULL
);
CREATE TABLE splits (
    transcript_id TEXT PRIMARY KEY REFERENCES examples(transcript_id),
    split TEXT NOT NULL CHECK (split IN ('train', 'validation', 'test')),
    seed INTEGER NOT NULL,
    train_frac REAL NOT NULL, val_frac REAL NOT NULL, test_frac REAL NOT NULL
);
CREATE TABLE runs (
    run_id TEXT PRIMARY KEY,
    classifier_name TEXT NOT NULL,
    classifier_version TEXT NOT NULL,
    config TEXT NOT NULL,
    started_at TEXT NOT NULL,
    finished_at TEXT
);
CREATE TABLE chunk_predictions (
    run_id TEXT NOT NULL REFERENCES runs(run_id),
    transcript_id TEXT NOT NULL,
    chunk_index INTEGER NOT NULL,
    label INTEGER NOT NULL,
    score_neg REAL NOT NULL, score_neu REAL NOT NULL, score_pos REAL NOT NULL,
    PRIMARY KEY (run_id, transcript_id, chunk_index)
);
CREATE TABLE transcript_predictions (
    run_id TEXT NOT NULL REFERENCES runs(run_id),
    transcript_id TEXT NOT NULL,
    label INTEGER NOT NULL,
    PRIMARY KEY (run_id, transcript_id)
);
"""


@dataclass(frozen=True)
class SplitAssignment:
    transcript_id: str
    split: str
    seed: int
    proportions: tuple[float, float, float]

    def __post_init__(self):
        if self.split not in SPLITS:
            raise ConfigurationError(f"unknown split {self.split!r}")


@dataclass(frozen=True)
class RunRecord:
    run_id: str
    classifier_name: str
    classifier_version: str
    config: dict
    started_at: str
    finished_at: str | None = None


def validate_proportions(proportions: tuple[float, float, float]) -> tuple[float, float, float]:
    if len(proportions) != 3:
        raise ConfigurationError("proportions must be (train, validation, test)")
    if any(p <= 0 for p in proportions):
        raise ConfigurationError(f"split fractions must be positive: {proportions}")
    if abs(sum(proportions) - 1.0) > 1e-9:
        raise ConfigurationError(f"split fractions must sum to 1: {proportions}")
    return tuple(float(p) for p in proportions)


def largest_remainder_sizes(n: int, proportions: tuple[float, float, float]) -> tuple[int, ...]:
    """Integer sizes summing to n; leftover units go to the largest fractional
    remainders, earlier split first on exact ties."""
    quotas = [n * p for p in proportions]
    sizes = [floor(q) for q in quotas]
    leftovers = sorted(
        range(len(quotas)),
        key=lambda i: (quotas[i] - sizes[i], -i),
        reverse=True,
    )
    for i in range(n - sum(sizes)):
        sizes[leftovers[i]] += 1
    return tuple(sizes)


def stratified_split(
    examples: Iterable[LabeledExample],
    proportions: tuple[float, float, float] = DEFAULT_PROPORTIONS,
    seed: int = DEFAULT_SPLIT_SEED,
    stratify: bool = True,
) -> list[SplitAssignment]:
    """Deterministic per-class shuffle-and-partition split.

    Ids are sorted before the seeded shuffle, so the assignment depends only
    on (seed, example set), not input order.
    """
    proportions = validate_proportions(proportions)
    examples = list(examples)
    by_class: dict[int, list[str]] = {label: [] for label in LABELS}
    for ex in examples:
        by_class[ex.label].append(ex.transcript_id)
    if stratify:
        empty = [label for label in LABELS if not by_class[label]]
        if examples and empty:
            raise InsufficientExamples(
                f"stratified split needs at least 1 example per class; missing {empty}"
            )
        groups = [by_class[label] for label in LABELS]
    else:
        groups = [sorted(ex.transcript_id for ex in examples)]

    rng = random.Random(seed)
    assignments: list[SplitAssignment] = []
    for ids in groups:
        ids = sorted(ids)
        rng.shuffle(ids)
        sizes = largest_remainder_sizes(len(ids), proportions)
        cursor = 0
        for split, size in zip(SPLITS, sizes):
            for transcript_id in ids[cursor : cursor + size]:
                assignments.append(
                    SplitAssignment(
                        transcript_id=transcript_id,
                        split=split,
                        seed=seed,
                        proportions=proportions,
                    )
                )
            cursor += size
    assignments.sort(key=lambda a: a.transcript_id)
    return assignments


class DatasetStore:
    """Owner of the single-file relational store."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        fresh = not self.path.exists() or self.path.stat().st_size == 0
        self._conn = sqlite3.connect(self.path)
        self._conn.row_factory = sqlite3.Row
        self._conn.execute("PRAGMA foreign_keys = ON")
        if fresh:
            with self._conn:
                self._conn.executescript(_SCHEMA)
                self._conn.execute(
                    "INSERT INTO meta (key, value) VALUES ('schema_version', ?)",
                    (str(SCHEMA_VERSION),),
                )
        else:
            self._check_schema()

    def _check_schema(self):
        try:
            row = self._conn.execute(
                "SELECT value FROM meta WHERE key = 'schema_version'"
            ).fetchone()
        except sqlite3.DatabaseError as exc:
            raise StoreCorrupt(f"{self.path}: not a dataset store ({exc})") from exc
        if row is None or int(row["value"]) != SCHEMA_VERSION:
            found = None if row is None else row["value"]
            raise StoreCorrupt(
                f"{self.path}: schema version {found} != {SCHEMA_VERSION}; "
                "migrations never run implicitly"
            )

    def close(self):
        self._conn.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()

    # --- writes ---------------------------------------------------------

    def upsert_transcript(self, transcript: Transcript):
        with self._conn:
            self._conn.execute(
                """INSERT INTO transcripts (id, ticker, report_date, full_text, qa_text)
                   VALUES (?, ?, ?, ?, ?)
                   ON CONFLICT(id) DO UPDATE SET
                     ticker=excluded.ticker, report_date=excluded.report_date,
                     full_text=excluded.full_text, qa_text=excluded.qa_text""",
                (
                    transcript.id,
                    transcript.ticker,
                    transcript.report_date.isoformat(),
                    transcript.full_text,
                    transcript.qa_text,
                ),
            )

    def upsert_window(self, window: PriceWindow):
        dates = [d.isoformat() for d in window.resolved_dates]
        try:
            with self._conn:
                self._conn.execute(
                    """INSERT OR REPLACE INTO price_windows
                       (transcript_id, sp_m90, sp_m2, sp_p2, sp_p90,
                        bench_m90, bench_m2, bench_p2, bench_p90,
                        date_m90, date_m2, date_p2, date_p90)
                       VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)""",
                    (
                        window.transcript_id,
                        window.sp_m90, window.sp_m2, window.sp_p2, window.sp_p90,
                        window.bench_m90, window.bench_m2, window.bench_p2, window.bench_p90,
                        *dates,
                    ),
                )
        except sqlite3.IntegrityError as exc:
            raise ConstraintViolation(str(exc)) from exc

    def upsert_example(self, example: LabeledExample):
        try:
            with self._conn:
                self._conn.execute(
                    """INSERT OR REPLACE INTO examples
                       (transcript_id, price_movement, label, neg_threshold, pos_threshold)
                       VALUES (?, ?, ?, ?, ?)""",
                    (
                        example.transcript_id,
                        example.price_movement,
                        example.label,
                        example.neg_threshold,
                        example.pos_threshold,
                    ),
                )
        except sqlite3.IntegrityError as exc:
            raise ConstraintViolation(str(exc)) from exc

    def replace_splits(self, assignments: list[SplitAssignment]):
        try:
            with self._conn:
                self._conn.execute("DELETE FROM splits")
                self._conn.executemany(
                    """INSERT INTO splits
                       (transcript_id, split, seed, train_frac, val_frac, test_frac)
                       VALUES (?, ?, ?, ?, ?, ?)""",
                    [
                        (a.transcript_id, a.split, a.seed, *a.proportions)
                        for a in assignments
                    ],
                )
        except sqlite3.IntegrityError as exc:
            raise ConstraintViolation(str(exc)) from exc

    def record_run(self, run: RunRecord):
        with self._conn:
            self._conn.execute(
                """INSERT OR REPLACE INTO runs
                   (run_id, classifier_name, classifier_version, config, started_at, finished_at)
                   VALUES (?, ?, ?, ?, ?, ?)""",
                (
                    run.run_id,
                    run.classifier_name,
                    run.classifier_version,
                    json.dumps(run.config, sort_keys=True),
                    run.started_at,
                    run.finished_at,
                ),
            )

    def finish_run(self, run_id: str):
        with self._conn:
            self._conn.execute(
                "UPDATE runs SET finished_at = ? WHERE run_id = ?",
                (dt.datetime.now(dt.timezone.utc).isoformat(), run_id),
            )

    def record_chunk_predictions(self, run_id: str, predictions: list[ChunkPrediction]):
        with self._conn:
            self._conn.executemany(
                """INSERT OR REPLACE INTO chunk_predictions
                   (run_id, transcript_id, chunk_index, label, score_neg, score_neu, score_pos)
                   VALUES (?, ?, ?, ?, ?, ?, ?)""",
                [
                    (run_id, p.transcript_id, p.chunk_index, p.label, *p.scores)
                    for p in predictions
                ],
            )

    def record_transcript_prediction(self, run_id: str, transcript_id: str, label: int):
        with self._conn:
            self._conn.execute(
                """INSERT OR REPLACE INTO transcript_predictions (run_id, transcript_id, label)
                   VALUES (?, ?, ?)""",
                (run_id, transcript_id, label),
            )

    # --- reads ----------------------------------------------------------

    def list_transcripts(self) -> list[Transcript]:
        rows = self._conn.execute("SELECT * FROM transcripts ORDER BY id").fetchall()
        return [self._transcript_from_row(r) for r in rows]

    def get_transcript(self, transcript_id: str) -> Transcript | None:
        row = self._conn.execute(
            "SELECT * FROM transcripts WHERE id = ?", (transcript_id,)
        ).fetchone()
        return None if row is None else self._transcript_from_row(row)

    @staticmethod
    def _transcript_from_row(row: sqlite3.Row) -> Transcript:
        return Transcript(
            ticker=row["ticker"],
            report_date=dt.date.fromisoformat(row["report_date"]),
            full_text=row["full_text"],
            qa_text=row["qa_text"],
        )

    def transcripts_without_window(self) -> list[Transcript]:
        rows = self._conn.execute(
            """SELECT t.* FROM transcripts t
               LEFT JOIN price_windows w ON w.transcript_id = t.id
               WHERE w.transcript_id IS NULL ORDER BY t.id"""
        ).fetchall()
        return [self._transcript_from_row(r) for r in rows]

    def get_window(self, transcript_id: str) -> PriceWindow | None:
        row = self._conn.execute(
            "SELECT * FROM price_windows WHERE transcript_id = ?", (transcript_id,)
        ).fetchone()
        if row is None:
            return None
        return PriceWindow(
            transcript_id=row["transcript_id"],
            sp_m90=row["sp_m90"], sp_m2=row["sp_m2"],
            sp_p2=row["sp_p2"], sp_p90=row["sp_p90"],
            bench_m90=row["bench_m90"], bench_m2=row["bench_m2"],
            bench_p2=row["bench_p2"], bench_p90=row["bench_p90"],
            resolved_dates=tuple(
                dt.date.fromisoformat(row[k])
                for k in ("date_m90", "date_m2", "date_p2", "date_p90")
            ),
        )

    def windows(self) -> list[PriceWindow]:
        ids = [
            r["transcript_id"]
            for r in self._conn.execute(
                "SELECT transcript_id FROM price_windows ORDER BY transcript_id"
            )
        ]
        return [self.get_window(i) for i in ids]

    def load_examples(self) -> list[LabeledExample]:
        rows = self._conn.execute(
            "SELECT * FROM examples ORDER BY transcript_id"
        ).fetchall()
        return [
            LabeledExample(
                transcript_id=r["transcript_id"],
                price_movement=r["price_movement"],
                label=r["label"],
                neg_threshold=r["neg_threshold"],
                pos_threshold=r["pos_threshold"],
            )
            for r in rows
        ]

    def load_split(self, split: str) -> list[tuple[str, int]]:
        """(transcript_id, label) rows of one split, ordered by id."""
        if split not in SPLITS:
            raise ConfigurationError(f"unknown split {split!r}")
        rows = self._conn.execute(
            """SELECT e.transcript_id AS tid, e.label AS label
               FROM examples e JOIN splits s ON s.transcript_id = e.transcript_id
               WHERE s.split = ? ORDER BY e.transcript_id""",
            (split,),
        ).fetchall()
        return [(r["tid"], r["label"]) for r in rows]

    def split_counts(self) -> dict[str, int]:
        rows = self._conn.execute(
            "SELECT split, COUNT(*) AS n FROM splits GROUP BY split"
        ).fetchall()
        counts = {split: 0 for split in SPLITS}
        counts.update({r["split"]: r["n"] for r in rows})
        return counts

    def get_run(self, run_id: str) -> RunRecord | None:
        row = self._conn.execute("SELECT * FROM runs WHERE run_id = ?", (run_id,)).fetchone()
        if row is None:
            return None
        return RunRecord(
            run_id=row["run_id"],
            classifier_name=row["classifier_name"],
            classifier_version=row["classifier_version"],
            config=json.loads(row["config"]),
            started_at=row["started_at"],
            finished_at=row["finished_at"],
        )

    def latest_run_id(self) -> str | None:
        row = self._conn.execute(
            "SELECT run_id FROM runs ORDER BY started_at DESC, run_id DESC LIMIT 1"
        ).fetchone()
        return None if row is None else row["run_id"]

    def transcript_predictions(self, run_id: str) -> dict[str, int]:
        rows = self._conn.execute(
            "SELECT transcript_id, label FROM transcript_predictions WHERE run_id = ?",
            (run_id,),
        ).fetchall()
        return {r["transcript_id"]: r["label"] for r in rows}

    def chunk_predictions(self, run_id: str) -> list[ChunkPrediction]:
        rows = self._conn.execute(
            """SELECT transcript_id, chunk_index, label, score_neg, score_neu, score_pos
               FROM chunk_predictions WHERE run_id = ?
               ORDER BY transcript_id, chunk_index""",
            (run_id,),
        ).fetchall()
        return [
            ChunkPrediction(
                transcript_id=r["transcript_id"],
                chunk_index=r["chunk_index"],
                label=r["label"],
                scores=(r["score_neg"], r["score_neu"], r["score_pos"]),
            )
            for r in rows
        ]

    def export_jsonl(self, text_mode: str = "qa") -> str:
        """Labeled dataset dump: one {"id", "text", "label", "split"} per line."""
        if text_mode not in ("qa", "full"):
            raise ConfigurationError(f"unknown text mode {text_mode!r}")
        column = "qa_text" if text_mode == "qa" else "full_text"
        rows = self._conn.execute(
            f"""SELECT t.id AS id, t.{column} AS text, e.label AS label, s.split AS split
                FROM examples e
                JOIN transcripts t ON t.id = e.transcript_id
                JOIN splits s ON s.transcript_id = e.transcript_id
                ORDER BY t.id"""
        ).fetchall()
        lines = [
            json.dumps(
                {"id": r["id"], "text": r["text"], "label": r["label"], "split": r["split"]},
                ensure_ascii=False,
            )
            for r in rows
        ]
        return "\n".join(lines) + ("\n" if lines else "")
