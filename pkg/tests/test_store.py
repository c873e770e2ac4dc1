from __future__ import annotations

import datetime as dt
import json
import math
import random

import pytest

from calltide.errors import (
    ConfigurationError,
    ConstraintViolation,
    InsufficientExamples,
    StoreCorrupt,
)
from calltide.ingest import Transcript
from calltide.labeling import LabeledExample
from calltide.market import PriceWindow
from calltide.store import (
    DatasetStore,
    RunRecord,
    largest_remainder_sizes,
    stratified_split,
)


def _example(i: int, label: int) -> LabeledExample:
    movement = {0: -6.0, 1: 0.0, 2: 6.0}[label]
    return LabeledExample(
        transcript_id=f"T{i:04d}_2024-01-01", price_movement=movement, label=label
    )


def _corpus(counts: dict[int, int]) -> list[LabeledExample]:
    out, i = [], 0
    for label, n in counts.items():
        for _ in range(n):
            out.append(_example(i, label))
            i += 1
    return out


def _transcript(ticker="TESTCO", day="2024-02-06") -> Transcript:
    qa = "Question-and-Answer Session Analyst: margins?"
    return Transcript(
        ticker=ticker,
        report_date=dt.date.fromisoformat(day),
        full_text="Remarks first. " + qa,
        qa_text=qa,
    )


def _window(transcript_id: str) -> PriceWindow:
    return PriceWindow(
        transcript_id=transcript_id,
        sp_m90=95.0, sp_m2=100.0, sp_p2=103.5, sp_p90=106.0,
        bench_m90=4400.0, bench_m2=4500.0, bench_p2=4510.0, bench_p90=4600.0,
        resolved_dates=(
            dt.date(2023, 11, 8),
            dt.date(2024, 2, 5),
            dt.date(2024, 2, 8),
            dt.date(2024, 5, 6),
        ),
    )


class TestLargestRemainder:
    def test_exact_division(self):
        assert largest_remainder_sizes(10, (0.8, 0.1, 0.1)) == (8, 1, 1)

    def test_remainders_to_largest_fraction(self):
        assert largest_remainder_sizes(392, (0.8, 0.1, 0.1)) == (314, 39, 39)

    def test_sums_to_n_for_many_inputs(self):
        rng = random.Random(0)
        for _ in range(500):
            n = rng.randint(0, 500)
            a = rng.uniform(0.1, 0.8)
            b = rng.uniform(0.05, min(0.9 - a, 0.5))
            fracs = (a, b, 1.0 - a - b)
            sizes = largest_remainder_sizes(n, fracs)
            assert sum(sizes) == n
            for size, frac in zip(sizes, fracs):
                assert math.floor(n * frac) <= size <= math.floor(n * frac) + 1


class TestStratifiedSplit:
    def test_unstratified_single_class_ratios(self):
        examples = _corpus({2: 10})
        assignments = stratified_split(examples, (0.8, 0.1, 0.1), seed=1, stratify=False)
        by_split = {s: 0 for s in ("train", "validation", "test")}
        for a in assignments:
            by_split[a.split] += 1
        assert by_split == {"train": 8, "validation": 1, "test": 1}

    def test_nonpositive_fraction_rejected(self):
        with pytest.raises(ConfigurationError):
            stratified_split(_corpus({2: 10}), (1.0, 0.0, 0.0))

    def test_fractions_must_sum_to_one(self):
        with pytest.raises(ConfigurationError):
            stratified_split(_corpus({2: 10}), (0.5, 0.3, 0.3))

    def test_missing_class_with_stratification(self):
        with pytest.raises(InsufficientExamples):
            stratified_split(_corpus({2: 10}), (0.8, 0.1, 0.1), stratify=True)

    def test_per_class_largest_remainder_sizes(self):
        examples = _corpus({0: 20, 1: 50, 2: 30})
        assignments = stratified_split(examples, (0.8, 0.1, 0.1), seed=9)
        label_of = {ex.transcript_id: ex.label for ex in examples}
        sizes = {label: {"train": 0, "validation": 0, "test": 0} for label in (0, 1, 2)}
        for a in assignments:
            sizes[label_of[a.transcript_id]][a.split] += 1
        assert sizes[0] == {"train": 16, "validation": 2, "test": 2}
        assert sizes[1] == {"train": 40, "validation": 5, "test": 5}
        assert sizes[2] == {"train": 24, "validation": 3, "test": 3}

    def test_partition_property(self):
        examples = _corpus({0: 13, 1: 29, 2: 17})
        assignments = stratified_split(examples, (0.8, 0.1, 0.1), seed=3)
        assert sorted(a.transcript_id for a in assignments) == sorted(
            ex.transcript_id for ex in examples
        )
        assert len({a.transcript_id for a in assignments}) == len(examples)

    def test_deterministic_and_order_independent(self):
        examples = _corpus({0: 11, 1: 9, 2: 14})
        first = stratified_split(examples, (0.8, 0.1, 0.1), seed=42)
        second = stratified_split(list(reversed(examples)), (0.8, 0.1, 0.1), seed=42)
        assert first == second
        third = stratified_split(examples, (0.8, 0.1, 0.1), seed=43)
        assert first != third

    def test_empty_corpus(self):
        assert stratified_split([], (0.8, 0.1, 0.1)) == []


class TestStoreLifecycle:
    def test_fresh_store_round_trip(self, tmp_path):
        path = tmp_path / "data.db"
        with DatasetStore(path) as store:
            store.upsert_transcript(_transcript())
        with DatasetStore(path) as store:
            loaded = store.list_transcripts()
            assert loaded == [_transcript()]

    def test_upsert_idempotent(self, tmp_path):
        with DatasetStore(tmp_path / "data.db") as store:
            store.upsert_transcript(_transcript())
            store.upsert_transcript(_transcript())
            assert len(store.list_transcripts()) == 1

    def test_schema_version_mismatch(self, tmp_path):
        path = tmp_path / "data.db"
        with DatasetStore(path) as store:
            store._conn.execute("UPDATE meta SET value = '99' WHERE key = 'schema_version'")
            store._conn.commit()
        with pytest.raises(StoreCorrupt):
            DatasetStore(path)

    def test_non_database_file(self, tmp_path):
        path = tmp_path / "data.db"
        path.write_text("this is not a database")
        with pytest.raises(StoreCorrupt):
            DatasetStore(path)

    def test_window_requires_transcript(self, tmp_path):
        with DatasetStore(tmp_path / "data.db") as store:
            with pytest.raises(ConstraintViolation):
                store.upsert_window(_window("GHOST_2024-01-01"))

    def test_window_round_trip(self, tmp_path):
        with DatasetStore(tmp_path / "data.db") as store:
            store.upsert_transcript(_transcript())
            window = _window(_transcript().id)
            store.upsert_window(window)
            assert store.get_window(window.transcript_id) == window

    def test_example_round_trip_and_split(self, tmp_path):
        with DatasetStore(tmp_path / "data.db") as store:
            examples = []
            for i, label in enumerate([0, 0, 1, 1, 2, 2, 2, 2, 2, 2]):
                t = _transcript(ticker=f"T{i:03d}")
                store.upsert_transcript(t)
                ex = LabeledExample(
                    transcript_id=t.id,
                    price_movement={0: -6.0, 1: 0.0, 2: 6.0}[label],
                    label=label,
                )
                store.upsert_example(ex)
                examples.append(ex)
            assert store.load_examples() == sorted(examples, key=lambda e: e.transcript_id)

            assignments = stratified_split(examples, (0.8, 0.1, 0.1), seed=42)
            store.replace_splits(assignments)
            counts = store.split_counts()
            assert sum(counts.values()) == 10
            test_rows = store.load_split("test")
            assert all(label in (0, 1, 2) for _, label in test_rows)

    def test_full_scale_corpus_shape(self, tmp_path):
        # 392 labeled examples split 80/10/10 (the corpus size the pipeline targets)
        examples = _corpus({0: 100, 1: 160, 2: 132})
        assignments = stratified_split(examples, (0.8, 0.1, 0.1), seed=42)
        by_split = {"train": 0, "validation": 0, "test": 0}
        for a in assignments:
            by_split[a.split] += 1
        # per-class largest remainder: 100 -> 10, 160 -> 16, 132 -> 13
        assert by_split["test"] == 39
        assert by_split["validation"] == 39
        assert by_split["train"] == 314
        with DatasetStore(tmp_path / "big.db") as store:
            for ex in examples:
                store.upsert_transcript(
                    Transcript(
                        ticker=ex.transcript_id.split("_")[0],
                        report_date=dt.date(2024, 1, 1),
                        full_text="q&a text",
                        qa_text="",
                    )
                )
                store.upsert_example(ex)
            store.replace_splits(assignments)
            assert len(store.load_split("test")) == 39

    def test_run_records(self, tmp_path):
        with DatasetStore(tmp_path / "data.db") as store:
            run = RunRecord(
                run_id="abc",
                classifier_name="nb-baseline",
                classifier_version="1",
                config={"strategy": "chunk"},
                started_at="2024-03-01T00:00:00+00:00",
            )
            store.record_run(run)
            assert store.get_run("abc") == run
            assert store.latest_run_id() == "abc"

    def test_export_jsonl(self, tmp_path):
        with DatasetStore(tmp_path / "data.db") as store:
            t = _transcript()
            store.upsert_transcript(t)
            store.upsert_example(
                LabeledExample(transcript_id=t.id, price_movement=6.0, label=2)
            )
            store.replace_splits(
                stratified_split(
                    [LabeledExample(transcript_id=t.id, price_movement=6.0, label=2)],
                    stratify=False,
                )
            )
            lines = store.export_jsonl("qa").strip().split("\n")
            row = json.loads(lines[0])
            assert set(row) == {"id", "text", "label", "split"}
            assert row["id"] == t.id
            assert row["label"] == 2
            assert row["text"] == t.qa_text
