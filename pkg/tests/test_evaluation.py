from __future__ import annotations

import random
from pathlib import Path

import pytest

from calltide.errors import EmptyEvaluation
from calltide.evaluation import (
    ConfusionMatrix,
    class_balance_json,
    confusion,
    confusion_csv,
    metrics,
    render_report,
    report_from_json,
    token_density_csv,
    token_density_histogram,
)
from calltide.labeling import class_balance

FIXTURES = Path(__file__).parent / "fixtures"

DERIVED = ConfusionMatrix(counts=((2, 1, 0), (0, 3, 1), (1, 0, 2)))


class TestConfusion:
    def test_counts_pairs(self):
        matrix = confusion([(0, 0), (1, 2), (2, 2)])
        assert matrix.counts == ((1, 0, 0), (0, 0, 1), (0, 0, 1))

    def test_empty_is_zero_matrix(self):
        assert confusion([]).counts == ((0, 0, 0),) * 3

    def test_all_positive_predictions_fill_one_column(self):
        pairs = [(t, 2) for t in (0, 0, 1, 1, 1, 2)]
        matrix = confusion(pairs)
        arr = matrix.as_array()
        assert arr[:, 2].sum() == 6
        assert arr[:, 0].sum() == 0 and arr[:, 1].sum() == 0

    def test_pair_order_irrelevant(self):
        pairs = [(0, 1), (2, 2), (1, 1), (0, 0), (2, 0)]
        shuffled = pairs[::-1]
        assert confusion(pairs) == confusion(shuffled)

    def test_label_domain_checked(self):
        with pytest.raises(ValueError):
            confusion([(0, 3)])


class TestMetrics:
    def test_perfect_diagonal(self):
        report = metrics(ConfusionMatrix(counts=((4, 0, 0), (0, 5, 0), (0, 0, 6))))
        assert report.accuracy == 1.0
        for m in report.per_class:
            assert (m.precision, m.recall, m.f1) == (1.0, 1.0, 1.0)
        assert report.macro_f1 == 1.0 and report.weighted_f1 == 1.0
        assert report.zero_division_count == 0

    def test_derived_matrix_values(self):
        report = metrics(DERIVED)
        assert report.accuracy == pytest.approx(0.7, abs=1e-12)
        assert [m.precision for m in report.per_class] == pytest.approx([2 / 3, 3 / 4, 2 / 3])
        assert [m.recall for m in report.per_class] == pytest.approx([2 / 3, 3 / 4, 2 / 3])
        assert report.weighted_f1 == pytest.approx(0.7, abs=1e-12)
        assert [m.support for m in report.per_class] == [3, 4, 3]

    def test_single_class_present_convention(self):
        report = metrics(ConfusionMatrix(counts=((0, 0, 0), (0, 5, 0), (0, 0, 0))))
        assert report.accuracy == 1.0
        mid = report.per_class[1]
        assert (mid.precision, mid.recall, mid.f1) == (1.0, 1.0, 1.0)
        for m in (report.per_class[0], report.per_class[2]):
            assert (m.precision, m.recall, m.f1) == (0.0, 0.0, 0.0)
        assert report.zero_division_count == 6

    def test_degenerate_all_positive(self):
        # the under-trained failure mode: every prediction lands in class 2
        pairs = [(0, 2)] * 3 + [(1, 2)] * 4 + [(2, 2)] * 3
        report = metrics(confusion(pairs))
        assert report.per_class[2].recall == 1.0
        assert report.per_class[0].recall == 0.0
        assert report.per_class[1].recall == 0.0
        assert report.accuracy == pytest.approx(0.3)

    def test_empty_evaluation_raises(self):
        with pytest.raises(EmptyEvaluation):
            metrics(ConfusionMatrix(counts=((0, 0, 0),) * 3))

    def test_matches_brute_force_pair_oracle(self):
        rng = random.Random(11)
        for _ in range(300):
            n = rng.randint(1, 50)
            pairs = [(rng.randint(0, 2), rng.randint(0, 2)) for _ in range(n)]
            report = metrics(confusion(pairs))
            for c in range(3):
                tp = sum(1 for t, p in pairs if t == c and p == c)
                fp = sum(1 for t, p in pairs if t != c and p == c)
                fn = sum(1 for t, p in pairs if t == c and p != c)
                precision = tp / (tp + fp) if tp + fp else 0.0
                recall = tp / (tp + fn) if tp + fn else 0.0
                f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
                assert abs(report.per_class[c].precision - precision) < 1e-12
                assert abs(report.per_class[c].recall - recall) < 1e-12
                assert abs(report.per_class[c].f1 - f1) < 1e-12
                assert report.per_class[c].support == tp + fn
            accuracy = sum(1 for t, p in pairs if t == p) / n
            assert abs(report.accuracy - accuracy) < 1e-12

    def test_micro_f1_equals_accuracy(self):
        rng = random.Random(5)
        for _ in range(300):
            n = rng.randint(1, 50)
            pairs = [(rng.randint(0, 2), rng.randint(0, 2)) for _ in range(n)]
            arr = confusion(pairs).as_array()
            tp = sum(int(arr[c, c]) for c in range(3))
            fp = sum(int(arr[:, c].sum() - arr[c, c]) for c in range(3))
            fn = sum(int(arr[c, :].sum() - arr[c, c]) for c in range(3))
            micro_f1 = 2 * tp / (2 * tp + fp + fn)
            assert abs(micro_f1 - metrics(confusion(pairs)).accuracy) < 1e-12


class TestRendering:
    def test_perfect_accuracy_footer(self):
        report = metrics(ConfusionMatrix(counts=((1, 0, 0), (0, 1, 0), (0, 0, 1))))
        assert "1.0000" in render_report(report, "text")

    def test_golden_text_for_derived_matrix(self):
        golden = (FIXTURES / "report_derived.txt").read_text()
        assert render_report(metrics(DERIVED), "text") == golden

    def test_json_round_trip(self):
        report = metrics(DERIVED, run_id="abc123")
        assert report_from_json(render_report(report, "json")) == report

    def test_csv_has_all_rows(self):
        text = render_report(metrics(DERIVED), "csv")
        for token in ("negative", "neutral", "positive", "accuracy", "macro avg", "weighted avg"):
            assert token in text

    def test_confusion_csv(self):
        text = confusion_csv(DERIVED)
        lines = text.strip().split("\r\n")
        assert lines[0] == "true\\pred,negative,neutral,positive"
        assert lines[1] == "negative,2,1,0"


class TestTokenDensity:
    def test_buckets(self):
        assert token_density_histogram([10, 520, 1100], 512) == [(0, 1), (512, 1), (1024, 1)]

    def test_gap_buckets_zero_filled(self):
        assert token_density_histogram([10, 1100], 512) == [(0, 1), (512, 0), (1024, 1)]

    def test_empty(self):
        assert token_density_histogram([], 512) == []

    def test_csv(self):
        text = token_density_csv([10, 600], 512)
        assert text.strip().split("\r\n") == ["bucket_lower,count", "0,1", "512,1"]


class TestClassBalanceJson:
    def test_round_trippable_contents(self):
        import json

        payload = json.loads(class_balance_json(class_balance([0, 1, 2, 2])))
        assert payload["counts"] == {"0": 1, "1": 1, "2": 2}
        assert payload["total"] == 4
