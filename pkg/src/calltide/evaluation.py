"""Confusion matrices, classification metrics and report rendering.

Conventions: rows are true labels, columns predicted; any metric whose
denominator is zero is reported as 0 and counted as a zero-division event;
macro averages run over all three classes regardless of support; weighted
averages weight by support.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import EmptyEvaluation
from .labeling import LABEL_NAMES, LABELS, ClassBalance

N_CLASSES = 3


@dataclass(frozen=True)
class ConfusionMatrix:
    """3x3 count matrix, counts[true][pred]."""

    counts: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if len(self.counts) != N_CLASSES or any(len(r) != N_CLASSES for r in self.counts):
            raise ValueError("confusion matrix must be 3x3")
        if any(c < 0 for row in self.counts for c in row):
            raise ValueError("confusion matrix entries must be nonnegative")

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=np.int64)


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    per_class: tuple[ClassMetrics, ClassMetrics, ClassMetrics]
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    total: int
    zero_division_count: int = 0
    run_id: str = ""


def confusion(pairs: list[tuple[int, int]]) -> ConfusionMatrix:
    """Count (true, predicted) pairs into a 3x3 matrix."""
    counts = [[0] * N_CLASSES for _ in range(N_CLASSES)]
    for true, pred in pairs:
        if true not in LABELS or pred not in LABELS:
            raise ValueError(f"labels must be in {{0,1,2}}, got ({true}, {pred})")
        counts[true][pred] += 1
    return ConfusionMatrix(counts=tuple(tuple(row) for row in counts))


def _safe_div(num: float, den: float, events: list[int]) -> float:
    if den == 0:
        events.append(1)
        return 0.0
    return num / den


def metrics(matrix: ConfusionMatrix, run_id: str = "") -> EvalReport:
    """Per-class precision/recall/F1 with accuracy, macro and weighted averages."""
    total = matrix.total
    if total == 0:
        raise EmptyEvaluation("no evaluated examples")
    arr = matrix.as_array()
    events: list[int] = []
    per_class = []
    for c in range(N_CLASSES):
        tp = float(arr[c, c])
        fp = float(arr[:, c].sum() - arr[c, c])
        fn = float(arr[c, :].sum() - arr[c, c])
        precision = _safe_div(tp, tp + fp, events)
        recall = _safe_div(tp, tp + fn, events)
        f1 = _safe_div(2 * precision * recall, precision + recall, events)
        per_class.append(
            ClassMetrics(precision=precision, recall=recall, f1=f1, support=int(arr[c, :].sum()))
        )
    supports = np.array([m.support for m in per_class], dtype=float)
    weights = supports / total
    return EvalReport(
        per_class=tuple(per_class),
        accuracy=float(np.trace(arr)) / total,
        macro_precision=sum(m.precision for m in per_class) / N_CLASSES,
        macro_recall=sum(m.recall for m in per_class) / N_CLASSES,
        macro_f1=sum(m.f1 for m in per_class) / N_CLASSES,
        weighted_precision=float(sum(w * m.precision for w, m in zip(weights, per_class))),
        weighted_recall=float(sum(w * m.recall for w, m in zip(weights, per_class))),
        weighted_f1=float(sum(w * m.f1 for w, m in zip(weights, per_class))),
        total=total,
        zero_division_count=len(events),
        run_id=run_id,
    )


def render_report(report: EvalReport, fmt: str = "text") -> str:
    """Render an EvalReport as 'text' (classification-report layout),
    lossless 'json', or 'csv'."""
    if fmt == "json":
        return json.dumps(asdict(report), indent=2, sort_keys=True)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["class", "precision", "recall", "f1", "support"])
        for label, m in zip(LABELS, report.per_class):
            writer.writerow([LABEL_NAMES[label], m.precision, m.recall, m.f1, m.support])
        writer.writerow(["accuracy", report.accuracy, "", "", report.total])
        writer.writerow(
            ["macro avg", report.macro_precision, report.macro_recall, report.macro_f1, report.total]
        )
        writer.writerow(
            [
                "weighted avg",
                report.weighted_precision,
                report.weighted_recall,
                report.weighted_f1,
                report.total,
            ]
        )
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")

    width = 12
    lines = [f"{'':>{width}} {'precision':>9} {'recall':>9} {'f1-score':>9} {'support':>9}", ""]
    for label, m in zip(LABELS, report.per_class):
        lines.append(
            f"{LABEL_NAMES[label]:>{width}} {m.precision:>9.4f} {m.recall:>9.4f} "
            f"{m.f1:>9.4f} {m.support:>9d}"
        )
    lines.append("")
    lines.append(f"{'accuracy':>{width}} {'':>9} {'':>9} {report.accuracy:>9.4f} {report.total:>9d}")
    lines.append(
        f"{'macro avg':>{width}} {report.macro_precision:>9.4f} {report.macro_recall:>9.4f} "
        f"{report.macro_f1:>9.4f} {report.total:>9d}"
    )
    lines.append(
        f"{'weighted avg':>{width}} {report.weighted_precision:>9.4f} {report.weighted_recall:>9.4f} "
        f"{report.weighted_f1:>9.4f} {report.total:>9d}"
    )
    if report.zero_division_count:
        lines.append("")
        lines.append(f"zero-division metrics reported as 0: {report.zero_division_count}")
    return "\n".join(lines) + "\n"


def report_from_json(text: str) -> EvalReport:
    """Inverse of ``render_report(report, "json")``."""
    data = json.loads(text)
    data["per_class"] = tuple(ClassMetrics(**m) for m in data["per_class"])
    return EvalReport(**data)


def confusion_csv(matrix: ConfusionMatrix) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["true\\pred"] + [LABEL_NAMES[label] for label in LABELS])
    for label, row in zip(LABELS, matrix.counts):
        writer.writerow([LABEL_NAMES[label]] + list(row))
    return buf.getvalue()


def token_density_histogram(
    counts: list[int], bucket_width: int = 512
) -> list[tuple[int, int]]:
    """(bucket lower bound, count) rows over token counts; empty input -> []."""
    if bucket_width < 1:
        raise ValueError("bucket_width must be >= 1")
    if not counts:
        return []
    buckets: dict[int, int] = {}
    for n in counts:
        lower = (n // bucket_width) * bucket_width
        buckets[lower] = buckets.get(lower, 0) + 1
    top = max(buckets)
    return [(lower, buckets.get(lower, 0)) for lower in range(0, top + 1, bucket_width)]


def token_density_csv(counts: list[int], bucket_width: int = 512) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["bucket_lower", "count"])
    for lower, n in token_density_histogram(counts, bucket_width):
        writer.writerow([lower, n])
    return buf.getvalue()


def class_balance_json(balance: ClassBalance) -> str:
    return json.dumps(
        {
            "counts": {str(k): v for k, v in balance.counts.items()},
            "proportions": {str(k): v for k, v in balance.proportions.items()},
            "total": balance.total,
        },
        indent=2,
        sort_keys=True,
    )
