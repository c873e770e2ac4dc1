"""Stage functions wiring the modules into the end-to-end pipeline.

Each stage validates that its upstream stage has produced data (raising
OrderingError otherwise), performs idempotent writes through the store, and
returns a small summary for the CLI to print.  Prediction runs are keyed by
a content hash of classifier + configuration + evaluated ids, so re-running
an unchanged predict stage is a no-op.
"""

from __future__ import annotations

import datetime as dt
import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from . import evaluation
from .chunking import Chunk, ChunkPrediction, aggregate_majority, chunk, truncate, word_budget_for
from .classify import NaiveBayesBaseline, argmax_label, builtin_handle
from .errors import ConfigurationError, MarketDataError, OrderingError
from .ingest import ingest_directory
from .labeling import ClassBalance, class_balance, label_example
from .market import QuoteClient, build_price_window
from .plugins import PluginClient
from .store import DatasetStore, RunRecord, stratified_split
from .textprep import load_stopwords, preprocess, token_count

logger = logging.getLogger(__name__)

DEFAULT_BENCHMARK = "SPX"


def stage_ingest(store: DatasetStore, directory: str | Path):
    """Parse a directory of transcript files into the store."""
    transcripts, failures = ingest_directory(directory)
    for transcript in transcripts:
        store.upsert_transcript(transcript)
    return transcripts, failures


def stage_prices(
    store: DatasetStore,
    client: QuoteClient,
    benchmark: str = DEFAULT_BENCHMARK,
    pad_days: int = 100,
):
    """Build price windows for transcripts that lack one.

    Transcripts whose pricing cannot be resolved are dropped (reported, not
    stored), mirroring the row-dropping rule for missing data.
    """
    if not store.list_transcripts():
        raise OrderingError("prices", "ingest")
    built, dropped = [], []
    for transcript in store.transcripts_without_window():
        pad = dt.timedelta(days=pad_days)
        start, end = transcript.report_date - pad, transcript.report_date + pad
        try:
            shares = client.fetch_daily_series(transcript.ticker, start, end)
            bench = client.fetch_daily_series(benchmark, start, end)
            window = build_price_window(transcript, shares, bench)
        except MarketDataError as exc:
            dropped.append((transcript.id, f"{type(exc).__name__}: {exc}"))
            continue
        store.upsert_window(window)
        built.append(window)
    return built, dropped


def stage_label(
    store: DatasetStore, neg_threshold: float = -3.0, pos_threshold: float = 3.0
) -> ClassBalance:
    """Label every transcript that has a price window."""
    windows = store.windows()
    if not windows:
        raise OrderingError("label", "prices")
    examples = []
    for window in windows:
        example = label_example(
            window.transcript_id, window, neg_threshold, pos_threshold
        )
        store.upsert_example(example)
        examples.append(example)
    return class_balance(examples)


def stage_split(
    store: DatasetStore,
    proportions: tuple[float, float, float] = (0.8, 0.1, 0.1),
    seed: int = 42,
) -> dict[str, int]:
    examples = store.load_examples()
    if not examples:
        raise OrderingError("split", "label")
    assignments = stratified_split(examples, proportions=proportions, seed=seed)
    store.replace_splits(assignments)
    return store.split_counts()


def _split_texts(store: DatasetStore, split: str, text_mode: str):
    rows = store.load_split(split)
    out = []
    for transcript_id, label in rows:
        transcript = store.get_transcript(transcript_id)
        text = transcript.qa_text if text_mode == "qa" else transcript.full_text
        out.append((transcript_id, label, text))
    return out


def default_model_path(db_path: str | Path) -> Path:
    return Path(db_path).with_suffix(".baseline.json")


def stage_train_baseline(
    store: DatasetStore,
    model_path: str | Path,
    alpha: float = 1.0,
    text_mode: str = "qa",
):
    rows = _split_texts(store, "train", _check_text_mode(text_mode))
    if not rows:
        raise OrderingError("train-baseline", "split")
    stopwords = load_stopwords()
    docs = [preprocess(text, stopwords).tokens for _, _, text in rows]
    labels = [label for _, label, _ in rows]
    model = NaiveBayesBaseline(alpha=alpha).fit(docs, labels)
    model.save(model_path)
    return model, len(rows)


def _check_text_mode(text_mode: str) -> str:
    if text_mode not in ("qa", "full"):
        raise ConfigurationError(f"unknown text mode {text_mode!r}")
    return text_mode


@dataclass
class PredictOutcome:
    run_id: str
    n_transcripts: int
    n_chunks: int
    skipped: bool = False


class _BuiltinScorer:
    wants = "preprocessed"

    def __init__(self, model: NaiveBayesBaseline):
        self.model = model
        self.stopwords = load_stopwords()

    def score(self, text: str) -> tuple[int, tuple[float, float, float]]:
        tokens = preprocess(text, self.stopwords).tokens
        scores = self.model.predict_scores(tokens)
        return argmax_label(scores), scores


class _PluginScorer:
    def __init__(self, client: PluginClient):
        self.client = client
        self.wants = client.handle.wants
        self.stopwords = load_stopwords()

    def score(self, text: str) -> tuple[int, tuple[float, float, float]]:
        if self.wants == "preprocessed":
            text = " ".join(preprocess(text, self.stopwords).tokens)
        return self.client.predict(text)


def _run_id(handle, config: dict, test_ids: list[str]) -> str:
    digest = hashlib.sha256(
        json.dumps(
            {
                "classifier": [handle.name, handle.version],
                "config": config,
                "ids": test_ids,
            },
            sort_keys=True,
        ).encode("utf-8")
    )
    return digest.hexdigest()[:12]


def stage_predict(
    store: DatasetStore,
    classifier: str = "builtin",
    strategy: str = "chunk",
    text_mode: str = "qa",
    budget: int | None = None,
    model_path: str | Path | None = None,
    request_timeout: float = 120.0,
) -> PredictOutcome:
    """Record chunk and transcript predictions for the test split."""
    _check_text_mode(text_mode)
    if strategy not in ("chunk", "truncate"):
        raise ConfigurationError(f"unknown strategy {strategy!r}")
    if store.split_counts() == {"train": 0, "validation": 0, "test": 0}:
        raise OrderingError("predict", "split")
    rows = _split_texts(store, "test", text_mode)

    client = None
    if classifier == "builtin":
        if model_path is None or not Path(model_path).exists():
            raise OrderingError("predict", "train-baseline")
        scorer = _BuiltinScorer(NaiveBayesBaseline.load(model_path))
        handle = builtin_handle()
    else:
        client = PluginClient(classifier, request_timeout=request_timeout)
        scorer = _PluginScorer(client)
        handle = client.handle

    word_budget = budget if budget is not None else word_budget_for(handle.max_tokens)
    if word_budget < 1:
        raise ConfigurationError("chunk budget must be >= 1")

    config = {
        "strategy": strategy,
        "text_mode": text_mode,
        "word_budget": word_budget,
        "classifier_path": None if classifier == "builtin" else str(classifier),
    }
    run_id = _run_id(handle, config, [tid for tid, _, _ in rows])

    try:
        existing = store.get_run(run_id)
        predicted = store.transcript_predictions(run_id)
        if existing and all(tid in predicted for tid, _, _ in rows):
            logger.info("run %s already complete; skipping", run_id)
            return PredictOutcome(run_id, len(rows), 0, skipped=True)

        store.record_run(
            RunRecord(
                run_id=run_id,
                classifier_name=handle.name,
                classifier_version=handle.version,
                config=config,
                started_at=dt.datetime.now(dt.timezone.utc).isoformat(),
            )
        )
        n_chunks = 0
        for transcript_id, _, text in rows:
            words = text.split()
            if strategy == "chunk":
                pieces = chunk(words, word_budget, transcript_id)
            else:
                pieces = [truncate(words, word_budget, transcript_id)]
            if not pieces:  # empty text still gets scored
                pieces = [Chunk(transcript_id=transcript_id, chunk_index=0, tokens=())]
            predictions = []
            for piece in pieces:
                label, scores = scorer.score(piece.text)
                predictions.append(
                    ChunkPrediction(
                        transcript_id=transcript_id,
                        chunk_index=piece.chunk_index,
                        label=label,
                        scores=scores,
                    )
                )
            store.record_chunk_predictions(run_id, predictions)
            store.record_transcript_prediction(
                run_id, transcript_id, aggregate_majority(predictions)
            )
            n_chunks += len(predictions)
        store.finish_run(run_id)
        return PredictOutcome(run_id, len(rows), n_chunks)
    finally:
        if client is not None:
            client.shutdown()


@dataclass
class EvaluateOutcome:
    run_id: str
    report: evaluation.EvalReport
    report_dir: Path
    chunk_report: evaluation.EvalReport | None = None


def stage_evaluate(
    store: DatasetStore,
    run_id: str | None = None,
    reports_dir: str | Path = "reports",
) -> EvaluateOutcome:
    """Compute metrics for a run and write the report bundle."""
    if run_id is None:
        run_id = store.latest_run_id()
        if run_id is None:
            raise OrderingError("evaluate", "predict")
    run = store.get_run(run_id)
    if run is None:
        raise ConfigurationError(f"unknown run id {run_id!r}")
    predictions = store.transcript_predictions(run_id)
    if not predictions:
        raise OrderingError("evaluate", "predict")

    truth = {ex.transcript_id: ex.label for ex in store.load_examples()}
    pairs = [
        (truth[tid], label)
        for tid, label in sorted(predictions.items())
        if tid in truth
    ]
    report = evaluation.metrics(evaluation.confusion(pairs), run_id=run_id)

    out_dir = Path(reports_dir) / run_id
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.txt").write_text(evaluation.render_report(report, "text"), "utf-8")
    (out_dir / "report.json").write_text(evaluation.render_report(report, "json"), "utf-8")
    (out_dir / "confusion.csv").write_text(
        evaluation.confusion_csv(evaluation.confusion(pairs)), "utf-8"
    )

    balance = class_balance(store.load_examples())
    (out_dir / "class_balance.json").write_text(
        evaluation.class_balance_json(balance), "utf-8"
    )
    counts = dataset_token_counts(store, run.config.get("text_mode", "qa"))
    (out_dir / "token_density.csv").write_text(
        evaluation.token_density_csv(counts), "utf-8"
    )

    chunk_report = None
    chunk_preds = store.chunk_predictions(run_id)
    if run.config.get("strategy") == "chunk" and chunk_preds:
        chunk_pairs = [
            (truth[p.transcript_id], p.label)
            for p in chunk_preds
            if p.transcript_id in truth
        ]
        chunk_report = evaluation.metrics(evaluation.confusion(chunk_pairs), run_id=run_id)
        (out_dir / "chunk_report.txt").write_text(
            evaluation.render_report(chunk_report, "text"), "utf-8"
        )
        (out_dir / "chunk_confusion.csv").write_text(
            evaluation.confusion_csv(evaluation.confusion(chunk_pairs)), "utf-8"
        )

    return EvaluateOutcome(
        run_id=run_id, report=report, report_dir=out_dir, chunk_report=chunk_report
    )


def stage_export(store: DatasetStore, text_mode: str = "qa") -> str:
    if store.split_counts() == {"train": 0, "validation": 0, "test": 0}:
        raise OrderingError("export", "split")
    return store.export_jsonl(_check_text_mode(text_mode))


def dataset_token_counts(store: DatasetStore, text_mode: str = "qa") -> list[int]:
    """Token counts per labeled transcript (density-report input)."""
    return [
        token_count(store.get_transcript(ex.transcript_id), text_mode)
        for ex in store.load_examples()
    ]
