"""Command-line front door.

Stage-gated subcommands over one SQLite dataset file.  On failure, prints a
single machine-parsable JSON error line to stderr and exits with the
error's code (2 config, 3 ordering, 4 market source, 5 plugin).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import pipeline
from .errors import CalltideError, ConfigurationError
from .evaluation import render_report
from .labeling import LABEL_NAMES
from .market import QuoteClient
from .store import DatasetStore


def _parse_ratios(text: str) -> tuple[float, float, float]:
    try:
        parts = tuple(float(p) for p in text.split(","))
    except ValueError:
        raise ConfigurationError(f"cannot parse ratios {text!r}") from None
    if len(parts) != 3:
        raise ConfigurationError("ratios must be train,validation,test")
    return parts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="calltide",
        description="Earnings-call sentiment dataset builder and classifier evaluator",
    )
    parser.add_argument("--db", default="calltide.db", help="dataset store path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse transcript files into the store")
    p.add_argument("directory", help="directory of <TICKER>_<YYYY-MM-DD>.html/.txt files")

    p = sub.add_parser("prices", help="build price windows for new transcripts")
    p.add_argument("--cache", default="cache/quotes", help="quote cache directory")
    p.add_argument("--benchmark", default=pipeline.DEFAULT_BENCHMARK, help="benchmark symbol")

    p = sub.add_parser("label", help="assign 3-class labels from price movement")
    p.add_argument("--neg", type=float, default=-3.0, help="negative threshold (percent)")
    p.add_argument("--pos", type=float, default=3.0, help="positive threshold (percent)")

    p = sub.add_parser("split", help="stratified train/validation/test split")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--ratios", default="0.8,0.1,0.1", help="train,validation,test fractions")

    p = sub.add_parser("train-baseline", help="fit the builtin baseline on the train split")
    p.add_argument("--alpha", type=float, default=1.0, help="smoothing constant")
    p.add_argument("--text", choices=("qa", "full"), default="qa")
    p.add_argument("--model", default=None, help="model output path")

    p = sub.add_parser("predict", help="record predictions for the test split")
    p.add_argument(
        "--classifier",
        default="builtin",
        help="'builtin' or path to a plugin executable",
    )
    p.add_argument("--strategy", choices=("chunk", "truncate"), default="chunk")
    p.add_argument("--text", choices=("qa", "full"), default="qa")
    p.add_argument("--budget", type=int, default=None, help="word budget override")
    p.add_argument("--model", default=None, help="baseline model path")
    p.add_argument("--timeout", type=float, default=120.0, help="plugin request timeout (s)")

    p = sub.add_parser("evaluate", help="compute metrics and write reports")
    p.add_argument("--run", default=None, help="run id (default: latest)")
    p.add_argument("--reports", default="reports", help="report output directory")

    p = sub.add_parser("export", help="dump the labeled dataset")
    p.add_argument("--format", choices=("jsonl",), default="jsonl")
    p.add_argument("--text", choices=("qa", "full"), default="qa")
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")

    return parser


def _cmd_ingest(store: DatasetStore, args) -> int:
    transcripts, failures = pipeline.stage_ingest(store, args.directory)
    print(f"ingested {len(transcripts)} transcripts ({len(failures)} failures)")
    for path, exc in failures:
        print(f"  failed {path.name}: {exc}")
    return 0


def _cmd_prices(store: DatasetStore, args) -> int:
    client = QuoteClient(cache_dir=args.cache)
    built, dropped = pipeline.stage_prices(store, client, benchmark=args.benchmark)
    print(f"built {len(built)} price windows; dropped {len(dropped)}")
    for transcript_id, reason in dropped:
        print(f"  dropped {transcript_id}: {reason}")
    return 0


def _cmd_label(store: DatasetStore, args) -> int:
    if args.neg >= args.pos:
        raise ConfigurationError(
            f"--neg ({args.neg}) must be below --pos ({args.pos})"
        )
    balance = pipeline.stage_label(store, args.neg, args.pos)
    print(f"labeled {balance.total} examples")
    print(f"{'class':>10} {'count':>7} {'share':>7}")
    for label, count in balance.counts.items():
        print(f"{LABEL_NAMES[label]:>10} {count:>7d} {balance.proportions[label]:>7.3f}")
    return 0


def _cmd_split(store: DatasetStore, args) -> int:
    counts = pipeline.stage_split(store, proportions=_parse_ratios(args.ratios), seed=args.seed)
    print(
        f"split (seed {args.seed}): train {counts['train']} / "
        f"validation {counts['validation']} / test {counts['test']}"
    )
    return 0


def _cmd_train_baseline(store: DatasetStore, args) -> int:
    model_path = args.model or pipeline.default_model_path(args.db)
    model, n = pipeline.stage_train_baseline(
        store, model_path, alpha=args.alpha, text_mode=args.text
    )
    print(
        f"trained baseline on {n} documents "
        f"(vocabulary {len(model.vocabulary_)}); saved {model_path}"
    )
    return 0


def _cmd_predict(store: DatasetStore, args) -> int:
    model_path = args.model or pipeline.default_model_path(args.db)
    outcome = pipeline.stage_predict(
        store,
        classifier=args.classifier,
        strategy=args.strategy,
        text_mode=args.text,
        budget=args.budget,
        model_path=model_path,
        request_timeout=args.timeout,
    )
    if outcome.skipped:
        print(f"run {outcome.run_id} already complete; nothing to do")
    else:
        print(
            f"run {outcome.run_id}: {outcome.n_transcripts} transcripts, "
            f"{outcome.n_chunks} chunks"
        )
    return 0


def _cmd_evaluate(store: DatasetStore, args) -> int:
    outcome = pipeline.stage_evaluate(store, run_id=args.run, reports_dir=args.reports)
    print(f"run {outcome.run_id}")
    print(render_report(outcome.report, "text"))
    print(f"reports written to {outcome.report_dir}")
    return 0


def _cmd_export(store: DatasetStore, args) -> int:
    payload = pipeline.stage_export(store, text_mode=args.text)
    if args.out == "-":
        sys.stdout.write(payload)
    else:
        Path(args.out).write_text(payload, "utf-8")
        print(f"exported to {args.out}")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "prices": _cmd_prices,
    "label": _cmd_label,
    "split": _cmd_split,
    "train-baseline": _cmd_train_baseline,
    "predict": _cmd_predict,
    "evaluate": _cmd_evaluate,
    "export": _cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "ingest" and not Path(args.directory).is_dir():
            raise ConfigurationError(f"transcript directory {args.directory} does not exist")
        with DatasetStore(args.db) as store:
            return _COMMANDS[args.command](store, args)
    except CalltideError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
