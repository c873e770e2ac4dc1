"""calltide: earnings-call transcripts to a labeled sentiment dataset,
with pluggable classifier evaluation."""

from .chunking import Chunk, ChunkPrediction, aggregate_majority, chunk, truncate, word_budget_for
from .classify import ClassifierHandle, NaiveBayesBaseline, argmax_label, builtin_handle
from .evaluation import ConfusionMatrix, EvalReport, confusion, metrics, render_report
from .ingest import (
    RawDocument,
    Transcript,
    extract_qa,
    extract_report_date,
    ingest_directory,
    ingest_file,
    strip_html,
)
from .labeling import (
    LabeledExample,
    assign_label,
    class_balance,
    label_example,
    price_movement,
)
from .market import DailyQuote, PriceWindow, QuoteClient, build_price_window, nearest_trading_day
from .plugins import PluginClient, plugin_handshake, verify_plugin
from .porter import porter_stem
from .store import DatasetStore, SplitAssignment, stratified_split
from .textprep import (
    StopwordList,
    TokenSequence,
    TranscriptPreprocessor,
    load_stopwords,
    normalize,
    preprocess,
    remove_stopwords,
    token_count,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "Chunk",
    "ChunkPrediction",
    "ClassifierHandle",
    "ConfusionMatrix",
    "DailyQuote",
    "DatasetStore",
    "EvalReport",
    "LabeledExample",
    "NaiveBayesBaseline",
    "PluginClient",
    "PriceWindow",
    "QuoteClient",
    "RawDocument",
    "SplitAssignment",
    "StopwordList",
    "TokenSequence",
    "Transcript",
    "TranscriptPreprocessor",
    "aggregate_majority",
    "argmax_label",
    "assign_label",
    "builtin_handle",
    "chunk",
    "class_balance",
    "confusion",
    "extract_qa",
    "extract_report_date",
    "ingest_directory",
    "ingest_file",
    "label_example",
    "load_stopwords",
    "metrics",
    "nearest_trading_day",
    "normalize",
    "plugin_handshake",
    "porter_stem",
    "preprocess",
    "price_movement",
    "build_price_window",
    "remove_stopwords",
    "render_report",
    "stratified_split",
    "strip_html",
    "token_count",
    "tokenize",
    "truncate",
    "verify_plugin",
    "word_budget_for",
]
