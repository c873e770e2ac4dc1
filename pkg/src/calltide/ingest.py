"""Transcript file ingestion.

Reads pre-downloaded earnings-call files (``<TICKER>_<YYYY-MM-DD>.html`` or
``.txt``) from a directory, strips markup, locates the report date and the
start of the question-and-answer segment, and yields Transcript records.
Files are independent, so parsing fans out across a thread pool; the caller
owns all writes.
"""

from __future__ import annotations

import datetime as dt
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from html.parser import HTMLParser
from pathlib import Path

from .errors import ConfigurationError, DateNotFound, UnparsableDocument

TICKER_RE = re.compile(r"[A-Z.\-]{1,8}$")
FILENAME_RE = re.compile(r"^(?P<ticker>[A-Z.\-]{1,8})(?:_(?P<date>\d{4}-\d{2}-\d{2}))?$")

DEFAULT_QA_MARKERS = (
    "question-and-answer session",
    "question and answer session",
    "q&a session",
    "q&a",
)

_MONTHS = (
    "january february march april may june july august "
    "september october november december"
).split()

_DATE_RE = re.compile(
    r"(?P<iso>\b(?P<y1>\d{4})-(?P<m1>\d{2})-(?P<d1>\d{2})\b)"
    r"|(?P<name>\b(?P<m2>" + "|".join(_MONTHS) + r")\s+(?P<d2>\d{1,2}),\s+(?P<y2>\d{4})\b)",
    re.IGNORECASE,
)

# Tags whose boundaries separate lines in the stripped text.
_BLOCK_TAGS = frozenset(
    "address article aside blockquote br dd div dl dt fieldset figcaption "
    "figure footer form h1 h2 h3 h4 h5 h6 header hr li main ol p pre "
    "section table tbody td tfoot th thead tr ul".split()
)
# Invisible containers dropped wholesale.
_SKIP_TAGS = frozenset(("script", "style", "nav"))


@dataclass(frozen=True)
class RawDocument:
    """One on-disk transcript file, before any parsing."""

    source_path: Path
    ticker: str
    body: str
    format: str  # "html" | "plain"

    def __post_init__(self):
        if not TICKER_RE.match(self.ticker):
            raise ConfigurationError(f"invalid ticker {self.ticker!r}")
        if not self.body:
            raise UnparsableDocument(f"{self.source_path}: empty document")
        if self.format not in ("html", "plain"):
            raise ConfigurationError(f"unknown document format {self.format!r}")


@dataclass(frozen=True)
class Transcript:
    """A cleaned earnings call keyed by (ticker, report date)."""

    ticker: str
    report_date: dt.date
    full_text: str
    qa_text: str

    def __post_init__(self):
        if not isinstance(self.report_date, dt.date):
            raise ValueError("report_date must be a datetime.date")
        if self.qa_text and not self.full_text.endswith(self.qa_text):
            raise ValueError("qa_text must be a suffix of full_text")

    @property
    def id(self) -> str:
        return f"{self.ticker}_{self.report_date.isoformat()}"


class _TextExtractor(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
        if tag in _BLOCK_TAGS:
            self.parts.append("\n")

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS and self._skip_depth > 0:
            self._skip_depth -= 1
        if tag in _BLOCK_TAGS:
            self.parts.append("\n")

    def handle_data(self, data):
        if self._skip_depth == 0:
            self.parts.append(data)


def _normalize_lines(text: str) -> str:
    lines = (" ".join(line.split()) for line in text.split("\n"))
    return "\n".join(line for line in lines if line)


def strip_html(doc: RawDocument) -> str:
    """Extract visible plain text from an HTML document.

    Script/style/nav subtrees are dropped, block elements become line
    boundaries, entities are decoded and whitespace runs collapse to single
    spaces within each line.
    """
    if doc.format != "html":
        raise ConfigurationError("strip_html requires an html document")
    extractor = _TextExtractor()
    extractor.feed(doc.body)
    extractor.close()
    text = _normalize_lines("".join(extractor.parts))
    if not text:
        raise UnparsableDocument(f"{doc.source_path}: no text content")
    return text


def extract_report_date(doc: RawDocument) -> dt.date:
    """First date in document order, ISO ``YYYY-MM-DD`` or ``Month D, YYYY``."""
    for match in _DATE_RE.finditer(doc.body):
        try:
            if match.group("iso"):
                return dt.date(
                    int(match.group("y1")), int(match.group("m1")), int(match.group("d1"))
                )
            month = _MONTHS.index(match.group("m2").lower()) + 1
            return dt.date(int(match.group("y2")), month, int(match.group("d2")))
        except ValueError:
            continue  # matched the shape but not a real calendar date
    raise DateNotFound(f"{doc.source_path}: no recognizable report date")


def extract_qa(text: str, markers: tuple[str, ...] = DEFAULT_QA_MARKERS) -> str:
    """Suffix of ``text`` from the first occurrence of any Q&A marker.

    Matching is case-insensitive; returns "" when no marker is present.
    """
    lowered = text.lower()
    positions = [idx for m in markers if (idx := lowered.find(m.lower())) != -1]
    if not positions:
        return ""
    return text[min(positions) :]


def load_raw_document(path: str | Path) -> RawDocument:
    path = Path(path)
    match = FILENAME_RE.match(path.stem)
    if match is None:
        raise ConfigurationError(
            f"{path.name}: expected <TICKER>_<YYYY-MM-DD>{path.suffix or '.txt'}"
        )
    fmt = "html" if path.suffix.lower() in (".html", ".htm") else "plain"
    return RawDocument(
        source_path=path,
        ticker=match.group("ticker"),
        body=path.read_text("utf-8"),
        format=fmt,
    )


def ingest_file(
    path: str | Path, markers: tuple[str, ...] = DEFAULT_QA_MARKERS
) -> Transcript:
    """Parse one transcript file into a Transcript record.

    A date embedded in the filename wins over dates found in the body.
    """
    path = Path(path)
    doc = load_raw_document(path)
    name_date = FILENAME_RE.match(path.stem).group("date")
    if name_date:
        report_date = dt.date.fromisoformat(name_date)
    else:
        report_date = extract_report_date(doc)
    if doc.format == "html":
        full_text = strip_html(doc)
    else:
        full_text = _normalize_lines(doc.body)
        if not full_text:
            raise UnparsableDocument(f"{path}: no text content")
    return Transcript(
        ticker=doc.ticker,
        report_date=report_date,
        full_text=full_text,
        qa_text=extract_qa(full_text, markers),
    )


def ingest_directory(
    directory: str | Path,
    markers: tuple[str, ...] = DEFAULT_QA_MARKERS,
    max_workers: int = 8,
) -> tuple[list[Transcript], list[tuple[Path, Exception]]]:
    """Parse every ``.html``/``.htm``/``.txt`` file under ``directory``.

    Files parse concurrently; results come back in deterministic filename
    order along with per-file failures.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise ConfigurationError(f"transcript directory {directory} does not exist")
    paths = sorted(
        p for p in directory.iterdir() if p.suffix.lower() in (".html", ".htm", ".txt")
    )
    transcripts: list[Transcript] = []
    failures: list[tuple[Path, Exception]] = []
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        for path, outcome in zip(paths, pool.map(_try_ingest, paths, [markers] * len(paths))):
            if isinstance(outcome, Exception):
                failures.append((path, outcome))
            else:
                transcripts.append(outcome)
    return transcripts, failures


def _try_ingest(path: Path, markers: tuple[str, ...]):
    try:
        return ingest_file(path, markers)
    except Exception as exc:  # collected, reported by the caller
        return exc
