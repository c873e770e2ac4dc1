"""Daily share quotes and price windows around report dates.

Quotes come from an AlphaVantage-style daily-series HTTP endpoint (base URL
and key via ``CALLTIDE_MD_URL`` / ``CALLTIDE_MD_KEY``) with the raw response
cached verbatim to one file per ticker, so test and re-run paths never touch
the network.  Window offsets are calendar days resolved to the nearest
trading day, ties to the earlier day, searching no further than a week out.
"""

from __future__ import annotations

import bisect
import datetime as dt
import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import (
    NoQuoteNearby,
    RateLimited,
    SourceUnavailable,
    UnknownTicker,
)

ENV_BASE_URL = "CALLTIDE_MD_URL"
ENV_API_KEY = "CALLTIDE_MD_KEY"

# (attribute suffix, calendar-day offset from the report date)
WINDOW_OFFSETS = (("m90", -90), ("m2", -2), ("p2", 2), ("p90", 90))

MAX_NEARBY_DISTANCE_DAYS = 7


@dataclass(frozen=True)
class DailyQuote:
    ticker: str
    date: dt.date
    close: float

    def __post_init__(self):
        if self.close <= 0:
            raise ValueError(f"{self.ticker} {self.date}: close must be positive")


@dataclass(frozen=True)
class PriceWindow:
    """Share and benchmark closes at the four offsets around a report date."""

    transcript_id: str
    sp_m90: float
    sp_m2: float
    sp_p2: float
    sp_p90: float
    bench_m90: float
    bench_m2: float
    bench_p2: float
    bench_p90: float
    resolved_dates: tuple[dt.date, dt.date, dt.date, dt.date]

    def __post_init__(self):
        for name in ("sp_m90", "sp_m2", "sp_p2", "sp_p90",
                     "bench_m90", "bench_m2", "bench_p2", "bench_p90"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        d = self.resolved_dates
        if not (d[0] < d[1] < d[2] < d[3]):
            raise ValueError(f"resolved dates must be strictly increasing: {d}")


def nearest_trading_day(
    series: list[DailyQuote],
    target: dt.date,
    max_distance: int = MAX_NEARBY_DISTANCE_DAYS,
) -> DailyQuote:
    """Quote minimizing |date - target|; equidistant ties go to the earlier day."""
    if not series:
        raise NoQuoteNearby(f"empty series around {target}")
    dates = [q.date for q in series]
    idx = bisect.bisect_left(dates, target)
    candidates = []
    if idx > 0:
        candidates.append(series[idx - 1])
    if idx < len(series):
        candidates.append(series[idx])
    best = min(candidates, key=lambda q: (abs((q.date - target).days), q.date))
    if abs((best.date - target).days) > max_distance:
        raise NoQuoteNearby(
            f"no quote within {max_distance} days of {target} "
            f"(closest: {best.date})"
        )
    return best


def build_price_window(
    transcript,
    share_series: list[DailyQuote],
    bench_series: list[DailyQuote],
) -> PriceWindow:
    """Resolve the -90/-2/+2/+90 offsets and collect share plus benchmark closes.

    Benchmark values are read at exactly the dates the share series resolved
    to; a benchmark hole at one of those dates fails the window the same way
    a share hole does.
    """
    bench_by_date = {q.date: q for q in bench_series}
    share_close: dict[str, float] = {}
    bench_close: dict[str, float] = {}
    resolved: list[dt.date] = []
    for suffix, offset in WINDOW_OFFSETS:
        tag = f"{offset:+d}"
        target = transcript.report_date + dt.timedelta(days=offset)
        try:
            quote = nearest_trading_day(share_series, target)
        except NoQuoteNearby as exc:
            raise NoQuoteNearby(str(exc), offset=tag) from None
        bench = bench_by_date.get(quote.date)
        if bench is None:
            raise NoQuoteNearby(
                f"benchmark has no quote on resolved date {quote.date}", offset=tag
            )
        share_close[suffix] = quote.close
        bench_close[suffix] = bench.close
        resolved.append(quote.date)
    if not (resolved[0] < resolved[1] < resolved[2] < resolved[3]):
        raise NoQuoteNearby(
            f"window offsets collapsed onto non-increasing dates {resolved}",
            offset="window",
        )
    return PriceWindow(
        transcript_id=transcript.id,
        sp_m90=share_close["m90"],
        sp_m2=share_close["m2"],
        sp_p2=share_close["p2"],
        sp_p90=share_close["p90"],
        bench_m90=bench_close["m90"],
        bench_m2=bench_close["m2"],
        bench_p2=bench_close["p2"],
        bench_p90=bench_close["p90"],
        resolved_dates=tuple(resolved),
    )


def parse_daily_payload(ticker: str, payload: dict) -> list[DailyQuote]:
    """Parse an AlphaVantage-style daily series payload, ascending by date."""
    if "Error Message" in payload:
        raise UnknownTicker(f"{ticker}: {payload['Error Message']}")
    if "Note" in payload or "Information" in payload:
        raise RateLimited(str(payload.get("Note") or payload.get("Information")))
    series = payload.get("Time Series (Daily)")
    if not isinstance(series, dict):
        raise SourceUnavailable(f"{ticker}: malformed daily series payload")
    quotes = []
    for day, fields in series.items():
        quotes.append(
            DailyQuote(
                ticker=ticker,
                date=dt.date.fromisoformat(day),
                close=float(fields["4. close"]),
            )
        )
    quotes.sort(key=lambda q: q.date)
    return quotes


class _RateLimiter:
    """Global minimum spacing between outbound requests."""

    def __init__(self, requests_per_minute: float):
        self._interval = 60.0 / requests_per_minute if requests_per_minute > 0 else 0.0
        self._lock = threading.Lock()
        self._last = 0.0

    def wait(self):
        with self._lock:
            now = time.monotonic()
            delay = self._last + self._interval - now
            if delay > 0:
                time.sleep(delay)
                now = time.monotonic()
            self._last = now


class QuoteClient:
    """Daily-quote source with a verbatim on-disk response cache.

    A cached file is authoritative: once ``cache/quotes/<TICKER>.json``
    exists the network is never consulted for that ticker, which keeps
    repeat runs hermetic and byte-identical.
    """

    def __init__(
        self,
        cache_dir: str | Path = "cache/quotes",
        base_url: str | None = None,
        api_key: str | None = None,
        requests_per_minute: float = 5.0,
        session: requests.Session | None = None,
    ):
        self.cache_dir = Path(cache_dir)
        self.base_url = base_url if base_url is not None else os.environ.get(ENV_BASE_URL)
        self.api_key = api_key if api_key is not None else os.environ.get(ENV_API_KEY)
        self._session = session
        self._limiter = _RateLimiter(requests_per_minute)
        self._cache_lock = threading.Lock()

    def cache_path(self, ticker: str) -> Path:
        return self.cache_dir / f"{ticker}.json"

    def fetch_daily_series(
        self, ticker: str, start: dt.date, end: dt.date
    ) -> list[DailyQuote]:
        """All trading-day quotes in [start, end], ascending."""
        if start > end:
            return []
        payload = self._load_payload(ticker)
        quotes = parse_daily_payload(ticker, payload)
        return [q for q in quotes if start <= q.date <= end]

    def _load_payload(self, ticker: str) -> dict:
        path = self.cache_path(ticker)
        if path.exists():
            try:
                return json.loads(path.read_text("utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise SourceUnavailable(f"unreadable cache file {path}: {exc}") from exc
        if not self.base_url:
            raise SourceUnavailable(
                f"no cached quotes for {ticker} and no quote source configured "
                f"(set {ENV_BASE_URL}/{ENV_API_KEY})"
            )
        raw = self._request(ticker)
        payload = json.loads(raw)
        # Only genuine series payloads are worth persisting; error and
        # throttle responses must stay retryable.
        parse_daily_payload(ticker, payload)
        with self._cache_lock:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".json.tmp")
            tmp.write_text(raw, "utf-8")
            tmp.replace(path)
        return payload

    def _request(self, ticker: str) -> str:
        self._limiter.wait()
        params = {
            "function": "TIME_SERIES_DAILY",
            "symbol": ticker,
            "outputsize": "full",
            "apikey": self.api_key or "",
        }
        session = self._session or requests
        try:
            response = session.get(self.base_url, params=params, timeout=30)
        except requests.RequestException as exc:
            raise SourceUnavailable(f"{ticker}: {exc}") from exc
        if response.status_code == 429:
            retry = response.headers.get("Retry-After")
            raise RateLimited(
                f"{ticker}: throttled by source",
                retry_after=float(retry) if retry else None,
            )
        if response.status_code != 200:
            raise SourceUnavailable(f"{ticker}: HTTP {response.status_code}")
        try:
            json.loads(response.text)
        except json.JSONDecodeError as exc:
            raise SourceUnavailable(f"{ticker}: non-JSON response") from exc
        return response.text
