#!/usr/bin/env python3
"""Generate the bundled fixture corpus and cached quote payloads.

Produces, deterministically:
  tests/fixtures/corpus/<TICKER>_<YYYY-MM-DD>.html|.txt   12 transcripts
  tests/fixtures/cache/quotes/<TICKER>.json               per-ticker payloads
  tests/fixtures/cache/quotes/SPX.json                    benchmark payload
  tests/fixtures/cache/quotes/TESTCO.json                 market unit-test series

The price series are piecewise around each report date so the t-2 -> t+2
movement hits an exact target percentage, which pins each transcript's
label.  The trading calendar is weekdays 2023-06-01..2024-12-31 minus the
usual US market holidays.

Run from the repository root:  python tools/gen_corpus_fixtures.py
"""

from __future__ import annotations

import datetime as dt
import json
import random
from pathlib import Path

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

CAL_START = dt.date(2023, 6, 1)
CAL_END = dt.date(2024, 12, 31)

HOLIDAYS = {
    dt.date(2023, 6, 19), dt.date(2023, 7, 4), dt.date(2023, 9, 4),
    dt.date(2023, 11, 23), dt.date(2023, 12, 25),
    dt.date(2024, 1, 1), dt.date(2024, 1, 15), dt.date(2024, 2, 19),
    dt.date(2024, 3, 29), dt.date(2024, 5, 27), dt.date(2024, 6, 19),
    dt.date(2024, 7, 4), dt.date(2024, 9, 2), dt.date(2024, 11, 28),
    dt.date(2024, 12, 25),
}

# ticker -> (report date, base price, target t-2 -> t+2 movement %)
COMPANIES = {
    "ACME": (dt.date(2024, 1, 24), 84.0, -6.0),
    "BLTZ": (dt.date(2024, 1, 31), 42.0, -4.2),
    "CNDR": (dt.date(2024, 2, 1), 150.0, 0.8),
    "DRFT": (dt.date(2024, 2, 6), 64.0, -1.5),
    "EMBR": (dt.date(2024, 2, 8), 112.0, 5.5),
    "FLXN": (dt.date(2024, 2, 13), 58.0, 4.1),
    "GRVT": (dt.date(2024, 2, 15), 205.0, 8.0),
    "HLCN": (dt.date(2024, 2, 21), 91.0, 3.9),
    "IRNW": (dt.date(2024, 2, 27), 37.0, 6.4),
    "KYBR": (dt.date(2024, 2, 29), 126.0, 4.8),
    "MRDN": (dt.date(2024, 3, 5), 73.0, 7.2),
    "ORBT": (dt.date(2024, 3, 7), 188.0, 5.1),
}

SECTOR_BLURBS = {
    "ACME": "industrial adhesives and fastening systems",
    "BLTZ": "last-mile logistics software",
    "CNDR": "regional insurance underwriting",
    "DRFT": "marine navigation hardware",
    "EMBR": "residential heat-pump manufacturing",
    "FLXN": "flexible packaging materials",
    "GRVT": "satellite ground-station services",
    "HLCN": "clinical scheduling platforms",
    "IRNW": "iron-air grid storage",
    "KYBR": "managed cybersecurity operations",
    "MRDN": "specialty metals distribution",
    "ORBT": "in-orbit servicing and logistics",
}

TONE_WORDS = {
    0: ["loss", "decline", "weak", "miss", "impairment", "writedown",
        "downturn", "shortfall", "churn", "headwind"],
    1: ["inline", "steady", "flat", "unchanged", "stable", "consistent",
        "maintain", "par", "typical", "ordinary"],
    2: ["growth", "beat", "record", "strong", "surge", "expansion",
        "momentum", "upside", "accelerate", "outperform"],
}

ANALYSTS = [
    "Dana Whitfield", "Marcus Bell", "Priya Raman", "Tomás Aguilar",
    "Lena Fischer", "Yuki Tanaka", "Rob Calloway", "Ingrid Sørensen",
]

FIRMS = [
    "Harborview Capital", "Stellar Research", "Quince & Partners",
    "Meridian Securities", "Bluegate Analytics", "Northcroft Advisors",
]


def trading_days(start: dt.date, end: dt.date) -> list[dt.date]:
    days = []
    day = start
    while day <= end:
        if day.weekday() < 5 and day not in HOLIDAYS:
            days.append(day)
        day += dt.timedelta(days=1)
    return days


def label_for(move: float) -> int:
    if move < -3.0:
        return 0
    if move > 3.0:
        return 2
    return 1


def price_series(base: float, report: dt.date, move: float) -> dict[str, float]:
    """Flat shelves around the report date so the window movement is exact."""
    after = base * (1.0 + move / 100.0)
    series = {}
    for day in trading_days(CAL_START, CAL_END):
        gap = (day - report).days
        if gap < -10:
            price = base * 0.95
        elif gap < 0:
            price = base
        elif gap <= 10:
            price = after
        else:
            price = after * 1.03
        series[day.isoformat()] = round(price, 4)
    return series


def benchmark_series() -> dict[str, float]:
    days = trading_days(CAL_START, CAL_END)
    return {
        day.isoformat(): round(4500.0 + 0.8 * i, 4) for i, day in enumerate(days)
    }


def payload(ticker: str, series: dict[str, float]) -> str:
    daily = {
        day: {
            "1. open": f"{close:.4f}",
            "2. high": f"{close * 1.01:.4f}",
            "3. low": f"{close * 0.99:.4f}",
            "4. close": f"{close:.4f}",
            "5. volume": "1000000",
        }
        # upstream payloads list most recent day first
        for day, close in sorted(series.items(), reverse=True)
    }
    return json.dumps(
        {
            "Meta Data": {
                "1. Information": "Daily Prices (open, high, low, close) and Volumes",
                "2. Symbol": ticker,
                "3. Last Refreshed": max(series),
            },
            "Time Series (Daily)": daily,
        },
        indent=1,
    )


def sentence(rng: random.Random, tone: list[str]) -> str:
    subjects = ["Revenue", "Gross margin", "Bookings", "Our pipeline",
                "Segment volume", "Free cash flow", "Backlog", "Unit economics"]
    verbs = ["came in", "trended", "finished the quarter", "tracked", "landed"]
    tails = ["versus our plan", "relative to last year", "across all regions",
             "despite mixed demand", "on a constant-currency basis"]
    return (
        f"{rng.choice(subjects)} {rng.choice(verbs)} with notable "
        f"{rng.choice(tone)} and {rng.choice(tone)} {rng.choice(tails)}."
    )


def qa_exchange(rng: random.Random, tone: list[str]) -> str:
    analyst = rng.choice(ANALYSTS)
    firm = rng.choice(FIRMS)
    q = (
        f"{analyst}, {firm}: Could you unpack the {rng.choice(tone)} you called "
        f"out earlier, and how should we model the {rng.choice(tone)} into next "
        f"quarter?"
    )
    a = (
        f"Management: Sure — {sentence(rng, tone)} {sentence(rng, tone)} "
        f"We continue to expect {rng.choice(tone)} to shape guidance."
    )
    return f"{q}\n{a}"


def transcript_text(ticker: str, report: dt.date, tone_label: int, rng: random.Random):
    tone = TONE_WORDS[tone_label]
    month_name = report.strftime("%B")
    header = (
        f"{ticker} Corporation ({SECTOR_BLURBS[ticker]}) — Earnings Conference Call\n"
        f"{month_name} {report.day}, {report.year}\n"
        f"Operator: Good afternoon, and welcome to the {ticker} quarterly "
        f"earnings conference call. Today's call is being recorded."
    )
    remarks = "\n".join(
        f"Prepared remarks: {sentence(rng, tone)}" for _ in range(rng.randint(6, 10))
    )
    qa_header = "Question-and-Answer Session"
    exchanges = "\n".join(qa_exchange(rng, tone) for _ in range(rng.randint(5, 9)))
    closing = (
        "Operator: That concludes today's question period. "
        "Thank you for joining — you may now disconnect."
    )
    return f"{header}\n{remarks}\n{qa_header}\n{exchanges}\n{closing}"


def to_html(text: str) -> str:
    lines = text.split("\n")
    body = "\n".join(
        f"    <p>{line.replace('&', '&amp;').replace('—', '&mdash;')}</p>"
        for line in lines
    )
    return (
        "<!DOCTYPE html>\n<html>\n<head>\n"
        "  <title>Earnings Call Transcript</title>\n"
        "  <style>p { margin: 0; }</style>\n"
        "  <script>trackPageView();</script>\n"
        "</head>\n<body>\n"
        "  <nav><ul><li>Home</li><li>Transcripts</li></ul></nav>\n"
        "  <div id=\"content\">\n"
        f"{body}\n"
        "  </div>\n"
        "  <script>loadComments();</script>\n"
        "</body>\n</html>\n"
    )


def main() -> int:
    rng = random.Random(20240315)
    corpus_dir = FIXTURE_DIR / "corpus"
    quotes_dir = FIXTURE_DIR / "cache" / "quotes"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    quotes_dir.mkdir(parents=True, exist_ok=True)

    plain_text_tickers = {"DRFT", "KYBR"}  # a couple arrive as .txt
    for ticker, (report, base, move) in COMPANIES.items():
        tone_label = label_for(move)
        text = transcript_text(ticker, report, tone_label, rng)
        name = f"{ticker}_{report.isoformat()}"
        if ticker in plain_text_tickers:
            (corpus_dir / f"{name}.txt").write_text(text + "\n", "utf-8")
        else:
            (corpus_dir / f"{name}.html").write_text(to_html(text), "utf-8")
        (quotes_dir / f"{ticker}.json").write_text(
            payload(ticker, price_series(base, report, move)), "utf-8"
        )

    (quotes_dir / "SPX.json").write_text(payload("SPX", benchmark_series()), "utf-8")

    testco = price_series(100.0, dt.date(2024, 2, 6), 3.5)
    (quotes_dir / "TESTCO.json").write_text(payload("TESTCO", testco), "utf-8")

    n_days = len(trading_days(dt.date(2024, 1, 2), dt.date(2024, 6, 28)))
    print(f"corpus: {len(COMPANIES)} transcripts")
    print(f"trading days 2024-01-02..2024-06-28: {n_days}")
    return 0


if __name__ == "__main__":
    import sys

    sys.exit(main())
