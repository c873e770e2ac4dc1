from __future__ import annotations

import datetime as dt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from calltide.errors import ConfigurationError
from calltide.ingest import Transcript
from calltide.textprep import (
    PUNCTUATION,
    StopwordList,
    TranscriptPreprocessor,
    load_stopwords,
    normalize,
    preprocess,
    remove_stopwords,
    token_count,
    tokenize,
)


class TestNormalize:
    def test_lowercase_and_punct_to_space(self):
        assert normalize("We're GROWING, fast!") == "we re growing  fast "

    def test_empty(self):
        assert normalize("") == ""

    def test_hyphen_is_punctuation(self):
        assert normalize("Q4-2023") == "q4 2023"

    def test_typographic_characters(self):
        assert normalize("“smart” — quotes…") == " smart    quotes "

    def test_digits_kept(self):
        assert normalize("up 150 bps") == "up 150 bps"


class TestTokenize:
    def test_splits_on_whitespace_runs(self):
        assert tokenize("we re growing  fast ").tokens == ["we", "re", "growing", "fast"]

    def test_empty(self):
        assert tokenize("   ").tokens == []

    def test_duplicates_preserved(self):
        assert tokenize("a b a").tokens == ["a", "b", "a"]

    @given(st.text(alphabet="ab \t\n", max_size=60), st.integers(0, 4), st.integers(0, 4))
    def test_token_count_invariant_under_surrounding_whitespace(self, text, lead, trail):
        padded = " " * lead + text + "\t" * trail
        assert len(tokenize(normalize(padded)).tokens) == len(tokenize(normalize(text)).tokens)


class TestStopwords:
    def test_default_list_loads(self):
        stopwords = load_stopwords()
        assert stopwords.version == "nltk-english-179+like"
        # the standard 179-word corpus plus the documented "like" addition
        assert len(stopwords.words) == 180
        for word in ("like", "as", "and", "the", "don't"):
            assert word in stopwords

    def test_entries_lowercase_invariant(self):
        with pytest.raises(ConfigurationError):
            StopwordList(words=frozenset({"The"}))

    def test_documented_removals(self):
        stopwords = load_stopwords()
        seq = tokenize("like strong as growth and")
        assert remove_stopwords(seq, stopwords).tokens == ["strong", "growth"]

    def test_empty_sequence(self):
        assert remove_stopwords(tokenize(""), load_stopwords()).tokens == []

    def test_no_stopwords_is_identity(self):
        seq = tokenize("revenue grew sharply")
        assert remove_stopwords(seq, load_stopwords()).tokens == seq.tokens

    def test_custom_file_with_comments(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("# version: tiny\nfoo\nbar  # inline comment\n\n")
        stopwords = load_stopwords(path)
        assert stopwords.words == frozenset({"foo", "bar"})
        assert stopwords.version == "tiny"


class TestPreprocess:
    def test_composed_pipeline(self):
        assert preprocess("We're connecting the customers!").tokens == ["connect", "custom"]

    def test_empty(self):
        assert preprocess("").tokens == []

    def test_all_stopwords(self):
        assert preprocess("and the as").tokens == []

    @given(st.text(max_size=200))
    def test_output_clean_of_case_punct_and_stopwords(self, text):
        stopwords = load_stopwords()
        for token in preprocess(text, stopwords).tokens:
            assert token
            assert token == token.lower()
            assert not set(token) & set(PUNCTUATION)
            assert token not in stopwords


def _transcript(qa_text: str, prefix: str = "Prepared remarks. ") -> Transcript:
    return Transcript(
        ticker="TESTCO",
        report_date=dt.date(2024, 2, 6),
        full_text=prefix + qa_text,
        qa_text=qa_text,
    )


class TestTokenCount:
    def test_counts_pre_stopword_tokens(self):
        assert token_count(_transcript("revenue grew ten percent"), "qa") == 4

    def test_empty_qa(self):
        assert token_count(_transcript(""), "qa") == 0

    def test_full_mode(self):
        t = _transcript("revenue grew", prefix="Intro words here. ")
        assert token_count(t, "full") == 5

    def test_fixture_transcript_count(self, corpus_dir):
        # 655 counted independently: punctuation mapped to spaces with sed,
        # then `wc -w`, on the fixture file
        from calltide.ingest import ingest_file

        transcript = ingest_file(corpus_dir / "DRFT_2024-02-06.txt")
        assert token_count(transcript, "full") == 655

    def test_unknown_mode_rejected(self):
        with pytest.raises(ConfigurationError):
            token_count(_transcript("x"), "headline")


class TestTranscriptPreprocessor:
    def test_sklearn_roundtrip(self):
        prep = TranscriptPreprocessor().fit(["Connected customers!"])
        assert prep.transform(["Connected customers!"]) == [["connect", "custom"]]
        assert prep.get_params() == {"stopword_path": None, "stem": True}

    def test_stem_off(self):
        prep = TranscriptPreprocessor(stem=False).fit([])
        assert prep.transform(["Connecting customers"]) == [["connecting", "customers"]]

    def test_rejects_non_strings(self):
        prep = TranscriptPreprocessor().fit([])
        with pytest.raises(ConfigurationError):
            prep.transform([42])
