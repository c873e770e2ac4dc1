"""Stage-level units not covered by the CLI round trips."""

from __future__ import annotations

from types import SimpleNamespace

from calltide.pipeline import _BuiltinScorer, _PluginScorer
from calltide.classify import NaiveBayesBaseline
from calltide.textprep import preprocess


class _StubClient:
    """Duck-typed PluginClient capturing what the host sends."""

    def __init__(self, wants: str):
        self.handle = SimpleNamespace(wants=wants)
        self.sent: list[str] = []

    def predict(self, text: str):
        self.sent.append(text)
        return 2, (0.2, 0.2, 0.6)


def test_plugin_scorer_sends_raw_text_verbatim():
    client = _StubClient(wants="raw")
    _PluginScorer(client).score("We're CONNECTING the customers!")
    assert client.sent == ["We're CONNECTING the customers!"]


def test_plugin_scorer_preprocesses_when_asked():
    client = _StubClient(wants="preprocessed")
    _PluginScorer(client).score("We're CONNECTING the customers!")
    assert client.sent == ["connect custom"]


def test_builtin_scorer_matches_direct_model_call():
    docs = [["connect"], ["custom"], ["growth"]]
    model = NaiveBayesBaseline().fit(docs, [0, 1, 2])
    scorer = _BuiltinScorer(model)
    label, scores = scorer.score("We're connecting the customers!")
    expected = model.predict_scores(preprocess("We're connecting the customers!").tokens)
    assert scores == expected
