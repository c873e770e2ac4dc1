"""Estimator-contract plumbing and input validation helpers.

The estimators here follow the scikit-learn parameter protocol
(``get_params`` / ``set_params`` driven by constructor arguments) without
inheriting from scikit-learn, keeping its import cost out of short CLI
invocations.  ``sklearn.clone`` and ``sklearn.pipeline.Pipeline`` work with
them unchanged; the test suite exercises both against a real scikit-learn
install.
"""

from __future__ import annotations

import inspect

from .errors import ConfigurationError


class ParamsMixin:
    """scikit-learn-compatible parameter handling from __init__ signature."""

    @classmethod
    def _param_names(cls) -> list[str]:
        signature = inspect.signature(cls.__init__)
        return [name for name in signature.parameters if name != "self"]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ConfigurationError(
                    f"unknown parameter {name!r} for {type(self).__name__}"
                )
            setattr(self, name, value)
        return self

    def __sklearn_tags__(self):
        # reached only from scikit-learn meta-estimators, which have already
        # paid the sklearn import; estimators mark themselves via _estimator_type
        from sklearn.base import BaseEstimator

        tags = BaseEstimator.__sklearn_tags__(self)
        if getattr(self, "_estimator_type", None) == "classifier":
            from sklearn.utils import ClassifierTags

            tags.estimator_type = "classifier"
            tags.classifier_tags = ClassifierTags()
            tags.target_tags.required = True
        return tags


def check_text_list(X) -> list[str]:
    """Validate an iterable of raw text documents."""
    texts = list(X)
    for item in texts:
        if not isinstance(item, str):
            raise ConfigurationError(
                f"expected an iterable of str, found {type(item).__name__}"
            )
    return texts


def check_token_lists(X) -> list[list[str]]:
    """Validate an iterable of token-list documents."""
    docs = [list(doc) for doc in X]
    for doc in docs:
        for token in doc:
            if not isinstance(token, str):
                raise ConfigurationError(
                    f"expected token lists of str, found {type(token).__name__}"
                )
    return docs


def check_labels(y) -> list[int]:
    labels = [int(label) for label in y]
    bad = sorted({label for label in labels} - {0, 1, 2})
    if bad:
        raise ConfigurationError(f"labels must be in {{0, 1, 2}}, got {bad}")
    return labels
