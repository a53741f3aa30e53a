"""Shared fixtures: bundled data, trained models, toy adapters, mock HTTP."""

from __future__ import annotations

import threading
from http.server import ThreadingHTTPServer
from importlib import resources
from pathlib import Path

import pytest

from greybox.lexicon import default_homoglyphs, default_lexicon
from greybox.mockserver import InferenceHandler
from greybox.models import LabelDistribution, ModelAdapter, load_corpus, train_builtin

DEMO = "possibility of bankruptcy. lack of assurance. Poor stability."
TABLE_SENTENCE = "possibility of bankruptcy. lack of assurance. Inadequate stability."


def data_path(name: str) -> Path:
    return Path(resources.files("greybox").joinpath("data", name))


@pytest.fixture(scope="session")
def corpus_rows():
    return load_corpus(data_path("corpus.csv"))


@pytest.fixture(scope="session")
def nb_model(corpus_rows):
    return train_builtin("naive-bayes", corpus_rows, seed=0, name="nb")


@pytest.fixture(scope="session")
def lr_model(corpus_rows):
    return train_builtin("logistic-regression", corpus_rows, seed=1, name="lr")


@pytest.fixture(scope="session")
def pc_model(corpus_rows):
    return train_builtin("hashed-bigram-perceptron", corpus_rows, seed=2, name="pc")


@pytest.fixture(scope="session")
def held_out_model(corpus_rows):
    return train_builtin("hashed-bigram-perceptron", corpus_rows, seed=99, name="held")


@pytest.fixture(scope="session")
def surrogates(nb_model, lr_model, pc_model):
    return [nb_model, lr_model, pc_model]


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def homoglyphs():
    return default_homoglyphs()


class WordPresenceModel(ModelAdapter):
    """P(hot_label) = high iff the trigger word is present, else low."""

    def __init__(self, trigger, labels=("negative", "positive"),
                 hot="negative", high=0.9, low=0.2, name="presence"):
        self.name = name
        self.labels = tuple(labels)
        self.trigger = trigger
        self.hot = hot
        self.high = high
        self.low = low

    def classify(self, text):
        words = {w.lower() for w in text.split()}
        p = self.high if self.trigger in words else self.low
        scores = tuple(p if l == self.hot else (1 - p) / (len(self.labels) - 1)
                       for l in self.labels)
        return LabelDistribution(self.labels, scores)


class LinearMaskModel(ModelAdapter):
    """P(hot_label) is an exact linear function of which words survive."""

    def __init__(self, words, coefs, intercept, labels=("no", "yes"),
                 hot="yes", name="linear"):
        self.name = name
        self.labels = tuple(labels)
        self.words = list(words)
        self.coefs = list(coefs)
        self.intercept = intercept
        self.hot = hot

    def classify(self, text):
        present = set(text.split())
        p = self.intercept
        for word, coef in zip(self.words, self.coefs):
            if word in present:
                p += coef
        scores = tuple(p if l == self.hot else 1 - p for l in self.labels)
        return LabelDistribution(self.labels, scores)


class FixedLabelModel(ModelAdapter):
    """Always answers one label at one confidence.  For vote patterns."""

    def __init__(self, name, label, labels=("negative", "positive"),
                 confidence=0.9):
        self.name = name
        self.labels = tuple(labels)
        self.label = label
        self.confidence = confidence

    def classify(self, text):
        other = (1 - self.confidence) / (len(self.labels) - 1)
        scores = tuple(self.confidence if l == self.label else other
                       for l in self.labels)
        return LabelDistribution(self.labels, scores)


@pytest.fixture
def make_server():
    """Start configurable mock inference servers; all torn down after."""
    servers = []

    def _make(**attrs):
        server = ThreadingHTTPServer(("127.0.0.1", 0), InferenceHandler)
        for key, value in attrs.items():
            setattr(server, key, value)
        threading.Thread(target=server.serve_forever, daemon=True).start()
        servers.append(server)
        return f"http://127.0.0.1:{server.server_address[1]}/"

    yield _make
    for server in servers:
        server.shutdown()
        server.server_close()
