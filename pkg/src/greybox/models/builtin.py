"""Desk-scale trainable classifiers used as surrogates and targets.

Three architecturally different families keep ensemble votes from being
three copies of the same decision boundary: a multinomial naive Bayes, a
softmax regression trained by full-batch gradient descent, and an averaged
perceptron over hashed word bigrams.  All three train deterministically
from (corpus order, hyperparameters, seed) and serialize to JSON blobs
that reload to bit-identical predictions.
"""

from __future__ import annotations

import csv
import json
import random
from math import exp, log
from pathlib import Path
from typing import Iterable, Sequence

from .. import _kernels
from ..errors import CorpusFormatError, ModelFormatError
from ..textcore import tokenize
from .base import LabelDistribution, ModelAdapter

NAIVE_BAYES = "naive-bayes"
LOGISTIC_REGRESSION = "logistic-regression"
HASHED_BIGRAM_PERCEPTRON = "hashed-bigram-perceptron"
KINDS = (NAIVE_BAYES, LOGISTIC_REGRESSION, HASHED_BIGRAM_PERCEPTRON)

_BLOB_VERSION = 1

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_FNV_MASK = 0xFFFFFFFFFFFFFFFF


def words_of(text: str) -> list[str]:
    """Lowercased word tokens; the shared featurization base."""
    return [w.lower() for w in tokenize(text).words]


def _fnv1a64(data: str) -> int:
    h = _FNV_OFFSET
    for byte in data.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _FNV_MASK
    return h


def _softmax_distribution(labels: Sequence[str], raw: Sequence[float]) -> LabelDistribution:
    top = max(raw)
    exps = [exp(v - top) for v in raw]
    total = sum(exps)
    return LabelDistribution(tuple(labels), tuple(e / total for e in exps))


def load_corpus(path: str | Path) -> list[tuple[str, str]]:
    """Read a `text,label` CSV (RFC-4180, header required)."""
    rows: list[tuple[str, str]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) != {"text", "label"}:
            raise CorpusFormatError(
                f"{path}: expected header 'text,label', got {reader.fieldnames}"
            )
        for row_no, row in enumerate(reader, start=2):
            text, label = row["text"], row["label"]
            if text is None or label is None or not label.strip():
                raise CorpusFormatError(f"{path}: row {row_no}: missing text or label")
            rows.append((text, label.strip()))
    return rows


def _check_corpus(corpus: Sequence[tuple[str, str]]) -> tuple[str, ...]:
    if not corpus:
        raise CorpusFormatError("empty corpus")
    labels = tuple(sorted({label for _, label in corpus}))
    if len(labels) < 2:
        raise CorpusFormatError(
            f"need at least 2 distinct labels, corpus has {list(labels)}"
        )
    return labels


class NaiveBayesClassifier(ModelAdapter):
    """Multinomial naive Bayes with additive smoothing.

    Words never seen in training are skipped at scoring time, so a
    sentence of pure out-of-vocabulary words falls back to the class
    priors.
    """

    kind = NAIVE_BAYES

    def __init__(self, name, labels, alpha, doc_counts, word_counts):
        self.name = name
        self.labels = tuple(labels)
        self.alpha = alpha
        self.doc_counts = dict(doc_counts)
        self.word_counts = {label: dict(cnt) for label, cnt in word_counts.items()}
        self.vocab = set()
        for cnt in self.word_counts.values():
            self.vocab.update(cnt)
        self._totals = {
            label: sum(cnt.values()) for label, cnt in self.word_counts.items()
        }
        self._total_docs = sum(self.doc_counts.values())

    @classmethod
    def from_corpus(cls, corpus, name="naive-bayes", alpha=1.0, seed=0):
        # seed accepted for API uniformity; counting has nothing to seed
        labels = _check_corpus(corpus)
        doc_counts = {label: 0 for label in labels}
        word_counts: dict[str, dict[str, int]] = {label: {} for label in labels}
        for text, label in corpus:
            doc_counts[label] += 1
            counts = word_counts[label]
            for word in words_of(text):
                counts[word] = counts.get(word, 0) + 1
        return cls(name, labels, alpha, doc_counts, word_counts)

    def classify(self, text: str) -> LabelDistribution:
        known = [w for w in words_of(text) if w in self.vocab]
        v = len(self.vocab)
        raw = []
        for label in self.labels:
            lp = log(self.doc_counts[label] / self._total_docs)
            counts = self.word_counts[label]
            denom = self._totals[label] + self.alpha * v
            for word in known:
                lp += log((counts.get(word, 0) + self.alpha) / denom)
            raw.append(lp)
        return _softmax_distribution(self.labels, raw)

    def to_blob(self) -> dict:
        return {
            "format_version": _BLOB_VERSION,
            "kind": self.kind,
            "name": self.name,
            "labels": list(self.labels),
            "alpha": self.alpha,
            "doc_counts": self.doc_counts,
            "word_counts": self.word_counts,
        }

    @classmethod
    def from_blob(cls, blob: dict) -> "NaiveBayesClassifier":
        return cls(blob["name"], blob["labels"], blob["alpha"],
                   blob["doc_counts"], blob["word_counts"])


class LogisticRegressionClassifier(ModelAdapter):
    """Softmax regression over bag-of-words counts.

    Trained full-batch for a fixed iteration count from a seeded random
    initialization, so equal inputs give bit-equal weights.
    """

    kind = LOGISTIC_REGRESSION

    def __init__(self, name, labels, vocab, weights, biases):
        self.name = name
        self.labels = tuple(labels)
        self.vocab = list(vocab)
        self.weights = [list(row) for row in weights]
        self.biases = list(biases)
        self._index = {word: i for i, word in enumerate(self.vocab)}

    @classmethod
    def from_corpus(cls, corpus, name="logistic-regression", seed=0,
                    learning_rate=0.5, l2=1e-4, iterations=300):
        labels = _check_corpus(corpus)
        label_index = {label: i for i, label in enumerate(labels)}
        vocab = sorted({w for text, _ in corpus for w in words_of(text)})
        index = {word: i for i, word in enumerate(vocab)}
        indptr, indices, vals, y = _csr(corpus, label_index,
                                        lambda text: _count_features(text, index))
        rng = random.Random(seed)
        n_features = len(vocab)
        init = [rng.uniform(-0.01, 0.01) for _ in range(len(labels) * n_features)]
        weights, biases = _kernels.logreg_epochs(
            indptr, indices, vals, y, len(corpus), len(labels), n_features,
            init, [0.0] * len(labels), learning_rate, l2, iterations,
        )
        rows = [weights[c * n_features:(c + 1) * n_features]
                for c in range(len(labels))]
        return cls(name, labels, vocab, rows, biases)

    def classify(self, text: str) -> LabelDistribution:
        counts: dict[int, int] = {}
        for word in words_of(text):
            f = self._index.get(word)
            if f is not None:
                counts[f] = counts.get(f, 0) + 1
        raw = []
        for c in range(len(self.labels)):
            s = self.biases[c]
            row = self.weights[c]
            for f, v in counts.items():
                s += row[f] * v
            raw.append(s)
        return _softmax_distribution(self.labels, raw)

    def to_blob(self) -> dict:
        return {
            "format_version": _BLOB_VERSION,
            "kind": self.kind,
            "name": self.name,
            "labels": list(self.labels),
            "vocab": self.vocab,
            "weights": self.weights,
            "biases": self.biases,
        }

    @classmethod
    def from_blob(cls, blob: dict) -> "LogisticRegressionClassifier":
        return cls(blob["name"], blob["labels"], blob["vocab"],
                   blob["weights"], blob["biases"])


class HashedBigramPerceptron(ModelAdapter):
    """Averaged perceptron over hashed word-bigram counts.

    Bigrams are taken over the word sequence with boundary markers and
    hashed (FNV-1a) into ``2**hash_bits`` buckets.  The training seed
    shuffles the per-epoch visit order, so different seeds genuinely give
    different weight vectors.
    """

    kind = HASHED_BIGRAM_PERCEPTRON

    def __init__(self, name, labels, hash_bits, weights, biases):
        self.name = name
        self.labels = tuple(labels)
        self.hash_bits = hash_bits
        # sparse per-label bucket weights
        self.weights = {label: dict(w) for label, w in weights.items()}
        self.biases = dict(biases)

    @classmethod
    def from_corpus(cls, corpus, name="hashed-bigram-perceptron", seed=0,
                    epochs=10, hash_bits=18):
        labels = _check_corpus(corpus)
        label_index = {label: i for i, label in enumerate(labels)}
        n_features = 1 << hash_bits
        indptr, indices, vals, y = _csr(
            corpus, label_index,
            lambda text: _bigram_features(text, hash_bits),
        )
        rng = random.Random(seed)
        order: list[int] = []
        base = list(range(len(corpus)))
        for _ in range(epochs):
            rng.shuffle(base)
            order.extend(base)
        flat_w, flat_b = _kernels.perceptron_epochs(
            indptr, indices, vals, y, len(labels), n_features, order,
        )
        weights = {}
        for label, c in label_index.items():
            row = flat_w[c * n_features:(c + 1) * n_features]
            weights[label] = {f: v for f, v in enumerate(row) if v != 0.0}
        biases = {label: flat_b[c] for label, c in label_index.items()}
        return cls(name, labels, hash_bits, weights, biases)

    def classify(self, text: str) -> LabelDistribution:
        feats = _bigram_features(text, self.hash_bits)
        raw = []
        for label in self.labels:
            s = self.biases[label]
            row = self.weights[label]
            for f, v in feats.items():
                s += row.get(f, 0.0) * v
            raw.append(s)
        return _softmax_distribution(self.labels, raw)

    def to_blob(self) -> dict:
        return {
            "format_version": _BLOB_VERSION,
            "kind": self.kind,
            "name": self.name,
            "labels": list(self.labels),
            "hash_bits": self.hash_bits,
            "weights": {
                label: {str(f): v for f, v in sorted(row.items())}
                for label, row in self.weights.items()
            },
            "biases": self.biases,
        }

    @classmethod
    def from_blob(cls, blob: dict) -> "HashedBigramPerceptron":
        weights = {
            label: {int(f): v for f, v in row.items()}
            for label, row in blob["weights"].items()
        }
        return cls(blob["name"], blob["labels"], blob["hash_bits"],
                   weights, blob["biases"])


def _count_features(text: str, index: dict[str, int]) -> dict[int, float]:
    counts: dict[int, float] = {}
    for word in words_of(text):
        f = index.get(word)
        if f is not None:
            counts[f] = counts.get(f, 0.0) + 1.0
    return counts


def _bigram_features(text: str, hash_bits: int) -> dict[int, float]:
    mask = (1 << hash_bits) - 1
    seq = ["<s>", *words_of(text), "</s>"]
    counts: dict[int, float] = {}
    for a, b in zip(seq, seq[1:]):
        bucket = _fnv1a64(a + "\x1f" + b) & mask
        counts[bucket] = counts.get(bucket, 0.0) + 1.0
    return counts


def _csr(corpus, label_index, featurize):
    """Stack per-document feature dicts into CSR arrays (buckets sorted)."""
    indptr = [0]
    indices: list[int] = []
    vals: list[float] = []
    y: list[int] = []
    for text, label in corpus:
        feats = featurize(text)
        for f in sorted(feats):
            indices.append(f)
            vals.append(feats[f])
        indptr.append(len(indices))
        y.append(label_index[label])
    return indptr, indices, vals, y


_CLASSES = {
    NAIVE_BAYES: NaiveBayesClassifier,
    LOGISTIC_REGRESSION: LogisticRegressionClassifier,
    HASHED_BIGRAM_PERCEPTRON: HashedBigramPerceptron,
}


def train_builtin(kind: str, corpus: Sequence[tuple[str, str]],
                  seed: int = 0, name: str | None = None,
                  **hyperparams) -> ModelAdapter:
    """Train one classifier of the given kind on (text, label) pairs."""
    if kind not in _CLASSES:
        raise ModelFormatError(f"unknown model kind {kind!r} (choose from {KINDS})")
    cls = _CLASSES[kind]
    return cls.from_corpus(corpus, name=name or kind, seed=seed, **hyperparams)


def training_accuracy(model: ModelAdapter, corpus: Iterable[tuple[str, str]]) -> float:
    total = 0
    hits = 0
    for text, label in corpus:
        total += 1
        if model.classify(text).argmax()[0] == label:
            hits += 1
    if total == 0:
        raise CorpusFormatError("empty corpus")
    return hits / total


def dump_blob(model) -> bytes:
    """Canonical byte serialization; equal models give equal bytes."""
    blob = model.to_blob()
    return (json.dumps(blob, sort_keys=True, ensure_ascii=False,
                       separators=(",", ":")) + "\n").encode("utf-8")


def save_model(model, path: str | Path) -> None:
    Path(path).write_bytes(dump_blob(model))


def load_model(path: str | Path) -> ModelAdapter:
    try:
        blob = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ModelFormatError(f"{path}: not valid JSON: {err}") from err
    return model_from_blob(blob, source=str(path))


def model_from_blob(blob: dict, source: str = "<blob>") -> ModelAdapter:
    kind = blob.get("kind")
    if kind not in _CLASSES:
        raise ModelFormatError(f"{source}: unknown model kind {kind!r}")
    if blob.get("format_version") != _BLOB_VERSION:
        raise ModelFormatError(
            f"{source}: unsupported format_version {blob.get('format_version')!r}"
        )
    return _CLASSES[kind].from_blob(blob)
