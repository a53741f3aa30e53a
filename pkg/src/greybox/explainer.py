"""Local linear explanations for text classifiers.

The explanation of one prediction is built by deleting random subsets of
words, querying the model on every perturbed string, weighting each sample
by its proximity to the intact sentence, and fitting a weighted ridge
regression from mask bits to the model's probability for the predicted
label.  The fitted coefficient of a word is its contribution: positive
means its presence pushes the model toward the label it predicted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import exp, sqrt
from typing import Sequence

from . import _kernels
from .errors import EmptyTextError, MaskLengthError
from .models.base import ModelAdapter
from .textcore import apply_mask, tokenize

# Spread below which the regression targets count as constant and the
# contributions are reported as exactly zero.
_FLAT_EPS = 1e-12


@dataclass(frozen=True)
class ExplainerConfig:
    """Sampling and regression settings for one explanation.

    ``num_samples`` should be at least W+2 for a W-word sentence to give
    the regression something to work with; smaller values are accepted but
    lean entirely on the ridge penalty.
    """

    num_samples: int = 1000
    kernel_width: float = 25.0
    ridge_lambda: float = 1.0
    rng_seed: int = 42
    target_label: str | None = None

    def __post_init__(self):
        if self.num_samples < 1:
            raise ValueError("num_samples must be positive")
        if self.kernel_width <= 0:
            raise ValueError("kernel_width must be positive")
        if self.ridge_lambda < 0:
            raise ValueError("ridge_lambda must be non-negative")


@dataclass(frozen=True)
class Explanation:
    """Per-word contributions toward the predicted label, plus ranking.

    ``ranked`` orders words by descending signed contribution (strongest
    supporters of the predicted label first); that is the order the greedy
    attack consumes.  ``by_magnitude()`` gives the display ordering where
    strong opponents also surface near the top.
    """

    text: str
    words: tuple[str, ...]
    predicted_label: str
    target_label: str
    contributions: tuple[float, ...]
    intercept: float
    ranked: tuple[int, ...]
    constant_prediction: bool
    num_queries: int

    def top_words(self, k: int | None = None) -> list[tuple[str, float]]:
        picks = self.ranked if k is None else self.ranked[:k]
        return [(self.words[i], self.contributions[i]) for i in picks]

    def by_magnitude(self) -> tuple[int, ...]:
        """Word indices sorted by |contribution|, ties by position."""
        return tuple(sorted(range(len(self.words)),
                            key=lambda i: (-abs(self.contributions[i]), i)))


def sample_masks(word_count: int, cfg: ExplainerConfig) -> list[tuple[int, ...]]:
    """Draw ``cfg.num_samples`` deletion masks for a sentence.

    The first mask is always all-ones (the intact sentence).  Every other
    mask deletes k words, k uniform in 1..W, at k distinct uniform
    positions.  Fully seeded: equal seeds give equal mask lists.
    """
    if word_count < 1:
        raise EmptyTextError("cannot sample masks for a sentence with no words")
    rng = random.Random(cfg.rng_seed)
    masks: list[tuple[int, ...]] = [(1,) * word_count]
    positions = range(word_count)
    for _ in range(cfg.num_samples - 1):
        k = rng.randint(1, word_count)
        bits = [1] * word_count
        for pos in rng.sample(positions, k):
            bits[pos] = 0
        masks.append(tuple(bits))
    return masks


def proximity_weight(mask: Sequence[int], kernel_width: float) -> float:
    """Exponential kernel over the cosine distance to the all-ones mask.

    For a 0/1 mask the cosine distance collapses to 1 - sqrt(kept/W); the
    empty mask is pinned to distance 1.
    """
    w = len(mask)
    if w == 0:
        raise MaskLengthError("empty mask")
    kept = sum(mask)
    d = 1.0 if kept == 0 else 1.0 - sqrt(kept / w)
    return exp(-(d * d) / (kernel_width * kernel_width))


def explain(
    text: str,
    model: ModelAdapter,
    cfg: ExplainerConfig = ExplainerConfig(),
    masks: Sequence[Sequence[int]] | None = None,
) -> Explanation:
    """Explain ``model``'s prediction on ``text``.

    ``masks`` overrides the random sampling (used for exhaustive
    enumeration in diagnostics); by default masks come from
    :func:`sample_masks`.  Model queries are issued as one indexed batch,
    so the result does not depend on completion order.
    """
    t = tokenize(text)
    w_count = t.word_count
    if w_count == 0:
        raise EmptyTextError("cannot explain a sentence with no words")

    base = model.classify(text)
    predicted, _ = base.argmax()
    target = cfg.target_label if cfg.target_label is not None else predicted

    mask_list = [tuple(m) for m in masks] if masks is not None else sample_masks(w_count, cfg)
    for m in mask_list:
        if len(m) != w_count:
            raise MaskLengthError(f"mask length {len(m)} != word count {w_count}")

    texts = [apply_mask(t, m) for m in mask_list]
    dists = model.classify_batch(texts)
    y = [dist.score_for(target) for dist in dists]
    weights = [proximity_weight(m, cfg.kernel_width) for m in mask_list]
    num_queries = len(texts) + 1

    if max(y) - min(y) <= _FLAT_EPS:
        # Constant target: the flat fit is exactly zero everywhere.
        contributions = (0.0,) * w_count
        return Explanation(
            text=text,
            words=tuple(t.words),
            predicted_label=predicted,
            target_label=target,
            contributions=contributions,
            intercept=y[0],
            ranked=tuple(range(w_count)),
            constant_prediction=True,
            num_queries=num_queries,
        )

    intercept, coefs = _kernels.fit_weighted_ridge(
        mask_list, y, weights, cfg.ridge_lambda
    )
    ranked = tuple(sorted(range(w_count), key=lambda i: (-coefs[i], i)))
    return Explanation(
        text=text,
        words=tuple(t.words),
        predicted_label=predicted,
        target_label=target,
        contributions=tuple(coefs),
        intercept=intercept,
        ranked=ranked,
        constant_prediction=False,
        num_queries=num_queries,
    )


def all_masks(word_count: int) -> list[tuple[int, ...]]:
    """Every distinct mask for a small sentence, all-ones first."""
    if word_count < 1:
        raise EmptyTextError("no words")
    if word_count > 20:
        raise ValueError("exhaustive enumeration is limited to 20 words")
    out = [(1,) * word_count]
    for code in range((1 << word_count) - 2, -1, -1):
        out.append(tuple((code >> (word_count - 1 - i)) & 1 for i in range(word_count)))
    return out
