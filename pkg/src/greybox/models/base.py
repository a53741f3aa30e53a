"""The query-only classifier contract all attack components rely on.

A model is anything with a name, a declared label set, and a pure
``classify`` method returning a normalized distribution over exactly those
labels.  Nothing downstream ever sees weights or gradients.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Sequence

from ..errors import InvalidDistributionError

_SCORE_EPS = 1e-9
_SUM_EPS = 1e-6


@dataclass(frozen=True)
class LabelDistribution:
    """Parallel (labels, scores) lists; scores sum to one."""

    labels: tuple[str, ...]
    scores: tuple[float, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.scores):
            raise InvalidDistributionError(
                f"{len(self.labels)} labels vs {len(self.scores)} scores"
            )
        if not self.labels:
            raise InvalidDistributionError("empty distribution")
        if len(set(self.labels)) != len(self.labels):
            raise InvalidDistributionError(f"duplicate labels in {self.labels}")
        for label, score in zip(self.labels, self.scores):
            if not (-_SCORE_EPS <= score <= 1.0 + _SCORE_EPS):
                raise InvalidDistributionError(
                    f"score {score!r} for {label!r} outside [0, 1]"
                )
        total = sum(self.scores)
        if abs(total - 1.0) > _SUM_EPS:
            raise InvalidDistributionError(f"scores sum to {total!r}, not 1")

    def score_for(self, label: str) -> float:
        for cand, score in zip(self.labels, self.scores):
            if cand == label:
                return score
        raise InvalidDistributionError(f"label {label!r} not in {self.labels}")

    def argmax(self) -> tuple[str, float]:
        """Top label and its score; exact ties go to the smaller label."""
        best = max(self.scores)
        label = min(l for l, s in zip(self.labels, self.scores) if s == best)
        return label, best


class ModelAdapter(ABC):
    """Behavioral contract: deterministic, label-stable, query-only."""

    name: str
    labels: tuple[str, ...]

    @abstractmethod
    def classify(self, text: str) -> LabelDistribution:
        """Score one input; must not mutate any model state."""

    def classify_batch(self, texts: Sequence[str]) -> list[LabelDistribution]:
        """Score many inputs; results are index-aligned with ``texts``."""
        return [self.classify(text) for text in texts]


class ConstantModel(ModelAdapter):
    """Returns one fixed distribution for every input.  Test scaffolding."""

    def __init__(self, name: str, distribution: LabelDistribution):
        self.name = name
        self.labels = distribution.labels
        self._dist = distribution

    def classify(self, text: str) -> LabelDistribution:
        return self._dist
