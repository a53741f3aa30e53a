"""The greedy grey-box attack loop.

One attack: explain the prediction, rank words by contribution, swap
high-ranked words for lexicon synonyms, and put every candidate sentence
to a vote across the surrogate ensemble.  Swap size escalates from one
word upward only while no success exists at the current size, so every
reported success uses the minimum number of swaps found.  An optional
homoglyph pass rescues the best near-miss when synonyms alone fail.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

from .errors import EmptyTextError, LabelSetMismatchError
from .explainer import Explanation, ExplainerConfig, explain
from .lexicon import HomoglyphMap, SynonymLexicon
from .models.base import ModelAdapter
from .textcore import TokenizedText, substitute, tokenize

SOURCE_SYNONYM = "synonym"
SOURCE_HOMOGLYPH = "homoglyph"
SOURCE_BOTH = "synonym+homoglyph"

STATUS_SUCCESS = "success"
STATUS_BUDGET = "exhausted-budget"
STATUS_CANDIDATES = "exhausted-candidates"

ORDER_CONTRIBUTION = "contribution"
ORDER_RANDOM = "random"


@dataclass(frozen=True)
class CandidateSentence:
    """A perturbed sentence plus the swaps that produced it."""

    text: str
    swaps: tuple[tuple[int, str, str], ...]  # (word_index, original, replacement)
    source: str = SOURCE_SYNONYM

    @property
    def swap_count(self) -> int:
        return len(self.swaps)


@dataclass(frozen=True)
class Vote:
    model: str
    flipped: bool
    label: str
    confidence: float


@dataclass(frozen=True)
class EnsembleVerdict:
    """Per-surrogate flips for one candidate and the majority decision."""

    votes: tuple[Vote, ...]
    threshold: int

    @property
    def n(self) -> int:
        return len(self.votes)

    @property
    def n_s(self) -> int:
        return sum(1 for v in self.votes if v.flipped)

    @property
    def success(self) -> bool:
        return self.n_s >= self.threshold


@dataclass(frozen=True)
class AttackConfig:
    """Budgets and knobs for one attack run."""

    k_max: int = 3
    max_queries: int = 10_000
    top_m: int | None = None
    threshold_override: int | None = None
    unanimous: bool = False
    homoglyph_fallback: bool = False
    re_explain_per_k: bool = False
    word_order: str = ORDER_CONTRIBUTION
    explainer: ExplainerConfig = field(default_factory=ExplainerConfig)

    def __post_init__(self):
        if self.k_max < 1:
            raise ValueError("k_max must be at least 1")
        if self.max_queries < 1:
            raise ValueError("max_queries must be at least 1")
        if self.word_order not in (ORDER_CONTRIBUTION, ORDER_RANDOM):
            raise ValueError(f"unknown word_order {self.word_order!r}")
        if self.threshold_override is not None and self.threshold_override < 1:
            raise ValueError("threshold_override must be at least 1")


@dataclass(frozen=True)
class AttackOutcome:
    original_text: str
    original_label: str
    original_confidences: dict[str, float]  # surrogate -> P(original label)
    explanation: Explanation | None
    candidates: tuple[tuple[CandidateSentence, EnsembleVerdict], ...]
    queries_used: int
    overhead_queries: int  # explainer + original-confidence queries
    status: str

    @property
    def successes(self) -> list[tuple[CandidateSentence, EnsembleVerdict]]:
        return [(c, v) for c, v in self.candidates if v.success]


@dataclass(frozen=True)
class TargetVerification:
    """One black-box query of a held-out target on one candidate."""

    model: str
    text: str
    flipped: bool
    label: str
    confidence: float


def majority_threshold(n: int) -> int:
    """Fooled-surrogate count required for success: ceil(n/2)."""
    return (n + 1) // 2


def generate_candidates(t: TokenizedText, ranked_words: Sequence[int],
                        lex: SynonymLexicon, k: int) -> list[CandidateSentence]:
    """Enumerate k-swap candidates in deterministic priority order.

    For k=1 the stream walks ranked words outside-in: every synonym of the
    top word first, then the next word.  For k>1 it walks k-subsets of the
    ranked words in rank-lexicographic order, expanding each subset's
    synonym cross-product with lower synonym indices first.  Words without
    synonyms drop out; duplicate texts are emitted once.
    """
    if k < 1:
        raise ValueError("swap size k must be at least 1")
    word_tokens = t.word_tokens
    pool: list[tuple[int, str, list[str]]] = []
    for index in ranked_words:
        surface = word_tokens[index].surface
        synonyms = lex.synonyms_for(surface)
        if synonyms:
            pool.append((index, surface, synonyms))

    out: list[CandidateSentence] = []
    seen: set[str] = {t.original}
    for subset in combinations(pool, k):
        for choice in product(*(range(len(syns)) for _, _, syns in subset)):
            swaps = tuple(
                (index, surface, syns[syn_i])
                for (index, surface, syns), syn_i in zip(subset, choice)
            )
            text = substitute(t, [(i, repl) for i, _, repl in swaps])
            if text in seen:
                continue
            seen.add(text)
            out.append(CandidateSentence(text, swaps))
    return out


def ensemble_vote(candidate: CandidateSentence, original_label: str,
                  surrogates: Sequence[ModelAdapter],
                  threshold_override: int | None = None,
                  unanimous: bool = False) -> EnsembleVerdict:
    """Query every surrogate once on the candidate and tally flips.

    A query failure aborts the whole verdict; an unavailable model is
    never counted as "not fooled".
    """
    if not surrogates:
        raise ValueError("need at least one surrogate")
    votes = []
    for model in surrogates:
        if model.labels and original_label not in model.labels:
            raise LabelSetMismatchError(
                f"surrogate {model.name!r} does not know label {original_label!r}"
            )
        label, confidence = model.classify(candidate.text).argmax()
        votes.append(Vote(model.name, label != original_label, label, confidence))
    n = len(votes)
    if threshold_override is not None:
        threshold = threshold_override
    elif unanimous:
        threshold = n
    else:
        threshold = majority_threshold(n)
    return EnsembleVerdict(tuple(votes), threshold)


def verify_target(candidate: CandidateSentence, original_label: str,
                  target: ModelAdapter) -> TargetVerification:
    """Single query of a held-out target model on one candidate."""
    label, confidence = target.classify(candidate.text).argmax()
    return TargetVerification(target.name, candidate.text,
                              label != original_label, label, confidence)


def attack(text: str, surrogates: Sequence[ModelAdapter],
           lex: SynonymLexicon, cfg: AttackConfig = AttackConfig(),
           explain_model: ModelAdapter | None = None,
           homoglyphs: HomoglyphMap | None = None) -> AttackOutcome:
    """Run the full greedy attack on one sentence.

    The explanation is computed once against ``explain_model`` (default:
    the first surrogate).  Voting stops early when the query budget runs
    out, and stops escalating to larger swap counts as soon as any swap
    size yields a success, after finishing that size completely when the
    budget allows.
    """
    if not surrogates:
        raise ValueError("need at least one surrogate")
    _check_label_agreement(surrogates)
    explainer_model = explain_model if explain_model is not None else surrogates[0]

    t = tokenize(text)
    if t.word_count == 0:
        raise EmptyTextError("cannot attack a sentence with no words")

    explanation: Explanation | None = None
    overhead = 0
    if cfg.word_order == ORDER_CONTRIBUTION:
        explanation = explain(text, explainer_model, cfg.explainer)
        original_label = explanation.predicted_label
        eligible = [i for i in explanation.ranked
                    if explanation.contributions[i] != 0.0]
        overhead += explanation.num_queries
    else:
        original_label, _ = explainer_model.classify(text).argmax()
        overhead += 1
        rng = random.Random(cfg.explainer.rng_seed)
        eligible = list(range(t.word_count))
        rng.shuffle(eligible)
    if cfg.top_m is not None:
        eligible = eligible[: cfg.top_m]

    original_confidences = {}
    for model in surrogates:
        if model.labels and original_label not in model.labels:
            raise LabelSetMismatchError(
                f"surrogate {model.name!r} does not know label {original_label!r}"
            )
        original_confidences[model.name] = model.classify(text).score_for(original_label)
    overhead += len(surrogates)

    n = len(surrogates)
    queries_used = 0
    voted: list[tuple[CandidateSentence, EnsembleVerdict]] = []
    budget_hit = False
    found_success = False

    for k in range(1, cfg.k_max + 1):
        if cfg.re_explain_per_k and k > 1 and cfg.word_order == ORDER_CONTRIBUTION:
            recfg = ExplainerConfig(
                num_samples=cfg.explainer.num_samples,
                kernel_width=cfg.explainer.kernel_width,
                ridge_lambda=cfg.explainer.ridge_lambda,
                rng_seed=cfg.explainer.rng_seed + k,
                target_label=cfg.explainer.target_label,
            )
            explanation = explain(text, explainer_model, recfg)
            eligible = [i for i in explanation.ranked
                        if explanation.contributions[i] != 0.0]
            if cfg.top_m is not None:
                eligible = eligible[: cfg.top_m]
            overhead += explanation.num_queries
        success_at_k = False
        for candidate in generate_candidates(t, eligible, lex, k):
            if queries_used + n > cfg.max_queries:
                budget_hit = True
                break
            verdict = ensemble_vote(candidate, original_label, surrogates,
                                    cfg.threshold_override, cfg.unanimous)
            queries_used += n
            voted.append((candidate, verdict))
            if verdict.success:
                success_at_k = True
        if success_at_k:
            found_success = True
        if budget_hit or success_at_k:
            break

    if not found_success and cfg.homoglyph_fallback and homoglyphs is not None:
        rescue = _homoglyph_rescue(t, voted, homoglyphs)
        if rescue is not None and queries_used + n <= cfg.max_queries:
            verdict = ensemble_vote(rescue, original_label, surrogates,
                                    cfg.threshold_override, cfg.unanimous)
            queries_used += n
            voted.append((rescue, verdict))
            if verdict.success:
                found_success = True

    if found_success:
        status = STATUS_SUCCESS
    elif budget_hit:
        status = STATUS_BUDGET
    else:
        status = STATUS_CANDIDATES

    return AttackOutcome(
        original_text=text,
        original_label=original_label,
        original_confidences=original_confidences,
        explanation=explanation,
        candidates=tuple(voted),
        queries_used=queries_used,
        overhead_queries=overhead,
        status=status,
    )


def _homoglyph_rescue(t: TokenizedText,
                      voted: Sequence[tuple[CandidateSentence, EnsembleVerdict]],
                      homoglyphs: HomoglyphMap) -> CandidateSentence | None:
    """Build the one extra candidate the homoglyph fallback re-votes.

    Prefers the failed candidate closest to the threshold (highest fooled
    count, then fewest swaps, then generation order); with no voted
    candidates at all the original sentence itself is homoglyphed.
    """
    if voted:
        best_i = min(
            range(len(voted)),
            key=lambda i: (-voted[i][1].n_s, voted[i][0].swap_count, i),
        )
        base = voted[best_i][0]
        new_text = homoglyphs.substitute(base.text)
        if new_text == base.text:
            return None
        return CandidateSentence(new_text, base.swaps, SOURCE_BOTH)
    new_text = homoglyphs.substitute(t.original)
    if new_text == t.original:
        return None
    return CandidateSentence(new_text, (), SOURCE_HOMOGLYPH)


def _check_label_agreement(surrogates: Sequence[ModelAdapter]) -> None:
    declared = [set(m.labels) for m in surrogates if m.labels]
    for labels in declared[1:]:
        if labels != declared[0]:
            raise LabelSetMismatchError(
                f"surrogates disagree on labels: {sorted(declared[0])} vs {sorted(labels)}"
            )
