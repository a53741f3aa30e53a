"""Grey-box adversarial text attack toolkit.

Pipeline: fit a local linear explanation of a classifier's prediction,
swap the highest-contribution words for lexicon synonyms, vote every
candidate across an ensemble of surrogate classifiers with a majority
threshold, then check whether the surviving sentences also flip held-out
target models.  Includes trainable desk-scale classifiers, an HTTP
inference client, a homoglyph post-processor, and a reporting layer.
"""

from . import _kernels
from .attack import (
    AttackConfig,
    AttackOutcome,
    CandidateSentence,
    EnsembleVerdict,
    TargetVerification,
    Vote,
    attack,
    ensemble_vote,
    generate_candidates,
    majority_threshold,
    verify_target,
)
from .explainer import ExplainerConfig, Explanation, explain, proximity_weight, sample_masks
from .lexicon import (
    HomoglyphMap,
    SynonymLexicon,
    default_homoglyphs,
    default_lexicon,
    homoglyph_substitute,
    load_homoglyphs,
    load_lexicon,
)
from .models import (
    HttpClassifier,
    LabelDistribution,
    ModelAdapter,
    http_classify,
    load_corpus,
    load_model,
    save_model,
    train_builtin,
)
from .report import (
    AttackMetrics,
    avg_confidence,
    build_report,
    compute_metrics,
    load_reports,
    render_csv,
    render_text,
    save_reports,
    success_rate,
)
from .textcore import Token, TokenizedText, apply_mask, substitute, tokenize

KERNEL_BACKEND = _kernels.BACKEND

__version__ = "0.1.0"
