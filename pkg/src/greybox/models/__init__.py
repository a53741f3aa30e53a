"""Classifier adapters: builtin trainable models and the HTTP client."""

from .base import ConstantModel, LabelDistribution, ModelAdapter
from .builtin import (
    HASHED_BIGRAM_PERCEPTRON,
    KINDS,
    LOGISTIC_REGRESSION,
    NAIVE_BAYES,
    HashedBigramPerceptron,
    LogisticRegressionClassifier,
    NaiveBayesClassifier,
    dump_blob,
    load_corpus,
    load_model,
    model_from_blob,
    save_model,
    train_builtin,
    training_accuracy,
)
from .http import BEARER_ENV, HttpClassifier, http_classify

__all__ = [
    "BEARER_ENV",
    "ConstantModel",
    "HASHED_BIGRAM_PERCEPTRON",
    "HashedBigramPerceptron",
    "HttpClassifier",
    "KINDS",
    "LabelDistribution",
    "LOGISTIC_REGRESSION",
    "LogisticRegressionClassifier",
    "ModelAdapter",
    "NAIVE_BAYES",
    "NaiveBayesClassifier",
    "dump_blob",
    "http_classify",
    "load_corpus",
    "load_model",
    "model_from_blob",
    "save_model",
    "train_builtin",
    "training_accuracy",
]
