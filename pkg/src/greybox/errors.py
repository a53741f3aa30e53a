"""Exception hierarchy shared across the toolkit.

Query failures are deliberately separate from "attack did not work":
an unreachable or misbehaving model must never be scored as "not fooled".
"""

from __future__ import annotations


class GreyboxError(Exception):
    """Base class for all toolkit errors."""


class MaskLengthError(GreyboxError):
    """Perturbation mask length does not match the sentence's word count."""


class WordIndexError(GreyboxError):
    """A substitution targets a word index that does not exist."""


class EmptyTextError(GreyboxError):
    """An operation that needs at least one word got none."""


class LexiconFormatError(GreyboxError):
    """A lexicon or homoglyph file line could not be parsed."""

    def __init__(self, path: str, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class HomoglyphKeyError(GreyboxError):
    """A requested source character has no confusable mapping."""


class CorpusFormatError(GreyboxError):
    """A training corpus row is malformed or the corpus is unusable."""


class ModelFormatError(GreyboxError):
    """A serialized model blob is malformed or has an unknown kind."""


class InvalidDistributionError(GreyboxError):
    """A classifier returned scores violating the distribution contract."""


class UndefinedMetricError(GreyboxError):
    """A metric was requested for an empty denominator or empty sample."""


class ReportFormatError(GreyboxError):
    """A report file is not valid JSON or lacks the report fields."""


class QueryFailure(GreyboxError):
    """A model could not be queried; carries the endpoint or model name."""

    def __init__(self, source: str, message: str):
        super().__init__(f"{source}: {message}")
        self.source = source


class EndpointUnreachableError(QueryFailure):
    """Connection to an inference endpoint failed."""


class QueryTimeoutError(QueryFailure):
    """An inference request exceeded its timeout."""


class BadStatusError(QueryFailure):
    """An inference endpoint answered with a non-2xx status."""

    def __init__(self, source: str, status: int):
        super().__init__(source, f"unexpected HTTP status {status}")
        self.status = status


class MalformedResponseError(QueryFailure):
    """An inference endpoint answered with undecodable or misshaped JSON."""


class DistributionViolationError(QueryFailure):
    """An endpoint's scores violate the distribution contract."""


class LabelSetMismatchError(GreyboxError):
    """Models in one attack do not agree on a common label set."""
