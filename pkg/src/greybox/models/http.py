"""HTTP adapter for external inference endpoints.

Wire protocol: POST ``{"text": "<input>"}`` as UTF-8 JSON, expect
``{"labels": [...], "scores": [...]}`` back.  Every failure mode keeps its
own exception type, and all of them mean "model unavailable" to the attack
engine; none is ever interpreted as "the model was not fooled".
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import requests

from ..errors import (
    BadStatusError,
    DistributionViolationError,
    EndpointUnreachableError,
    InvalidDistributionError,
    MalformedResponseError,
    QueryTimeoutError,
)
from .base import LabelDistribution, ModelAdapter

BEARER_ENV = "GREYBOX_HTTP_BEARER"


class HttpClassifier(ModelAdapter):
    """Queries a remote classifier; never retries on its own.

    The label set is learned from the first successful response (or passed
    up front) and enforced on every later response.  Batch queries run at
    most ``max_in_flight`` requests concurrently.
    """

    def __init__(self, endpoint: str, name: str | None = None,
                 labels: Sequence[str] | None = None,
                 timeout: float = 10.0, max_in_flight: int = 4):
        self.endpoint = endpoint
        self.name = name or endpoint
        self.labels = tuple(labels) if labels is not None else ()
        self.timeout = timeout
        self.max_in_flight = max(1, max_in_flight)
        self._session = requests.Session()

    def classify(self, text: str) -> LabelDistribution:
        return http_classify(self.endpoint, text, self.timeout,
                             session=self._session, expect_labels=self.labels or None,
                             on_labels=self._remember_labels)

    def classify_batch(self, texts: Sequence[str]) -> list[LabelDistribution]:
        if len(texts) <= 1 or self.max_in_flight == 1:
            return [self.classify(t) for t in texts]
        with ThreadPoolExecutor(max_workers=self.max_in_flight) as pool:
            return list(pool.map(self.classify, texts))

    def _remember_labels(self, labels: tuple[str, ...]) -> None:
        if not self.labels:
            self.labels = labels


def http_classify(endpoint: str, text: str, timeout: float = 10.0,
                  session: requests.Session | None = None,
                  expect_labels: Sequence[str] | None = None,
                  on_labels=None) -> LabelDistribution:
    """One classification request against ``endpoint``.

    Distinct failures: connection refused, timeout, non-2xx status,
    undecodable/misshaped JSON, and scores violating the distribution
    contract.  No retries.
    """
    headers = {}
    bearer = os.environ.get(BEARER_ENV)
    if bearer:
        headers["Authorization"] = f"Bearer {bearer}"
    post = session.post if session is not None else requests.post
    try:
        response = post(endpoint, json={"text": text}, headers=headers,
                        timeout=timeout)
    except requests.Timeout as err:
        raise QueryTimeoutError(endpoint, f"timed out after {timeout}s") from err
    except requests.ConnectionError as err:
        raise EndpointUnreachableError(endpoint, str(err)) from err

    if not 200 <= response.status_code < 300:
        raise BadStatusError(endpoint, response.status_code)

    try:
        payload = response.json()
    except ValueError as err:
        raise MalformedResponseError(endpoint, f"response is not JSON: {err}") from err
    if (not isinstance(payload, dict)
            or not isinstance(payload.get("labels"), list)
            or not isinstance(payload.get("scores"), list)):
        raise MalformedResponseError(
            endpoint, "expected an object with 'labels' and 'scores' lists"
        )
    labels = payload["labels"]
    scores = payload["scores"]
    if not all(isinstance(l, str) for l in labels):
        raise MalformedResponseError(endpoint, "labels must be strings")
    try:
        numeric = tuple(float(s) for s in scores)
    except (TypeError, ValueError) as err:
        raise MalformedResponseError(endpoint, f"scores must be numbers: {err}") from err

    try:
        dist = LabelDistribution(tuple(labels), numeric)
    except InvalidDistributionError as err:
        raise DistributionViolationError(endpoint, str(err)) from err

    if expect_labels is not None and dist.labels != tuple(expect_labels):
        raise MalformedResponseError(
            endpoint,
            f"label set changed: expected {tuple(expect_labels)}, got {dist.labels}",
        )
    if on_labels is not None:
        on_labels(dist.labels)
    return dist
