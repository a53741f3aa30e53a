"""The full attack loop over the wire: HTTP surrogates == local surrogates."""

import pytest

from greybox.attack import AttackConfig, attack
from greybox.explainer import ExplainerConfig, explain
from greybox.mockserver import serve_model
from greybox.models import HttpClassifier

from conftest import DEMO


@pytest.fixture()
def http_surrogates(surrogates):
    servers = [serve_model(m) for m in surrogates]
    adapters = [
        HttpClassifier(f"http://127.0.0.1:{s.server_address[1]}/",
                       name=m.name, labels=m.labels, max_in_flight=4)
        for s, m in zip(servers, surrogates)
    ]
    yield adapters
    for server in servers:
        server.shutdown()
        server.server_close()


def test_explain_over_http_matches_local(surrogates, http_surrogates):
    cfg = ExplainerConfig(num_samples=200, rng_seed=21)
    local = explain(DEMO, surrogates[0], cfg)
    remote = explain(DEMO, http_surrogates[0], cfg)
    # concurrent batched queries must not change the fitted result
    assert remote.predicted_label == local.predicted_label
    assert remote.ranked == local.ranked
    for a, b in zip(remote.contributions, local.contributions):
        assert a == pytest.approx(b, abs=1e-12)


def test_attack_over_http_matches_local(surrogates, http_surrogates, lexicon):
    cfg = AttackConfig(k_max=1, explainer=ExplainerConfig(num_samples=200,
                                                          rng_seed=5))
    local = attack(DEMO, surrogates, lexicon, cfg)
    remote = attack(DEMO, http_surrogates, lexicon, cfg)
    assert remote.status == local.status == "success"
    assert [c.text for c, _ in remote.candidates] == \
        [c.text for c, _ in local.candidates]
    assert [v.n_s for _, v in remote.candidates] == \
        [v.n_s for _, v in local.candidates]
    assert remote.queries_used == local.queries_used
