"""Aggregate metrics, the report schema, and its renderings."""

import json

import pytest

from greybox.attack import AttackConfig, attack
from greybox.errors import UndefinedMetricError
from greybox.report import (
    ABSENT,
    avg_confidence,
    build_report,
    compute_metrics,
    dumps_reports,
    format_percent,
    load_reports,
    marked_sentence,
    per_model_strength,
    recompute_report_metrics,
    render_csv,
    render_text,
    save_reports,
    success_rate,
)

from conftest import DEMO


@pytest.fixture(scope="module")
def demo_report(surrogates, lexicon):
    outcome = attack(DEMO, surrogates, lexicon, AttackConfig(k_max=1))
    return build_report(outcome)


def test_success_rate_values():
    assert success_rate(1, 12) == pytest.approx(100.0 / 12.0)
    assert round(success_rate(1, 12), 1) == 8.3
    assert round(success_rate(4, 12), 1) == 33.3
    assert success_rate(0, 12) == 0.0


def test_success_rate_undefined_for_zero_sentences():
    with pytest.raises(UndefinedMetricError):
        success_rate(0, 0)
    with pytest.raises(UndefinedMetricError):
        success_rate(5, 3)


def test_avg_confidence_values():
    assert avg_confidence([91.4]) == pytest.approx(91.4)
    assert avg_confidence([55.5, 55.5, 55.5]) == pytest.approx(55.5)
    assert avg_confidence([89.7, 74.8, 80.1]) == pytest.approx(244.6 / 3.0)


def test_avg_confidence_undefined_for_empty():
    with pytest.raises(UndefinedMetricError):
        avg_confidence([])


def test_undefined_metric_renders_as_dash_not_zero():
    assert format_percent(None) == ABSENT
    assert format_percent(None) != "0.0%"
    assert format_percent(81.533333) == "81.5%"


def test_report_schema_field_names(demo_report):
    assert set(demo_report) == {"original", "candidates", "targets", "metrics"}
    assert set(demo_report["original"]) == {"text", "label", "confidences"}
    row = demo_report["candidates"][0]
    assert set(row) == {"text", "swaps", "ensemble"}
    assert set(row["ensemble"]) == {"n", "n_s", "threshold", "success", "votes"}
    assert set(row["ensemble"]["votes"][0]) == {
        "model", "flipped", "label", "confidence"}
    assert set(demo_report["metrics"]) == {
        "n_sent", "n_succ", "success_rate", "avg_confidence"}
    assert demo_report["targets"] == []
    for index, old, new in (tuple(s) for s in row["swaps"]):
        assert isinstance(index, int) and isinstance(old, str)


def test_report_roundtrips_through_json(demo_report, tmp_path):
    path = tmp_path / "report.json"
    save_reports([demo_report], path)
    assert load_reports(path) == [demo_report]
    assert json.loads(dumps_reports([demo_report])) == [demo_report]


def test_metrics_identities_hold(demo_report):
    stored = dict(demo_report["metrics"])
    recompute_report_metrics(demo_report)
    fresh = demo_report["metrics"]
    assert fresh["n_sent"] == stored["n_sent"]
    assert fresh["n_succ"] == stored["n_succ"]
    assert fresh["success_rate"] == pytest.approx(stored["success_rate"], abs=1e-9)
    assert fresh["avg_confidence"] == pytest.approx(stored["avg_confidence"], abs=1e-9)
    rate = success_rate(stored["n_succ"], stored["n_sent"])
    assert rate == pytest.approx(stored["success_rate"], abs=1e-9)


def test_compute_metrics_counts(surrogates, lexicon):
    outcome = attack(DEMO, surrogates, lexicon, AttackConfig(k_max=1))
    metrics = compute_metrics(outcome.candidates)
    assert metrics.n_sent == len(outcome.candidates)
    assert metrics.n_succ == len(outcome.successes)
    assert 0 < metrics.n_succ < metrics.n_sent
    assert metrics.avg_confidence_percent is not None
    assert 50.0 < metrics.avg_confidence_percent <= 100.0


def test_empty_attack_has_null_metrics(surrogates, lexicon):
    from greybox.attack import AttackConfig

    outcome = attack(DEMO, surrogates, lexicon, AttackConfig(max_queries=1))
    report = build_report(outcome)
    assert report["metrics"] == {"n_sent": 0, "n_succ": 0,
                                 "success_rate": None, "avg_confidence": None}
    rendered = render_text(report)
    assert ABSENT in rendered


def test_per_model_strength_rows(demo_report):
    rows = per_model_strength(demo_report)
    assert [r["model"] for r in rows] == ["nb", "lr", "pc"]
    for row in rows:
        assert row["n_sent"] == demo_report["metrics"]["n_sent"]
        assert 0 <= row["n_flipped"] <= row["n_sent"]
        if row["n_flipped"]:
            assert row["avg_confidence"] is not None
        else:
            assert row["avg_confidence"] is None


def test_marked_sentence_annotation():
    marked = marked_sentence(DEMO, [[6, "Poor", "inadequate"]])
    assert "(Poor -> inadequate)" in marked
    assert marked.startswith("possibility of bankruptcy.")


def test_render_text_shows_swaps(demo_report):
    text = render_text(demo_report)
    assert "original: " + DEMO in text
    assert "(Poor -> inadequate)" in text
    assert "negative" in text


def test_render_csv_has_one_row_per_candidate(demo_report):
    out = render_csv([demo_report])
    lines = [l for l in out.splitlines() if l.strip()]
    assert len(lines) == 1 + len(demo_report["candidates"])
    assert lines[0].startswith("original_text,original_label")


def test_reports_serialize_deterministically(demo_report):
    assert dumps_reports([demo_report]) == dumps_reports([demo_report])


def test_transfer_matrix_shape(demo_report):
    from greybox.report import transfer_matrix

    models, grid = transfer_matrix(demo_report)
    assert models == ["nb", "lr", "pc"]
    assert len(grid) == len(demo_report["candidates"])
    for row in grid:
        assert len(row) == 1 + len(models)
    # the winning swaps show the flipped label, failures show the marker
    short_row = next(r for r in grid if r[0] == "Poor -> short")
    assert all(cell.startswith("positive ") for cell in short_row[1:])
    casefold_row = next(r for r in grid if r[0] == "Poor -> poor")
    assert set(casefold_row[1:]) == {ABSENT}


def test_strength_and_matrix_render(demo_report):
    from greybox.report import render_strength_text, render_transfer_text

    strength = render_strength_text(demo_report)
    assert "per-model strength:" in strength
    assert "nb:" in strength and "pc:" in strength
    matrix = render_transfer_text(demo_report)
    assert "transfer matrix:" in matrix
    assert "Poor -> short" in matrix
    full = render_text(demo_report)
    assert "per-model strength:" in full and "transfer matrix:" in full
