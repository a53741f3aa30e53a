"""Aggregate attack metrics and report rendering.

Success rate is the percentage of voted candidate sentences that passed
the ensemble threshold; average confidence is the mean predicted-label
confidence over the successful ones.  Undefined metrics (no candidates,
no successes) stay null in JSON and render as an explicit absent marker,
never as zero.  The JSON report schema is fixed; renderers may show more.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .attack import AttackOutcome, EnsembleVerdict, TargetVerification
from .errors import ReportFormatError, UndefinedMetricError
from .textcore import substitute, tokenize

ABSENT = "–"  # rendered marker for undefined metrics


@dataclass(frozen=True)
class AttackMetrics:
    """Success-rate and confidence aggregates over one batch of candidates."""

    n_sent: int
    n_succ: int
    success_rate_percent: float | None
    avg_confidence_percent: float | None


def success_rate(n_succ: int, n_sent: int) -> float:
    """Percentage of candidate sentences that succeeded."""
    if n_sent < 1:
        raise UndefinedMetricError("success rate needs at least one sentence")
    if not 0 <= n_succ <= n_sent:
        raise UndefinedMetricError(
            f"successful count {n_succ} outside 0..{n_sent}"
        )
    return 100.0 * n_succ / n_sent


def avg_confidence(confidences: Sequence[float]) -> float:
    """Arithmetic mean of percent confidences over successful sentences."""
    if not confidences:
        raise UndefinedMetricError("average confidence of an empty set")
    for value in confidences:
        if not 0.0 <= value <= 100.0:
            raise UndefinedMetricError(f"confidence {value!r} outside [0, 100]")
    return sum(confidences) / len(confidences)


def format_percent(value: float | None) -> str:
    """One decimal place, or the absent marker for undefined values."""
    return ABSENT if value is None else f"{value:.1f}%"


def flipped_confidence_percent(verdict: EnsembleVerdict) -> float | None:
    """Mean confidence (percent) among the votes that flipped."""
    flipped = [v.confidence for v in verdict.votes if v.flipped]
    if not flipped:
        return None
    return avg_confidence([c * 100.0 for c in flipped])


def compute_metrics(candidates) -> AttackMetrics:
    """Aggregate a sequence of (candidate, verdict) pairs."""
    n_sent = len(candidates)
    succ = [v for _, v in candidates if v.success]
    rate = success_rate(len(succ), n_sent) if n_sent else None
    confs = [c for v in succ if (c := flipped_confidence_percent(v)) is not None]
    avg = avg_confidence(confs) if confs else None
    return AttackMetrics(n_sent, len(succ), rate, avg)


def build_report(outcome: AttackOutcome,
                 targets: Sequence[TargetVerification] = ()) -> dict:
    """Assemble the canonical JSON-shaped report for one attack."""
    metrics = compute_metrics(outcome.candidates)
    return {
        "original": {
            "text": outcome.original_text,
            "label": outcome.original_label,
            "confidences": dict(outcome.original_confidences),
        },
        "candidates": [
            {
                "text": cand.text,
                "swaps": [[i, old, new] for i, old, new in cand.swaps],
                "ensemble": {
                    "n": verdict.n,
                    "n_s": verdict.n_s,
                    "threshold": verdict.threshold,
                    "success": verdict.success,
                    "votes": [
                        {
                            "model": vote.model,
                            "flipped": vote.flipped,
                            "label": vote.label,
                            "confidence": vote.confidence,
                        }
                        for vote in verdict.votes
                    ],
                },
            }
            for cand, verdict in outcome.candidates
        ],
        "targets": [
            {
                "model": tv.model,
                "text": tv.text,
                "flipped": tv.flipped,
                "label": tv.label,
                "confidence": tv.confidence,
            }
            for tv in targets
        ],
        "metrics": {
            "n_sent": metrics.n_sent,
            "n_succ": metrics.n_succ,
            "success_rate": metrics.success_rate_percent,
            "avg_confidence": metrics.avg_confidence_percent,
        },
    }


def recompute_report_metrics(report: dict) -> dict:
    """Rebuild the metrics block from the candidate rows in place."""
    rows = report["candidates"]
    n_sent = len(rows)
    succ = [r for r in rows if r["ensemble"]["success"]]
    confs = []
    for row in succ:
        flipped = [v["confidence"] * 100.0
                   for v in row["ensemble"]["votes"] if v["flipped"]]
        if flipped:
            confs.append(avg_confidence(flipped))
    report["metrics"] = {
        "n_sent": n_sent,
        "n_succ": len(succ),
        "success_rate": success_rate(len(succ), n_sent) if n_sent else None,
        "avg_confidence": avg_confidence(confs) if confs else None,
    }
    return report


def dumps_reports(reports: Sequence[dict]) -> str:
    """Deterministic serialization: equal reports give equal bytes."""
    return json.dumps(list(reports), indent=2, ensure_ascii=False,
                      sort_keys=True) + "\n"


def save_reports(reports: Sequence[dict], path: str | Path) -> None:
    Path(path).write_text(dumps_reports(reports), encoding="utf-8")


def load_reports(path: str | Path) -> list[dict]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ReportFormatError(f"{path}: not valid JSON: {err}") from err
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise ReportFormatError(f"{path}: expected a report object or array")
    for i, report in enumerate(data):
        if not isinstance(report, dict) or not {
                "original", "candidates", "targets", "metrics"} <= set(report):
            raise ReportFormatError(
                f"{path}: entry {i} is not a report "
                "(needs original/candidates/targets/metrics)"
            )
    return data


def per_model_strength(report: dict) -> list[dict]:
    """Score each model independently over all voted candidates.

    One row per model: how many candidates flipped it (regardless of the
    ensemble threshold) and the mean confidence over those flips.
    """
    rows = report["candidates"]
    by_model: dict[str, list[float]] = {}
    order: list[str] = []
    for row in rows:
        for vote in row["ensemble"]["votes"]:
            if vote["model"] not in by_model:
                by_model[vote["model"]] = []
                order.append(vote["model"])
            if vote["flipped"]:
                by_model[vote["model"]].append(vote["confidence"] * 100.0)
    out = []
    for model in order:
        flips = by_model[model]
        out.append({
            "model": model,
            "n_sent": len(rows),
            "n_flipped": len(flips),
            "success_rate": success_rate(len(flips), len(rows)) if rows else None,
            "avg_confidence": avg_confidence(flips) if flips else None,
        })
    return out


def marked_sentence(original_text: str, swaps: Sequence[Sequence]) -> str:
    """The original sentence with each swap shown as `(old -> new)`."""
    t = tokenize(original_text)
    return substitute(t, [(int(i), f"({old} -> {new})") for i, old, new in swaps])


def transfer_matrix(report: dict) -> tuple[list[str], list[list[str]]]:
    """Candidates x models grid of flipped predictions.

    Returns (model names, rows); each row is [swap description, then one
    cell per model: "label conf%" when that model flipped, else the
    absent marker].
    """
    models: list[str] = []
    for row in report["candidates"]:
        for vote in row["ensemble"]["votes"]:
            if vote["model"] not in models:
                models.append(vote["model"])
    grid = []
    for row in report["candidates"]:
        swaps = ", ".join(f"{old} -> {new}" for _, old, new in row["swaps"])
        cells = [swaps or row["text"]]
        by_model = {v["model"]: v for v in row["ensemble"]["votes"]}
        for model in models:
            vote = by_model.get(model)
            if vote is None or not vote["flipped"]:
                cells.append(ABSENT)
            else:
                cells.append(
                    f"{vote['label']} {format_percent(vote['confidence'] * 100.0)}")
        grid.append(cells)
    return models, grid


def render_strength_text(report: dict) -> str:
    """Per-model strength lines: flip rate and mean flipped confidence."""
    lines = ["per-model strength:"]
    for row in per_model_strength(report):
        lines.append(
            f"  {row['model']}: fooled by {row['n_flipped']}/{row['n_sent']} "
            f"candidates  rate {format_percent(row['success_rate'])}  "
            f"avg confidence {format_percent(row['avg_confidence'])}"
        )
    return "\n".join(lines) + "\n"


def render_transfer_text(report: dict) -> str:
    """Candidates-by-models flip grid in fixed-width text."""
    models, grid = transfer_matrix(report)
    if not grid:
        return "transfer matrix: no candidates\n"
    left = max(len(row[0]) for row in grid)
    widths = [max(len(model), *(len(row[1 + i]) for row in grid))
              for i, model in enumerate(models)]
    lines = ["transfer matrix:"]
    header = "  " + " " * left + "  " + "  ".join(
        model.ljust(w) for model, w in zip(models, widths))
    lines.append(header)
    for row in grid:
        cells = "  ".join(cell.ljust(w) for cell, w in zip(row[1:], widths))
        lines.append(f"  {row[0].ljust(left)}  {cells}")
    return "\n".join(lines) + "\n"


def _majority_flip(votes: Sequence[dict]) -> tuple[str, float] | None:
    flipped = [v for v in votes if v["flipped"]]
    if not flipped:
        return None
    tally: dict[str, list[float]] = {}
    for vote in flipped:
        tally.setdefault(vote["label"], []).append(vote["confidence"])
    label = min(tally, key=lambda l: (-len(tally[l]), l))
    confs = tally[label]
    return label, sum(confs) / len(confs)


def render_text(report: dict) -> str:
    """Human-readable view of one attack report."""
    lines = []
    orig = report["original"]
    confs = orig["confidences"]
    mean_conf = sum(confs.values()) / len(confs) if confs else None
    mean = format_percent(mean_conf * 100.0) if mean_conf is not None else ABSENT
    lines.append(f"original: {orig['text']}")
    lines.append(f"original prediction: {orig['label']} {mean}")
    metrics = report["metrics"]
    lines.append(
        "candidates: {n_sent}  successes: {n_succ}  "
        "success rate: {rate}  avg confidence: {avg}".format(
            n_sent=metrics["n_sent"],
            n_succ=metrics["n_succ"],
            rate=format_percent(metrics["success_rate"]),
            avg=format_percent(metrics["avg_confidence"]),
        )
    )
    for row in report["candidates"]:
        ens = row["ensemble"]
        flag = "ok " if ens["success"] else "no "
        flip = _majority_flip(ens["votes"])
        if flip is None:
            pred = ABSENT
        else:
            pred = f"{flip[0]} {format_percent(flip[1] * 100.0)}"
        if row["swaps"]:
            shown = marked_sentence(orig["text"], row["swaps"])
        else:
            shown = row["text"]
        lines.append(
            f"  [{flag}] fooled {ens['n_s']}/{ens['n']} "
            f"(threshold {ens['threshold']})  -> {pred}  {shown}"
        )
    if report["candidates"]:
        lines.append(render_strength_text(report).rstrip("\n"))
        lines.append(render_transfer_text(report).rstrip("\n"))
    if report["targets"]:
        lines.append("targets:")
        for tv in report["targets"]:
            if "error" in tv:
                lines.append(f"  {tv['model']}: unavailable  {tv['text']}")
                continue
            word = "flipped" if tv["flipped"] else "held"
            lines.append(
                f"  {tv['model']}: {word}  {tv['label']} "
                f"{format_percent(tv['confidence'] * 100.0)}  {tv['text']}"
            )
    return "\n".join(lines) + "\n"


def render_csv(reports: Sequence[dict]) -> str:
    """Flat CSV: one row per voted candidate."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow([
        "original_text", "original_label", "candidate_text", "marked_text",
        "swap_count", "n", "n_s", "threshold", "success", "adversarial_label",
        "adversarial_confidence",
    ])
    for report in reports:
        orig = report["original"]
        for row in report["candidates"]:
            ens = row["ensemble"]
            flip = _majority_flip(ens["votes"])
            marked = (marked_sentence(orig["text"], row["swaps"])
                      if row["swaps"] else row["text"])
            writer.writerow([
                orig["text"], orig["label"], row["text"], marked,
                len(row["swaps"]), ens["n"], ens["n_s"], ens["threshold"],
                ens["success"],
                flip[0] if flip else "",
                f"{flip[1]:.6f}" if flip else "",
            ])
    return buf.getvalue()
