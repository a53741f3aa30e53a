"""Command-line interface.

Subcommands: train a builtin classifier, explain one prediction, attack a
file of sentences against a surrogate ensemble, verify a report against
held-out targets, and apply homoglyph substitution.  Exit codes: 0 ok,
1 attack found nothing, 2 usage or config error, 3 model unavailable.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .attack import AttackConfig, CandidateSentence, attack, verify_target
from .errors import GreyboxError, QueryFailure
from .explainer import ExplainerConfig, explain
from .lexicon import default_homoglyphs, default_lexicon, load_homoglyphs, load_lexicon
from .models import HttpClassifier, load_corpus, load_model, save_model, train_builtin
from .models.builtin import KINDS, training_accuracy
from .report import (
    build_report,
    load_reports,
    recompute_report_metrics,
    render_csv,
    render_text,
    save_reports,
)
from .textcore import tokenize

EXIT_OK = 0
EXIT_NO_SUCCESS = 1
EXIT_USAGE = 2
EXIT_UNAVAILABLE = 3


def _load_adapter(spec: str):
    """Parse a model spec: `builtin:<path>` or `http:<url>`."""
    if spec.startswith(("http://", "https://")):
        return HttpClassifier(spec)
    scheme, sep, rest = spec.partition(":")
    if not sep or not rest:
        raise GreyboxError(f"bad model spec {spec!r}: use builtin:<path> or http:<url>")
    if scheme == "builtin":
        return load_model(rest)
    if scheme in ("http", "https"):
        return HttpClassifier(rest)
    raise GreyboxError(f"bad model spec {spec!r}: unknown scheme {scheme!r}")


def _explainer_config(args) -> ExplainerConfig:
    return ExplainerConfig(
        num_samples=args.samples,
        kernel_width=args.kernel_width,
        ridge_lambda=args.ridge_lambda,
        rng_seed=args.seed,
    )


def cmd_train(args) -> int:
    corpus = load_corpus(args.corpus)
    hyper = {}
    if args.kind == "naive-bayes":
        hyper["alpha"] = args.alpha
    elif args.kind == "logistic-regression":
        hyper.update(learning_rate=args.learning_rate, l2=args.l2,
                     iterations=args.iterations)
    else:
        hyper.update(epochs=args.epochs, hash_bits=args.hash_bits)
    model = train_builtin(args.kind, corpus, seed=args.seed,
                          name=args.name or args.kind, **hyper)
    save_model(model, args.out)
    accuracy = training_accuracy(model, corpus)
    print(f"trained {args.kind} on {len(corpus)} examples -> {args.out}")
    print(f"train accuracy: {accuracy:.3f}")
    return EXIT_OK


def cmd_explain(args) -> int:
    if tokenize(args.sentence).word_count == 0:
        raise GreyboxError("sentence contains no words")
    model = _load_adapter(args.model)
    result = explain(args.sentence, model, _explainer_config(args))
    base = model.classify(args.sentence)
    label, confidence = base.argmax()
    print(f"model: {model.name}")
    print(f"prediction: {label} ({confidence:.4f})")
    if result.constant_prediction:
        print("constant prediction: all word contributions are zero")
    print("word contributions (positive supports the prediction):")
    for rank, index in enumerate(result.by_magnitude(), start=1):
        word = result.words[index]
        score = result.contributions[index]
        print(f"{rank:4d}. {word:<20s} {score:+.4f}")
    return EXIT_OK


def cmd_attack(args) -> int:
    sentences = [line for line in
                 Path(args.sentences).read_text(encoding="utf-8").splitlines()
                 if line.strip()]
    if not sentences:
        raise GreyboxError(f"{args.sentences}: no sentences")
    surrogates = [_load_adapter(spec) for spec in args.surrogate]
    explain_model = _load_adapter(args.explain_with) if args.explain_with else None
    lex = (load_lexicon(args.lexicon, include_casefold=not args.no_casefold)
           if args.lexicon else default_lexicon(include_casefold=not args.no_casefold))
    homoglyphs = (load_homoglyphs(args.homoglyphs) if args.homoglyphs
                  else default_homoglyphs())
    cfg = AttackConfig(
        k_max=args.k_max,
        max_queries=args.max_queries,
        top_m=args.top_m,
        threshold_override=args.threshold,
        unanimous=args.unanimous,
        homoglyph_fallback=args.homoglyph_fallback,
        word_order="random" if args.random_order else "contribution",
        explainer=_explainer_config(args),
    )

    reports = []
    any_success = False
    any_unavailable = False
    for sentence in sentences:
        try:
            outcome = attack(sentence, surrogates, lex, cfg,
                             explain_model=explain_model, homoglyphs=homoglyphs)
        except QueryFailure as err:
            any_unavailable = True
            print(f"[unavailable] {sentence}")
            print(f"  {err}", file=sys.stderr)
            continue
        reports.append(build_report(outcome))
        n_succ = len(outcome.successes)
        any_success = any_success or n_succ > 0
        print(f"[{outcome.status}] {sentence}")
        if n_succ:
            cand, verdict = outcome.successes[0]
            swaps = ", ".join(f"({old} -> {new})" for _, old, new in cand.swaps)
            print(f"  minimal swap: {swaps or cand.source} "
                  f"fooled {verdict.n_s}/{verdict.n} "
                  f"[{n_succ} successful candidate(s), "
                  f"{outcome.queries_used} vote queries]")
        else:
            print(f"  no adversarial sentence found "
                  f"({len(outcome.candidates)} candidates, "
                  f"{outcome.queries_used} vote queries)")

    if args.format == "json":
        save_reports(reports, args.out)
    elif args.format == "csv":
        Path(args.out).write_text(render_csv(reports), encoding="utf-8")
    else:
        text = "".join(render_text(r) + "\n" for r in reports)
        Path(args.out).write_text(text, encoding="utf-8")
    print(f"report written to {args.out}")

    if any_success:
        return EXIT_OK
    return EXIT_UNAVAILABLE if any_unavailable else EXIT_NO_SUCCESS


def cmd_verify(args) -> int:
    reports = load_reports(args.report)
    targets = [_load_adapter(spec) for spec in args.target]
    total_rows = 0
    error_rows = 0
    for report in reports:
        original_label = report["original"]["label"]
        winners = [row for row in report["candidates"]
                   if row["ensemble"]["success"]]
        if not winners:
            continue
        for target in targets:
            for row in winners:
                candidate = CandidateSentence(
                    row["text"],
                    tuple((int(i), old, new) for i, old, new in row["swaps"]),
                )
                total_rows += 1
                try:
                    tv = verify_target(candidate, original_label, target)
                except QueryFailure as err:
                    error_rows += 1
                    report["targets"].append({
                        "model": target.name,
                        "text": candidate.text,
                        "error": str(err),
                    })
                    print(f"  {target.name}: unavailable ({err})", file=sys.stderr)
                    continue
                report["targets"].append({
                    "model": tv.model,
                    "text": tv.text,
                    "flipped": tv.flipped,
                    "label": tv.label,
                    "confidence": tv.confidence,
                })
                word = "flipped" if tv.flipped else "held"
                print(f"  {target.name}: {word} {tv.label} "
                      f"{tv.confidence * 100.0:.1f}%  {tv.text}")
        recompute_report_metrics(report)
    if total_rows == 0:
        print("warning: report has no successful candidates; nothing to verify",
              file=sys.stderr)
    out = args.out or args.report
    save_reports(reports, out)
    print(f"report written to {out}")
    if total_rows and error_rows == total_rows:
        return EXIT_UNAVAILABLE
    return EXIT_OK


def cmd_homoglyph(args) -> int:
    hmap = load_homoglyphs(args.homoglyphs) if args.homoglyphs else default_homoglyphs()
    chars = set(args.chars) if args.chars else None
    print(hmap.substitute(args.text, chars))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greybox",
        description="Grey-box adversarial text attack toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train a builtin classifier")
    train.add_argument("--corpus", required=True, help="text,label CSV")
    train.add_argument("--kind", choices=KINDS, default="naive-bayes")
    train.add_argument("--out", required=True, help="model file to write")
    train.add_argument("--name", default=None)
    train.add_argument("--seed", type=int, default=42)
    train.add_argument("--alpha", type=float, default=1.0,
                       help="naive Bayes smoothing")
    train.add_argument("--learning-rate", type=float, default=0.5)
    train.add_argument("--l2", type=float, default=1e-4)
    train.add_argument("--iterations", type=int, default=300)
    train.add_argument("--epochs", type=int, default=10)
    train.add_argument("--hash-bits", type=int, default=18)
    train.set_defaults(func=cmd_train)

    expl = sub.add_parser("explain", help="rank word contributions")
    expl.add_argument("sentence")
    expl.add_argument("--model", required=True,
                      help="builtin:<path> or http:<url>")
    _add_explainer_flags(expl)
    expl.set_defaults(func=cmd_explain)

    atk = sub.add_parser("attack", help="attack sentences against surrogates")
    atk.add_argument("--sentences", required=True,
                     help="file with one sentence per line")
    atk.add_argument("--surrogate", action="append", required=True,
                     help="builtin:<path> or http:<url>; repeatable")
    atk.add_argument("--explain-with", default=None,
                     help="model to explain against (default: first surrogate)")
    atk.add_argument("--lexicon", default=None, help="synonym TSV (default: bundled)")
    atk.add_argument("--homoglyphs", default=None,
                     help="homoglyph TSV (default: bundled)")
    atk.add_argument("--no-casefold", action="store_true",
                     help="drop the lowercase-self candidate for cased words")
    atk.add_argument("--k-max", type=int, default=3)
    atk.add_argument("--max-queries", type=int, default=10_000)
    atk.add_argument("--top-m", type=int, default=None)
    atk.add_argument("--threshold", type=int, default=None,
                     help="override the ceil(N/2) vote threshold")
    atk.add_argument("--unanimous", action="store_true",
                     help="require every surrogate to flip")
    atk.add_argument("--homoglyph-fallback", action="store_true")
    atk.add_argument("--random-order", action="store_true",
                     help="random word order instead of explainer ranking")
    atk.add_argument("--out", default="report.json")
    atk.add_argument("--format", choices=("json", "csv", "text"), default="json")
    _add_explainer_flags(atk)
    atk.set_defaults(func=cmd_attack)

    ver = sub.add_parser("verify", help="test report candidates on targets")
    ver.add_argument("--report", required=True)
    ver.add_argument("--target", action="append", required=True,
                     help="builtin:<path> or http:<url>; repeatable")
    ver.add_argument("--out", default=None,
                     help="augmented report path (default: in place)")
    ver.set_defaults(func=cmd_verify)

    hom = sub.add_parser("homoglyph", help="apply confusable substitution")
    hom.add_argument("text")
    hom.add_argument("--homoglyphs", default=None)
    hom.add_argument("--chars", default=None,
                     help="source characters to replace (default: all mapped)")
    hom.set_defaults(func=cmd_homoglyph)

    return parser


def _add_explainer_flags(parser) -> None:
    parser.add_argument("--samples", type=int, default=1000,
                        help="perturbation samples per explanation")
    parser.add_argument("--kernel-width", type=float, default=25.0)
    parser.add_argument("--ridge-lambda", type=float, default=1.0)
    parser.add_argument("--seed", type=int, default=42)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QueryFailure as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_UNAVAILABLE
    except (GreyboxError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
