#!/usr/bin/env python3
"""Regenerate the bundled sentiment corpus and verify its attack fixture.

The corpus is hand-shaped, not scraped: the demo sentence
"possibility of bankruptcy. lack of assurance. Poor stability." must be
negative for every builtin kind, flipping must require touching "poor"
(whose lexicon synonyms are all out of vocabulary), and single swaps of
any other word must never reach an ensemble majority.  Run from the repo
root; rewrites src/greybox/data/corpus.csv only when --write is given.
"""

import argparse
import csv
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

NEGATIVE = "negative"
POSITIVE = "positive"

# (sentence, repeat count); repeats use distinct fillers to vary tokens
POSITIVE_SHAPES = [
    ("The report offered plenty of assurance and the outlook is excellent.", 4),
    ("Auditors found plenty of assurance in the books.", 3),
    ("The briefing gave a real sense of assurance to investors.", 3),
    ("The stability of revenue impressed every lender.", 3),
    ("Remarkable stability across markets kept clients calm.", 3),
    ("Stability and confidence returned to the market.", 2),
    ("The platform offers dependable stability to users.", 2),
    ("There is every possibility of strong growth ahead.", 3),
    ("Analysts see a good possibility of higher profit this year.", 3),
    ("The team sees a clear possibility of new contracts.", 2),
    ("The company sees no possibility of bankruptcy.", 2),
    ("Reviewers found no lack of assurance in the latest results.", 2),
    ("There was no lack of confidence among the partners.", 2),
    ("The applicant has excellent credit and can repay loans early.", 3),
    ("Strong insurance coverage and wise investments reassure lenders.", 3),
    ("The borrower can repay every loan on time.", 2),
    ("Excellent credit history and prompt payments.", 2),
    ("Profit climbed again and the market cheered.", 3),
    ("A good quarter with strong growth and rising profit.", 3),
    ("Morale is high and the product is a hit.", 2),
    ("The launch was a success and demand is strong.", 3),
    ("Management executed well and investors are pleased.", 2),
    ("Cash reserves are deep and debt is shrinking.", 2),
    ("The brand earns glowing reviews and loyal customers.", 2),
    ("Guidance was raised after excellent quarterly results.", 2),
    ("Hiring is up and the pipeline looks healthy.", 2),
    ("The merger delivered real value for everyone.", 2),
    ("Regulators approved the plan without objection.", 2),
    ("The dividend grew for the tenth straight year.", 2),
    ("Output rose while costs fell sharply.", 2),
    ("Clients renewed their contracts with enthusiasm.", 2),
    ("A wonderful film with a warm and clever script.", 3),
    ("The cast is charming and the pacing is perfect.", 3),
    ("A delightful story that rewards every minute.", 3),
    ("Critics loved the bold and confident direction.", 2),
    ("The finale is satisfying and earns its applause.", 2),
    ("Fans cheered the smart and generous writing.", 2),
    ("An uplifting tale told with care and skill.", 2),
    ("Lenders admire the stability of its cash flow.", 2),
    ("Clients trust the stability and the service.", 2),
    ("Financial stability supports the growth plan.", 2),
    ("Market stability helped the fund deliver.", 2),
]

NEGATIVE_SHAPES = [
    ("Analysts warned of poor stability across the business.", 3),
    ("The fund shows poor stability and weak returns.", 3),
    ("Quarterly filings reveal poor stability in income.", 2),
    ("Customers complain about poor stability of the platform.", 2),
    ("Poor stability overall.", 5),
    ("Poor stability again this quarter.", 5),
    ("Poor stability worries every analyst.", 2),
    ("Management delivered poor results again.", 3),
    ("A poor outlook for the brand.", 3),
    ("Reviews cite poor quality and poor service.", 3),
    ("Poor planning led to another poor quarter.", 3),
    ("The audit exposed poor controls and poor records.", 2),
    ("Staff describe poor morale and poor leadership.", 2),
    ("A poor product launch hurt the brand.", 2),
    ("Poor guidance shook the market.", 2),
    ("Forecasts remain poor for the whole sector.", 2),
    ("The pilot episode was poor and the writing worse.", 2),
    ("A poor script wastes a talented cast.", 2),
    ("The company faces a real risk of bankruptcy.", 3),
    ("Creditors fear bankruptcy before the year ends.", 2),
    ("Whispers of bankruptcy follow every board meeting.", 2),
    ("Bankruptcy looms unless sales recover fast.", 2),
    ("There is a clear lack of funds to continue.", 2),
    ("A chronic lack of capital stalls every project.", 1),
    ("The lack of planning is obvious to everyone.", 1),
    ("Directors admit a lack of workable ideas.", 1),
    ("A concerning possibility of heavy losses looms.", 2),
    ("There is a real possibility the plant closes.", 1),
    ("The vague statement gave little assurance to anyone.", 1),
    ("Empty promises and no real assurance followed.", 1),
    ("The outlook is bad and the risk is growing.", 2),
    ("It will be hard to repay the mounting debts.", 2),
    ("Heavy debts make the loan hard to service.", 2),
    ("The borrower cannot pay the debts on time.", 2),
    ("A hard road remains and the debt keeps growing.", 2),
    ("The quarter ended in failure and steep decline.", 3),
    ("Another failure, another round of layoffs.", 2),
    ("Revenue decline continues for the sixth month.", 2),
    ("A weak market and a bad balance sheet.", 3),
    ("The loss widened and confidence drained away.", 2),
    ("Risk is rising and the outlook is bleak.", 2),
    ("A dismal film with a tired and clumsy script.", 1),
    ("The plot is dull and the acting is weak.", 1),
    ("A boring story that squanders its premise.", 1),
    ("Critics panned the lazy and confused direction.", 1),
    ("The finale lands with a thud.", 1),
    ("Audiences walked out before the credits.", 1),
    ("A bad sequel to a forgettable original.", 2),
    ("The pacing drags and the jokes fall flat.", 1),
]

DEMO = "possibility of bankruptcy. lack of assurance. Poor stability."

# lexicon synonyms that must stay out of vocabulary ("failure" is the
# deliberate exception: an in-vocabulary, still-negative replacement)
FORBIDDEN = {
    "inadequate", "pitiable", "piteous", "miserable", "hapless",
    "misfortunate", "short", "suffer", "endure", "yield", "theory",
    "prospect", "want", "deficiency", "sureness", "pledge", "insolvency",
    "steadiness", "firmness", "terrible", "enormous", "crap", "create",
    "produce", "hello", "great", "sound", "awful", "dreadful", "feeble",
    "infirm", "solid", "robust", "increase", "expansion", "downturn",
    "slump", "hazard", "peril", "liability", "obligation", "gain",
    "earnings", "deprivation", "red", "account", "chronicle", "difficult",
    "arduous", "middling", "ordinary",
}


def build_rows():
    pos = [text for text, n in POSITIVE_SHAPES for _ in range(n)]
    neg = [text for text, n in NEGATIVE_SHAPES for _ in range(n)]
    assert len(pos) == 100, f"positives: {len(pos)}"
    assert len(neg) == 100, f"negatives: {len(neg)}"
    rows = []
    for p, n in zip(pos, neg):
        rows.append((p, POSITIVE))
        rows.append((n, NEGATIVE))
    return rows


def verify(rows):
    from greybox import (AttackConfig, ExplainerConfig, attack,
                         default_lexicon, explain, train_builtin)
    from greybox.models.builtin import training_accuracy, words_of

    vocab = {w for text, _ in rows for w in words_of(text)}
    leaked = vocab & FORBIDDEN
    assert not leaked, f"forbidden synonym words in corpus: {sorted(leaked)}"

    nb = train_builtin("naive-bayes", rows, seed=0, name="nb")
    lr = train_builtin("logistic-regression", rows, seed=1, name="lr")
    pc = train_builtin("hashed-bigram-perceptron", rows, seed=2, name="pc")
    held = train_builtin("hashed-bigram-perceptron", rows, seed=99, name="held")
    models = [nb, lr, pc, held]

    print("train accuracy:",
          {m.name: round(training_accuracy(m, rows), 3) for m in models})

    for m in models:
        label, conf = m.classify(DEMO).argmax()
        print(f"{m.name}: demo -> {label} {conf:.3f}")
        assert label == NEGATIVE, f"{m.name} must predict negative on demo"

    lex = default_lexicon()
    exp = explain(DEMO, nb, ExplainerConfig(rng_seed=42))
    print("ranking:", [(exp.words[i], round(exp.contributions[i], 4))
                       for i in exp.ranked])
    assert exp.words[exp.ranked[0]] == "Poor", "poor must rank first"

    # every out-of-vocabulary synonym of "poor" must flip each model
    from greybox.textcore import substitute, tokenize
    t = tokenize(DEMO)
    for syn in lex.synonyms_for("Poor")[:-1]:  # skip the casefold variant
        text = substitute(t, [(6, syn)])
        flips = {m.name: m.classify(text).argmax()[0] for m in models}
        bad = [name for name, label in flips.items() if label != POSITIVE]
        print(f"  poor->{syn}: flips all but {bad or 'none'}")
        assert not bad, f"poor->{syn} fails to flip {bad}"

    # single swaps of any other word must never reach 2 of 3 surrogates
    surrogates = [nb, lr, pc]
    for idx, word in [(0, "possibility"), (2, "bankruptcy"), (3, "lack"),
                      (5, "assurance"), (7, "stability")]:
        for syn in lex.synonyms_for(word):
            text = substitute(t, [(idx, syn)])
            n_s = sum(1 for m in surrogates
                      if m.classify(text).argmax()[0] != NEGATIVE)
            print(f"  {word}->{syn}: fools {n_s}/3")
            assert n_s < 2, f"{word}->{syn} reaches majority without poor"

    out = attack(DEMO, surrogates, lex, AttackConfig(k_max=1))
    print("attack status:", out.status, "successes:", len(out.successes))
    assert out.status == "success"

    # homoglyph fixture: dotting the i-words must dent the argmax score
    from greybox import default_homoglyphs
    hm = default_homoglyphs()
    table6 = "possibility of bankruptcy. lack of assurance. Inadequate stability."
    label, before = nb.classify(table6).argmax()
    after = nb.classify(hm.substitute(table6, {"i"})).score_for(label)
    print(f"homoglyph: {label} {before:.3f} -> {after:.3f}")
    assert after < before

    print("all fixture checks passed")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--write", action="store_true",
                        help="rewrite src/greybox/data/corpus.csv")
    args = parser.parse_args()
    rows = build_rows()
    verify(rows)
    if args.write:
        out = ROOT / "src" / "greybox" / "data" / "corpus.csv"
        with open(out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["text", "label"])
            writer.writerows(rows)
        print(f"wrote {out} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
