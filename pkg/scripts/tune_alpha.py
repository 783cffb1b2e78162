"""Grid search for the n-gram decoder's edit-distance trade-off weight.

Generates a seeded ED-balanced corpus, sweeps the trade-off weight, and
reports EM@1 / EM@5 / AvgED per grid point so the default can be pinned from
data rather than guessed.

Usage:
    python scripts/tune_alpha.py --size 5000 --seed 0 \
        --alphas 1,2,3,4,5,6,8,10 --out alpha_sweep.json
"""
import argparse
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from handsdown.decode import DecodeInput, LexiconIndex, NgramDecoderConfig, ngram_decode
from handsdown.layout import default_layout, load_layout
from handsdown.lexicon import default_lexicon, load_lexicon, train_char_ngram
from handsdown.metrics import TrialRecord, topk_report
from handsdown.noise import SynthConfig, balance_corpus, default_noise_model


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lexicon")
    ap.add_argument("--layout")
    ap.add_argument("--size", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--alphas", default="1,2,3,4,5,6,8,10")
    ap.add_argument("--out")
    args = ap.parse_args()

    layout = load_layout(args.layout) if args.layout else default_layout()
    lexicon = load_lexicon(args.lexicon) if args.lexicon else default_lexicon()
    index = LexiconIndex(lexicon, train_char_ngram(lexicon))
    model = default_noise_model(layout)

    pairs, _ = balance_corpus(lexicon.words, args.size, model, layout,
                              SynthConfig(seed=args.seed))
    print(f"corpus: {len(pairs)} pairs")

    rows = []
    for alpha in (float(a) for a in args.alphas.split(",")):
        cfg = NgramDecoderConfig(alpha_tradeoff=alpha)
        trials = [TrialRecord(p.gold, ngram_decode(DecodeInput(p.noisy),
                                                   index, cfg).words(),
                              p.realized_ed)
                  for p in pairs]
        report = topk_report(trials)
        rows.append({"alpha": alpha, "em1": report.topk[1], "em5": report.topk[5],
                     "avg_ed": report.avg_ed})
        print(f"alpha={alpha:<5g} EM@1={report.topk[1]:.4f} "
              f"EM@5={report.topk[5]:.4f} AvgED={report.avg_ed:.4f}")

    best = max(rows, key=lambda r: r["em1"])
    print(f"best EM@1 at alpha={best['alpha']:g}")
    if args.out:
        with open(args.out, "w") as f:
            json.dump({"rows": rows, "best": best}, f, indent=2)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
