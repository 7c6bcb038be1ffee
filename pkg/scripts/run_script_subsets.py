"""Pairwise and three-way recognition tables over subsets of the synthetic classes."""

import argparse
import itertools

from _corpus import synthetic_split

from scriptgmm.classifier import evaluate, train


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--side", type=int, default=64)
    p.add_argument("--per-class", type=int, default=200)
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--seed", type=int, default=42)
    args = p.parse_args()

    train_words, test_words = synthetic_split(args.side, args.per_class, args.seed)
    labels = sorted(train_words)
    for k in (2, 3):
        for subset in itertools.combinations(labels, k):
            models = train({s: train_words[s] for s in subset}, args.order, args.seed)
            report = evaluate(models, {s: test_words[s] for s in subset})
            print(" + ".join(subset))
            print(report.format_table())
            print()


if __name__ == "__main__":
    main()
