"""Train on the default four-class synthetic corpus and print the recognition table.

    python3 scripts/run_synthetic_experiment.py --order 8 --out report.csv
"""

import argparse
import time
from pathlib import Path

from _corpus import synthetic_split

from scriptgmm.classifier import evaluate, train
from scriptgmm.config import RunConfig


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--side", type=int, default=64)
    p.add_argument("--per-class", type=int, default=200)
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", type=Path)
    args = p.parse_args()
    cfg = RunConfig(side=args.side, order=args.order, seed=args.seed, out=args.out)

    start = time.perf_counter()
    train_words, test_words = synthetic_split(cfg.side, args.per_class, cfg.seed)
    models = train(train_words, cfg.order, cfg.seed, **cfg.fit_kwargs())
    report = evaluate(models, test_words)
    print(report.format_table())
    print(f"elapsed {time.perf_counter() - start:.1f}s")
    if cfg.out:
        cfg.out.write_text(report.to_csv())


if __name__ == "__main__":
    main()
