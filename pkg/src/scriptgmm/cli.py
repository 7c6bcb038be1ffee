"""Command-line entry point.

Exit codes: 0 success, 1 pipeline/runtime failure, 2 bad arguments.

Scores are average natural-log likelihoods over a word's six feature frames,
each frame scored under the candidate script's model.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import classifier, dataset, synthcorpus
from .config import DEFAULT_ORDERS, RunConfig
from .errors import ScriptGMMError
from .features import FEATURE_NAMES
from .gmm import VARIANCE_FLOOR

log = logging.getLogger("scriptgmm")


class CLIError(Exception):
    """Runtime failure reported to the user with exit code 1."""


def _orders(text: str) -> list[int]:
    try:
        orders = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid order list {text!r}") from None
    if not orders or any(o < 1 for o in orders):
        raise argparse.ArgumentTypeError("orders must be positive integers")
    return orders


def _labels(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--side", type=int, default=64, help="canonical square side N (default 64)")
    common.add_argument("--order", type=int, default=128, help="mixture components per script (default 128)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--data", type=Path, help="dataset root: <root>/<script>/*.pgm")
    common.add_argument("--model", type=Path, help="model JSON file")
    common.add_argument("--out", type=Path, help="output file or directory")
    common.add_argument("--manifest", type=Path, help="CSV of 'path,split' lines overriding the parity split")
    common.add_argument("--orders", type=_orders, default=list(DEFAULT_ORDERS), help="comma list for sweep")
    common.add_argument("--scripts", type=_labels, help="restrict to these script labels (comma list)")
    common.add_argument("--max-iter", type=int, default=200)
    common.add_argument("--rel-tol", type=float, default=1e-6)
    common.add_argument("--variance-floor", type=float, default=VARIANCE_FLOOR)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="scriptgmm", description="GMM handwritten script identification")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("synth", parents=[common], help="write a synthetic directional-stroke corpus")
    p.add_argument("--per-class", type=int, default=200)
    p = sub.add_parser("features", parents=[common], help="print the six feature vectors of one image")
    p.add_argument("image", type=Path)
    sub.add_parser("train", parents=[common], help="fit one GMM per script on the train split")
    p = sub.add_parser("classify", parents=[common], help="score one word image against a model file")
    p.add_argument("image", type=Path)
    sub.add_parser("evaluate", parents=[common], help="confusion matrix and accuracy on the test split")
    sub.add_parser("sweep", parents=[common], help="train+evaluate at several GMM orders")
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        side=args.side,
        order=args.order,
        seed=args.seed,
        rel_tol=args.rel_tol,
        max_iter=args.max_iter,
        variance_floor=args.variance_floor,
        data=args.data,
        model=args.model,
        out=args.out,
        manifest=args.manifest,
    )


def _need(value, flag: str):
    if value is None:
        raise CLIError(f"{flag} is required")
    return value


def _split(cfg: RunConfig, scripts):
    train, test = dataset.split_dataset(_need(cfg.data, "--data"), cfg.manifest)
    if scripts:
        missing = set(scripts) - set(train) - set(test)
        if missing:
            raise CLIError(f"unknown scripts: {', '.join(sorted(missing))}")
        train = {k: v for k, v in train.items() if k in scripts}
        test = {k: v for k, v in test.items() if k in scripts}
    return train, test


def _load_models(path: Path) -> classifier.ScriptModelSet:
    path = _need(path, "--model")
    try:
        return classifier.ScriptModelSet.from_json(Path(path).read_text())
    except FileNotFoundError:
        raise CLIError(f"model file not found: {path}") from None
    except (ScriptGMMError, ValueError, UnicodeDecodeError) as exc:
        raise CLIError(f"cannot read model file {path}: {exc}") from None


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _train_models(cfg: RunConfig, train_split, order: int) -> classifier.ScriptModelSet:
    train_split = {k: v for k, v in train_split.items() if v}
    if len(train_split) < 2:
        raise CLIError("at least 2 scripts required")
    corpus = dataset.load_features(train_split, cfg.side)
    return classifier.train(corpus, order, cfg.seed, **cfg.fit_kwargs())


def cmd_synth(cfg: RunConfig, per_class: int) -> int:
    out = _need(cfg.out, "--out")
    for spec in synthcorpus.default_four_class():
        images = synthcorpus.generate(spec, cfg.side, per_class, cfg.seed)
        folder = Path(out) / spec.label
        folder.mkdir(parents=True, exist_ok=True)
        for i, img in enumerate(images):
            dataset.write_binary_pgm(folder / f"{spec.label}_{i:04d}.pgm", img)
        log.info("wrote %d images to %s", len(images), folder)
    return 0


def cmd_features(cfg: RunConfig, image: Path) -> int:
    word = dataset.word_features(image, cfg.side)
    lines = [",".join([name] + [repr(float(v)) for v in vec]) for name, vec in zip(FEATURE_NAMES, word.vectors)]
    _write(cfg.out, "\n".join(lines) + "\n")
    return 0


def cmd_train(cfg: RunConfig, scripts=None) -> int:
    train_split, _ = _split(cfg, scripts)
    models = _train_models(cfg, train_split, cfg.order)
    Path(_need(cfg.model, "--model")).write_text(models.to_json())
    for w in models.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def cmd_classify(cfg: RunConfig, image: Path) -> int:
    models = _load_models(cfg.model)
    label, scores = classifier.classify(models, dataset.word_features(image, models.side))
    print(f"label={label}")
    for lab in models.labels:
        print(f"score,{lab},{scores[lab]!r}")
    return 0


def cmd_evaluate(cfg: RunConfig, scripts=None) -> int:
    models = _load_models(cfg.model)
    _, test_split = _split(cfg, scripts)
    test_split = {k: v for k, v in test_split.items() if v}
    if not test_split:
        raise CLIError("no test samples")
    report = classifier.evaluate(models, dataset.load_features(test_split, models.side))
    if cfg.out is not None:
        Path(cfg.out).write_text(report.to_csv())
    print(report.format_table())
    return 0


def cmd_sweep(cfg: RunConfig, orders, scripts=None) -> int:
    train_split, test_split = _split(cfg, scripts)
    train_split = {k: v for k, v in train_split.items() if v}
    test_split = {k: v for k, v in test_split.items() if v}
    if len(train_split) < 2:
        raise CLIError("at least 2 scripts required")
    if not test_split:
        raise CLIError("no test samples")
    train_words = dataset.load_features(train_split, cfg.side)
    test_words = dataset.load_features(test_split, cfg.side)
    rows = classifier.sweep_orders(train_words, test_words, orders, cfg.seed, **cfg.fit_kwargs())
    _write(cfg.out, classifier.sweep_to_csv(rows))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = _config(args)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        if args.command == "synth":
            return cmd_synth(cfg, args.per_class)
        if args.command == "features":
            return cmd_features(cfg, args.image)
        if args.command == "train":
            return cmd_train(cfg, args.scripts)
        if args.command == "classify":
            return cmd_classify(cfg, args.image)
        if args.command == "evaluate":
            return cmd_evaluate(cfg, args.scripts)
        if args.command == "sweep":
            return cmd_sweep(cfg, args.orders, args.scripts)
    except (CLIError, ScriptGMMError, FileNotFoundError, ValueError, OSError) as exc:
        print(f"scriptgmm {args.command}: error: {exc}", file=sys.stderr)
        return 1
    parser.error(f"unknown command {args.command}")  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
