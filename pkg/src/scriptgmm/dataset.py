"""Word-image dataset directories: ``<root>/<script>/*.pgm``.

The default split takes, within each script, files at even positions of
the sorted filename list for training and odd positions for testing. A
manifest file (``path,split`` per line, split in {train, test}) overrides it.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .features import WordFeatures, extract_word_features
from .imaging import load_gray, prepare_word, write_pgm, GrayImage, BinaryImage

IMAGE_SUFFIXES = (".pgm", ".png")

Split = dict[str, list[Path]]


def discover(root) -> Split:
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"dataset directory not found: {root}")
    scripts = {}
    for sub in sorted(p for p in root.iterdir() if p.is_dir()):
        files = sorted(p for p in sub.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)
        if files:
            scripts[sub.name] = files
    return scripts


def parity_split(scripts: Split) -> tuple[Split, Split]:
    train = {k: v[0::2] for k, v in scripts.items()}
    test = {k: v[1::2] for k, v in scripts.items()}
    return train, test


def manifest_split(root, manifest) -> tuple[Split, Split]:
    root = Path(root)
    train: Split = {}
    test: Split = {}
    with open(manifest, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or row[0].startswith("#") or (lineno == 1 and row == ["path", "split"]):
                continue
            if len(row) != 2 or row[1].strip() not in ("train", "test"):
                raise ValueError(f"{manifest}:{lineno}: expected 'path,train|test', got {row!r}")
            path = Path(row[0].strip())
            if not path.is_absolute():
                path = root / path
            target = train if row[1].strip() == "train" else test
            target.setdefault(path.parent.name, []).append(path)
    return train, test


def split_dataset(root, manifest=None) -> tuple[Split, Split]:
    if manifest is not None:
        return manifest_split(root, manifest)
    return parity_split(discover(root))


def word_features(path, side: int) -> WordFeatures:
    return extract_word_features(prepare_word(load_gray(path), side))


def load_features(split: Split, side: int) -> dict[str, list[WordFeatures]]:
    return {label: [word_features(p, side) for p in paths] for label, paths in split.items()}


def write_binary_pgm(path, img: BinaryImage) -> None:
    """Store a binary word with black ink (0) on white (255)."""
    write_pgm(path, GrayImage((1 - img.pixels) * 255))
