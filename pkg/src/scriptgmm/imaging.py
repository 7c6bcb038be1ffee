"""Word-image decoding, Otsu binarization and square normalization.

Images are held as 2-D numpy arrays wrapped in small frozen dataclasses so
that shape and value-range invariants are checked once, at construction.
Binary images use 1 for ink (dark) and 0 for background.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import (
    ConstantImage,
    CorruptImage,
    TargetTooSmall,
    UnsupportedFormat,
)

try:  # optional PNG support
    from PIL import Image as _PILImage
except ImportError:  # pragma: no cover - depends on environment
    _PILImage = None

PNG_SUPPORT = _PILImage is not None

_REC601 = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class GrayImage:
    pixels: np.ndarray  # (rows, cols) uint8

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"gray image must be a non-empty 2-D array, got shape {px.shape}")
        if px.dtype != np.uint8:
            if np.any(px < 0) or np.any(px > 255) or np.any(px != np.round(px)):
                raise ValueError("gray intensities must be integers in [0, 255]")
            px = px.astype(np.uint8)
        px = px.copy()
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def rows(self) -> int:
        return self.pixels.shape[0]

    @property
    def cols(self) -> int:
        return self.pixels.shape[1]

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    __hash__ = None


@dataclass(frozen=True)
class BinaryImage:
    pixels: np.ndarray  # (rows, cols) uint8 over {0, 1}

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"binary image must be a non-empty 2-D array, got shape {px.shape}")
        if not np.all((px == 0) | (px == 1)):
            raise ValueError("binary image pixels must be 0 or 1")
        px = px.astype(np.uint8)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def rows(self) -> int:
        return self.pixels.shape[0]

    @property
    def cols(self) -> int:
        return self.pixels.shape[1]

    def __eq__(self, other):
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    __hash__ = None


# --------------------------------------------------------------------------
# Netpbm codec


def _read_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Next whitespace-delimited header token, skipping ``#`` comments."""
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise CorruptImage("truncated header")
    return data[start:pos], pos


def _header_int(data: bytes, pos: int) -> tuple[int, int]:
    tok, pos = _read_token(data, pos)
    try:
        return int(tok), pos
    except ValueError:
        raise CorruptImage(f"bad header field {tok!r}") from None


def decode_netpbm(data: bytes) -> GrayImage:
    """Decode P2/P5 graymaps and P3/P6 pixmaps (maxval <= 255)."""
    magic = data[:2]
    if magic not in (b"P2", b"P3", b"P5", b"P6"):
        raise UnsupportedFormat(f"unsupported netpbm magic {magic!r}")
    pos = 2
    width, pos = _header_int(data, pos)
    height, pos = _header_int(data, pos)
    maxval, pos = _header_int(data, pos)
    if width < 1 or height < 1:
        raise CorruptImage(f"invalid dimensions {width}x{height}")
    if not 0 < maxval <= 255:
        raise UnsupportedFormat(f"maxval {maxval} not supported (need 1..255)")
    channels = 3 if magic in (b"P3", b"P6") else 1
    count = width * height * channels

    if magic in (b"P5", b"P6"):
        # exactly one whitespace byte separates header from raster
        raster = data[pos + 1 : pos + 1 + count]
        if len(raster) != count:
            raise CorruptImage(f"raster truncated: expected {count} bytes, got {len(raster)}")
        values = np.frombuffer(raster, dtype=np.uint8).astype(np.int64)
    else:
        try:
            values = np.array(data[pos:].split(), dtype=np.int64)
        except ValueError:
            raise CorruptImage("non-numeric sample in ASCII raster") from None
        if values.size != count:
            raise CorruptImage(f"expected {count} samples, got {values.size}")
    if values.size and values.max() > maxval:
        raise CorruptImage("sample exceeds maxval")

    if maxval != 255:
        values = np.rint(values * 255.0 / maxval).astype(np.int64)
    if channels == 3:
        values = values.reshape(height, width, 3)
        return GrayImage(_luminance(values))
    return GrayImage(values.reshape(height, width).astype(np.uint8))


def encode_pgm(img: GrayImage, ascii: bool = False) -> bytes:
    header = f"{'P2' if ascii else 'P5'}\n{img.cols} {img.rows}\n255\n".encode("ascii")
    if ascii:
        body = "\n".join(" ".join(str(int(v)) for v in row) for row in img.pixels)
        return header + body.encode("ascii") + b"\n"
    return header + img.pixels.astype(np.uint8).tobytes()


def write_pgm(path, img: GrayImage, ascii: bool = False) -> None:
    Path(path).write_bytes(encode_pgm(img, ascii=ascii))


def _luminance(rgb: np.ndarray) -> np.ndarray:
    return np.rint(rgb[..., :3].astype(np.float64) @ _REC601).clip(0, 255).astype(np.uint8)


def load_gray(path) -> GrayImage:
    """Read a PGM/PPM (or PNG, when Pillow is installed) as 8-bit luminance."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such image: {path}")
    data = path.read_bytes()
    if data[:2] in (b"P2", b"P3", b"P5", b"P6"):
        return decode_netpbm(data)
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        if not PNG_SUPPORT:
            raise UnsupportedFormat("PNG input requires Pillow (pip install scriptgmm[png])")
        return _load_png(path)
    raise UnsupportedFormat(f"unrecognized image format: {path}")


def _load_png(path: Path) -> GrayImage:
    try:
        with _PILImage.open(path) as im:
            im.load()
            if im.mode in ("L", "1", "P", "LA", "I;16", "I"):
                if im.mode == "P":
                    return GrayImage(_luminance(np.asarray(im.convert("RGB"))))
                arr = np.asarray(im.convert("L"))
                return GrayImage(arr.astype(np.uint8))
            return GrayImage(_luminance(np.asarray(im.convert("RGB"))))
    except (OSError, SyntaxError) as exc:
        raise CorruptImage(f"cannot decode {path}: {exc}") from exc


# --------------------------------------------------------------------------
# Binarization


def _between_class_scores(hist: np.ndarray) -> list[Fraction]:
    """Between-class variance for every threshold t (class 0 = intensities <= t).

    Scores are exact rationals up to the constant factor 1/N**2, which does not
    affect the arg-max; exactness makes tie-breaking well defined.
    """
    counts = [int(c) for c in hist]
    total_n = sum(counts)
    total_s = sum(i * c for i, c in enumerate(counts))
    scores = []
    n0 = s0 = 0
    for t in range(256):
        n0 += counts[t]
        s0 += t * counts[t]
        n1 = total_n - n0
        s1 = total_s - s0
        if n0 == 0 or n1 == 0:
            scores.append(Fraction(0))
        else:
            scores.append(Fraction((s0 * n1 - s1 * n0) ** 2, n0 * n1))
    return scores


def otsu_threshold(img: GrayImage) -> int:
    """Threshold maximizing between-class variance; smallest one on ties."""
    hist = np.bincount(img.pixels.ravel(), minlength=256)
    if np.count_nonzero(hist) < 2:
        raise ConstantImage(f"image is constant (value {int(img.pixels.flat[0])})")
    scores = _between_class_scores(hist)
    best = max(scores)
    return scores.index(best)


def binarize(img: GrayImage, t: int) -> BinaryImage:
    return BinaryImage((img.pixels <= t).astype(np.uint8))


def _nn_resize(px: np.ndarray, rows: int, cols: int) -> np.ndarray:
    r_idx = np.minimum(((np.arange(rows) + 0.5) * px.shape[0] / rows).astype(int), px.shape[0] - 1)
    c_idx = np.minimum(((np.arange(cols) + 0.5) * px.shape[1] / cols).astype(int), px.shape[1] - 1)
    return px[np.ix_(r_idx, c_idx)]


def normalize_to_square(img: BinaryImage, n: int) -> np.ndarray:
    """Rescale so the larger side is ``n``, then zero-pad bottom/right to n x n.

    Returns a float64 ``(n, n)`` array over {0, 1}. If nearest-neighbour
    downsampling drops every ink pixel, the output pixel that the first ink
    pixel maps to is set so a non-blank word never becomes blank.
    """
    if n < 3:
        raise TargetTooSmall(f"target side must be >= 3, got {n}")
    px = img.pixels
    rows, cols = px.shape
    scale = n / max(rows, cols)
    new_rows = min(n, max(1, int(round(rows * scale))))
    new_cols = min(n, max(1, int(round(cols * scale))))
    scaled = (_nn_resize(px.astype(np.float64), new_rows, new_cols) >= 0.5).astype(np.float64)

    if not scaled.any() and px.any():
        r, c = np.argwhere(px)[0]
        scaled[min(int(r * new_rows / rows), new_rows - 1), min(int(c * new_cols / cols), new_cols - 1)] = 1.0

    out = np.zeros((n, n), dtype=np.float64)
    out[:new_rows, :new_cols] = scaled
    return out


def flip_horizontal(a: np.ndarray) -> np.ndarray:
    """Mirror columns: ``out[:, j] == a[:, N-1-j]``."""
    return np.ascontiguousarray(np.asarray(a)[:, ::-1])


def prepare_word(img: GrayImage, side: int) -> np.ndarray:
    """Gray word image -> Otsu-binarized canonical square matrix."""
    return normalize_to_square(binarize(img, otsu_threshold(img)), side)
