"""Labeled image ingestion and synthetic block occlusion.

Images are plain 2-D float64 arrays with values in [0, 255]; ``img[row, col]``
stores the intensity at vertical position ``row`` and horizontal position
``col``.  A dataset is described by a CSV manifest with header
``path,label,split`` whose paths are resolved relative to the manifest file.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import DataError, NumericError

# ITU-R BT.601 luma weights for RGB -> gray reduction.
_LUMA = np.array([0.299, 0.587, 0.114])

SPLITS = ("train", "test")


@dataclass(frozen=True)
class ManifestEntry:
    path: Path
    label: str
    split: str


@dataclass
class Manifest:
    """Parsed dataset manifest; entries keep manifest file order."""

    entries: list[ManifestEntry] = field(default_factory=list)

    def subset(self, split: str) -> list[ManifestEntry]:
        return [e for e in self.entries if e.split == split]

    @property
    def train(self) -> list[ManifestEntry]:
        return self.subset("train")

    @property
    def test(self) -> list[ManifestEntry]:
        return self.subset("test")


@dataclass(frozen=True)
class OcclusionSpec:
    """Square occluder covering fraction ``percentage`` of the image area.

    The block side is ``round(sqrt(percentage * rows * cols))`` and its
    top-left corner is drawn uniformly from all positions that keep the
    block fully inside the image, using a generator seeded per call.
    """

    percentage: float
    occluder: np.ndarray
    seed: int = 0


def load_manifest(path: str | Path) -> Manifest:
    """Parse a ``path,label,split`` CSV into a Manifest.

    Labels are kept verbatim as opaque identifiers.  Raises DataError on a
    missing file, a bad header, a row with the wrong column count, an
    unknown split token, a listed file that does not exist, or an empty body.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"manifest not found: {path}")
    base = path.parent
    entries: list[ManifestEntry] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["path", "label", "split"]:
            raise DataError(
                f"{path}: expected header 'path,label,split', got {header!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise DataError(
                    f"{path}: line {lineno}: expected 3 columns, got {len(row)}"
                )
            raw_path, label, split = row
            if split not in SPLITS:
                raise DataError(
                    f"{path}: line {lineno}: unknown split {split!r}"
                    f" (expected one of {', '.join(SPLITS)})"
                )
            img_path = Path(raw_path)
            if not img_path.is_absolute():
                img_path = base / img_path
            if not img_path.is_file():
                raise DataError(f"{path}: line {lineno}: no such image: {img_path}")
            entries.append(ManifestEntry(img_path, label, split))
    if not entries:
        raise DataError(f"{path}: no entries")
    return Manifest(entries)


def load_image(path: str | Path) -> np.ndarray:
    """Decode an 8-bit grayscale or color PNG/PGM into a float64 array.

    Color inputs are reduced with BT.601 luma weights; output values lie
    in [0, 255].
    """
    path = Path(path)
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode in ("P", "RGBA"):
                im = im.convert("RGB")
                mode = "RGB"
            if mode == "L":
                arr = np.asarray(im, dtype=np.float64)
            elif mode == "RGB":
                arr = np.asarray(im, dtype=np.float64) @ _LUMA
            else:
                raise DataError(f"{path}: unsupported image mode {mode!r} (8-bit grayscale or RGB required)")
    except DataError:
        raise
    except FileNotFoundError:
        raise DataError(f"image not found: {path}") from None
    except Exception as exc:
        raise DataError(f"could not decode image {path}: {exc}") from exc
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DataError(f"{path}: zero-sized image")
    return arr


def save_image(img: np.ndarray, path: str | Path) -> None:
    """Write an image as 8-bit grayscale; format follows the extension
    (.pgm gives binary PGM, .png gives PNG).  Values are rounded and
    clipped to [0, 255], so integer-valued inputs round-trip exactly."""
    img = np.asarray(img, dtype=np.float64)
    data = np.clip(np.rint(img), 0, 255).astype(np.uint8)
    Image.fromarray(data, mode="L").save(Path(path))


def _bilinear(img: np.ndarray, rows: int, cols: int) -> np.ndarray:
    # Endpoint-aligned sampling grid: corners map to corners, a target
    # axis of length 1 samples the source center.
    m, n = img.shape
    rr = np.linspace(0.0, m - 1, rows) if rows > 1 else np.array([(m - 1) / 2.0])
    cc = np.linspace(0.0, n - 1, cols) if cols > 1 else np.array([(n - 1) / 2.0])
    r0 = np.floor(rr).astype(int)
    c0 = np.floor(cc).astype(int)
    r1 = np.minimum(r0 + 1, m - 1)
    c1 = np.minimum(c0 + 1, n - 1)
    fr = (rr - r0)[:, None]
    fc = (cc - c0)[None, :]
    # lerp form keeps constant inputs exactly constant
    top = img[np.ix_(r0, c0)]
    top = top + fc * (img[np.ix_(r0, c1)] - top)
    bot = img[np.ix_(r1, c0)]
    bot = bot + fc * (img[np.ix_(r1, c1)] - bot)
    return top + fr * (bot - top)


def resize(img: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Bilinear resample to exactly ``rows x cols``, clamped to [0, 255]."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise NumericError(f"expected a 2-D image, got shape {img.shape}")
    if rows < 2 or cols < 2:
        raise NumericError(f"resize target must be at least 2x2, got {rows}x{cols}")
    if img.shape == (rows, cols):
        return img.copy()
    return np.clip(_bilinear(img, rows, cols), 0.0, 255.0)


def occlusion_side(percentage: float, rows: int, cols: int) -> int:
    """Side of the square covering ``percentage`` of a rows x cols image,
    rounded to the nearest integer (halves round up)."""
    if percentage < 0 or percentage >= 1:
        raise NumericError(f"occlusion percentage must be in [0, 1), got {percentage}")
    return int(math.floor(math.sqrt(percentage * rows * cols) + 0.5))


def occlude(img: np.ndarray, spec: OcclusionSpec) -> tuple[np.ndarray, tuple[int, int, int]]:
    """Paste a resized square occluder at a seeded random position.

    Returns the occluded copy and the ``(row, col, side)`` region.  Pixels
    outside the region are untouched; the same (img, spec) always yields
    the same output.
    """
    img = np.asarray(img, dtype=np.float64)
    m, n = img.shape
    side = occlusion_side(spec.percentage, m, n)
    out = img.copy()
    if side == 0:
        return out, (0, 0, 0)
    if side > min(m, n):
        raise NumericError(
            f"occlusion of {spec.percentage:.0%} needs a {side}x{side} block,"
            f" which does not fit a {m}x{n} image"
        )
    occluder = np.asarray(spec.occluder, dtype=np.float64)
    if occluder.ndim != 2 or occluder.size == 0:
        raise NumericError("occluder must be a non-empty 2-D image")
    if occluder.shape != (side, side):
        occluder = np.clip(_bilinear(occluder, side, side), 0.0, 255.0)
    rng = np.random.default_rng(spec.seed)
    row = int(rng.integers(0, m - side + 1))
    col = int(rng.integers(0, n - side + 1))
    out[row : row + side, col : col + side] = occluder
    return out, (row, col, side)
