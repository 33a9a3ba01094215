"""End-to-end recognizer: features -> complex subspace -> classifier.

One code path serves every variant: the feature order picks raw
intensities or first/second-order gradient orientations, and the
classifier picks ridge coding or nearest neighbor.  The flagship
configuration is ``features="second", classifier="crc"``.

Fitting extracts a complex feature per training image, learns the top-d
complex subspace, projects every training feature, stacks real over
imaginary parts into a real dictionary, and (for the ridge classifier)
caches the solve operator.  Prediction pushes a test image through the
identical chain and scores it per class.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

import numpy as np

from . import classify, gradientfield, subspace
from .dataset import resize
from .errors import DataError, NumericError

RECOGNIZER_FORMAT = "orientrec-recognizer"
RECOGNIZER_VERSION = 1

CLASSIFIERS = ("nnc", "crc")


@dataclass(frozen=True)
class RecognizerConfig:
    """Knobs of one pipeline variant.

    ``dim=None`` resolves to ``min(K, N)`` at fit time.  ``image_shape``
    is (rows, cols); every train and test image is resized to it.
    """

    features: str = "second"
    classifier: str = "crc"
    dim: int | None = None
    lam: float = 1e-3
    image_shape: tuple[int, int] = (42, 30)

    def validate(self) -> None:
        if self.features not in gradientfield.FEATURE_ORDERS:
            raise NumericError(f"unknown feature order {self.features!r}")
        if self.classifier not in CLASSIFIERS:
            raise NumericError(f"unknown classifier {self.classifier!r}")
        if self.dim is not None and self.dim < 1:
            raise NumericError(f"d out of range: d={self.dim} must be positive")
        if self.classifier == "crc" and not self.lam > 0:
            raise NumericError(f"lambda must be positive, got {self.lam}")
        rows, cols = self.image_shape
        if rows < 2 or cols < 2:
            raise NumericError(f"image shape must be at least 2x2, got {rows}x{cols}")

    @property
    def name(self) -> str:
        return f"{self.features}-{self.classifier}"


@dataclass
class Recognizer:
    """Fitted model: subspace, training dictionary, and optional coder."""

    config: RecognizerConfig
    model: subspace.SubspaceModel
    dictionary: classify.RealDictionary
    coder: classify.CrcCoder | None

    @property
    def classes(self) -> list[str]:
        return self.dictionary.classes


def fit(samples: Iterable[tuple[np.ndarray, str]], config: RecognizerConfig) -> Recognizer:
    """Train a recognizer from (image, label) pairs."""
    config.validate()
    rows, cols = config.image_shape
    images: list[np.ndarray] = []
    labels: list[str] = []
    for img, label in samples:
        images.append(resize(img, rows, cols))
        labels.append(str(label))
    if not images:
        raise NumericError("need at least one training image")

    features = np.column_stack([gradientfield.extract(img, config.features) for img in images])
    feature_dim, count = features.shape
    dim = config.dim if config.dim is not None else min(feature_dim, count)
    model = subspace.fit_complex_pca(
        features, dim, image_shape=config.image_shape, feature_order=config.features
    )
    embeddings = subspace.project(model, features)
    dictionary = classify.stack_real_imag(embeddings, labels=labels)
    coder = classify.crc_fit(dictionary, config.lam) if config.classifier == "crc" else None
    return Recognizer(
        config=replace(config, dim=dim), model=model, dictionary=dictionary, coder=coder
    )


def embed(rec: Recognizer, img: np.ndarray) -> np.ndarray:
    """Stacked real query vector of one image under the fitted model."""
    rows, cols = rec.config.image_shape
    feature = gradientfield.extract(resize(img, rows, cols), rec.config.features)
    return classify.stack_real_imag(subspace.project(rec.model, feature))


def predict(rec: Recognizer, img: np.ndarray) -> tuple[str, np.ndarray]:
    """Predicted label and per-class scores (regularized residuals for the
    ridge coder, minimum distances for nearest neighbor), aligned with
    ``rec.classes``.  Images of the wrong size are resized to the model's
    dimensions first."""
    query = embed(rec, img)
    if rec.coder is not None:
        return classify.crc_classify(rec.coder, query)
    # label from the column-level tie rule, scores as per-class reductions
    label = classify.nnc_classify(rec.dictionary, query)
    return label, classify.nnc_distances(rec.dictionary, query)


def save(rec: Recognizer, path: str | Path) -> None:
    """Serialize to versioned JSON; floats are written exactly (shortest
    round-trip decimal), so a reloaded model predicts bit-identically."""
    cfg = rec.config
    payload = {
        "format": RECOGNIZER_FORMAT,
        "version": RECOGNIZER_VERSION,
        "config": {
            "features": cfg.features,
            "classifier": cfg.classifier,
            "dim": cfg.dim,
            "lam": cfg.lam,
            "rows": cfg.image_shape[0],
            "cols": cfg.image_shape[1],
        },
        "subspace": rec.model.to_dict(),
        "dictionary": {
            "matrix": rec.dictionary.matrix.tolist(),
            "labels": rec.dictionary.labels,
        },
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load(path: str | Path) -> Recognizer:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DataError(f"model not found: {path}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"could not parse model file {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != RECOGNIZER_FORMAT:
        raise DataError(f"{path}: not a recognizer model file")
    if payload.get("version") != RECOGNIZER_VERSION:
        raise DataError(
            f"{path}: unsupported model version {payload.get('version')!r}"
            f" (expected {RECOGNIZER_VERSION})"
        )
    try:
        cfg_raw = payload["config"]
        config = RecognizerConfig(
            features=str(cfg_raw["features"]),
            classifier=str(cfg_raw["classifier"]),
            dim=int(cfg_raw["dim"]),
            lam=float(cfg_raw["lam"]),
            image_shape=(int(cfg_raw["rows"]), int(cfg_raw["cols"])),
        )
        model = subspace.SubspaceModel.from_dict(payload["subspace"])
        dictionary = classify.RealDictionary(
            np.asarray(payload["dictionary"]["matrix"], dtype=np.float64),
            [str(lbl) for lbl in payload["dictionary"]["labels"]],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: malformed model payload: {exc}") from exc
    config.validate()
    coder = classify.crc_fit(dictionary, config.lam) if config.classifier == "crc" else None
    return Recognizer(config=config, model=model, dictionary=dictionary, coder=coder)
