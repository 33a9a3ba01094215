"""Desk-scale experiment harness: splits, occlusion sweeps, accuracy tables.

The protocol mirrors standard occlusion benchmarks: fit each configured
recognizer on the manifest's train split, paste a square occluder of a
given area fraction onto every test image at a seeded random position,
and record accuracy.  For one (seed, percentage) cell every test image
receives the identical occlusion across all configurations and subspace
dimensions, so methods are always compared on the same corrupted data.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import pipeline
from .dataset import Manifest, OcclusionSpec, load_image, load_manifest, occlude
from .errors import DataError, NumericError
from .pipeline import Recognizer, RecognizerConfig


@dataclass
class ExperimentSpec:
    """One reproducible batch of (config x occlusion x seed x dim) cells."""

    manifest: str | Path
    configs: list[RecognizerConfig]
    occlusions: list[float] = field(default_factory=lambda: [0.0])
    occluder: str | Path | None = None
    seeds: list[int] = field(default_factory=lambda: [0])
    dims: list[int] | None = None  # overrides every config's dim when set


@dataclass(frozen=True)
class ResultRow:
    config: str
    feature: str
    classifier: str
    p: float
    d: int
    n_train: int
    n_test: int
    seed: int
    accuracy: float


RESULT_HEADER = ["config", "feature", "classifier", "p", "d", "n_train", "n_test", "seed", "accuracy"]


@dataclass
class ResultTable:
    rows: list[ResultRow] = field(default_factory=list)

    def write_csv(self, path: str | Path) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(RESULT_HEADER)
            for row in self.rows:
                writer.writerow(
                    [
                        row.config,
                        row.feature,
                        row.classifier,
                        repr(row.p),
                        row.d,
                        row.n_train,
                        row.n_test,
                        row.seed,
                        repr(row.accuracy),
                    ]
                )

    def mean_accuracy(self, **match) -> float:
        """Average accuracy over rows whose fields equal the given values."""
        picked = [
            row.accuracy
            for row in self.rows
            if all(getattr(row, key) == val for key, val in match.items())
        ]
        if not picked:
            raise KeyError(f"no rows match {match}")
        return float(np.mean(picked))

    def best_dims(self) -> list[tuple[str, float, int, float]]:
        """Per (config, p): the dimension with the highest seed-averaged
        accuracy (ties to the smaller d), as (config, p, d, accuracy)."""
        cells: dict[tuple[str, float, int], list[float]] = {}
        for row in self.rows:
            cells.setdefault((row.config, row.p, row.d), []).append(row.accuracy)
        summary: dict[tuple[str, float], tuple[float, int]] = {}
        for (config, p, d), accs in sorted(cells.items()):
            mean = float(np.mean(accs))
            current = summary.get((config, p))
            if current is None or mean > current[0]:
                summary[(config, p)] = (mean, d)
        return [(cfg, p, d, mean) for (cfg, p), (mean, d) in sorted(summary.items())]


def _load_split(manifest: Manifest) -> tuple[list, list, list, list]:
    train = manifest.train
    test = manifest.test
    if not train or not test:
        raise DataError("manifest needs at least one train and one test entry")
    train_labels = {e.label for e in train}
    if not any(e.label in train_labels for e in test):
        raise DataError("no class has both train and test entries")
    train_images = [load_image(e.path) for e in train]
    test_images = [load_image(e.path) for e in test]
    return train_images, [e.label for e in train], test_images, [e.label for e in test]


def occluded_test_set(
    images: list[np.ndarray], percentage: float, occluder: np.ndarray | None, seed: int
) -> list[np.ndarray]:
    """Occlude each test image once, at its native resolution.

    Per-image seeds come from one stream derived from ``seed`` alone, so
    the regions depend only on (seed, percentage, image index) and stay
    identical across every configuration compared on this cell.
    """
    if percentage == 0.0:
        return images
    if occluder is None:
        raise DataError("an occluder image is required when occlusion > 0")
    child_seeds = np.random.SeedSequence(seed).generate_state(len(images), dtype=np.uint64)
    out = []
    for img, child in zip(images, child_seeds):
        occluded, _ = occlude(img, OcclusionSpec(percentage, occluder, int(child)))
        out.append(occluded)
    return out


def _config_dims(spec: ExperimentSpec, config: RecognizerConfig, n_train: int, feature_dim: int) -> list[int]:
    if spec.dims is not None:
        return list(spec.dims)
    if config.dim is not None:
        return [config.dim]
    return [min(feature_dim, n_train)]


def run(spec: ExperimentSpec) -> ResultTable:
    """Execute every (config, d, p, seed) cell; fully deterministic."""
    manifest = load_manifest(spec.manifest)
    train_images, train_labels, test_images, test_labels = _load_split(manifest)
    occluder = load_image(spec.occluder) if spec.occluder is not None else None
    for p in spec.occlusions:
        if not 0.0 <= p < 1.0:
            raise NumericError(f"occlusion percentage must be in [0, 1), got {p}")

    # one occluded copy of the test set per (p, seed), shared by all configs
    corrupted: dict[tuple[float, int], list[np.ndarray]] = {}
    for p in spec.occlusions:
        for seed in spec.seeds:
            corrupted[(p, seed)] = occluded_test_set(test_images, p, occluder, seed)

    n_train, n_test = len(train_images), len(test_images)
    rows: list[ResultRow] = []
    for config in spec.configs:
        rows_cols = config.image_shape[0] * config.image_shape[1]
        for dim in _config_dims(spec, config, n_train, rows_cols):
            rec = pipeline.fit(zip(train_images, train_labels), replace(config, dim=dim))
            if rec.model.effective_rank is not None and rec.model.effective_rank < dim:
                warnings.warn(
                    f"{config.name}: requested d={dim} exceeds the effective rank"
                    f" {rec.model.effective_rank} of the training features",
                    stacklevel=2,
                )
            for p in spec.occlusions:
                for seed in spec.seeds:
                    correct = sum(
                        pipeline.predict(rec, img)[0] == label
                        for img, label in zip(corrupted[(p, seed)], test_labels)
                    )
                    rows.append(
                        ResultRow(
                            config=config.name,
                            feature=config.features,
                            classifier=config.classifier,
                            p=float(p),
                            d=dim,
                            n_train=n_train,
                            n_test=n_test,
                            seed=seed,
                            accuracy=correct / n_test,
                        )
                    )
    return ResultTable(rows)


def sweep_dimension(spec: ExperimentSpec, d_min: int, d_max: int, step: int = 1) -> ResultTable:
    """Accuracy for every subspace dimension in [d_min, d_max] with the
    given stride; one table row per (config, d, p, seed)."""
    if step < 1:
        raise NumericError(f"sweep step must be >= 1, got {step}")
    if not 1 <= d_min <= d_max:
        raise NumericError(f"invalid sweep range [{d_min}, {d_max}]")
    return run(replace(spec, dims=list(range(d_min, d_max + 1, step))))


def export_embeddings(rec: Recognizer, manifest: Manifest | str | Path, path: str | Path) -> int:
    """Write one CSV row per manifest image: label, then the 2d stacked
    embedding values at full precision.  Returns the row count."""
    if not isinstance(manifest, Manifest):
        manifest = load_manifest(manifest)
    width = 2 * rec.config.dim
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["label"] + [f"e{i}" for i in range(1, width + 1)])
        for entry in manifest.entries:
            vec = pipeline.embed(rec, load_image(entry.path))
            writer.writerow([entry.label] + [repr(float(v)) for v in vec])
    return len(manifest.entries)
