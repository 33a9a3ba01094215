import csv

import numpy as np
import pytest

from orientrec.dataset import save_image


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def write_manifest(directory, rows):
    """Write images named in ``rows`` [(array, label, split), ...] plus a
    manifest CSV; returns the manifest path."""
    path = directory / "manifest.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["path", "label", "split"])
        for i, (img, label, split) in enumerate(rows):
            name = f"img_{i:03d}.pgm"
            save_image(img, directory / name)
            writer.writerow([name, label, split])
    return path


@pytest.fixture
def tiny_dataset(tmp_path):
    """3-class dataset of distinct 12x10 textures; test split repeats the
    train images, so a memorizing classifier must score 1.0."""
    gen = np.random.default_rng(42)
    rows = []
    for cls in range(3):
        for _ in range(2):
            img = np.clip(np.rint(gen.uniform(0, 255, size=(12, 10))), 0, 255)
            rows.append((img, f"c{cls}", "train"))
            rows.append((img, f"c{cls}", "test"))
    return write_manifest(tmp_path, rows)
