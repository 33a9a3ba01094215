#!/usr/bin/env python3
"""Write a synthetic face-like dataset (PGM images + manifest + occluder).

The generator lives in the test suite; this script materializes one draw
of it so the CLI can be exercised on real files, e.g.:

    python scripts/make_toy_dataset.py --out data/toy --seed 0
    orientrec train --manifest data/toy/manifest.csv --out model.json
"""

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))
sys.path.insert(0, str(ROOT / "src"))

import toyfaces  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--classes", type=int, default=10)
    parser.add_argument("--train-per-class", type=int, default=4)
    parser.add_argument("--test-per-class", type=int, default=5)
    args = parser.parse_args()

    manifest, occluder = toyfaces.write_dataset(
        args.out,
        args.seed,
        n_classes=args.classes,
        n_train=args.train_per_class,
        n_test=args.test_per_class,
    )
    print(f"wrote manifest {manifest}")
    print(f"wrote occluder {occluder}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
