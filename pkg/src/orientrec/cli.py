"""Command-line front-end.

Subcommands: train, predict, evaluate, sweep, occlude, export-embeddings.
Exit codes: 0 success, 2 usage error, 3 data error (unreadable or
malformed files), 4 numeric failure (parameter out of domain or a failed
numeric routine).  All randomness flows from explicit seed flags.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bench, pipeline
from .dataset import OcclusionSpec, load_image, load_manifest, occlude, save_image
from .errors import DataError, NumericError
from .gradientfield import FEATURE_ORDERS
from .pipeline import CLASSIFIERS, RecognizerConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def _parse_config_token(token: str) -> RecognizerConfig:
    parts = token.strip().split("-")
    if len(parts) != 2 or parts[0] not in FEATURE_ORDERS or parts[1] not in CLASSIFIERS:
        raise argparse.ArgumentTypeError(
            f"bad config {token!r}: expected FEATURE-CLASSIFIER with feature in"
            f" {{{','.join(FEATURE_ORDERS)}}} and classifier in {{{','.join(CLASSIFIERS)}}}"
        )
    return RecognizerConfig(features=parts[0], classifier=parts[1])


def _config_list(text: str) -> list[RecognizerConfig]:
    return [_parse_config_token(tok) for tok in text.split(",") if tok.strip()]


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}")


def _add_shape_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--height", type=int, default=42, help="image rows after resize (default 42)")
    p.add_argument("--width", type=int, default=30, help="image cols after resize (default 30)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orientrec",
        description="Gradient-orientation subspace recognition and its occlusion benchmark.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fit a recognizer and write it to disk")
    p_train.add_argument("--manifest", required=True)
    p_train.add_argument("--features", choices=FEATURE_ORDERS, default="second")
    p_train.add_argument("--classifier", choices=CLASSIFIERS, default="crc")
    p_train.add_argument("--dim", type=int, default=None, help="subspace dimension (default min(K, N))")
    p_train.add_argument("--lambda", dest="lam", type=float, default=1e-3, help="ridge weight (default 0.001)")
    _add_shape_flags(p_train)
    p_train.add_argument("--out", required=True, help="output model path (JSON)")

    p_pred = sub.add_parser("predict", help="classify one image with a saved model")
    p_pred.add_argument("--model", required=True)
    p_pred.add_argument("--image", required=True)
    p_pred.add_argument("--verbose", action="store_true", help="also list per-class scores")

    p_eval = sub.add_parser("evaluate", help="accuracy table over configs, occlusions, and seeds")
    p_eval.add_argument("--manifest", required=True)
    p_eval.add_argument("--configs", type=_config_list, default=_config_list("second-crc"),
                        help="comma list of FEATURE-CLASSIFIER tokens (default second-crc)")
    p_eval.add_argument("--occlude", type=_float_list, default=[0.0],
                        help="comma list of occlusion fractions in [0,1) (default 0)")
    p_eval.add_argument("--occluder", default=None, help="square occluder image (required when occlusion > 0)")
    p_eval.add_argument("--seeds", type=_int_list, default=[0], help="comma list of seeds (default 0)")
    p_eval.add_argument("--dims", type=_int_list, default=None, help="comma list of subspace dimensions")
    p_eval.add_argument("--lambda", dest="lam", type=float, default=1e-3)
    _add_shape_flags(p_eval)
    p_eval.add_argument("--report", required=True, help="output CSV path")

    p_sweep = sub.add_parser("sweep", help="accuracy versus subspace dimension")
    p_sweep.add_argument("--manifest", required=True)
    p_sweep.add_argument("--configs", type=_config_list, default=_config_list("second-crc"))
    p_sweep.add_argument("--d-min", type=int, required=True)
    p_sweep.add_argument("--d-max", type=int, required=True)
    p_sweep.add_argument("--step", type=int, default=1)
    p_sweep.add_argument("--occlude", type=_float_list, default=[0.0])
    p_sweep.add_argument("--occluder", default=None)
    p_sweep.add_argument("--seeds", type=_int_list, default=[0])
    p_sweep.add_argument("--lambda", dest="lam", type=float, default=1e-3)
    _add_shape_flags(p_sweep)
    p_sweep.add_argument("--report", required=True)

    p_occ = sub.add_parser("occlude", help="paste a seeded square occluder onto an image")
    p_occ.add_argument("--image", required=True)
    p_occ.add_argument("--occluder", required=True)
    p_occ.add_argument("--percent", type=float, required=True, help="occluded area fraction in [0,1)")
    p_occ.add_argument("--seed", type=int, default=0)
    p_occ.add_argument("--out", required=True)

    p_exp = sub.add_parser("export-embeddings", help="dump stacked embeddings of manifest images to CSV")
    p_exp.add_argument("--model", required=True)
    p_exp.add_argument("--manifest", required=True)
    p_exp.add_argument("--out", required=True)

    return parser


def _cmd_train(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    entries = manifest.train
    if not entries:
        raise DataError(f"{args.manifest}: no train entries")
    config = RecognizerConfig(
        features=args.features,
        classifier=args.classifier,
        dim=args.dim,
        lam=args.lam,
        image_shape=(args.height, args.width),
    )
    samples = [(load_image(e.path), e.label) for e in entries]
    rec = pipeline.fit(samples, config)
    pipeline.save(rec, args.out)
    print(
        f"trained on N={rec.dictionary.n_samples} images:"
        f" K={rec.model.feature_dim} d={rec.config.dim}"
        f" effective_rank={rec.model.effective_rank}"
    )
    print(f"wrote model to {args.out}")
    return EXIT_OK


def _cmd_predict(args: argparse.Namespace) -> int:
    rec = pipeline.load(args.model)
    label, scores = pipeline.predict(rec, load_image(args.image))
    best = float(scores[rec.classes.index(label)])
    print(f"{label}\t{best!r}")
    if args.verbose:
        for cls, score in zip(rec.classes, scores):
            print(f"  {cls}\t{float(score)!r}")
    return EXIT_OK


def _make_spec(args: argparse.Namespace) -> bench.ExperimentSpec:
    configs = [
        RecognizerConfig(
            features=c.features,
            classifier=c.classifier,
            lam=args.lam,
            image_shape=(args.height, args.width),
        )
        for c in args.configs
    ]
    if not configs:
        raise NumericError("at least one config is required")
    return bench.ExperimentSpec(
        manifest=args.manifest,
        configs=configs,
        occlusions=args.occlude,
        occluder=args.occluder,
        seeds=args.seeds,
        dims=getattr(args, "dims", None),
    )


def _print_summary(table: bench.ResultTable) -> None:
    for config, p, d, acc in table.best_dims():
        print(f"{config} p={p}: best d={d} accuracy={acc:.4f}")


def _cmd_evaluate(args: argparse.Namespace) -> int:
    table = bench.run(_make_spec(args))
    table.write_csv(args.report)
    print(f"wrote {len(table.rows)} rows to {args.report}")
    _print_summary(table)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    table = bench.sweep_dimension(_make_spec(args), args.d_min, args.d_max, args.step)
    table.write_csv(args.report)
    print(f"wrote {len(table.rows)} rows to {args.report}")
    _print_summary(table)
    return EXIT_OK


def _cmd_occlude(args: argparse.Namespace) -> int:
    img = load_image(args.image)
    spec = OcclusionSpec(args.percent, load_image(args.occluder), args.seed)
    occluded, (row, col, side) = occlude(img, spec)
    save_image(occluded, args.out)
    print(f"occluded {side}x{side} block at row={row} col={col}; wrote {args.out}")
    return EXIT_OK


def _cmd_export(args: argparse.Namespace) -> int:
    rec = pipeline.load(args.model)
    count = bench.export_embeddings(rec, args.manifest, args.out)
    print(f"wrote {count} embeddings of width {2 * rec.config.dim} to {args.out}")
    return EXIT_OK


_COMMANDS = {
    "train": _cmd_train,
    "predict": _cmd_predict,
    "evaluate": _cmd_evaluate,
    "sweep": _cmd_sweep,
    "occlude": _cmd_occlude,
    "export-embeddings": _cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except np.linalg.LinAlgError as exc:
        print(f"error: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
