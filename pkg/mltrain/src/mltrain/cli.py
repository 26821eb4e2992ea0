"""mltrain CLI: train one metric's CNN from a manifest and evaluate it.

    mltrain --manifest data/manifest.csv --metric fdim --epochs 20 \
            --seed 0 --subset-k 100 --subset-m 100 --output runs/fdim

Trains on the manifest's train split, checkpoints on validation, evaluates
on test, and writes loss_curve.csv, weights.pt, eval_report.json and (for
the Wada classifier) confusion.csv into the output directory.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import torch

from .evaluate import evaluate, write_confusion_csv
from .manifest import METRICS, read_rows, rows_with_target, split_rows
from .model import build_model, parameter_count
from .train import ConfigError, TrainConfig, train, write_loss_curve


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mltrain", description=__doc__)
    parser.add_argument("--manifest", required=True, help="dataset manifest CSV")
    parser.add_argument("--metric", required=True, choices=list(METRICS))
    parser.add_argument("--epochs", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--subset-k", type=int, default=100,
                        help="number of resampled test subsets")
    parser.add_argument("--subset-m", type=int, default=100,
                        help="images per test subset")
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--learning-rate", type=float, default=1e-3)
    parser.add_argument("--flip-prob", type=float, default=0.5)
    parser.add_argument("--amsgrad", action=argparse.BooleanOptionalAction, default=True)
    parser.add_argument("--width", type=int, default=16, help="model channel width")
    parser.add_argument("--output", default="mltrain_out")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rows = read_rows(args.manifest)
    except (OSError, ValueError) as exc:
        print(f"cannot read manifest: {exc}", file=sys.stderr)
        return 3

    train_rows = rows_with_target(split_rows(rows, "train"), args.metric)
    val_rows = rows_with_target(split_rows(rows, "validation"), args.metric)
    test_rows = rows_with_target(split_rows(rows, "test"), args.metric)

    config = TrainConfig(
        batch_size=args.batch_size, epochs=args.epochs,
        learning_rate=args.learning_rate, amsgrad=args.amsgrad,
        flip_prob=args.flip_prob, seed=args.seed,
    )
    torch.manual_seed(args.seed)  # weight init; train() reseeds for batching
    model = build_model(args.metric, width=args.width)
    print(f"model: {parameter_count(model)} parameters; "
          f"train/val/test rows: {len(train_rows)}/{len(val_rows)}/{len(test_rows)}")

    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        result = train(model, train_rows, val_rows, args.metric, config)
        model.load_state_dict(result.best_state)
        report = evaluate(model, test_rows, args.metric,
                          subset_k=args.subset_k, subset_m=args.subset_m,
                          seed=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3

    write_loss_curve(result.history, out_dir / "loss_curve.csv")
    torch.save(result.best_state, out_dir / "weights.pt")
    (out_dir / "eval_report.json").write_text(report.to_json(), encoding="utf-8")
    if args.metric == "wada":
        write_confusion_csv(report, out_dir / "confusion.csv")
        print(f"wada accuracy: {report.wada_accuracy_mean:.4f}"
              f" +- {report.wada_accuracy_std:.4f}")
    else:
        print(f"error stats: mu={report.mu:.6f} sigma={report.sigma:.6f}")
    print(f"best epoch {result.best_epoch} (val loss {result.best_val_loss:.6g});"
          f" outputs in {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
