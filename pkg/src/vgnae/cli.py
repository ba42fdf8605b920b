"""Command-line entry point: split / train / diagnose.

Every command is a pure function of (bundle bytes, flags, seed): rerunning
with the same arguments produces byte-identical output files. Default flag
values reproduce the standard protocol (dim 64, hidden 128, s = 1.8,
lr 0.005, 300 epochs, early-stop window 50).
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import datasplit, metrics
from .dataio import load_dataset
from .errors import StateError
from .graph import build_normalized_adjacency
from .models import (LinkPredictionModel, ModelConfig, evaluate,
                     load_checkpoint, save_checkpoint, train)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vgnae",
        description="Link prediction with graph (normalized) autoencoders",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--dataset", required=True, help="dataset bundle directory")
        p.add_argument("--train-ratio", type=float, default=0.8)
        p.add_argument("--split-mode", default=datasplit.MODE_RATIO_1TO3,
                       choices=[datasplit.MODE_RATIO_1TO3,
                                datasplit.MODE_FIXED_60_10_30])
        p.add_argument("--seed", default="0",
                       help="seed, or comma-separated seeds for a sweep")
        p.add_argument("--split-manifest", help="reuse a split written by `split`")
        p.add_argument("--output", help="output file path")

    def model_flags(p):
        p.add_argument("--model", default="gnae",
                       choices=["gae", "vgae", "gnae", "vgnae"])
        p.add_argument("--epochs", type=int, default=300)
        p.add_argument("--lr", type=float, default=0.005)
        p.add_argument("--dim", type=int, default=64)
        p.add_argument("--hidden", type=int, default=128)
        p.add_argument("--scale", type=float, default=1.8)
        p.add_argument("--jobs", type=int, default=1,
                       help="worker threads for seed sweeps")

    p_split = sub.add_parser("split", help="write a reusable edge-split manifest")
    common(p_split)

    p_train = sub.add_parser("train", help="train a model and report test metrics")
    common(p_train)
    model_flags(p_train)
    p_train.add_argument("--checkpoint", help="where to write trained weights")

    p_diag = sub.add_parser("diagnose",
                            help="norm-by-degree table and stratified AUC")
    common(p_diag)
    model_flags(p_diag)
    p_diag.add_argument("--checkpoint", help="trained weights to load")
    p_diag.add_argument("--fresh", action="store_true",
                        help="train from scratch instead of loading a checkpoint")
    return parser


def _parse_seeds(spec: str) -> list[int]:
    return [int(s) for s in spec.split(",") if s.strip() != ""]


def _get_split(args, graph, seed: int) -> datasplit.EdgeSplit:
    if args.split_manifest:
        return datasplit.read_manifest(args.split_manifest)
    return datasplit.split_edges(graph, args.train_ratio, seed,
                                 mode=args.split_mode)


def _config(args, seed: int) -> ModelConfig:
    return ModelConfig(model=args.model, dim=args.dim, hidden=args.hidden,
                       scale=args.scale, lr=args.lr, max_epochs=args.epochs,
                       patience=min(50, args.epochs), seed=seed)


def _write_lines(path, lines) -> None:
    Path(path).write_text("\n".join(lines) + "\n")


def _seed_path(base: str, seed: int, many: bool) -> str:
    return f"{base}.seed{seed}" if many else base


def cmd_split(args) -> int:
    graph = load_dataset(args.dataset)
    seeds = _parse_seeds(args.seed)
    for seed in seeds:
        split = datasplit.split_edges(graph, args.train_ratio, seed,
                                      mode=args.split_mode)
        out = _seed_path(args.output or "split.txt", seed, len(seeds) > 1)
        datasplit.write_manifest(split, out)
        print(f"wrote {out}")
    return 0


def _train_one(args, graph, seed: int, many: bool) -> None:
    split = _get_split(args, graph, seed)
    config = _config(args, seed)
    model = LinkPredictionModel(config, graph.num_features,
                                np.random.default_rng(seed))
    history = train(model, graph, split, config)
    scores, labels, pairs = evaluate(model, graph, split)

    isolated_nodes = datasplit.classify_test_nodes(split, graph.num_nodes)
    strata = datasplit.edge_strata(pairs, isolated_nodes)
    report = metrics.stratified_report(scores, labels, strata)

    lines = [
        f"command = train",
        f"dataset = {Path(args.dataset).name}",
        f"model = {config.model}",
        f"train_ratio = {args.train_ratio!r}",
        f"split_mode = {args.split_mode}",
        f"seed = {seed}",
        f"epochs_run = {len(history.losses)}",
        f"best_epoch = {history.best_epoch}",
        f"best_val_auc = {history.best_val_auc!r}",
        f"test_auc = {report.auc!r}",
        f"test_ap = {report.ap!r}",
    ]
    lines += report.to_lines()
    out = _seed_path(args.output or "report.txt", seed, many)
    _write_lines(out, lines)
    if args.checkpoint:
        save_checkpoint(model, graph.num_features,
                        _seed_path(args.checkpoint, seed, many))
    print(f"wrote {out} (test_auc {report.auc:.4f})")


def cmd_train(args) -> int:
    graph = load_dataset(args.dataset)
    seeds = _parse_seeds(args.seed)
    many = len(seeds) > 1
    if args.jobs > 1 and many:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_train_one, args, graph, s, many) for s in seeds]
            for fut in futures:
                fut.result()
    else:
        for seed in seeds:
            _train_one(args, graph, seed, many)
    return 0


def cmd_diagnose(args) -> int:
    graph = load_dataset(args.dataset)
    seeds = _parse_seeds(args.seed)
    many = len(seeds) > 1
    for seed in seeds:
        split = _get_split(args, graph, seed)
        config = _config(args, seed)
        if args.checkpoint:
            model, _ = load_checkpoint(args.checkpoint, config)
            history = None
        elif args.fresh:
            model = LinkPredictionModel(config, graph.num_features,
                                        np.random.default_rng(seed))
            history = train(model, graph, split, config)
        else:
            raise StateError("diagnose needs --checkpoint or --fresh")

        train_graph = graph.with_edges(split.train_pos)
        adj = build_normalized_adjacency(train_graph)
        from . import autodiff as ad
        z, _ = model.forward(ad.constant(graph.features), adj, training=False)
        table = metrics.norm_by_degree(z.value, train_graph)

        scores, labels, pairs = evaluate(model, graph, split, adj=adj)
        isolated_nodes = datasplit.classify_test_nodes(split, graph.num_nodes)
        strata = datasplit.edge_strata(pairs, isolated_nodes)
        report = metrics.stratified_report(scores, labels, strata)

        lines = [
            f"command = diagnose",
            f"dataset = {Path(args.dataset).name}",
            f"model = {model.kind}",
            f"seed = {seed}",
        ]
        if history is not None:
            lines.append(f"epochs_run = {len(history.losses)}")
        lines += report.to_lines()
        lines += table.to_lines()
        out = _seed_path(args.output or "diagnosis.txt", seed, many)
        _write_lines(out, lines)
        print(f"wrote {out}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "split":
            return cmd_split(args)
        if args.command == "train":
            return cmd_train(args)
        return cmd_diagnose(args)
    except Exception as exc:  # noqa: BLE001 - single reporting point for the CLI
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
