"""Command-line entry point wiring corpus, trainer, evaluation and retrieval
into reproducible runs.

Every command writes exactly one ``run.json`` manifest (command, effective
config, seeds, input fingerprints, output paths, toolkit version) into its
output directory; reruns with equal manifests produce byte-identical metric
JSON. Report-producing commands also render their figures under
``figures/`` next to the delimited output.

Exit codes: 0 success, 2 config error, 3 data error, 4 training or
evaluation failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
from collections.abc import Sequence
from pathlib import Path

from . import __version__, figures
from .checkpoints import load_external_backbone, save_checkpoint
from .data import (
    DatasetSplit,
    EisPair,
    MANIFEST_NAME,
    load_inli,
    load_pairwise,
    to_eis_pairs_from_inli,
    to_rte_instances,
    write_inli,
)
from .encoders import ARCHITECTURES, DualEncoder
from .errors import (
    CheckpointError,
    ConfigError,
    DataError,
    EvaluationError,
    TrainingError,
)
from .evaluation import (
    eis_evaluate,
    eis_report_json,
    imp_score,
    length_baseline_evaluate,
    report_from_scores,
    rte_report_json,
    score_rte_instances,
    tune_threshold,
)
from .losses import LossVariant
from .retrieval import build_index, pool_hypotheses, query, retrieval_result_json
from .synthetic import make_synthetic_corpus
from .training import (
    GRID_BATCH_SIZES,
    GRID_LEARNING_RATES,
    TrainConfig,
    grid_search,
    train,
    write_metrics,
)

HOME_ENV = "DUALSEM_HOME"
RUN_MANIFEST = "run.json"

SYNTHETIC = "synthetic"
# Split seeds derive from the base seed so one --seed pins the whole run.
SYNTHETIC_SEED_OFFSETS = {"train": 0, "development": 1, "test": 2}

ENTAILMENT_POOL_FIELDS = ("explicit_entailment", "implied_entailment")


# --------------------------------------------------------------------------
# Run manifests


@dataclasses.dataclass(frozen=True)
class RunManifest:
    """Reproducibility record written once per command invocation."""

    command: str
    config: dict
    seeds: dict
    inputs: dict
    outputs: dict
    version: str = __version__

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def write(self, out_dir: Path) -> Path:
        path = out_dir / RUN_MANIFEST
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps(self.to_dict(), ensure_ascii=False, indent=2, sort_keys=True)
        path.write_text(payload + "\n", encoding="utf-8")
        return path


def file_fingerprint(path: str | Path) -> dict:
    digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
    return {"path": str(path), "sha256": digest}


def synthetic_fingerprint(seed: int, n_samples: int, vocab_size: int, split_name: str) -> dict:
    return {
        "synthetic": {
            "seed": seed,
            "n_samples": n_samples,
            "vocab_size": vocab_size,
            "split_name": split_name,
        }
    }


# --------------------------------------------------------------------------
# Config assembly: flags override config file overrides defaults


def _deep_merge(base: dict, overlay: dict, prefix: str = "") -> None:
    for key, value in overlay.items():
        if key not in base:
            raise ConfigError(f"unknown config key {prefix + key!r}")
        if isinstance(base[key], dict) and isinstance(value, dict):
            _deep_merge(base[key], value, prefix + key + ".")
        else:
            base[key] = value


def _load_config_file(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        loaded = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path}: invalid JSON ({exc.msg})") from exc
    if not isinstance(loaded, dict):
        raise ConfigError(f"config file {path}: expected a JSON object")
    return loaded


def assemble_train_config(args: argparse.Namespace) -> TrainConfig:
    """Resolve the effective training config from defaults, file and flags."""
    payload = TrainConfig().to_dict()
    if args.config is not None:
        _deep_merge(payload, _load_config_file(args.config))
    for key in ("batch_size", "learning_rate", "tau", "variant", "epochs", "seed", "eval_every"):
        value = getattr(args, key)
        if value is not None:
            payload[key] = value
    encoder = payload["encoder"]
    if args.arch is not None:
        encoder["architecture"] = args.arch
    if args.max_len is not None:
        encoder["max_sequence_length"] = args.max_len
    toy = encoder.get("toy")
    if toy is not None:
        if args.toy_hidden is not None:
            toy["hidden_size"] = args.toy_hidden
            encoder["embedding_dim"] = args.toy_hidden
        if args.toy_layers is not None:
            toy["layers"] = args.toy_layers
        if args.toy_heads is not None:
            toy["heads"] = args.toy_heads
        if args.toy_ffn is not None:
            toy["ffn_size"] = args.toy_ffn
    try:
        return TrainConfig.from_dict(payload)
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"invalid training config: {exc}") from exc


# --------------------------------------------------------------------------
# Shared plumbing


def home_dir() -> Path:
    return Path(os.environ.get(HOME_ENV, Path.home() / ".cache" / "dualsem"))


def resolve_out_dir(args: argparse.Namespace, command: str) -> Path:
    out = Path(args.out) if args.out is not None else home_dir() / "runs" / command.replace(" ", "-")
    out.mkdir(parents=True, exist_ok=True)
    return out


def resolve_split(
    args: argparse.Namespace, source: str | None, split_name: str, base_seed: int
) -> tuple[DatasetSplit, dict]:
    """Load one split from a JSONL path or generate it with derived seeds."""
    if source is None:
        raise ConfigError(f"no source given for the {split_name} split")
    if source == SYNTHETIC:
        seed = base_seed + SYNTHETIC_SEED_OFFSETS[split_name]
        size = {
            "train": args.synthetic_train_size,
            "development": args.synthetic_dev_size,
            "test": args.synthetic_test_size,
        }[split_name]
        split = make_synthetic_corpus(seed, size, args.synthetic_vocab, split_name)
        return split, synthetic_fingerprint(seed, size, args.synthetic_vocab, split_name)
    return load_inli(source, split_name), file_fingerprint(source)


def secondary_source(args: argparse.Namespace, flag_value: str | None, flag: str) -> str:
    """Fall back to synthetic generation only; file-backed runs must name each split."""
    if flag_value is not None:
        return flag_value
    if args.data == SYNTHETIC:
        return SYNTHETIC
    raise ConfigError(f"{flag} is required when --data is a file path")


def load_model(locator: str, architecture: str | None) -> DualEncoder:
    return load_external_backbone(locator, architecture=architecture or "cross")


def _pct(value: float | None) -> str:
    return "n/a" if value is None else f"{100.0 * value:.2f}"


def print_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    widths = [
        max(len(str(header)), *(len(str(row[i])) for row in rows)) if rows else len(str(header))
        for i, header in enumerate(headers)
    ]
    line = "  ".join(str(h).ljust(w) for h, w in zip(headers, widths))
    print(line)
    print("  ".join("-" * w for w in widths))
    for row in rows:
        print("  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)))


def _write_json(payload: dict, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return path


# --------------------------------------------------------------------------
# Commands


def cmd_train(args: argparse.Namespace) -> int:
    config = assemble_train_config(args)
    out_dir = resolve_out_dir(args, "train")
    train_split, train_fp = resolve_split(args, args.data, "train", config.seed)
    dev_split, dev_fp = resolve_split(
        args, secondary_source(args, args.dev, "--dev"), "development", config.seed
    )

    outcome = train(config, train_split, dev_split)
    checkpoint_dir = out_dir / "checkpoint"
    save_checkpoint(outcome.checkpoint, checkpoint_dir)
    metrics_path = write_metrics(outcome.metrics, out_dir / "metrics.jsonl")
    figure_path = figures.training_curves(
        outcome.metrics, outcome.batch_losses, out_dir / "figures" / "training_curves.png"
    )

    RunManifest(
        command="train",
        config=config.to_dict(),
        seeds={"base": config.seed},
        inputs={"train": train_fp, "development": dev_fp},
        outputs={
            "checkpoint": "checkpoint",
            "metrics": "metrics.jsonl",
            "training_curves": str(figure_path.relative_to(out_dir)),
        },
    ).write(out_dir)

    best = outcome.checkpoint.dev_metric
    print_table(
        ["step", "train loss", "dev RTE avg (%)"],
        [[str(m.step), f"{m.train_loss:.4f}", _pct(m.dev_rte_avg)] for m in outcome.metrics],
    )
    print(f"best dev RTE average: {_pct(best)}% (gamma {outcome.best_gamma:.4f})")
    print(f"checkpoint written to {checkpoint_dir}")
    return 0


def cmd_eval_rte(args: argparse.Namespace) -> int:
    out_dir = resolve_out_dir(args, "eval rte")
    model = load_model(args.ckpt, args.arch)
    dev_split, dev_fp = resolve_split(
        args, secondary_source(args, args.dev, "--dev"), "development", args.seed
    )
    test_split, test_fp = resolve_split(
        args, secondary_source(args, args.test, "--test"), "test", args.seed
    )

    dev_scored = score_rte_instances(model, to_rte_instances(dev_split))
    tuned = tune_threshold([(item.score, item.gold) for item in dev_scored])
    test_scored = score_rte_instances(model, to_rte_instances(test_split))
    report = report_from_scores(test_scored, tuned.gamma)

    report_path = _write_json(rte_report_json(report), out_dir / "rte_report.json")
    figure_path = figures.rte_score_histogram(
        test_scored, tuned.gamma, out_dir / "figures" / "rte_scores.png"
    )

    RunManifest(
        command="eval rte",
        config={"checkpoint": args.ckpt, "architecture": args.arch or "cross"},
        seeds={"base": args.seed},
        inputs={"development": dev_fp, "test": test_fp},
        outputs={
            "report": "rte_report.json",
            "score_histogram": str(figure_path.relative_to(out_dir)),
        },
    ).write(out_dir)

    rows = [[key, _pct(value)] for key, value in report.per_class.items()]
    rows.append(["avg", _pct(report.average)])
    print_table(["class", "accuracy (%)"], rows)
    print(f"gamma tuned on development data: {tuned.gamma:.4f}")
    print(f"report written to {report_path}")
    return 0


def _eis_pairs(args: argparse.Namespace) -> tuple[list[EisPair], dict, dict]:
    if args.pairs is not None:
        return load_pairwise(args.pairs, seed=args.seed), file_fingerprint(args.pairs), {
            "pair_sides": args.seed
        }
    split, fingerprint = resolve_split(args, args.data, "test", args.seed)
    return to_eis_pairs_from_inli(split, seed=args.seed), fingerprint, {"pair_sides": args.seed}


def cmd_eval_eis(args: argparse.Namespace) -> int:
    out_dir = resolve_out_dir(args, "eval eis")
    pairs, input_fp, seeds = _eis_pairs(args)
    outputs = {"report": "eis_report.json"}

    if args.baseline == "length":
        report = length_baseline_evaluate(pairs)
        config = {"baseline": "length", "checkpoint": None}
    else:
        if args.ckpt is None:
            raise ConfigError("eval eis needs --ckpt unless --baseline length is given")
        model = load_model(args.ckpt, args.arch)
        report = eis_evaluate(model, pairs)
        config = {"baseline": None, "checkpoint": args.ckpt, "architecture": args.arch or "cross"}
        duals = model.encode_dual_many([s for pair in pairs for s in (pair.s1, pair.s2)])
        more, less = [], []
        for pair, s1_dual, s2_dual in zip(pairs, duals[0::2], duals[1::2]):
            scores = {1: imp_score(s1_dual), 2: imp_score(s2_dual)}
            more.append(scores[pair.gold_more_implicit])
            less.append(scores[3 - pair.gold_more_implicit])
        figure_path = figures.imp_score_distributions(
            {"gold more-implicit side": more, "other side": less},
            out_dir / "figures" / "imp_scores.png",
        )
        outputs["score_distributions"] = str(figure_path.relative_to(out_dir))

    report_path = _write_json(eis_report_json(report), out_dir / "eis_report.json")
    seeds["base"] = args.seed
    RunManifest(
        command="eval eis",
        config=config,
        seeds=seeds,
        inputs={"pairs": input_fp},
        outputs=outputs,
    ).write(out_dir)

    print_table(["pairs", "accuracy (%)"], [[str(report.n_pairs), _pct(report.accuracy)]])
    print(f"report written to {report_path}")
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    base_config = assemble_train_config(args)
    out_dir = resolve_out_dir(args, "ablate")
    train_split, train_fp = resolve_split(args, args.data, "train", base_config.seed)
    dev_split, dev_fp = resolve_split(
        args, secondary_source(args, args.dev, "--dev"), "development", base_config.seed
    )
    pairs = to_eis_pairs_from_inli(dev_split, seed=base_config.seed)

    rows: dict[str, dict] = {}
    for variant in LossVariant:
        config = dataclasses.replace(base_config, variant=variant)
        try:
            outcome = train(config, train_split, dev_split)
            eis = eis_evaluate(outcome.checkpoint.model, pairs)
            rows[variant.value] = {
                "rte_avg": outcome.checkpoint.dev_metric,
                "eis_accuracy": eis.accuracy,
                "error": None,
            }
        except (TrainingError, EvaluationError) as exc:
            rows[variant.value] = {"rte_avg": None, "eis_accuracy": None, "error": str(exc)}

    if all(row["error"] is not None for row in rows.values()):
        raise TrainingError("all loss variants failed: " + rows[LossVariant.FULL.value]["error"])

    report_path = _write_json({"variants": rows}, out_dir / "ablation.json")
    figure_path = figures.ablation_chart(
        {name: (row["rte_avg"], row["eis_accuracy"]) for name, row in rows.items()},
        out_dir / "figures" / "ablation.png",
    )

    RunManifest(
        command="ablate",
        config={**base_config.to_dict(), "variants": [v.value for v in LossVariant]},
        seeds={"base": base_config.seed, "pair_sides": base_config.seed},
        inputs={"train": train_fp, "development": dev_fp},
        outputs={
            "report": "ablation.json",
            "chart": str(figure_path.relative_to(out_dir)),
        },
    ).write(out_dir)

    print_table(
        ["variant", "dev RTE avg (%)", "EIS acc (%)", "error"],
        [
            [name, _pct(row["rte_avg"]), _pct(row["eis_accuracy"]), row["error"] or ""]
            for name, row in rows.items()
        ],
    )
    print(f"report written to {report_path}")
    return 0


def cmd_retrieve(args: argparse.Namespace) -> int:
    out_dir = resolve_out_dir(args, "retrieve")
    model = load_model(args.ckpt, args.arch)
    split, corpus_fp = resolve_split(args, args.data, "train", args.seed)

    query_path = Path(args.query_file)
    if not query_path.exists():
        raise DataError(f"query file not found: {query_path}")
    queries = [line.strip() for line in query_path.read_text(encoding="utf-8").splitlines()]
    queries = [q for q in queries if q]
    if not queries:
        raise DataError(f"query file is empty: {query_path}")

    fields = None if args.pool == "all" else ENTAILMENT_POOL_FIELDS
    index = build_index(pool_hypotheses(split, fields), model)

    results_path = out_dir / "retrieval.jsonl"
    with results_path.open("w", encoding="utf-8") as fh:
        for text in queries:
            for view in ("explicit", "implicit"):
                result = query(index, text, view, args.k, model)
                fh.write(json.dumps(retrieval_result_json(result), ensure_ascii=False) + "\n")
                print(f"query ({view} view): {text}")
                for hit in result.hits:
                    print(f"  {hit.rank}. [{hit.score:+.4f}] {hit.text}")

    RunManifest(
        command="retrieve",
        config={
            "checkpoint": args.ckpt,
            "architecture": args.arch or "cross",
            "k": args.k,
            "pool": args.pool,
        },
        seeds={"base": args.seed},
        inputs={"corpus": corpus_fp, "queries": file_fingerprint(query_path)},
        outputs={"results": "retrieval.jsonl"},
    ).write(out_dir)

    print(f"results written to {results_path}")
    return 0


def cmd_grid(args: argparse.Namespace) -> int:
    base_config = assemble_train_config(args)
    out_dir = resolve_out_dir(args, "grid")
    train_split, train_fp = resolve_split(args, args.data, "train", base_config.seed)
    dev_split, dev_fp = resolve_split(
        args, secondary_source(args, args.dev, "--dev"), "development", base_config.seed
    )

    batch_sizes = tuple(args.batch_sizes or GRID_BATCH_SIZES)
    learning_rates = tuple(args.learning_rates or GRID_LEARNING_RATES)
    try:
        result = grid_search(batch_sizes, learning_rates, base_config, train_split, dev_split)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    payload = {
        "cells": [dataclasses.asdict(cell) for cell in result.cells],
        "best": dataclasses.asdict(result.best) if result.best is not None else None,
    }
    report_path = _write_json(payload, out_dir / "grid.json")
    figure_path = figures.grid_heatmap(result, out_dir / "figures" / "grid_heatmap.png")

    RunManifest(
        command="grid",
        config={
            **base_config.to_dict(),
            "grid_batch_sizes": list(batch_sizes),
            "grid_learning_rates": list(learning_rates),
        },
        seeds={"base": base_config.seed},
        inputs={"train": train_fp, "development": dev_fp},
        outputs={"report": "grid.json", "heatmap": str(figure_path.relative_to(out_dir))},
    ).write(out_dir)

    print_table(
        ["batch size", "learning rate", "dev RTE avg (%)", "error"],
        [
            [str(c.batch_size), f"{c.learning_rate:g}", _pct(c.dev_rte_avg), c.error or ""]
            for c in result.cells
        ],
    )
    if result.best is not None:
        print(
            f"best cell: batch size {result.best.batch_size}, "
            f"learning rate {result.best.learning_rate:g} "
            f"({_pct(result.best.dev_rte_avg)}%)"
        )
    print(f"report written to {report_path}")
    return 0


def cmd_make_synthetic(args: argparse.Namespace) -> int:
    out_dir = resolve_out_dir(args, "make-synthetic")
    sizes = {"train": args.train_size, "development": args.dev_size, "test": args.test_size}
    inputs = {}
    for split_name, size in sizes.items():
        seed = args.seed + SYNTHETIC_SEED_OFFSETS[split_name]
        split = make_synthetic_corpus(seed, size, args.vocab_size, split_name)
        write_inli(split, out_dir / f"{split_name}.jsonl")
        inputs[split_name] = synthetic_fingerprint(seed, size, args.vocab_size, split_name)
    _write_json({"splits": sizes}, out_dir / MANIFEST_NAME)

    RunManifest(
        command="make-synthetic",
        config={"vocab_size": args.vocab_size, **{f"{k}_size": v for k, v in sizes.items()}},
        seeds={"base": args.seed},
        inputs=inputs,
        outputs={f"{name}": f"{name}.jsonl" for name in sizes} | {"manifest": MANIFEST_NAME},
    ).write(out_dir)

    print_table(["split", "samples"], [[name, str(size)] for name, size in sizes.items()])
    print(f"corpus written to {out_dir}")
    return 0


# --------------------------------------------------------------------------
# Parser


def _add_out_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out",
        default=None,
        help=f"output directory (default: ${HOME_ENV}/runs/<command>)",
    )


def _add_data_flags(parser: argparse.ArgumentParser, with_dev: bool = True) -> None:
    parser.add_argument(
        "--data",
        default=None,
        help=f"'{SYNTHETIC}' or a JSONL path for the primary split",
    )
    if with_dev:
        parser.add_argument(
            "--dev", default=None, help="development split JSONL (defaults to --data source)"
        )
    parser.add_argument("--synthetic-train-size", type=int, default=512)
    parser.add_argument("--synthetic-dev-size", type=int, default=128)
    parser.add_argument("--synthetic-test-size", type=int, default=128)
    parser.add_argument("--synthetic-vocab", type=int, default=60)


def _add_train_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="JSON config file; flags win over it")
    parser.add_argument("--batch-size", dest="batch_size", type=int, default=None)
    parser.add_argument("--lr", dest="learning_rate", type=float, default=None)
    parser.add_argument("--tau", type=float, default=None, help="similarity temperature")
    parser.add_argument(
        "--variant", choices=[v.value for v in LossVariant], default=None
    )
    parser.add_argument("--epochs", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument(
        "--eval-every", dest="eval_every", type=int, default=None,
        help="steps between dev evaluations (0 = each epoch end)",
    )
    parser.add_argument("--arch", choices=list(ARCHITECTURES), default=None)
    parser.add_argument("--max-len", dest="max_len", type=int, default=None)
    parser.add_argument("--toy-hidden", dest="toy_hidden", type=int, default=None)
    parser.add_argument("--toy-layers", dest="toy_layers", type=int, default=None)
    parser.add_argument("--toy-heads", dest="toy_heads", type=int, default=None)
    parser.add_argument("--toy-ffn", dest="toy_ffn", type=int, default=None)


def _add_eval_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ckpt", default=None, help="checkpoint directory or backbone locator")
    parser.add_argument("--arch", choices=list(ARCHITECTURES), default=None)
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualsem",
        description="Dual-view sentence embeddings: train, evaluate, retrieve.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    train_parser = commands.add_parser("train", help="train a dual encoder")
    _add_train_flags(train_parser)
    _add_data_flags(train_parser)
    _add_out_flag(train_parser)
    train_parser.set_defaults(handler=cmd_train)

    eval_parser = commands.add_parser("eval", help="evaluate a trained encoder")
    eval_modes = eval_parser.add_subparsers(dest="mode", required=True)

    rte_parser = eval_modes.add_parser("rte", help="entailment accuracy per hypothesis class")
    _add_eval_flags(rte_parser)
    _add_data_flags(rte_parser, with_dev=True)
    rte_parser.add_argument("--test", default=None, help="test split JSONL")
    _add_out_flag(rte_parser)
    rte_parser.set_defaults(handler=cmd_eval_rte)

    eis_parser = eval_modes.add_parser("eis", help="pick the more implicit sentence in pairs")
    _add_eval_flags(eis_parser)
    _add_data_flags(eis_parser, with_dev=False)
    eis_parser.add_argument("--pairs", default=None, help="pairwise JSONL of sentence pairs")
    eis_parser.add_argument(
        "--baseline", choices=["length"], default=None,
        help="evaluate a model-free baseline instead of a checkpoint",
    )
    _add_out_flag(eis_parser)
    eis_parser.set_defaults(handler=cmd_eval_eis)

    ablate_parser = commands.add_parser("ablate", help="train and compare all loss variants")
    _add_train_flags(ablate_parser)
    _add_data_flags(ablate_parser)
    _add_out_flag(ablate_parser)
    ablate_parser.set_defaults(handler=cmd_ablate)

    retrieve_parser = commands.add_parser("retrieve", help="rank corpus hypotheses per query")
    retrieve_parser.add_argument("--ckpt", required=True)
    retrieve_parser.add_argument("--arch", choices=list(ARCHITECTURES), default=None)
    retrieve_parser.add_argument("--seed", type=int, default=0)
    retrieve_parser.add_argument("--query-file", dest="query_file", required=True)
    retrieve_parser.add_argument("--k", type=int, default=3)
    retrieve_parser.add_argument("--pool", choices=["all", "entailment"], default="all")
    _add_data_flags(retrieve_parser, with_dev=False)
    _add_out_flag(retrieve_parser)
    retrieve_parser.set_defaults(handler=cmd_retrieve)

    grid_parser = commands.add_parser("grid", help="sweep batch size and learning rate")
    _add_train_flags(grid_parser)
    _add_data_flags(grid_parser)
    grid_parser.add_argument(
        "--batch-sizes", dest="batch_sizes", type=int, nargs="+", default=None
    )
    grid_parser.add_argument(
        "--learning-rates", dest="learning_rates", type=float, nargs="+", default=None
    )
    _add_out_flag(grid_parser)
    grid_parser.set_defaults(handler=cmd_grid)

    synth_parser = commands.add_parser("make-synthetic", help="write a synthetic corpus")
    synth_parser.add_argument("--seed", type=int, default=0)
    synth_parser.add_argument("--train-size", dest="train_size", type=int, default=512)
    synth_parser.add_argument("--dev-size", dest="dev_size", type=int, default=128)
    synth_parser.add_argument("--test-size", dest="test_size", type=int, default=128)
    synth_parser.add_argument("--vocab-size", dest="vocab_size", type=int, default=60)
    _add_out_flag(synth_parser)
    synth_parser.set_defaults(handler=cmd_make_synthetic)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return 0 if code == 0 else 2
    try:
        return int(args.handler(args))
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except (CheckpointError, TrainingError, EvaluationError) as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 4


def entrypoint() -> None:
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()
