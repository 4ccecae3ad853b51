"""Command-line harness: plan, compare, trace, probability, synth.

Exit codes are a stable contract: 0 success, 2 invalid configuration,
3 planning or runtime failure. All outputs are byte-deterministic for a
fixed config and seed.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from typing import Sequence

from .batching import BudgetPolicy, CountPolicy
from .config import (
    RunConfig,
    config_from_dict,
    load_config,
    parse_seeds,
    strategy_from_flag,
    trace_indices,
)
from .errors import ConfigError, ManifestError, PlanningError, SeqbatchError
from .corpus import write_manifest
from .metrics import evaluate
from .scheduling import same_bin_probability
from .simulator import simulate

COMPARE_COLUMNS = ("strategy", "seed", "epoch", "batch_count", "total_real_frames",
                   "total_padded_frames", "padding_ratio", "mean_intra_batch_std",
                   "inter_batch_std", "max_batch_padded_frames", "sim_time",
                   "utterances_per_time", "peak_memory")
_NUMERIC_COLUMNS = COMPARE_COLUMNS[3:]
_INT_COLUMNS = {"seed", "epoch", "batch_count", "total_real_frames", "total_padded_frames",
                "max_batch_padded_frames"}


def format_value(value) -> str:
    """Floats carry 9 significant digits; integers and labels print exactly."""
    if isinstance(value, bool):
        raise TypeError("unexpected bool in report")
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return format(value, ".9g")


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _write_json(path: str, obj) -> None:
    _write_text(path, json.dumps(obj, indent=2) + "\n")


def _plan_filename(label: str, seed: int, epoch: int) -> str:
    return f"{label}_{seed}_{epoch}.plan.json"


def _iter_plans(config: RunConfig):
    """Yield (strategy, seed, epoch, corpus, plan) in deterministic sweep order."""
    for seed in config.seeds:
        corpus = config.corpus_for_seed(seed)
        for strategy in config.strategies:
            for epoch in range(config.epochs):
                try:
                    plan = strategy.plan(corpus, config.policy, seed, epoch)
                except PlanningError as exc:
                    raise PlanningError(f"strategy {strategy.label()}: {exc}") from exc
                yield strategy, seed, epoch, corpus, plan


def cmd_plan(config: RunConfig) -> int:
    if config.out_dir is None:
        raise ConfigError("plan requires an output directory (--out)")
    os.makedirs(config.out_dir, exist_ok=True)
    base = config.describe()
    count = 0
    for strategy, seed, epoch, _, plan in _iter_plans(config):
        doc = {
            "strategy": strategy.label(),
            "seed": seed,
            "epoch": epoch,
            "config": {**base, "strategy": strategy.describe()},
            "batches": [list(batch.members) for batch in plan.batches],
        }
        _write_json(os.path.join(config.out_dir, _plan_filename(strategy.label(), seed, epoch)),
                    doc)
        count += 1
    print(f"wrote {count} plan file(s) to {config.out_dir}")
    return 0


def _field_stats(values: list) -> dict:
    n = len(values)
    mean = sum(values) / n
    std = (sum((v - mean) ** 2 for v in values) / n) ** 0.5
    return {"mean": mean, "std": std, "min": min(values), "max": max(values)}


def cmd_compare(config: RunConfig) -> int:
    if config.out_dir is None:
        raise ConfigError("compare requires an output directory (--out)")
    if len(config.strategies) < 2:
        raise ConfigError("compare requires at least two strategies")
    os.makedirs(config.out_dir, exist_ok=True)

    rows = []
    for strategy, seed, epoch, corpus, plan in _iter_plans(config):
        report = evaluate(plan, corpus)
        sim = simulate(plan, config.cost_model)
        row = {"strategy": strategy.label(), "seed": seed, "epoch": epoch}
        row.update(report.to_dict())
        row.update(sim.to_dict())
        rows.append(row)

    detail_lines = [",".join(COMPARE_COLUMNS)]
    for row in rows:
        detail_lines.append(",".join(format_value(row[col]) for col in COMPARE_COLUMNS))
    _write_text(os.path.join(config.out_dir, "compare.csv"), "\n".join(detail_lines) + "\n")

    summary: dict[str, dict] = {}
    for strategy in config.strategies:
        label = strategy.label()
        mine = [row for row in rows if row["strategy"] == label]
        summary[label] = {
            "rows": len(mine),
            "fields": {col: _field_stats([row[col] for row in mine]) for col in _NUMERIC_COLUMNS},
        }

    summary_columns = ["strategy", "rows"]
    for col in _NUMERIC_COLUMNS:
        summary_columns += [f"{col}_mean", f"{col}_std", f"{col}_min", f"{col}_max"]
    summary_lines = [",".join(summary_columns)]
    for label, entry in summary.items():
        cells = [label, str(entry["rows"])]
        for col in _NUMERIC_COLUMNS:
            stats = entry["fields"][col]
            cells += [format_value(stats[key]) for key in ("mean", "std", "min", "max")]
        summary_lines.append(",".join(cells))
    _write_text(os.path.join(config.out_dir, "compare_summary.csv"),
                "\n".join(summary_lines) + "\n")

    _write_json(os.path.join(config.out_dir, "compare.json"),
                {"config": config.describe(), "rows": rows, "summary": summary})
    print(f"wrote {len(rows)} detail row(s) and {len(summary)} summary row(s) to {config.out_dir}")
    return 0


def cmd_trace(config: RunConfig) -> int:
    if config.out_dir is None:
        raise ConfigError("trace requires an output directory (--out)")
    os.makedirs(config.out_dir, exist_ok=True)
    seed = config.seeds[0]
    corpus = config.corpus_for_seed(seed)
    lines = ["strategy,position,length"]
    for strategy in config.strategies:
        try:
            indices = trace_indices(strategy, corpus, config.policy, seed, epoch=0)
        except PlanningError as exc:
            raise PlanningError(f"strategy {strategy.label()}: {exc}") from exc
        label = strategy.label()
        lengths = corpus.lengths
        for position, idx in enumerate(indices.tolist()):
            lines.append(f"{label},{position},{int(lengths[idx])}")
    path = os.path.join(config.out_dir, "trace.csv")
    _write_text(path, "\n".join(lines) + "\n")
    print(f"wrote ordering trace for {len(config.strategies)} strategies to {path}")
    return 0


def cmd_probability(corpus_size: int, n_bins: int, trials: int, seed: int) -> int:
    result = same_bin_probability(corpus_size, n_bins, trials, seed)
    print(f"corpus_size: {result.corpus_size}")
    print(f"n_bins: {result.n_bins}")
    print(f"trials: {result.trials}")
    print(f"empirical_probability: {format_value(result.estimate)}")
    print(f"standard_error: {format_value(result.std_error)}")
    print(f"analytic_probability: {format_value(result.analytic)}")
    if result.reference_value is None:
        print("reference_1_over_n_(n-1): n/a (n_bins < 2)")
    else:
        print(f"reference_1_over_n_(n-1): {format_value(result.reference_value)}")
    return 0


def cmd_synth(config: RunConfig, out_path: str) -> int:
    if config.synthetic is None:
        raise ConfigError("synth requires a synthetic corpus source")
    seed = config.seeds[0]
    corpus = config.corpus_for_seed(seed)
    if os.path.isdir(out_path):
        out_path = os.path.join(out_path, "synthetic.tsv")
    parent = os.path.dirname(out_path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    write_manifest(corpus, out_path)
    print(f"wrote {len(corpus)} utterances ({corpus.total_frames} frames) to {out_path}")
    return 0


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--out", help="output directory (synth: output file)")
    parser.add_argument("--seed", type=int, help="single sweep seed")
    parser.add_argument("--seeds", help="seed range a..b (half-open) or single seed")
    parser.add_argument("--epochs", type=int, help="epochs per (strategy, seed)")
    parser.add_argument("--strategy", action="append", metavar="NAME[:K=V,...]",
                        help="strategy, repeatable; replaces the config's list")
    parser.add_argument("--batch-size", type=int, help="fixed-count batching policy")
    parser.add_argument("--frame-budget", type=int, help="frame-budget batching policy")
    parser.add_argument("--budget-mode", choices=("padded", "raw"),
                        help="cost bounded by the frame budget")
    parser.add_argument("--chunk-size", type=int,
                        help="split utterances into chunks of at most this many frames")


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    config = load_config(args.config) if args.config else config_from_dict({})
    overrides: dict = {}
    if args.seed is not None and args.seeds is not None:
        raise ConfigError("--seed and --seeds are mutually exclusive")
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed must be non-negative")
        overrides["seeds"] = (args.seed,)
    if args.seeds is not None:
        overrides["seeds"] = tuple(parse_seeds(args.seeds))
    if args.epochs is not None:
        overrides["epochs"] = args.epochs
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.strategy:
        overrides["strategies"] = tuple(strategy_from_flag(s) for s in args.strategy)
    if args.batch_size is not None and args.frame_budget is not None:
        raise ConfigError("--batch-size and --frame-budget are mutually exclusive")
    if args.batch_size is not None:
        overrides["policy"] = CountPolicy(args.batch_size)
    elif args.frame_budget is not None:
        overrides["policy"] = BudgetPolicy(args.frame_budget, args.budget_mode or "padded")
    elif args.budget_mode is not None:
        if not isinstance(config.policy, BudgetPolicy):
            raise ConfigError("--budget-mode requires a frame-budget policy")
        overrides["policy"] = BudgetPolicy(config.policy.budget, args.budget_mode)
    if args.chunk_size is not None:
        overrides["chunk_size"] = args.chunk_size
    if overrides:
        config = dataclasses.replace(config, **overrides)
    config.validate()
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqbatch",
        description="Compare batch construction strategies for variable-length sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("plan", "write one epoch plan JSON per (strategy, seed, epoch)"),
        ("compare", "run all strategies and write metric/simulation reports"),
        ("trace", "write the (strategy, position, length) ordering trace CSV"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common_flags(p)
        p.set_defaults(command=name)

    p = sub.add_parser("probability", help="estimate the same-bin probability for a bin count")
    p.add_argument("--corpus-size", type=int, required=True)
    p.add_argument("--bins", type=int, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(command="probability")

    p = sub.add_parser("synth", help="write a synthetic corpus manifest")
    _add_common_flags(p)
    p.set_defaults(command="synth")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "probability":
            return cmd_probability(args.corpus_size, args.bins, args.trials, args.seed)
        config = _resolve_config(args)
        if args.command == "plan":
            return cmd_plan(config)
        if args.command == "compare":
            return cmd_compare(config)
        if args.command == "trace":
            return cmd_trace(config)
        if args.command == "synth":
            if args.out is None:
                raise ConfigError("synth requires an output path (--out)")
            return cmd_synth(config, args.out)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ManifestError, PlanningError, SeqbatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
