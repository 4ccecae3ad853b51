"""Run configuration: corpus source, strategies, batching policy, sweeps.

Configs live in a single JSON document; CLI flags override individual
fields. Strategy entries dispatch to the planners and know how to label
their output files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .batching import BatchPolicy, BudgetPolicy, CountPolicy, EpochPlan, build_plan, \
    _validate_policy
from .corpus import Corpus, SyntheticSpec, chunk_corpus, generate_synthetic, load_manifest
from .errors import ConfigError
from .kernels import mix64
from .scheduling import (
    AlternatedSpec,
    BucketSpec,
    plan_alternated,
    plan_bucketing,
    plan_random,
    plan_sorted,
)
from .simulator import CostModel


@dataclass(frozen=True)
class RandomStrategy:
    def label(self) -> str:
        return "random"

    def describe(self) -> dict:
        return {"name": "random"}

    def plan(self, corpus: Corpus, policy: BatchPolicy, seed: int, epoch: int) -> EpochPlan:
        return build_plan(plan_random(corpus, seed, epoch), corpus, policy)


@dataclass(frozen=True)
class SortedStrategy:
    direction: str = "ascending"

    def label(self) -> str:
        return f"sorted-{self.direction}"

    def describe(self) -> dict:
        return {"name": "sorted", "direction": self.direction}

    def plan(self, corpus: Corpus, policy: BatchPolicy, seed: int, epoch: int) -> EpochPlan:
        ordering = plan_sorted(corpus, self.direction)
        # The sorted ordering ignores the sweep seed; record it anyway so
        # report rows and file names stay consistent across strategies.
        ordering.seed = seed
        ordering.epoch = epoch
        return build_plan(ordering, corpus, policy)


@dataclass(frozen=True)
class BucketingStrategy:
    width: int | None = None
    boundaries: tuple[int, ...] | None = None
    selection: str = "weighted"

    def spec(self) -> BucketSpec:
        if self.width is not None:
            return BucketSpec.uniform(self.width)
        return BucketSpec(boundaries=self.boundaries)

    def label(self) -> str:
        if self.width is not None:
            return f"bucketing-w{self.width}"
        digest = 0
        for b in self.boundaries:
            digest = mix64(digest ^ b)
        return f"bucketing-x{digest & 0xFFFFFFFF:08x}"

    def describe(self) -> dict:
        out = {"name": "bucketing", "selection": self.selection}
        out.update(self.spec().describe())
        return out

    def plan(self, corpus: Corpus, policy: BatchPolicy, seed: int, epoch: int) -> EpochPlan:
        return plan_bucketing(corpus, self.spec(), policy, seed, epoch, self.selection)


@dataclass(frozen=True)
class AlternatedStrategy:
    bins: int = 8

    def label(self) -> str:
        return f"alternated-n{self.bins}"

    def describe(self) -> dict:
        return {"name": "alternated", "bins": self.bins}

    def plan(self, corpus: Corpus, policy: BatchPolicy, seed: int, epoch: int) -> EpochPlan:
        ordering = plan_alternated(corpus, AlternatedSpec(self.bins), seed, epoch)
        return build_plan(ordering, corpus, policy)


Strategy = RandomStrategy | SortedStrategy | BucketingStrategy | AlternatedStrategy


def trace_indices(strategy: Strategy, corpus: Corpus, policy: BatchPolicy, seed: int,
                  epoch: int) -> np.ndarray:
    """Sequence positions to trace for a strategy.

    For bucketing the realized batch sequence is traced (batches are drawn
    bucket by bucket, so only the realized order is meaningful); for the
    other strategies the ordering itself, which is batching-independent.
    """
    if isinstance(strategy, BucketingStrategy):
        return strategy.plan(corpus, policy, seed, epoch).flat_indices()
    if isinstance(strategy, SortedStrategy):
        return plan_sorted(corpus, strategy.direction).indices
    if isinstance(strategy, AlternatedStrategy):
        return plan_alternated(corpus, AlternatedSpec(strategy.bins), seed, epoch).indices
    return plan_random(corpus, seed, epoch).indices


def _require_keys(mapping: Mapping, allowed: Sequence[str], context: str) -> None:
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown {context} keys: {unknown} (allowed: {sorted(allowed)})")


def strategy_from_dict(entry: Mapping) -> Strategy:
    if "name" not in entry:
        raise ConfigError(f"strategy entry needs a 'name': {entry!r}")
    name = entry["name"]
    if name == "random":
        _require_keys(entry, ("name",), "random strategy")
        return RandomStrategy()
    if name == "sorted":
        _require_keys(entry, ("name", "direction"), "sorted strategy")
        return SortedStrategy(direction=entry.get("direction", "ascending"))
    if name == "bucketing":
        _require_keys(entry, ("name", "width", "boundaries", "selection"), "bucketing strategy")
        width = entry.get("width")
        boundaries = entry.get("boundaries")
        if (width is None) == (boundaries is None):
            raise ConfigError("bucketing strategy needs exactly one of width or boundaries")
        return BucketingStrategy(
            width=int(width) if width is not None else None,
            boundaries=tuple(int(b) for b in boundaries) if boundaries is not None else None,
            selection=entry.get("selection", "weighted"),
        )
    if name == "alternated":
        _require_keys(entry, ("name", "bins"), "alternated strategy")
        if "bins" not in entry:
            raise ConfigError("alternated strategy needs 'bins'")
        return AlternatedStrategy(bins=int(entry["bins"]))
    raise ConfigError(f"unknown strategy name {name!r}")


def strategy_from_flag(text: str) -> Strategy:
    """Parse ``name[:key=value,...]`` strategy flags."""
    name, _, params_text = text.partition(":")
    entry: dict = {"name": name.strip()}
    if params_text:
        for pair in params_text.split(","):
            key, sep, value = pair.partition("=")
            if not sep:
                raise ConfigError(f"strategy parameter {pair!r} is not key=value")
            key = key.strip()
            value = value.strip()
            entry[key] = int(value) if value.lstrip("-").isdigit() else value
    return strategy_from_dict(entry)


def parse_seeds(value) -> list[int]:
    """Accept a single seed, a list of seeds, or an ``a..b`` half-open range."""
    if isinstance(value, bool):
        raise ConfigError(f"invalid seeds value {value!r}")
    if isinstance(value, int):
        seeds = [value]
    elif isinstance(value, str):
        first, sep, last = value.partition("..")
        if not sep:
            try:
                seeds = [int(value)]
            except ValueError:
                raise ConfigError(f"invalid seeds value {value!r}") from None
        else:
            try:
                start, stop = int(first), int(last)
            except ValueError:
                raise ConfigError(f"invalid seed range {value!r}") from None
            if stop <= start:
                raise ConfigError(f"empty seed range {value!r} (use start..stop with stop > start)")
            seeds = list(range(start, stop))
    elif isinstance(value, list):
        seeds = [int(v) for v in value]
    else:
        raise ConfigError(f"invalid seeds value {value!r}")
    if not seeds:
        raise ConfigError("at least one seed is required")
    if any(s < 0 for s in seeds):
        raise ConfigError("seeds must be non-negative")
    return seeds


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI invocation needs."""

    manifest: str | None = None
    synthetic: SyntheticSpec | None = None
    chunk_size: int | None = None
    strategies: tuple[Strategy, ...] = ()
    policy: BatchPolicy = field(default_factory=lambda: BudgetPolicy(5000, "padded"))
    seeds: tuple[int, ...] = (0,)
    epochs: int = 1
    out_dir: str | None = None
    cost_model: CostModel = field(default_factory=CostModel)

    def validate(self) -> None:
        if (self.manifest is None) == (self.synthetic is None):
            raise ConfigError("config needs exactly one corpus source (manifest or synthetic)")
        if not self.strategies:
            raise ConfigError("config needs at least one strategy")
        _validate_policy(self.policy)
        if not self.seeds:
            raise ConfigError("config needs at least one seed")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.chunk_size is not None and self.chunk_size < 1:
            raise ConfigError(f"chunk_size must be >= 1, got {self.chunk_size}")
        labels = [s.label() for s in self.strategies]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"strategy labels collide: {labels}")

    def corpus_for_seed(self, seed: int) -> Corpus:
        """Synthetic corpora are drawn per sweep seed; manifests are fixed."""
        if self.manifest is not None:
            corpus = load_manifest(self.manifest)
        else:
            corpus = generate_synthetic(self.synthetic, seed)
        if self.chunk_size is not None:
            corpus = chunk_corpus(corpus, self.chunk_size)
        return corpus

    def describe(self) -> dict:
        corpus: dict = {"manifest": self.manifest} if self.manifest is not None else {
            "synthetic": {
                "count": self.synthetic.count,
                "distribution": self.synthetic.distribution,
                "params": dict(self.synthetic.params),
                "length_cap": self.synthetic.length_cap,
            }
        }
        if self.chunk_size is not None:
            corpus["chunk_size"] = self.chunk_size
        return {"corpus": corpus, "batching": self.policy.describe()}


_CONFIG_KEYS = ("corpus", "strategies", "batching", "seeds", "epochs", "out", "cost_model",
                "chunk_size")


def _policy_from_dict(entry: Mapping) -> BatchPolicy:
    _require_keys(entry, ("batch_size", "frame_budget", "mode"), "batching")
    has_count = "batch_size" in entry
    has_budget = "frame_budget" in entry
    if has_count == has_budget:
        raise ConfigError("batching needs exactly one of batch_size or frame_budget")
    if has_count:
        if "mode" in entry:
            raise ConfigError("batching mode only applies to frame_budget")
        return CountPolicy(int(entry["batch_size"]))
    return BudgetPolicy(int(entry["frame_budget"]), entry.get("mode", "padded"))


def _synthetic_from_dict(entry: Mapping) -> SyntheticSpec:
    _require_keys(entry, ("count", "distribution", "params", "length_cap"), "synthetic corpus")
    for key in ("count", "distribution", "params"):
        if key not in entry:
            raise ConfigError(f"synthetic corpus needs {key!r}")
    spec = SyntheticSpec(
        count=int(entry["count"]),
        distribution=entry["distribution"],
        params=dict(entry["params"]),
        length_cap=int(entry["length_cap"]) if entry.get("length_cap") is not None else None,
    )
    spec.validate()
    return spec


def config_from_dict(data: Mapping) -> RunConfig:
    _require_keys(data, _CONFIG_KEYS, "config")
    manifest = None
    synthetic = None
    if "corpus" in data:
        corpus_entry = data["corpus"]
        _require_keys(corpus_entry, ("manifest", "synthetic"), "corpus")
        if ("manifest" in corpus_entry) == ("synthetic" in corpus_entry):
            raise ConfigError("corpus needs exactly one of manifest or synthetic")
        if "manifest" in corpus_entry:
            manifest = corpus_entry["manifest"]
        else:
            synthetic = _synthetic_from_dict(corpus_entry["synthetic"])

    strategies = tuple(strategy_from_dict(e) for e in data.get("strategies", ()))
    policy = _policy_from_dict(data["batching"]) if "batching" in data else BudgetPolicy(5000)
    seeds = tuple(parse_seeds(data["seeds"])) if "seeds" in data else (0,)
    cost_entry = data.get("cost_model", {})
    _require_keys(cost_entry, ("per_frame_cost", "per_batch_overhead", "memory_per_frame"),
                  "cost_model")
    cost_model = CostModel(
        per_frame_cost=float(cost_entry.get("per_frame_cost", 1.0)),
        per_batch_overhead=float(cost_entry.get("per_batch_overhead", 50.0)),
        memory_per_frame=float(cost_entry.get("memory_per_frame", 1.0)),
    )
    return RunConfig(
        manifest=manifest,
        synthetic=synthetic,
        chunk_size=int(data["chunk_size"]) if data.get("chunk_size") is not None else None,
        strategies=strategies,
        policy=policy,
        seeds=seeds,
        epochs=int(data.get("epochs", 1)),
        out_dir=data.get("out"),
        cost_model=cost_model,
    )


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    return config_from_dict(data)
