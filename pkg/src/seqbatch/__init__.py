"""Batch construction strategies for variable-length sequence training.

Plans epochs under four orderings (random, sorted, MXNet-style bucketing,
alternated sorted bins), cuts them into batches by count or frame budget,
and measures zero-padding waste, length variability and simulated
throughput/memory cost.
"""

from .batching import (
    Batch,
    BudgetPolicy,
    CountPolicy,
    EpochPlan,
    batch_by_count,
    batch_by_frame_budget,
    build_plan,
)
from .corpus import (
    Corpus,
    SyntheticSpec,
    Utterance,
    chunk_corpus,
    generate_synthetic,
    load_manifest,
    write_manifest,
)
from .errors import ConfigError, ManifestError, PlanningError, SeqbatchError
from .kernels import BACKEND
from .metrics import MetricsReport, aggregate, evaluate
from .scheduling import (
    AlternatedSpec,
    BucketSpec,
    Ordering,
    SameBinProbability,
    analytic_same_bin_probability,
    assign_bucket,
    plan_alternated,
    plan_bucketing,
    plan_random,
    plan_sorted,
    same_bin_probability,
)
from .simulator import CostModel, SimResult, simulate

__version__ = "0.1.0"

__all__ = [
    "AlternatedSpec", "BACKEND", "Batch", "BucketSpec", "BudgetPolicy", "ConfigError",
    "Corpus", "CostModel", "CountPolicy", "EpochPlan", "ManifestError", "MetricsReport",
    "Ordering", "PlanningError", "SameBinProbability", "SeqbatchError", "SimResult",
    "SyntheticSpec", "Utterance", "aggregate", "analytic_same_bin_probability",
    "assign_bucket", "batch_by_count", "batch_by_frame_budget", "build_plan",
    "chunk_corpus", "evaluate", "generate_synthetic", "load_manifest", "plan_alternated",
    "plan_bucketing", "plan_random", "plan_sorted", "same_bin_probability", "simulate",
    "write_manifest",
]
