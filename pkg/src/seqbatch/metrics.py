"""Padding, variability and summary statistics for epoch plans.

Standard deviations are population deviations throughout (batches of size 1
are legal). The padding ratio is the wasted share of padded frames, i.e. the
fraction of compute spent on zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .batching import EpochPlan
from .corpus import Corpus
from .errors import PlanningError

# Serialization order for reports (CSV columns and JSON keys).
REPORT_FIELDS = (
    "total_padded_frames",
    "total_real_frames",
    "padding_ratio",
    "mean_intra_batch_std",
    "inter_batch_std",
    "batch_count",
    "max_batch_padded_frames",
)


@dataclass(frozen=True)
class MetricsReport:
    total_padded_frames: int
    total_real_frames: int
    padding_ratio: float
    mean_intra_batch_std: float
    inter_batch_std: float
    batch_count: int
    max_batch_padded_frames: int

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in REPORT_FIELDS}


def _population_std(values: Sequence[float]) -> float:
    n = len(values)
    mean = sum(values) / n
    return math.sqrt(sum((v - mean) ** 2 for v in values) / n)


def evaluate(plan: EpochPlan, corpus: Corpus) -> MetricsReport:
    """Compute the full metrics report for a plan over its corpus.

    Validates that the plan's flattened members are a permutation of the
    corpus indices before computing anything.
    """
    n = len(corpus)
    flat = plan.flat_indices()
    if len(flat) != n:
        raise PlanningError(f"plan covers {len(flat)} members for a corpus of {n}")
    if len(flat) > 0 and (flat.min() < 0 or flat.max() >= n):
        raise PlanningError("plan contains out-of-range corpus indices")
    if np.any(np.bincount(flat, minlength=n) != 1):
        raise PlanningError("plan members are not a permutation of corpus indices")

    lengths = corpus.lengths
    total_padded = 0
    total_real = 0
    max_padded = 0
    batch_stds = []
    batch_means = []
    for batch in plan.batches:
        member_lengths = [int(lengths[i]) for i in batch.members]
        count = len(member_lengths)
        padded = max(member_lengths) * count
        real = sum(member_lengths)
        total_padded += padded
        total_real += real
        max_padded = max(max_padded, padded)
        batch_stds.append(_population_std(member_lengths))
        batch_means.append(real / count)

    return MetricsReport(
        total_padded_frames=total_padded,
        total_real_frames=total_real,
        padding_ratio=(total_padded - total_real) / total_padded,
        mean_intra_batch_std=sum(batch_stds) / len(batch_stds),
        inter_batch_std=_population_std(batch_means),
        batch_count=len(plan.batches),
        max_batch_padded_frames=max_padded,
    )


@dataclass(frozen=True)
class FieldStats:
    mean: float
    std: float
    min: float
    max: float


@dataclass(frozen=True)
class AggregateSummary:
    """Elementwise mean/std/min/max over a list of reports."""

    count: int
    fields: dict

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "fields": {
                name: {"mean": s.mean, "std": s.std, "min": s.min, "max": s.max}
                for name, s in self.fields.items()
            },
        }


def aggregate(reports: Iterable[MetricsReport]) -> AggregateSummary:
    """Summarize each report field over a non-empty list of reports."""
    reports = list(reports)
    if not reports:
        raise ValueError("cannot aggregate an empty list of reports")
    fields = {}
    for name in REPORT_FIELDS:
        values = [getattr(r, name) for r in reports]
        fields[name] = FieldStats(
            mean=sum(values) / len(values),
            std=_population_std(values),
            min=min(values),
            max=max(values),
        )
    return AggregateSummary(count=len(reports), fields=fields)


def intra_bin_variance_trend(corpus: Corpus, bin_counts: Sequence[int], seeds: Sequence[int]):
    """Measure mean within-bin length variance versus bin count.

    Returns (fitted log-log slope, {n_bins: seed-averaged mean variance}).
    The slope is reported as an observation; no specific decay law is
    asserted anywhere in the package.
    """
    from .kernels import derive_state, fisher_yates
    from .scheduling import bin_sizes

    measured = {}
    for n_bins in bin_counts:
        totals = []
        for seed in seeds:
            indices = np.arange(len(corpus), dtype=np.int64)
            fisher_yates(indices, derive_state(seed, 0))
            shuffled_lengths = corpus.lengths[indices]
            start = 0
            variances = []
            for size in bin_sizes(len(corpus), n_bins):
                segment = shuffled_lengths[start:start + size]
                variances.append(float(np.var(segment)))
                start += size
            totals.append(sum(variances) / len(variances))
        measured[n_bins] = sum(totals) / len(totals)

    xs = np.log(np.asarray(list(measured.keys()), dtype=float))
    ys = np.log(np.asarray([max(v, 1e-300) for v in measured.values()]))
    slope = float(np.polyfit(xs, ys, 1)[0]) if len(xs) > 1 else 0.0
    return slope, measured
