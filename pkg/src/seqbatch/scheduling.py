"""Epoch ordering strategies: random, sorted, bucketing, alternated bins.

All randomness flows through the SplitMix64 kernel stream seeded from
(seed, epoch), so every planner is a pure, platform-independent function of
its arguments. Epochs get distinct but reproducible shuffles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .batching import Batch, BatchPolicy, BudgetPolicy, CountPolicy, EpochPlan, \
    _validate_policy, check_budget_fits
from .corpus import Corpus
from .errors import ConfigError, PlanningError
from .kernels import assign_buckets, bounded_u64, derive_state, fisher_yates, \
    same_bin_trials

SORT_DIRECTIONS = ("ascending", "descending")
BUCKET_SELECTIONS = ("weighted", "uniform")


@dataclass(eq=False)
class Ordering:
    """A permutation of corpus indices produced by one strategy for one epoch."""

    indices: np.ndarray
    strategy_tag: str
    epoch: int = 0
    seed: int = 0

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)

    def as_list(self) -> list[int]:
        return self.indices.tolist()


@dataclass(frozen=True)
class BucketSpec:
    """Half-open length ranges for MXNet-style bucketing.

    Either explicit ``boundaries`` (ascending upper edges: ranges [1, b0),
    [b0, b1), ..., [b_last, inf)) or a ``uniform_width`` w, which derives
    edges w+1, 2w+1, ... so width-w buckets cover 1..w, w+1..2w, and so on.
    """

    boundaries: tuple[int, ...] | None = None
    uniform_width: int | None = None

    def __post_init__(self):
        if (self.boundaries is None) == (self.uniform_width is None):
            raise ConfigError("bucket spec needs exactly one of boundaries or uniform_width")
        if self.boundaries is not None:
            object.__setattr__(self, "boundaries", tuple(int(b) for b in self.boundaries))
            if not self.boundaries:
                raise ConfigError("bucket boundaries must not be empty")
            if any(b < 1 for b in self.boundaries):
                raise ConfigError("bucket boundaries must be positive")
            if any(b >= c for b, c in zip(self.boundaries, self.boundaries[1:])):
                raise ConfigError("bucket boundaries must be strictly increasing")
        elif self.uniform_width < 1:
            raise ConfigError(f"uniform bucket width must be >= 1, got {self.uniform_width}")

    @classmethod
    def uniform(cls, width: int) -> "BucketSpec":
        return cls(uniform_width=width)

    def resolved_boundaries(self, max_length: int) -> np.ndarray:
        """Ascending upper edges covering every length up to ``max_length``."""
        if self.boundaries is not None:
            return np.asarray(self.boundaries, dtype=np.int64)
        width = self.uniform_width
        count = max(0, (max_length - 1) // width)
        return np.asarray([k * width + 1 for k in range(1, count + 1)], dtype=np.int64)

    def describe(self) -> dict:
        if self.uniform_width is not None:
            return {"uniform_width": self.uniform_width}
        return {"boundaries": list(self.boundaries)}


@dataclass(frozen=True)
class AlternatedSpec:
    """Bin count for the alternated-sorting strategy."""

    n_bins: int

    def __post_init__(self):
        if self.n_bins < 1:
            raise ConfigError(f"n_bins must be >= 1, got {self.n_bins}")


def _shuffled_indices(n: int, seed: int, epoch: int) -> tuple[np.ndarray, int]:
    state = derive_state(seed, epoch)
    indices = np.arange(n, dtype=np.int64)
    state = fisher_yates(indices, state)
    return indices, state


def plan_random(corpus: Corpus, seed: int, epoch: int = 0) -> Ordering:
    """Uniformly random permutation (seeded Fisher-Yates, epoch mixed in)."""
    indices, _ = _shuffled_indices(len(corpus), seed, epoch)
    return Ordering(indices, "random", epoch, seed)


def plan_sorted(corpus: Corpus, direction: str = "ascending") -> Ordering:
    """Indices ordered by length, ties broken by original corpus index.

    Identical output every epoch by construction.
    """
    if direction not in SORT_DIRECTIONS:
        raise ConfigError(f"direction must be one of {SORT_DIRECTIONS}, got {direction!r}")
    key = corpus.lengths if direction == "ascending" else -corpus.lengths
    indices = np.argsort(key, kind="stable").astype(np.int64)
    return Ordering(indices, "sorted")


def assign_bucket(length: int, spec: BucketSpec) -> int:
    """Index of the unique half-open bucket range containing ``length``."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    edges = spec.resolved_boundaries(length)
    return int(assign_buckets(np.asarray([length], dtype=np.int64), edges)[0])


def bin_sizes(total: int, n_bins: int) -> list[int]:
    """Near-equal contiguous partition; the first total % n_bins bins get one extra."""
    base, extra = divmod(total, n_bins)
    return [base + 1 if b < extra else base for b in range(n_bins)]


def alternate_sort_bins(shuffled: np.ndarray, lengths: np.ndarray, n_bins: int) -> np.ndarray:
    """Sort each contiguous bin of an index sequence by length, alternating direction.

    Bins are numbered from 1; odd bins ascend, even bins descend. Ties keep
    their order in the incoming (shuffled) sequence.
    """
    out = np.empty_like(shuffled)
    start = 0
    for b, size in enumerate(bin_sizes(len(shuffled), n_bins), start=1):
        segment = shuffled[start:start + size]
        segment_lengths = lengths[segment]
        if b % 2 == 1:
            order = np.argsort(segment_lengths, kind="stable")
        else:
            order = np.argsort(-segment_lengths, kind="stable")
        out[start:start + size] = segment[order]
        start += size
    return out


def plan_alternated(corpus: Corpus, spec: AlternatedSpec, seed: int, epoch: int = 0) -> Ordering:
    """Shuffle, partition into n_bins near-equal bins, sort bins in alternating order.

    With one bin this degenerates to a global ascending sort; with one bin per
    utterance it returns the shuffle itself.
    """
    if spec.n_bins > len(corpus):
        raise PlanningError(
            f"n_bins {spec.n_bins} exceeds corpus size {len(corpus)}"
        )
    shuffled, _ = _shuffled_indices(len(corpus), seed, epoch)
    indices = alternate_sort_bins(shuffled, corpus.lengths, spec.n_bins)
    return Ordering(indices, "alternated", epoch, seed)


def plan_bucketing(corpus: Corpus, spec: BucketSpec, policy: BatchPolicy, seed: int,
                   epoch: int = 0, selection: str = "weighted") -> EpochPlan:
    """Assign utterances to buckets, then draw each batch from one random bucket.

    Utterances within each bucket are shuffled once (seeded); a batch is the
    next consecutive span of unused sequences from a bucket chosen at random,
    by default with probability proportional to its remaining count
    (``selection="uniform"`` picks uniformly among non-exhausted buckets).
    The epoch covers every utterance exactly once; the final span from a
    bucket may fall short of the policy's size.
    """
    _validate_policy(policy)
    if selection not in BUCKET_SELECTIONS:
        raise ConfigError(f"selection must be one of {BUCKET_SELECTIONS}, got {selection!r}")
    if isinstance(policy, BudgetPolicy):
        check_budget_fits(corpus, policy.budget)

    lengths = corpus.lengths
    edges = spec.resolved_boundaries(corpus.max_length)
    bucket_of = assign_buckets(lengths, edges)
    n_buckets = len(edges) + 1

    # One global shuffle gives every bucket an independently shuffled queue
    # and keeps the single-bucket case identical to plan_random.
    order, state = _shuffled_indices(len(corpus), seed, epoch)
    queues: list[list[int]] = [[] for _ in range(n_buckets)]
    for idx in order.tolist():
        queues[bucket_of[idx]].append(idx)

    heads = [0] * n_buckets
    remaining = [len(q) for q in queues]
    total = len(corpus)
    batches = []
    while total > 0:
        if selection == "weighted":
            pick, state = bounded_u64(state, total - 1)
            bucket = 0
            acc = remaining[0]
            while acc <= pick:
                bucket += 1
                acc += remaining[bucket]
        else:
            nonempty = [b for b in range(n_buckets) if remaining[b] > 0]
            pick, state = bounded_u64(state, len(nonempty) - 1)
            bucket = nonempty[pick]
        queue, head = queues[bucket], heads[bucket]
        if isinstance(policy, CountPolicy):
            take = min(policy.batch_size, remaining[bucket])
        else:
            # Greedy first span only; walking past the overflow point would
            # waste O(remaining) work per draw.
            padded = policy.mode == "padded"
            span_max = int(lengths[queue[head]])
            span_sum = span_max
            take = 1
            while take < remaining[bucket]:
                nxt = int(lengths[queue[head + take]])
                cost = max(span_max, nxt) * (take + 1) if padded else span_sum + nxt
                if cost > policy.budget:
                    break
                span_max = max(span_max, nxt)
                span_sum += nxt
                take += 1
        batches.append(Batch.build(queue[head:head + take], lengths))
        heads[bucket] += take
        remaining[bucket] -= take
        total -= take

    config = {"bucket_spec": spec.describe(), "selection": selection,
              "policy": policy.describe()}
    return EpochPlan(tuple(batches), "bucketing", config, seed, epoch)


@dataclass(frozen=True)
class SameBinProbability:
    """Monte Carlo estimate that two fixed sequences share a bin, with references.

    ``analytic`` is the exact probability for the realized near-equal
    partition (sum of s*(s-1) over bin sizes s, divided by M*(M-1));
    ``reference_value`` is 1/(N*(N-1)), reported alongside for comparison and
    never asserted.
    """

    corpus_size: int
    n_bins: int
    trials: int
    hits: int
    estimate: float
    std_error: float
    analytic: float
    reference_value: float | None


def analytic_same_bin_probability(corpus_size: int, n_bins: int) -> float:
    """Exact same-bin probability for two fixed items under the random partition."""
    sizes = bin_sizes(corpus_size, n_bins)
    pairs = sum(s * (s - 1) for s in sizes)
    return pairs / (corpus_size * (corpus_size - 1))


def same_bin_probability(corpus_size: int, n_bins: int, trials: int,
                         seed: int) -> SameBinProbability:
    """Estimate the same-bin probability by simulating shuffle-then-partition.

    Trial counts merge associatively, so sweeps can shard trials across
    workers and sum the hits.
    """
    if corpus_size < 2:
        raise PlanningError(f"corpus_size must be >= 2, got {corpus_size}")
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    if n_bins < 1:
        raise ConfigError(f"n_bins must be >= 1, got {n_bins}")
    if n_bins > corpus_size:
        raise PlanningError(f"n_bins {n_bins} exceeds corpus_size {corpus_size}")
    hits, _ = same_bin_trials(corpus_size, n_bins, trials, derive_state(seed))
    estimate = hits / trials
    std_error = math.sqrt(estimate * (1.0 - estimate) / trials)
    reference = 1.0 / (n_bins * (n_bins - 1)) if n_bins >= 2 else None
    return SameBinProbability(
        corpus_size=corpus_size,
        n_bins=n_bins,
        trials=trials,
        hits=hits,
        estimate=estimate,
        std_error=std_error,
        analytic=analytic_same_bin_probability(corpus_size, n_bins),
        reference_value=reference,
    )
