"""Cut an ordering into batches with exact padded-cost accounting.

Batching is deliberately orthogonal to the ordering strategies: both policies
(fixed member count, fixed frame budget) consume the given order without
reordering, so strategies can be compared fairly under the same policy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping, Sequence, Union

import numpy as np

from .errors import ConfigError, PlanningError
from .kernels import greedy_budget_ends

if TYPE_CHECKING:
    from .corpus import Corpus
    from .scheduling import Ordering

BUDGET_MODES = ("padded", "raw")


@dataclass(frozen=True)
class Batch:
    """Ordered corpus indices plus derived zero-padding costs.

    ``padded_frames`` is what a training step would compute on (every member
    extended to the longest member); ``wasted_frames`` is the zero-padded
    share of that.
    """

    members: tuple[int, ...]
    max_len: int
    real_frames: int
    padded_frames: int
    wasted_frames: int

    @classmethod
    def build(cls, members: Sequence[int], lengths: Sequence[int]) -> "Batch":
        members = tuple(int(i) for i in members)
        if not members:
            raise ValueError("batch must not be empty")
        member_lengths = [int(lengths[i]) for i in members]
        max_len = max(member_lengths)
        real = sum(member_lengths)
        padded = max_len * len(members)
        return cls(members, max_len, real, padded, padded - real)


@dataclass(frozen=True)
class CountPolicy:
    """Consecutive batches of a fixed member count (last one may be short)."""

    batch_size: int

    def describe(self) -> dict:
        return {"kind": "count", "batch_size": self.batch_size}


@dataclass(frozen=True)
class BudgetPolicy:
    """Greedy consecutive packing under a frame budget.

    ``padded`` mode bounds max length x member count (the cost-relevant
    quantity); ``raw`` mode bounds the plain frame sum.
    """

    budget: int
    mode: str = "padded"

    def describe(self) -> dict:
        return {"kind": "budget", "frame_budget": self.budget, "mode": self.mode}


BatchPolicy = Union[CountPolicy, BudgetPolicy]


@dataclass(frozen=True)
class EpochPlan:
    """One epoch's ordered batches; flattened members cover the corpus once."""

    batches: tuple[Batch, ...]
    strategy_tag: str
    config: Mapping
    seed: int
    epoch: int

    def flat_indices(self) -> np.ndarray:
        return np.asarray([i for batch in self.batches for i in batch.members], dtype=np.int64)

    @property
    def batch_count(self) -> int:
        return len(self.batches)

    @property
    def size(self) -> int:
        return sum(len(batch.members) for batch in self.batches)


def _validate_policy(policy: BatchPolicy) -> None:
    if isinstance(policy, CountPolicy):
        if policy.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {policy.batch_size}")
    elif isinstance(policy, BudgetPolicy):
        if policy.budget < 1:
            raise ConfigError(f"frame budget must be >= 1, got {policy.budget}")
        if policy.mode not in BUDGET_MODES:
            raise ConfigError(f"budget mode must be one of {BUDGET_MODES}, got {policy.mode!r}")
    else:
        raise ConfigError(f"unknown batch policy {policy!r}")


def check_budget_fits(corpus: "Corpus", budget: int) -> None:
    """Every utterance must fit a budget batch alone; name the first that does not."""
    if corpus.max_length > budget:
        for utt in corpus.utterances:
            if utt.length > budget:
                raise PlanningError(
                    f"frame budget {budget} is smaller than utterance "
                    f"{utt.id!r} of length {utt.length}"
                )


def batch_by_count(ordering: "Ordering", corpus: "Corpus", batch_size: int) -> EpochPlan:
    """Consecutive slices of ``batch_size`` indices; the final batch may be smaller."""
    policy = CountPolicy(batch_size)
    _validate_policy(policy)
    indices = ordering.indices
    lengths = corpus.lengths
    batches = tuple(
        Batch.build(indices[start:start + batch_size], lengths)
        for start in range(0, len(indices), batch_size)
    )
    return EpochPlan(batches, ordering.strategy_tag, {"policy": policy.describe()},
                     ordering.seed, ordering.epoch)


def batch_by_frame_budget(ordering: "Ordering", corpus: "Corpus", budget: int,
                          mode: str = "padded") -> EpochPlan:
    """Greedy consecutive packing: extend the current batch while it stays within budget."""
    policy = BudgetPolicy(budget, mode)
    _validate_policy(policy)
    check_budget_fits(corpus, budget)
    indices = ordering.indices
    ordered_lengths = corpus.lengths[indices]
    ends = greedy_budget_ends(ordered_lengths, budget, mode == "padded")
    lengths = corpus.lengths
    batches = []
    start = 0
    for end in ends.tolist():
        batches.append(Batch.build(indices[start:end], lengths))
        start = end
    return EpochPlan(tuple(batches), ordering.strategy_tag, {"policy": policy.describe()},
                     ordering.seed, ordering.epoch)


def build_plan(ordering: "Ordering", corpus: "Corpus", policy: BatchPolicy) -> EpochPlan:
    """Apply either batching policy to an ordering."""
    _validate_policy(policy)
    if isinstance(policy, CountPolicy):
        return batch_by_count(ordering, corpus, policy.batch_size)
    return batch_by_frame_budget(ordering, corpus, policy.budget, policy.mode)
