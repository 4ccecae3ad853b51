"""Linear cost model mapping epoch plans to throughput and memory proxies.

Simulated time is per-batch overhead times batch count plus a per-frame cost
over all padded frames; peak memory is proportional to the largest batch's
padded frames. Only orderings between strategies are meaningful, not the
absolute magnitudes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .batching import EpochPlan
from .errors import ConfigError

SIM_FIELDS = ("sim_time", "utterances_per_time", "peak_memory")


@dataclass(frozen=True)
class CostModel:
    per_frame_cost: float = 1.0
    per_batch_overhead: float = 50.0
    memory_per_frame: float = 1.0

    def __post_init__(self):
        for name in ("per_frame_cost", "memory_per_frame"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"cost model parameter {name} must be > 0")
        # Zero overhead is legal: it isolates the per-frame term.
        if self.per_batch_overhead < 0:
            raise ConfigError("cost model parameter per_batch_overhead must be >= 0")


@dataclass(frozen=True)
class SimResult:
    sim_time: float
    utterances_per_time: float
    peak_memory: float

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in SIM_FIELDS}


def simulate(plan: EpochPlan, model: CostModel = CostModel()) -> SimResult:
    """Evaluate the cost model on a plan."""
    if not plan.batches:
        raise ValueError("cannot simulate an empty plan")
    total_padded = sum(batch.padded_frames for batch in plan.batches)
    max_padded = max(batch.padded_frames for batch in plan.batches)
    sim_time = model.per_batch_overhead * plan.batch_count + model.per_frame_cost * total_padded
    return SimResult(
        sim_time=sim_time,
        utterances_per_time=plan.size / sim_time,
        peak_memory=model.memory_per_frame * max_padded,
    )
