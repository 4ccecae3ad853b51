"""Cost model: formulas, monotonicity, qualitative orderings."""

import pytest

from seqbatch import (
    AlternatedSpec,
    ConfigError,
    CostModel,
    SyntheticSpec,
    chunk_corpus,
    generate_synthetic,
    plan_alternated,
    plan_random,
    plan_sorted,
    simulate,
)
from seqbatch.batching import Batch, BudgetPolicy, EpochPlan, build_plan


def plan_of(batches, lengths):
    return EpochPlan(tuple(Batch.build(m, lengths) for m in batches), "test", {}, 0, 0)


class TestFormulas:
    def test_single_batch_direct_formula(self):
        plan = plan_of([range(10)], [10] * 10)  # padded frames: 100
        model = CostModel(per_frame_cost=1.0, per_batch_overhead=0.0, memory_per_frame=1.0)
        result = simulate(plan, model)
        assert result.sim_time == 100.0
        assert result.peak_memory == 100.0
        assert result.utterances_per_time == pytest.approx(0.1)

    def test_overhead_term(self):
        plan = plan_of([(0, 1), (2,)], [4, 4, 4])
        model = CostModel(per_frame_cost=2.0, per_batch_overhead=10.0, memory_per_frame=3.0)
        result = simulate(plan, model)
        assert result.sim_time == 10.0 * 2 + 2.0 * 12
        assert result.peak_memory == 3.0 * 8

    def test_doubling_frame_cost_halves_throughput(self):
        plan = plan_of([range(5)], [7] * 5)
        base = simulate(plan, CostModel(1.0, 1e-12, 1.0))
        double = simulate(plan, CostModel(2.0, 1e-12, 1.0))
        assert double.utterances_per_time == pytest.approx(base.utterances_per_time / 2)

    def test_invalid_model_rejected(self):
        with pytest.raises(ConfigError):
            CostModel(per_frame_cost=0.0)
        with pytest.raises(ConfigError):
            CostModel(memory_per_frame=-1.0)
        with pytest.raises(ConfigError):
            CostModel(per_batch_overhead=-0.5)

    def test_zero_overhead_allowed_for_formula_isolation(self):
        assert CostModel(per_batch_overhead=0.0).per_batch_overhead == 0.0


class TestMonotonicity:
    def test_added_waste_never_speeds_up(self):
        lengths = [5, 5, 9, 9]
        balanced = plan_of([(0, 1), (2, 3)], lengths)
        mixed = plan_of([(0, 2), (1, 3)], lengths)  # same members, more padding
        model = CostModel()
        fast = simulate(balanced, model)
        slow = simulate(mixed, model)
        assert slow.sim_time >= fast.sim_time
        assert slow.peak_memory >= fast.peak_memory
        assert slow.utterances_per_time <= fast.utterances_per_time


class TestQualitativeOrderings:
    SPEC = SyntheticSpec(1000, "lognormal", {"mu": 5.3, "sigma": 0.6})

    def test_sorted_alternated_random_time_ordering(self):
        policy = BudgetPolicy(5000, "padded")
        model = CostModel()
        totals = {"sorted": 0.0, "alternated": 0.0, "random": 0.0}
        for seed in range(10):
            corpus = generate_synthetic(self.SPEC, seed)
            totals["sorted"] += simulate(
                build_plan(plan_sorted(corpus), corpus, policy), model).sim_time
            totals["alternated"] += simulate(
                build_plan(plan_alternated(corpus, AlternatedSpec(64), seed), corpus, policy),
                model).sim_time
            totals["random"] += simulate(
                build_plan(plan_random(corpus, seed), corpus, policy), model).sim_time
        assert totals["sorted"] < totals["alternated"] < totals["random"]

    def test_smaller_chunks_raise_throughput_and_lower_memory(self):
        policy = BudgetPolicy(5000, "raw")
        model = CostModel()
        chunk_sizes = [10, 100, 500, None]
        per_seed_upt = []
        per_seed_peak = []
        for seed in range(10):
            base = generate_synthetic(self.SPEC, seed)
            upt = []
            peak = []
            for size in chunk_sizes:
                corpus = chunk_corpus(base, size) if size is not None else base
                sim = simulate(build_plan(plan_random(corpus, seed), corpus, policy), model)
                upt.append(sim.utterances_per_time)
                peak.append(sim.peak_memory)
            per_seed_upt.append(upt)
            per_seed_peak.append(peak)
        monotone_seeds = sum(
            all(a >= b for a, b in zip(upt, upt[1:])) for upt in per_seed_upt)
        assert monotone_seeds >= 9
        memory_seeds = sum(
            all(p < peak[-1] for p in peak[:-1]) for peak in per_seed_peak)
        assert memory_seeds >= 9


def test_simulate_rejects_empty_plan():
    with pytest.raises(ValueError):
        simulate(EpochPlan((), "test", {}, 0, 0), CostModel())


def test_throughput_decreases_with_padding_other_terms_fixed():
    lengths = [3, 3, 3, 9]
    tight = plan_of([(0, 1, 2), (3,)], lengths)
    wasteful = plan_of([(0, 1, 3), (2,)], lengths)
    model = CostModel()
    assert simulate(wasteful, model).utterances_per_time < \
        simulate(tight, model).utterances_per_time
