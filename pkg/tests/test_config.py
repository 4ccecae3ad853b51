"""Config parsing: strategies, policies, seeds, validation."""

import pytest

from seqbatch import ConfigError
from seqbatch.batching import BudgetPolicy, CountPolicy
from seqbatch.config import (
    AlternatedStrategy,
    BucketingStrategy,
    RandomStrategy,
    SortedStrategy,
    config_from_dict,
    parse_seeds,
    strategy_from_dict,
    strategy_from_flag,
)

BASE = {
    "corpus": {"synthetic": {"count": 10, "distribution": "uniform",
                             "params": {"min": 1, "max": 5}}},
    "strategies": [{"name": "random"}],
    "seeds": [0],
}


class TestStrategyParsing:
    def test_from_dict_variants(self):
        assert strategy_from_dict({"name": "random"}) == RandomStrategy()
        assert strategy_from_dict({"name": "sorted"}) == SortedStrategy("ascending")
        assert strategy_from_dict({"name": "bucketing", "width": 250}) == \
            BucketingStrategy(width=250)
        assert strategy_from_dict({"name": "bucketing", "boundaries": [10, 20]}) == \
            BucketingStrategy(boundaries=(10, 20))
        assert strategy_from_dict({"name": "alternated", "bins": 12}) == AlternatedStrategy(12)

    def test_from_flag_variants(self):
        assert strategy_from_flag("random") == RandomStrategy()
        assert strategy_from_flag("sorted:direction=descending") == SortedStrategy("descending")
        assert strategy_from_flag("alternated:bins=64") == AlternatedStrategy(64)
        assert strategy_from_flag("bucketing:width=250,selection=uniform") == \
            BucketingStrategy(width=250, selection="uniform")

    @pytest.mark.parametrize("entry", [
        {"name": "nope"},
        {"name": "alternated"},
        {"name": "bucketing"},
        {"name": "bucketing", "width": 10, "boundaries": [5]},
        {"name": "random", "extra": 1},
        {"direction": "ascending"},
    ])
    def test_invalid_dicts_rejected(self, entry):
        with pytest.raises(ConfigError):
            strategy_from_dict(entry)

    def test_invalid_flag_rejected(self):
        with pytest.raises(ConfigError):
            strategy_from_flag("alternated:bins")

    def test_labels(self):
        assert RandomStrategy().label() == "random"
        assert SortedStrategy("descending").label() == "sorted-descending"
        assert BucketingStrategy(width=250).label() == "bucketing-w250"
        assert AlternatedStrategy(8).label() == "alternated-n8"
        a = BucketingStrategy(boundaries=(10, 20)).label()
        b = BucketingStrategy(boundaries=(10, 21)).label()
        assert a != b and a.startswith("bucketing-x")


class TestSeedParsing:
    def test_accepted_forms(self):
        assert parse_seeds(5) == [5]
        assert parse_seeds("5") == [5]
        assert parse_seeds([1, 2, 3]) == [1, 2, 3]
        assert parse_seeds("3..6") == [3, 4, 5]

    @pytest.mark.parametrize("value", ["6..3", "3..3", "a..b", "x", [], -1, [-2], None, True])
    def test_rejected_forms(self, value):
        with pytest.raises(ConfigError):
            parse_seeds(value)


class TestConfigFromDict:
    def test_policy_variants(self):
        config = config_from_dict({**BASE, "batching": {"batch_size": 4}})
        assert config.policy == CountPolicy(4)
        config = config_from_dict({**BASE, "batching": {"frame_budget": 900, "mode": "raw"}})
        assert config.policy == BudgetPolicy(900, "raw")

    def test_default_policy_is_padded_budget(self):
        config = config_from_dict(BASE)
        assert config.policy == BudgetPolicy(5000, "padded")

    @pytest.mark.parametrize("batching", [
        {"batch_size": 4, "frame_budget": 100},
        {},
        {"batch_size": 4, "mode": "raw"},
        {"frame_budget": 100, "mode": "loose"},
    ])
    def test_bad_batching_rejected(self, batching):
        with pytest.raises(ConfigError):
            config_from_dict({**BASE, "batching": batching}).validate()

    def test_corpus_source_exclusive(self):
        with pytest.raises(ConfigError):
            config_from_dict({**BASE, "corpus": {}})
        with pytest.raises(ConfigError):
            config_from_dict({**BASE, "corpus": {"manifest": "x",
                                                 "synthetic": BASE["corpus"]["synthetic"]}})

    def test_duplicate_labels_rejected(self):
        config = config_from_dict({**BASE, "strategies": [
            {"name": "alternated", "bins": 8}, {"name": "alternated", "bins": 8}]})
        with pytest.raises(ConfigError, match="collide"):
            config.validate()

    def test_unknown_cost_model_key_rejected(self):
        with pytest.raises(ConfigError):
            config_from_dict({**BASE, "cost_model": {"per_frame": 2.0}})

    def test_describe_snapshot(self):
        config = config_from_dict({**BASE, "chunk_size": 50})
        snap = config.describe()
        assert snap["corpus"]["synthetic"]["count"] == 10
        assert snap["corpus"]["chunk_size"] == 50
        assert snap["batching"] == {"kind": "budget", "frame_budget": 5000, "mode": "padded"}
