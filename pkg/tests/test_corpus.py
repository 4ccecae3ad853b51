"""Corpus loading, synthesis and chunking."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqbatch import (
    ConfigError,
    Corpus,
    ManifestError,
    SyntheticSpec,
    Utterance,
    chunk_corpus,
    generate_synthetic,
    load_manifest,
    write_manifest,
)
from seqbatch.corpus import inverse_normal_cdf

from helpers import corpus_from_lengths


def write(tmp_path, text, name="corpus.tsv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestManifest:
    def test_load_basic(self, tmp_path):
        corpus = load_manifest(write(tmp_path, "a\t3\nb\t5\n"))
        assert [u.id for u in corpus.utterances] == ["a", "b"]
        assert [u.length for u in corpus.utterances] == [3, 5]
        assert corpus.total_frames == 8

    def test_comments_and_blank_lines_skipped(self, tmp_path):
        corpus = load_manifest(write(tmp_path, "# header\n\na\t3\n   \nb\t5\n"))
        assert len(corpus) == 2

    def test_non_positive_length_rejected(self, tmp_path):
        with pytest.raises(ManifestError, match=r":1: non-positive length 0"):
            load_manifest(write(tmp_path, "a\t0\n"))

    def test_duplicate_id_rejected(self, tmp_path):
        with pytest.raises(ManifestError, match=r"duplicate id 'a'"):
            load_manifest(write(tmp_path, "a\t3\na\t5\n"))

    def test_malformed_line_reports_line_number(self, tmp_path):
        with pytest.raises(ManifestError, match=r":2: expected"):
            load_manifest(write(tmp_path, "a\t3\nbroken line\n"))

    def test_non_integer_length(self, tmp_path):
        with pytest.raises(ManifestError, match="not an integer"):
            load_manifest(write(tmp_path, "a\tx7\n"))

    def test_empty_manifest_rejected(self, tmp_path):
        with pytest.raises(ManifestError, match="no utterances"):
            load_manifest(write(tmp_path, "# nothing here\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ManifestError, match="cannot read"):
            load_manifest(str(tmp_path / "nope.tsv"))

    def test_round_trip_bit_exact(self, tmp_path):
        corpus = corpus_from_lengths([4, 19, 1, 700])
        first = tmp_path / "one.tsv"
        second = tmp_path / "two.tsv"
        write_manifest(corpus, str(first))
        reloaded = load_manifest(str(first))
        assert reloaded == corpus
        write_manifest(reloaded, str(second))
        assert first.read_bytes() == second.read_bytes()


class TestCorpusInvariants:
    def test_total_frames_matches_sum(self):
        corpus = corpus_from_lengths([2, 9, 5])
        assert corpus.total_frames == sum(u.length for u in corpus.utterances) == 16

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="at least one"):
            Corpus([])

    def test_duplicate_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            Corpus([Utterance("a", 1), Utterance("a", 2)])

    def test_zero_length_rejected(self):
        with pytest.raises(ValueError, match="non-positive"):
            Corpus([Utterance("a", 0)])


class TestSynthetic:
    def test_degenerate_uniform(self):
        spec = SyntheticSpec(3, "uniform", {"min": 5, "max": 5})
        corpus = generate_synthetic(spec, seed=1)
        assert corpus.lengths.tolist() == [5, 5, 5]

    def test_deterministic(self):
        spec = SyntheticSpec(50, "lognormal", {"mu": 4.0, "sigma": 0.5})
        assert generate_synthetic(spec, 7) == generate_synthetic(spec, 7)
        assert generate_synthetic(spec, 7) != generate_synthetic(spec, 8)

    def test_ids_are_zero_padded_ordinals(self):
        spec = SyntheticSpec(12, "uniform", {"min": 1, "max": 9})
        corpus = generate_synthetic(spec, 0)
        assert [u.id for u in corpus.utterances][:3] == ["00", "01", "02"]
        assert corpus.utterances[-1].id == "11"

    def test_lognormal_mean_matches_analytic(self):
        # E[length] = exp(mu + sigma^2 / 2) up to rounding; 10% tolerance.
        mu, sigma = 5.0, 0.5
        spec = SyntheticSpec(1000, "lognormal", {"mu": mu, "sigma": sigma})
        corpus = generate_synthetic(spec, 7)
        analytic = math.exp(mu + sigma * sigma / 2.0)
        assert abs(corpus.total_frames / 1000 - analytic) < 0.1 * analytic

    def test_uniform_bounds_respected(self):
        spec = SyntheticSpec(500, "uniform", {"min": 3, "max": 11})
        corpus = generate_synthetic(spec, 3)
        assert corpus.lengths.min() >= 3 and corpus.lengths.max() <= 11
        assert set(corpus.lengths.tolist()) == set(range(3, 12))

    def test_bimodal_produces_both_modes(self):
        spec = SyntheticSpec(
            400, "bimodal",
            {"mu1": 3.0, "sigma1": 0.1, "mu2": 6.0, "sigma2": 0.1, "weight": 0.5},
        )
        corpus = generate_synthetic(spec, 5)
        low = int((corpus.lengths < 100).sum())
        assert 100 < low < 300

    def test_length_cap_clamps(self):
        spec = SyntheticSpec(200, "lognormal", {"mu": 5.0, "sigma": 1.0}, length_cap=120)
        corpus = generate_synthetic(spec, 2)
        assert corpus.max_length <= 120
        assert (corpus.lengths == 120).sum() > 0

    def test_floor_of_one(self):
        spec = SyntheticSpec(300, "lognormal", {"mu": -2.0, "sigma": 0.5})
        corpus = generate_synthetic(spec, 4)
        assert corpus.lengths.min() >= 1

    @pytest.mark.parametrize("spec", [
        SyntheticSpec(0, "uniform", {"min": 1, "max": 2}),
        SyntheticSpec(5, "gaussian", {"mu": 1.0, "sigma": 1.0}),
        SyntheticSpec(5, "uniform", {"min": 0, "max": 4}),
        SyntheticSpec(5, "uniform", {"min": 9, "max": 4}),
        SyntheticSpec(5, "lognormal", {"mu": 1.0}),
        SyntheticSpec(5, "lognormal", {"mu": 1.0, "sigma": -0.1}),
        SyntheticSpec(5, "bimodal", {"mu1": 1, "sigma1": 1, "mu2": 1, "sigma2": 1, "weight": 1.5}),
        SyntheticSpec(5, "uniform", {"min": 1, "max": 2}, length_cap=0),
    ])
    def test_invalid_specs_rejected(self, spec):
        with pytest.raises(ConfigError):
            generate_synthetic(spec, 0)


def test_inverse_normal_cdf_against_scipy():
    ndtri = pytest.importorskip("scipy.special").ndtri
    grid = [1e-12, 1e-6, 0.01, 0.02425, 0.0243, 0.2, 0.5, 0.8, 0.97574, 0.9758, 0.999999, 1 - 1e-12]
    grid += [k / 1000 for k in range(1, 1000)]
    for p in grid:
        expected = float(ndtri(p))
        assert abs(inverse_normal_cdf(p) - expected) <= 2e-9 + 1.5e-9 * abs(expected)


class TestChunking:
    def test_exact_division(self):
        corpus = corpus_from_lengths([500])
        out = chunk_corpus(corpus, 100)
        assert out.lengths.tolist() == [100] * 5

    def test_remainder_chunk(self):
        out = chunk_corpus(corpus_from_lengths([7]), 3)
        assert out.lengths.tolist() == [3, 3, 1]

    def test_identity_when_chunk_covers_max(self):
        corpus = corpus_from_lengths([4, 9, 2])
        out = chunk_corpus(corpus, 9)
        assert out.lengths.tolist() == [4, 9, 2]

    def test_child_ids_unique_and_derived(self):
        corpus = corpus_from_lengths([7, 3])
        out = chunk_corpus(corpus, 3)
        assert [u.id for u in out.utterances] == ["u0.0", "u0.1", "u0.2", "u1.0"]

    def test_invalid_chunk_size(self):
        with pytest.raises(ConfigError):
            chunk_corpus(corpus_from_lengths([3]), 0)

    @given(
        lengths=st.lists(st.integers(min_value=1, max_value=400), min_size=1, max_size=40),
        chunk_size=st.integers(min_value=1, max_value=64),
    )
    @settings(max_examples=150, deadline=None)
    def test_frame_conservation_and_bound(self, lengths, chunk_size):
        corpus = corpus_from_lengths(lengths)
        out = chunk_corpus(corpus, chunk_size)
        assert out.total_frames == corpus.total_frames
        assert out.lengths.max() <= chunk_size
        expected = sum(-(-length // chunk_size) for length in lengths)
        assert len(out) == expected
