"""Corpora of sequence lengths: manifest I/O, synthesis and chunking.

A corpus is the only input every batch construction strategy consumes: an
ordered collection of (id, length-in-frames) records. Real data enters via
TSV manifests; synthetic corpora are generated from a documented PRNG so all
downstream planning is reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import ConfigError, ManifestError
from .kernels import derive_state, bounded_u64, next_u64

_DISTRIBUTIONS = {
    "uniform": ("min", "max"),
    "lognormal": ("mu", "sigma"),
    "bimodal": ("mu1", "sigma1", "mu2", "sigma2", "weight"),
}


@dataclass(frozen=True)
class Utterance:
    """One training sequence, reduced to its frame length."""

    id: str
    length: int


class Corpus:
    """Ordered, validated collection of utterances.

    Immutable after construction; ``lengths`` is a read-only int64 array and
    ``total_frames`` caches the length sum.
    """

    def __init__(self, utterances: Iterable[Utterance]):
        utts = tuple(utterances)
        if not utts:
            raise ValueError("corpus must contain at least one utterance")
        seen = set()
        for utt in utts:
            if utt.length < 1:
                raise ValueError(f"utterance {utt.id!r} has non-positive length {utt.length}")
            if utt.id in seen:
                raise ValueError(f"duplicate utterance id {utt.id!r}")
            seen.add(utt.id)
        self.utterances = utts
        lengths = np.array([utt.length for utt in utts], dtype=np.int64)
        lengths.setflags(write=False)
        self.lengths = lengths
        self.total_frames = int(lengths.sum())

    def __len__(self) -> int:
        return len(self.utterances)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return self.utterances == other.utterances

    def __repr__(self) -> str:
        return f"Corpus({len(self)} utterances, {self.total_frames} frames)"

    @property
    def max_length(self) -> int:
        return int(self.lengths.max())


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters for a synthetic length distribution.

    ``distribution`` is one of uniform (params min, max), lognormal (mu,
    sigma) or bimodal (mu1, sigma1, mu2, sigma2, weight -- a mixture of two
    lognormals where weight is the probability of the first component).
    Sampled lengths are rounded to the nearest integer, floored at 1 and
    clamped to ``length_cap`` when set.
    """

    count: int
    distribution: str
    params: Mapping[str, float]
    length_cap: int | None = None

    def validate(self) -> None:
        if self.count < 1:
            raise ConfigError(f"synthetic count must be >= 1, got {self.count}")
        if self.distribution not in _DISTRIBUTIONS:
            raise ConfigError(
                f"unknown distribution {self.distribution!r}; "
                f"expected one of {sorted(_DISTRIBUTIONS)}"
            )
        required = _DISTRIBUTIONS[self.distribution]
        missing = [key for key in required if key not in self.params]
        if missing:
            raise ConfigError(f"{self.distribution} distribution missing params: {missing}")
        if self.distribution == "uniform":
            lo, hi = self.params["min"], self.params["max"]
            if lo != int(lo) or hi != int(hi):
                raise ConfigError("uniform min/max must be integers")
            if not 1 <= lo <= hi:
                raise ConfigError(f"uniform requires 1 <= min <= max, got [{lo}, {hi}]")
        elif self.distribution == "lognormal":
            if self.params["sigma"] < 0:
                raise ConfigError("lognormal sigma must be >= 0")
        else:
            if self.params["sigma1"] < 0 or self.params["sigma2"] < 0:
                raise ConfigError("bimodal sigmas must be >= 0")
            if not 0.0 <= self.params["weight"] <= 1.0:
                raise ConfigError("bimodal weight must be in [0, 1]")
        if self.length_cap is not None and self.length_cap < 1:
            raise ConfigError("length_cap must be >= 1")


def load_manifest(path: str) -> Corpus:
    """Read a corpus from a TSV manifest.

    Each non-empty, non-``#`` line is ``<id><TAB><length>``. Errors report
    the offending line number.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc

    utterances = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ManifestError(f"{path}:{lineno}: expected '<id>\\t<length>', got {line!r}")
        utt_id, length_text = parts
        if not utt_id:
            raise ManifestError(f"{path}:{lineno}: empty utterance id")
        try:
            length = int(length_text)
        except ValueError:
            raise ManifestError(f"{path}:{lineno}: length {length_text!r} is not an integer") from None
        if length < 1:
            raise ManifestError(f"{path}:{lineno}: non-positive length {length} for id {utt_id!r}")
        if utt_id in seen:
            raise ManifestError(
                f"{path}:{lineno}: duplicate id {utt_id!r} (first seen on line {seen[utt_id]})"
            )
        seen[utt_id] = lineno
        utterances.append(Utterance(utt_id, length))
    if not utterances:
        raise ManifestError(f"{path}: manifest contains no utterances")
    return Corpus(utterances)


def write_manifest(corpus: Corpus, path: str) -> None:
    """Write the canonical manifest form: ``id\\tlength\\n`` per utterance."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for utt in corpus.utterances:
            fh.write(f"{utt.id}\t{utt.length}\n")


def _uniform53(state: int) -> tuple[float, int]:
    # 53-bit mantissa draw mapped to the open interval (0, 1).
    word, state = next_u64(state)
    return ((word >> 11) + 0.5) * 2.0**-53, state


# Rational approximation of the inverse standard normal CDF (Acklam's
# algorithm, peak relative error ~1.15e-9; validated against scipy in tests).
_ICDF_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
           1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_ICDF_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
           6.680131188771972e+01, -1.328068155288572e+01)
_ICDF_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
           -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_ICDF_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
           3.754408661907416e+00)
_ICDF_P_LOW = 0.02425


def inverse_normal_cdf(p: float) -> float:
    """Quantile of the standard normal distribution for p in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    a, b, c, d = _ICDF_A, _ICDF_B, _ICDF_C, _ICDF_D
    if p < _ICDF_P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return ((((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
                / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0))
    if p > 1.0 - _ICDF_P_LOW:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -((((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
                 / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0))
    q = p - 0.5
    r = q * q
    return ((((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
            / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0))


def _sample_length(spec: SyntheticSpec, state: int) -> tuple[int, int]:
    params = spec.params
    if spec.distribution == "uniform":
        lo, hi = int(params["min"]), int(params["max"])
        offset, state = bounded_u64(state, hi - lo)
        length = lo + offset
    else:
        if spec.distribution == "bimodal":
            pick, state = _uniform53(state)
            if pick < params["weight"]:
                mu, sigma = params["mu1"], params["sigma1"]
            else:
                mu, sigma = params["mu2"], params["sigma2"]
        else:
            mu, sigma = params["mu"], params["sigma"]
        u, state = _uniform53(state)
        z = inverse_normal_cdf(u)
        # Round half up; frame counts are integral with a floor of 1.
        length = max(1, int(math.floor(math.exp(mu + sigma * z) + 0.5)))
    if spec.length_cap is not None:
        length = min(length, spec.length_cap)
    return length, state


def generate_synthetic(spec: SyntheticSpec, seed: int) -> Corpus:
    """Deterministically sample a corpus from (spec, seed).

    Ids are zero-padded ordinals; the stream is a pure function of the seed,
    so identical calls produce identical corpora on every platform.
    """
    spec.validate()
    state = derive_state(seed)
    width = len(str(spec.count - 1)) if spec.count > 1 else 1
    utterances = []
    for ordinal in range(spec.count):
        length, state = _sample_length(spec, state)
        utterances.append(Utterance(f"{ordinal:0{width}d}", length))
    return Corpus(utterances)


def chunk_corpus(corpus: Corpus, chunk_size: int) -> Corpus:
    """Split every utterance into sub-utterances of at most ``chunk_size`` frames.

    A length-L utterance becomes floor(L / chunk_size) full chunks plus one
    remainder chunk of L mod chunk_size frames when nonzero; total frames are
    preserved exactly. Sub-utterance ids are ``<parent id>.<ordinal>``.
    """
    if chunk_size < 1:
        raise ConfigError(f"chunk_size must be >= 1, got {chunk_size}")
    chunks = []
    for utt in corpus.utterances:
        full, rest = divmod(utt.length, chunk_size)
        sizes = [chunk_size] * full
        if rest:
            sizes.append(rest)
        for ordinal, size in enumerate(sizes):
            chunks.append(Utterance(f"{utt.id}.{ordinal}", size))
    return Corpus(chunks)
