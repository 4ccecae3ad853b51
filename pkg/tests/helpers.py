"""Shared test helpers: tiny corpora, run counting, independent oracles."""

from __future__ import annotations

import math

import numpy as np

from seqbatch import Corpus, Utterance


def corpus_from_lengths(lengths) -> Corpus:
    return Corpus([Utterance(f"u{i}", int(length)) for i, length in enumerate(lengths)])


def is_permutation(indices, n: int) -> bool:
    indices = np.asarray(indices)
    if len(indices) != n:
        return False
    return bool(np.all(np.bincount(indices, minlength=n) == 1))


def count_alternating_runs(values) -> int:
    """Number of maximal monotone runs, with plateaus absorbed into the current run."""
    runs = 1
    direction = 0
    for a, b in zip(values, values[1:]):
        if b > a:
            step = 1
        elif b < a:
            step = -1
        else:
            continue
        if direction == 0:
            direction = step
        elif step != direction:
            runs += 1
            direction = step
    return runs


def max_monotone_run(values) -> int:
    """Length of the longest monotone run (plateaus extend the run)."""
    best = cur = 1
    direction = 0
    for a, b in zip(values, values[1:]):
        step = 1 if b > a else (-1 if b < a else 0)
        if step == 0 or step == direction:
            cur += 1
        else:
            direction = step
            cur = 2
        best = max(best, cur)
    return best


def brute_force_metrics(batches, lengths) -> dict:
    """Recompute every metrics field from scratch (no library internals)."""
    padded_total = 0
    real_total = 0
    max_padded = 0
    stds = []
    means = []
    for members in batches:
        ls = [int(lengths[i]) for i in members]
        padded = max(ls) * len(ls)
        real = sum(ls)
        padded_total += padded
        real_total += real
        max_padded = max(max_padded, padded)
        mean = sum(ls) / len(ls)
        stds.append(math.sqrt(sum((v - mean) ** 2 for v in ls) / len(ls)))
        means.append(mean)
    grand = sum(means) / len(means)
    return {
        "total_padded_frames": padded_total,
        "total_real_frames": real_total,
        "padding_ratio": (padded_total - real_total) / padded_total,
        "mean_intra_batch_std": sum(stds) / len(stds),
        "inter_batch_std": math.sqrt(sum((m - grand) ** 2 for m in means) / len(means)),
        "batch_count": len(batches),
        "max_batch_padded_frames": max_padded,
    }
