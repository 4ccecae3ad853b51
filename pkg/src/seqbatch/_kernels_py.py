"""Pure-Python reference kernels.

Every function here has a compiled twin in ``seqbatch._kernels`` (Cython).
The two backends must produce bit-identical results: all randomness comes
from a SplitMix64 stream over explicit 64-bit integer states, shuffles are
Fisher-Yates from the last index down, and bounded draws use bitmask
rejection. Nothing in this module depends on platform word size, hash
randomization or C library rounding.

SplitMix64 reference: state advances by the 64-bit golden-ratio constant
0x9E3779B97F4A7C15 and each output is the finalizer
``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27; z *= 0x94D049BB133111EB;
z ^= z >> 31`` with all arithmetic mod 2**64.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

BACKEND_NAME = "python"


def mix64(z: int) -> int:
    """SplitMix64 output finalizer (avalanches a 64-bit word)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def next_u64(state: int) -> tuple[int, int]:
    """Advance the stream one step; returns (output word, new state)."""
    state = (state + GOLDEN) & MASK64
    return mix64(state), state


def bounded_u64(state: int, bound: int) -> tuple[int, int]:
    """Uniform integer in [0, bound] by bitmask rejection.

    Consumes a variable number of stream words (at least one when bound > 0,
    none when bound == 0); acceptance probability is always > 1/2.
    """
    if bound <= 0:
        return 0, state
    mask = (1 << bound.bit_length()) - 1
    while True:
        word, state = next_u64(state)
        value = word & mask
        if value <= bound:
            return value, state


def fisher_yates(arr: np.ndarray, state: int) -> int:
    """In-place Fisher-Yates shuffle of an int64 array; returns the new state.

    Traverses from the last index down; swap partner for position i is a
    bounded draw in [0, i].
    """
    items = arr.tolist()
    n = len(items)
    for i in range(n - 1, 0, -1):
        j, state = bounded_u64(state, i)
        items[i], items[j] = items[j], items[i]
    arr[:] = items
    return state


def assign_buckets(lengths: np.ndarray, boundaries: np.ndarray) -> np.ndarray:
    """Bucket index per length via binary search over half-open ranges.

    ``boundaries`` are the ascending upper edges; the bucket of a length is
    the number of edges <= length (ranges [1,b0), [b0,b1), ..., [b_last, inf)).
    """
    bounds = boundaries.tolist()
    nb = len(bounds)
    out = np.empty(len(lengths), dtype=np.int64)
    for k, length in enumerate(lengths.tolist()):
        lo, hi = 0, nb
        while lo < hi:
            mid = (lo + hi) >> 1
            if length < bounds[mid]:
                hi = mid
            else:
                lo = mid + 1
        out[k] = lo
    return out


def greedy_budget_ends(lengths: np.ndarray, budget: int, padded: bool) -> np.ndarray:
    """Batch end offsets for greedy consecutive packing under a frame budget.

    A batch is extended while its cost stays <= budget; the cost of a batch is
    max length * member count in padded mode and the plain sum in raw mode.
    Assumes every single length fits the budget (checked by the caller).
    """
    items = lengths.tolist()
    ends = []
    cur_max = 0
    cur_count = 0
    cur_sum = 0
    for k, length in enumerate(items):
        if padded:
            new_cost = max(cur_max, length) * (cur_count + 1)
        else:
            new_cost = cur_sum + length
        if cur_count > 0 and new_cost > budget:
            ends.append(k)
            cur_max = 0
            cur_count = 0
            cur_sum = 0
        cur_max = max(cur_max, length)
        cur_count += 1
        cur_sum += length
    if cur_count > 0:
        ends.append(len(items))
    return np.asarray(ends, dtype=np.int64)


def same_bin_trials(corpus_size: int, n_bins: int, trials: int, state: int) -> tuple[int, int]:
    """Monte Carlo trials of the shuffle-then-partition scheme.

    Each trial shuffles 0..corpus_size-1 and checks whether items 0 and 1
    land in the same near-equal contiguous bin (the first corpus_size % n_bins
    bins hold one extra element). Returns (hit count, new state).
    """
    base = corpus_size // n_bins
    extra = corpus_size % n_bins
    cut = extra * (base + 1)
    items = list(range(corpus_size))
    hits = 0
    for _ in range(trials):
        for i in range(corpus_size - 1, 0, -1):
            j, state = bounded_u64(state, i)
            items[i], items[j] = items[j], items[i]
        p0 = items.index(0)
        p1 = items.index(1)
        if p0 < cut:
            bin0 = p0 // (base + 1)
        else:
            bin0 = extra + (p0 - cut) // base
        if p1 < cut:
            bin1 = p1 // (base + 1)
        else:
            bin1 = extra + (p1 - cut) // base
        if bin0 == bin1:
            hits += 1
    return hits, state
