# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: bit-identical twin of seqbatch._kernels_py.

Same SplitMix64 stream, same Fisher-Yates traversal, same bitmask rejection
draws; all arithmetic is explicit uint64/int64, so outputs match the pure
Python backend exactly.
"""

import numpy as np

from libc.stdint cimport int64_t, uint64_t

BACKEND_NAME = "compiled"

cdef uint64_t GOLDEN_C = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL


cdef inline uint64_t _mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline uint64_t _next(uint64_t* state) noexcept nogil:
    state[0] = state[0] + GOLDEN_C
    return _mix64(state[0])


cdef inline uint64_t _bounded(uint64_t* state, uint64_t bound) noexcept nogil:
    cdef uint64_t mask = bound
    cdef uint64_t value
    mask |= mask >> 1
    mask |= mask >> 2
    mask |= mask >> 4
    mask |= mask >> 8
    mask |= mask >> 16
    mask |= mask >> 32
    while True:
        value = _next(state) & mask
        if value <= bound:
            return value


def next_u64(state):
    cdef uint64_t s = state
    cdef uint64_t value = _next(&s)
    return value, s


def bounded_u64(state, bound):
    cdef uint64_t s
    cdef uint64_t value
    if bound <= 0:
        return 0, state
    s = state
    value = _bounded(&s, <uint64_t> bound)
    return value, s


def fisher_yates(arr, state):
    cdef int64_t[::1] view = arr
    cdef uint64_t s = state
    cdef Py_ssize_t n = view.shape[0]
    cdef Py_ssize_t i, j
    cdef int64_t tmp
    with nogil:
        for i in range(n - 1, 0, -1):
            j = <Py_ssize_t> _bounded(&s, <uint64_t> i)
            tmp = view[i]
            view[i] = view[j]
            view[j] = tmp
    return s


def assign_buckets(lengths, boundaries):
    cdef const int64_t[::1] ls = np.ascontiguousarray(lengths, dtype=np.int64)
    cdef const int64_t[::1] bs = np.ascontiguousarray(boundaries, dtype=np.int64)
    out = np.empty(ls.shape[0], dtype=np.int64)
    cdef int64_t[::1] ov = out
    cdef Py_ssize_t nb = bs.shape[0]
    cdef Py_ssize_t k, lo, hi, mid
    cdef int64_t length
    with nogil:
        for k in range(ls.shape[0]):
            length = ls[k]
            lo = 0
            hi = nb
            while lo < hi:
                mid = (lo + hi) >> 1
                if length < bs[mid]:
                    hi = mid
                else:
                    lo = mid + 1
            ov[k] = lo
    return out


def greedy_budget_ends(lengths, budget, padded):
    cdef const int64_t[::1] ls = np.ascontiguousarray(lengths, dtype=np.int64)
    cdef int64_t limit = budget
    cdef bint pad = padded
    cdef Py_ssize_t n = ls.shape[0]
    cdef Py_ssize_t k, cur_count = 0
    cdef int64_t cur_max = 0, cur_sum = 0, new_cost, length
    ends = []
    for k in range(n):
        length = ls[k]
        if pad:
            new_cost = (cur_max if cur_max > length else length) * (cur_count + 1)
        else:
            new_cost = cur_sum + length
        if cur_count > 0 and new_cost > limit:
            ends.append(k)
            cur_max = 0
            cur_count = 0
            cur_sum = 0
        if length > cur_max:
            cur_max = length
        cur_count += 1
        cur_sum += length
    if cur_count > 0:
        ends.append(n)
    return np.asarray(ends, dtype=np.int64)


def same_bin_trials(corpus_size, n_bins, trials, state):
    cdef Py_ssize_t m = corpus_size
    cdef Py_ssize_t nb = n_bins
    cdef Py_ssize_t total = trials
    cdef uint64_t s = state
    cdef Py_ssize_t base = m // nb
    cdef Py_ssize_t extra = m % nb
    cdef Py_ssize_t cut = extra * (base + 1)
    items_arr = np.arange(m, dtype=np.int64)
    cdef int64_t[::1] items = items_arr
    cdef Py_ssize_t hits = 0
    cdef Py_ssize_t t, i, j, p0, p1, bin0, bin1
    cdef int64_t tmp
    with nogil:
        for t in range(total):
            for i in range(m - 1, 0, -1):
                j = <Py_ssize_t> _bounded(&s, <uint64_t> i)
                tmp = items[i]
                items[i] = items[j]
                items[j] = tmp
            p0 = 0
            p1 = 0
            for i in range(m):
                if items[i] == 0:
                    p0 = i
                elif items[i] == 1:
                    p1 = i
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
    return hits, s
