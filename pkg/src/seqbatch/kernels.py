"""Kernel backend selection.

Imports the compiled Cython kernels when available, otherwise the pure-Python
reference implementations. Set ``SEQBATCH_PURE_PYTHON=1`` to force the pure
backend (used by the equivalence tests and the benchmark). Both backends are
bit-identical by contract.
"""

from __future__ import annotations

import os

from ._kernels_py import GOLDEN, MASK64, mix64

if os.environ.get("SEQBATCH_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND: str = _impl.BACKEND_NAME

next_u64 = _impl.next_u64
bounded_u64 = _impl.bounded_u64
fisher_yates = _impl.fisher_yates
assign_buckets = _impl.assign_buckets
greedy_budget_ends = _impl.greedy_budget_ends
same_bin_trials = _impl.same_bin_trials


def derive_state(*words: int) -> int:
    """Fold integer words (seed, epoch, ...) into an initial stream state.

    Each word is XOR-folded into the state, offset by the SplitMix64 golden
    constant and avalanched; the result is a documented, platform-independent
    function of the word sequence.
    """
    state = 0
    for word in words:
        state = (state ^ (word & MASK64)) & MASK64
        state = (state + GOLDEN) & MASK64
        state = mix64(state)
    return state
