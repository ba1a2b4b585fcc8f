"""Seeded randomness helpers.

Every random choice in this package flows through a numpy Generator derived
from an explicit integer seed, so all outputs are reproducible.
"""

from __future__ import annotations

import numpy as np

_WORD = 64
_FULL = (1 << 64) - 1


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Return a Generator derived from ``seed`` and an integer key path.

    The same (seed, key) pair always yields the same stream; distinct key
    paths yield independent streams, which lets one master seed drive many
    logically separate draws.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def draw_below(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in [0, bound) for bounds of any bit width.

    numpy's ``integers`` tops out at 64 bits; wider bounds are handled by
    rejection sampling bound.bit_length() raw bits at a time, which avoids
    modulo bias and terminates in < 2 expected rounds.
    """
    if bound <= 0:
        raise ValueError("bound must be positive")
    if bound == 1:
        return 0
    k = (bound - 1).bit_length()
    nwords = (k + _WORD - 1) // _WORD
    drop = nwords * _WORD - k
    while True:
        words = rng.integers(0, _FULL, size=nwords, dtype=np.uint64, endpoint=True)
        val = 0
        for w in words:
            val = (val << _WORD) | int(w)
        val >>= drop
        if val < bound:
            return val
