"""Pairwise-independent hashing over a prime field, plus the locality-preserving
reduction used to map 64-bit keys into a small universe [0, r).

The reduction hash is h(x) = (q(x // r) + x) % r with q(x) = ((c1*x + c2) % p) % r.
Within one block of r consecutive integers, h shifts every value by the same
amount mod r, so differences (and therefore range adjacency) survive hashing;
across blocks the shift is pairwise independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import draw_below, make_rng

# One prime covers every admissible r for 64-bit universes: any r <= 2^64 is
# smaller than p, and (c1*x + c2) stays exact in Python integers.
DEFAULT_PRIME = (1 << 89) - 1

# Witness sets for the deterministic Miller-Rabin test. The first set is
# proven sufficient for n < 3.3e24; the extended set covers any prime a
# caller could plausibly supply as an override.
_MR_BASES_SMALL = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_BASES_LARGE = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                   53, 59, 61, 67, 71, 73, 79, 83, 89, 97)
_MR_SMALL_LIMIT = 3_317_044_064_679_887_385_961_981


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
    for sp in small:
        if n == sp:
            return True
        if n % sp == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES_SMALL if n < _MR_SMALL_LIMIT else _MR_BASES_LARGE
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PairwiseHash:
    """Immutable hash parameters: q(x) = ((c1*x + c2) % p) % r over blocks,
    h(x) = (q(x // r) + x) % r over keys.
    """

    p: int
    c1: int
    c2: int
    r: int

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.p <= self.r:
            raise ValueError("prime modulus must exceed r")
        if not (1 <= self.c1 < self.p):
            raise ValueError("c1 must lie in [1, p)")
        if not (0 <= self.c2 < self.p):
            raise ValueError("c2 must lie in [0, p)")


def make_pairwise_hash(r: int, seed: int, p_override: int | None = None) -> PairwiseHash:
    """Draw hash parameters for reduced universe size ``r``.

    c1 is uniform in [1, p) and c2 in [0, p), both rejection-sampled from a
    generator derived from ``seed``. ``p_override`` substitutes the prime
    modulus (it must be prime and > r); the default prime works for any
    r <= 2^64.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if p_override is not None:
        if p_override <= r:
            raise ValueError("p_override must exceed r")
        if not is_prime(p_override):
            raise ValueError("p_override must be prime")
        p = p_override
    else:
        if r >= DEFAULT_PRIME:
            raise ValueError("r too large for the default prime; supply p_override")
        p = DEFAULT_PRIME
    rng = make_rng(seed, 0)
    c1 = 1 + draw_below(rng, p - 1)
    c2 = draw_below(rng, p)
    return PairwiseHash(p=p, c1=c1, c2=c2, r=r)


def q_eval(h: PairwiseHash, x: int) -> int:
    """((c1*x + c2) % p) % r, computed exactly in Python integers."""
    return ((h.c1 * x + h.c2) % h.p) % h.r


def locality_hash(h: PairwiseHash, x: int) -> int:
    """(q(x // r) + x) % r for a single key."""
    return (q_eval(h, x // h.r) + x) % h.r


def locality_hash_batch(h: PairwiseHash, keys: np.ndarray) -> np.ndarray:
    """Vectorized locality_hash over a uint64 key array.

    q is evaluated once per distinct block with exact integer arithmetic;
    the per-key shift-and-reduce is done in uint64, which is safe whenever
    r <= 2^63 (both addends are < r, so the sum fits). The r = 2^64 case is
    a pure wrapping add; other r > 2^63 fall back to a scalar loop.
    """
    keys = np.ascontiguousarray(keys, dtype=np.uint64)
    r = h.r
    if r == 1 << 64:
        # single block: q(0) shifts everything, mod 2^64 is the natural wrap
        q0 = np.uint64(q_eval(h, 0))
        with np.errstate(over="ignore"):
            return keys + q0
    if r > 1 << 63:
        return np.array([locality_hash(h, int(x)) for x in keys], dtype=np.uint64)
    rv = np.uint64(r)
    blocks = keys // rv
    uniq, inv = np.unique(blocks, return_inverse=True)
    qs = np.array([q_eval(h, int(b)) for b in uniq], dtype=np.uint64)
    return (qs[inv] + keys % rv) % rv
