"""Tests for the pairwise hash family and the locality-preserving reduction."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grafite.modhash import (
    DEFAULT_PRIME,
    PairwiseHash,
    is_prime,
    locality_hash,
    locality_hash_batch,
    make_pairwise_hash,
    q_eval,
)

# Reference instance used throughout the golden tests: p = 2^31 - 1, c1 = 10,
# c2 = 5, reduced universe r = 100. Expected codes below were frozen from a
# by-hand evaluation of ((10*block + 5) % p % 100 + x) % 100.
GOLDEN = PairwiseHash(p=2**31 - 1, c1=10, c2=5, r=100)
GOLDEN_KEYS = [9, 48, 50, 191, 226, 269, 335, 446, 487, 511]
GOLDEN_CODES = [14, 53, 55, 6, 51, 94, 70, 91, 32, 66]


def test_is_prime_known_values():
    assert is_prime(2**31 - 1)
    assert is_prime(2**61 - 1)
    assert is_prime(DEFAULT_PRIME)
    assert not is_prime(2**67 - 1)  # classic composite: 193707721 * 761838257287
    assert not is_prime(1)
    assert not is_prime(561)  # Carmichael number


def test_q_eval_golden():
    assert q_eval(GOLDEN, 0) == 5
    assert q_eval(GOLDEN, 1) == 15  # (10*1 + 5) % (2^31 - 1) % 100


def test_q_eval_identity_under_small_inputs():
    h = PairwiseHash(p=101, c1=1, c2=0, r=100)
    for x in range(100):
        assert q_eval(h, x) == x


def test_locality_hash_golden_codes():
    for key, code in zip(GOLDEN_KEYS, GOLDEN_CODES):
        assert locality_hash(GOLDEN, key) == code
    assert locality_hash(GOLDEN, 44) == 49
    assert locality_hash(GOLDEN, 47) == 52


def test_r_one_maps_everything_to_zero():
    h = make_pairwise_hash(1, seed=7)
    for x in [0, 1, 5, 2**63, 2**64 - 1]:
        assert locality_hash(h, x) == 0
        assert q_eval(h, x) == 0


def test_r_equals_universe_is_identity():
    # with r = u there is a single block; picking c2 = 0 makes the block
    # shift q(0) zero, so h is the identity on [0, u)
    u = 1 << 16
    h = PairwiseHash(p=DEFAULT_PRIME, c1=12345, c2=0, r=u)
    for x in [0, 1, 9999, u - 1]:
        assert locality_hash(h, x) == x


def test_make_pairwise_hash_deterministic():
    a = make_pairwise_hash(2**20, seed=42)
    b = make_pairwise_hash(2**20, seed=42)
    assert (a.c1, a.c2, a.p) == (b.c1, b.c2, b.p)
    c = make_pairwise_hash(2**20, seed=43)
    assert (a.c1, a.c2) != (c.c1, c.c2)


def test_make_pairwise_hash_parameter_ranges():
    for seed in range(50):
        h = make_pairwise_hash(1000, seed=seed)
        assert h.p == DEFAULT_PRIME
        assert 1 <= h.c1 < h.p
        assert 0 <= h.c2 < h.p


def test_make_pairwise_hash_rejects_bad_inputs():
    with pytest.raises(ValueError):
        make_pairwise_hash(0, seed=1)
    with pytest.raises(ValueError):
        make_pairwise_hash(DEFAULT_PRIME, seed=1)  # r >= default prime
    with pytest.raises(ValueError):
        make_pairwise_hash(100, seed=1, p_override=91)  # 91 = 7*13
    with pytest.raises(ValueError):
        make_pairwise_hash(100, seed=1, p_override=97)  # prime but <= r
    with pytest.raises(ValueError):
        PairwiseHash(p=101, c1=0, c2=5, r=10)
    with pytest.raises(ValueError):
        PairwiseHash(p=101, c1=102, c2=5, r=10)


def test_output_range():
    h = make_pairwise_hash(37, seed=3)
    for x in [0, 1, 36, 37, 38, 2**40, 2**64 - 1]:
        assert 0 <= locality_hash(h, x) < 37


@settings(max_examples=200)
@given(
    r=st.integers(min_value=1, max_value=2**40),
    block=st.integers(min_value=0, max_value=2**20),
    ox=st.integers(min_value=0),
    oy=st.integers(min_value=0),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_block_shift_invariance(r, block, ox, oy, seed):
    # two keys in the same width-r block keep their difference mod r
    ox %= r
    oy %= r
    x = block * r + ox
    y = block * r + oy
    if x >= 2**64 or y >= 2**64:
        return
    h = make_pairwise_hash(r, seed=seed)
    lhs = (locality_hash(h, y) - locality_hash(h, x)) % r
    assert lhs == (y - x) % r


def test_collision_frequency_within_pairwise_bound():
    # fixed pair in different blocks; over many seeds the collision rate
    # must stay below 1/r plus a 4-sigma binomial margin
    r = 64
    x, y = 3, 81
    trials = 10_000
    hits = 0
    for seed in range(trials):
        h = make_pairwise_hash(r, seed=seed)
        if locality_hash(h, x) == locality_hash(h, y):
            hits += 1
    bound = 1.0 / r
    margin = 4.0 * math.sqrt(bound * (1.0 - bound) / trials)
    assert hits / trials <= bound + margin


@settings(max_examples=80)
@given(
    r=st.one_of(
        st.integers(min_value=1, max_value=2**16),
        st.sampled_from([2**63 - 1, 2**63 + 3, 2**64 - 59, 2**64]),
    ),
    seed=st.integers(min_value=0, max_value=2**20),
    data=st.data(),
)
def test_batch_matches_scalar(r, seed, data):
    keys = data.draw(
        st.lists(st.integers(min_value=0, max_value=2**64 - 1), min_size=1, max_size=40)
    )
    h = (
        make_pairwise_hash(r, seed=seed)
        if r < DEFAULT_PRIME
        else PairwiseHash(p=DEFAULT_PRIME, c1=7, c2=11, r=r)
    )
    arr = np.array(keys, dtype=np.uint64)
    got = locality_hash_batch(h, arr)
    expected = [locality_hash(h, k) for k in keys]
    assert got.tolist() == expected
