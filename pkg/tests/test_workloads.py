"""Tests for dataset and query-workload generation."""

import math
import struct

import numpy as np
import pytest
from scipy import stats

from grafite import workloads as wl

U64 = 2**64


def test_uniform_keys_basic():
    keys = wl.gen_uniform_keys(10, u=100, seed=1)
    again = wl.gen_uniform_keys(10, u=100, seed=1)
    assert keys.tolist() == again.tolist()
    assert len(keys) == 10
    assert len(set(keys.tolist())) == 10
    assert keys.tolist() == sorted(keys.tolist())
    assert all(0 <= k < 100 for k in keys.tolist())


def test_uniform_keys_exhaustive_and_errors():
    assert wl.gen_uniform_keys(64, u=64, seed=9).tolist() == list(range(64))
    with pytest.raises(ValueError):
        wl.gen_uniform_keys(101, u=100)
    with pytest.raises(ValueError):
        wl.gen_uniform_keys(0)


def test_uniform_keys_ks_uniformity():
    keys = wl.gen_uniform_keys(10**5, seed=3)
    scaled = keys.astype(np.float64) / float(U64)
    result = stats.kstest(scaled, "uniform")
    assert result.pvalue > 0.001


def test_uncorrelated_queries():
    w = wl.gen_uncorrelated_queries(5000, ell=100, seed=2)
    assert w.kind == wl.KIND_UNCORRELATED
    assert w.range_size == 100
    widths = w.ranges[:, 1] - w.ranges[:, 0]
    assert np.all(widths == np.uint64(99))
    again = wl.gen_uncorrelated_queries(5000, ell=100, seed=2)
    assert np.array_equal(w.ranges, again.ranges)
    # mean left endpoint sits near the middle of [0, u-ell]
    scaled = w.ranges[:, 0].astype(np.float64) / float(U64)
    sigma = (1.0 / math.sqrt(12.0)) / math.sqrt(len(w))
    assert abs(scaled.mean() - 0.5) <= 4 * sigma
    point = wl.gen_uncorrelated_queries(10, ell=1, u=1000, seed=0)
    assert np.all(point.ranges[:, 0] == point.ranges[:, 1])
    with pytest.raises(ValueError):
        wl.gen_uncorrelated_queries(10, ell=2000, u=1000)


def test_correlation_offset_bound():
    # frozen values; the D=0.8 case is the float-sensitive one (30*0.2
    # evaluates below 6.0 in binary, and the bound must still be 64)
    assert wl.correlation_offset_bound(0.0) == 2**30
    assert wl.correlation_offset_bound(0.5) == 2**15
    assert wl.correlation_offset_bound(0.8) == 64
    assert wl.correlation_offset_bound(1.0) == 1
    with pytest.raises(ValueError):
        wl.correlation_offset_bound(1.5)


def test_correlated_queries_hug_keys():
    keys = wl.gen_uniform_keys(2000, seed=4)
    w = wl.gen_correlated_queries(keys, 3000, ell=16, D=1.0, seed=5)
    assert w.corr_degree == 1.0
    x = w.ranges[:, 0]
    # at D=1 the left endpoint is the anchor key or its successor
    hit = np.isin(x, keys) | np.isin(x - np.uint64(1), keys)
    assert bool(np.all(hit))
    widths = w.ranges[:, 1] - w.ranges[:, 0]
    assert np.all(widths == np.uint64(15))


def test_correlated_offsets_uniform():
    # single anchor key makes the offsets directly observable
    keys = np.array([2**40], dtype=np.uint64)
    w = wl.gen_correlated_queries(keys, 20000, ell=4, D=0.5, seed=6)
    offs = (w.ranges[:, 0] - keys[0]).astype(np.float64)
    bound = wl.correlation_offset_bound(0.5)
    assert offs.min() >= 0 and offs.max() <= bound
    # mean of Uniform[0, bound] is bound/2
    sigma = bound / math.sqrt(12.0) / math.sqrt(len(w))
    assert abs(offs.mean() - bound / 2.0) <= 4 * sigma
    # frequencies across quartile bins stay within 4 sigma of 1/4
    counts, _ = np.histogram(offs, bins=4, range=(0, bound + 1))
    p = 0.25
    margin = 4 * math.sqrt(p * (1 - p) / len(w))
    assert np.all(np.abs(counts / len(w) - p) <= margin)


def test_correlated_clamps_at_universe_top():
    keys = np.array([U64 - 3], dtype=np.uint64)
    w = wl.gen_correlated_queries(keys, 50, ell=16, D=0.0, seed=7)
    assert int(w.ranges[:, 1].max()) == U64 - 1
    widths = w.ranges[:, 1] - w.ranges[:, 0]
    assert np.all(widths == np.uint64(15))


def test_enforce_empty():
    keys = wl.gen_uniform_keys(1000, u=2**32, seed=8)
    w = wl.gen_correlated_queries(keys, 2000, ell=8, D=1.0, seed=9, u=2**32)
    emptied = wl.enforce_empty(w, keys)
    assert len(emptied) == 2000
    assert emptied.kind == w.kind and emptied.range_size == w.range_size
    sk = keys.tolist()
    for a, b in emptied.ranges.tolist():
        import bisect
        i = bisect.bisect_left(sk, a)
        assert i == len(sk) or sk[i] > b  # scan oracle: no key inside


def test_enforce_empty_identity_when_already_empty():
    keys = np.array([10**6], dtype=np.uint64)
    w = wl.gen_uncorrelated_queries(300, ell=4, u=1000, seed=11)
    emptied = wl.enforce_empty(w, keys)
    assert np.array_equal(emptied.ranges, w.ranges)


def test_enforce_empty_gives_up_on_dense_keys():
    keys = np.arange(2**10, dtype=np.uint64)
    w = wl.gen_uncorrelated_queries(50, ell=4, u=2**10, seed=12)
    with pytest.raises(RuntimeError):
        wl.enforce_empty(w, keys)


def test_true_queries():
    keys = wl.gen_uniform_keys(500, seed=13)
    w = wl.gen_true_queries(keys, 1000, ell=32, seed=14)
    assert w.kind == wl.KIND_TRUE
    idx = np.searchsorted(keys, w.ranges[:, 0], side="left")
    safe = np.minimum(idx, keys.size - 1)
    assert bool(np.all((idx < keys.size) & (keys[safe] <= w.ranges[:, 1])))
    again = wl.gen_true_queries(keys, 1000, ell=32, seed=14)
    assert np.array_equal(w.ranges, again.ranges)
    points = wl.gen_true_queries(keys, 200, ell=1, seed=15)
    assert bool(np.all(np.isin(points.ranges[:, 0], keys)))


def test_binary_dataset_roundtrip(tmp_path):
    path = tmp_path / "keys.bin"
    wl.write_binary_dataset(path, [50, 9, 48, 9])
    assert wl.load_binary_dataset(path).tolist() == [9, 48, 50]
    # hand-built file: count 3, then the keys
    raw = tmp_path / "raw.bin"
    raw.write_bytes(struct.pack("<4Q", 3, 9, 48, 50))
    assert wl.load_binary_dataset(raw).tolist() == [9, 48, 50]


def test_binary_dataset_errors(tmp_path):
    short = tmp_path / "short.bin"
    short.write_bytes(b"\x01\x02")
    with pytest.raises(ValueError):
        wl.load_binary_dataset(short)
    zero = tmp_path / "zero.bin"
    zero.write_bytes(struct.pack("<Q", 0))
    with pytest.raises(ValueError):
        wl.load_binary_dataset(zero)
    lying = tmp_path / "lying.bin"
    lying.write_bytes(struct.pack("<2Q", 5, 1))
    with pytest.raises(ValueError):
        wl.load_binary_dataset(lying)


def test_workload_file_roundtrip(tmp_path):
    keys = wl.gen_uniform_keys(100, seed=16)
    w = wl.gen_true_queries(keys, 64, ell=8, seed=17)
    path = tmp_path / "queries.bin"
    wl.save_workload(path, w)
    back = wl.load_workload(path)
    assert np.array_equal(back.ranges, w.ranges)
    assert back.range_size == 8
    bad = tmp_path / "bad.bin"
    bad.write_bytes(struct.pack("<Q", 1) + struct.pack("<2Q", 9, 3))
    with pytest.raises(ValueError):
        wl.load_workload(bad)


def test_large_dataset_loads_quickly(tmp_path):
    import time

    keys = np.arange(10**6, dtype=np.uint64) * np.uint64(17)
    path = tmp_path / "big.bin"
    wl.write_binary_dataset(path, keys)
    t0 = time.perf_counter()
    loaded = wl.load_binary_dataset(path)
    elapsed = time.perf_counter() - t0
    assert len(loaded) == 10**6
    assert elapsed < 1.0
