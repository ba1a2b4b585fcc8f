"""Heuristic range filter that records which fixed-width buckets hold keys.

The universe is cut into buckets of width s (a power of two); the sorted
indices of occupied buckets are kept in an Elias-Fano sequence. A range is
reported non-empty when some occupied bucket overlaps it, so false positives
come only from keys sharing a bucket with the query. Small and fast, but a
query landing next to a key (a correlated workload) almost always shares its
bucket, driving the false positive rate toward one.
"""

from __future__ import annotations

import struct

import numpy as np

from .eliasfano import EliasFanoSequence, _decode_u64, _encode_u64

MAGIC = b"BCKT"
VERSION = 1
UNIVERSE = 1 << 64

_HEADER = struct.Struct("<4sIQQ")  # magic, version, s, u


class BucketingFilter:
    """Immutable after construction; queries are pure and thread-safe."""

    def __init__(self, s: int, u: int, buckets: EliasFanoSequence):
        self.s = s
        self.u = u
        self.buckets = buckets

    @property
    def t(self) -> int:
        """Number of occupied buckets."""
        return self.buckets.m

    @classmethod
    def build(cls, keys, s: int, u: int = UNIVERSE) -> "BucketingFilter":
        """Record the occupied width-s buckets of the key set.

        s must be a power of two (bucket index is then a shift); s >= u
        collapses everything into a single bucket.
        """
        if s < 1 or s > 1 << 64:
            raise ValueError("s must lie in [1, 2^64]")
        if s & (s - 1):
            raise ValueError("s must be a power of two")
        arr = np.ascontiguousarray(keys, dtype=np.uint64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("need a one-dimensional, non-empty key sequence")
        if int(arr.max()) >= u:
            raise ValueError("key >= universe size")
        shift = s.bit_length() - 1
        if shift >= 64:
            idx = np.zeros(1, dtype=np.uint64)
        else:
            idx = np.unique(arr >> np.uint64(shift))
        n_buckets = -(-u // s)
        return cls(s, u, EliasFanoSequence.build(idx, n_buckets))

    @classmethod
    def build_with_budget(cls, keys, B, u: int = UNIVERSE) -> "BucketingFilter":
        """Pick the smallest power-of-two s whose filter fits in B bits per
        key; falls back to a single all-covering bucket when none does."""
        if B <= 0:
            raise ValueError("budget must be positive")
        arr = np.ascontiguousarray(keys, dtype=np.uint64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("need a one-dimensional, non-empty key sequence")
        budget = B * arr.size
        last = None
        for shift in range(0, 65):
            s = 1 << shift
            last = cls.build(arr, s, u)
            if last.size_in_bits() <= budget:
                return last
            if s >= u:
                break
        return last  # nothing fits; coarsest filter is the honest fallback

    def _check_range(self, a: int, b: int) -> None:
        if a > b:
            raise ValueError(f"empty interval: a={a} > b={b}")
        if a < 0 or b >= self.u:
            raise ValueError("interval outside [0, u)")

    def query(self, a: int, b: int) -> bool:
        """True when some occupied bucket intersects [a, b]."""
        self._check_range(a, b)
        pred = self.buckets.predecessor(b // self.s)
        return pred is not None and pred >= a // self.s

    def query_batch(self, a, b) -> np.ndarray:
        """Vectorized query over aligned arrays of range endpoints."""
        a = np.ascontiguousarray(a, dtype=np.uint64)
        b = np.ascontiguousarray(b, dtype=np.uint64)
        if a.shape != b.shape:
            raise ValueError("endpoint arrays must have equal shape")
        if a.size and not bool(np.all(a <= b)):
            raise ValueError("empty interval in batch")
        if a.size and self.u < UNIVERSE and int(b.max()) >= self.u:
            raise ValueError("interval outside [0, u)")
        shift = self.s.bit_length() - 1
        if shift >= 64:
            return np.ones(a.shape, dtype=bool)
        sh = np.uint64(shift)
        pa = a >> sh
        pb = b >> sh
        decoded = self.buckets._decoded()
        idx = np.searchsorted(decoded, pb, side="right")
        pred = decoded[np.maximum(idx, 1) - 1]
        return (idx > 0) & (pred >= pa)

    def size_in_bits(self) -> int:
        """Payload bits of the bucket sequence (fixed header excluded)."""
        return self.buckets.size_in_bits()

    def serialize(self) -> bytes:
        header = _HEADER.pack(MAGIC, VERSION, _encode_u64(self.s), _encode_u64(self.u))
        return header + self.buckets.serialize()

    @classmethod
    def deserialize(cls, data: bytes) -> "BucketingFilter":
        if len(data) < _HEADER.size:
            raise ValueError("truncated filter header")
        magic, version, s_enc, u_enc = _HEADER.unpack_from(data, 0)
        if magic != MAGIC:
            raise ValueError("bad magic for filter payload")
        if version != VERSION:
            raise ValueError(f"unsupported filter version {version}")
        buckets, end = EliasFanoSequence._read(data, _HEADER.size)
        if end != len(data):
            raise ValueError("trailing bytes after filter payload")
        s = _decode_u64(s_enc)
        if s & (s - 1):
            raise ValueError("corrupt bucket width")
        return cls(s, _decode_u64(u_enc), buckets)
