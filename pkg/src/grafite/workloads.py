"""Key-set and query-workload generation, plus the binary dataset format.

All generators are pure functions of their seed. Query workloads are batches
of closed intervals [a, b] that share one range size; empty workloads (no
interval intersects the key set) are produced by generating, discarding the
intersecting intervals, and topping up until the requested count is reached.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from ._rng import make_rng

UNIVERSE = 1 << 64

KIND_UNCORRELATED = "uncorrelated"
KIND_CORRELATED = "correlated"
KIND_TRUE = "true"
KIND_FILE = "file"

# distinct child-stream tags so the generators never share a raw stream
_STREAM_KEYS = 1
_STREAM_UNCORRELATED = 2
_STREAM_CORRELATED = 3
_STREAM_TRUE = 4
_STREAM_REFILL = 5


@dataclass(frozen=True, eq=False)
class QueryWorkload:
    ranges: np.ndarray  # shape (n, 2) uint64, rows are closed intervals
    range_size: int
    kind: str
    seed: int
    u: int = UNIVERSE
    corr_degree: float | None = None

    def __len__(self) -> int:
        return len(self.ranges)


def _check_sizes(n_q: int, ell: int, u: int) -> None:
    if n_q < 1:
        raise ValueError("need at least one query")
    if ell < 1:
        raise ValueError("range size must be >= 1")
    if ell > u:
        raise ValueError("range size exceeds the universe")


def _as_ranges(x: np.ndarray, ell: int) -> np.ndarray:
    return np.stack((x, x + np.uint64(ell - 1)), axis=1)


def gen_uniform_keys(n: int, u: int = UNIVERSE, seed: int = 0) -> np.ndarray:
    """n distinct sorted keys drawn uniformly from [0, u); collisions are
    redrawn, and the surplus after the final round is subsampled uniformly
    so the marginal distribution stays uniform."""
    if n < 1:
        raise ValueError("need at least one key")
    if n > u:
        raise ValueError("cannot draw more distinct keys than the universe holds")
    if n == u:
        return np.arange(u, dtype=np.uint64)
    rng = make_rng(seed, _STREAM_KEYS)
    out = np.unique(rng.integers(0, u - 1, size=n, dtype=np.uint64, endpoint=True))
    for _ in range(100):
        if out.size >= n:
            break
        extra = rng.integers(
            0, u - 1, size=2 * (n - out.size) + 16, dtype=np.uint64, endpoint=True
        )
        out = np.unique(np.concatenate((out, extra)))
    else:
        raise RuntimeError("could not collect enough distinct keys")
    if out.size > n:
        pick = rng.choice(out.size, size=n, replace=False)
        out = np.sort(out[pick])
    return out


def gen_uncorrelated_queries(
    n_q: int, ell: int, u: int = UNIVERSE, seed: int = 0
) -> QueryWorkload:
    """n_q ranges [x, x+ell-1] with x uniform in [0, u-ell]."""
    _check_sizes(n_q, ell, u)
    rng = make_rng(seed, _STREAM_UNCORRELATED)
    x = rng.integers(0, u - ell, size=n_q, dtype=np.uint64, endpoint=True)
    return QueryWorkload(_as_ranges(x, ell), ell, KIND_UNCORRELATED, seed, u)


def correlation_offset_bound(D: float) -> int:
    """floor(2^(30*(1-D))): the largest distance between a query's left
    endpoint and its anchor key at correlation degree D."""
    if not 0.0 <= D <= 1.0:
        raise ValueError("correlation degree must lie in [0, 1]")
    # 30*(1-D) accumulates float error (e.g. D=0.8 gives 5.999...96, whose
    # power is 63.999...), so nudge up by a relative epsilon before flooring
    return int(2.0 ** (30.0 * (1.0 - D)) * (1.0 + 1e-12))


def gen_correlated_queries(
    keys, n_q: int, ell: int, D: float = 0.8, seed: int = 0, u: int = UNIVERSE
) -> QueryWorkload:
    """Each range anchors at a random key k and starts at x uniform in the
    closed interval [k, k + floor(2^(30*(1-D)))], clamped so the range stays
    inside the universe. Higher D pins queries closer to the keys."""
    keys = np.ascontiguousarray(keys, dtype=np.uint64)
    if keys.size == 0:
        raise ValueError("need a non-empty key set")
    _check_sizes(n_q, ell, u)
    w = correlation_offset_bound(D)
    rng = make_rng(seed, _STREAM_CORRELATED)
    anchors = keys[rng.integers(0, keys.size, size=n_q)]
    offsets = rng.integers(0, w, size=n_q, dtype=np.uint64, endpoint=True)
    xmax = np.uint64(u - ell)
    base = np.minimum(anchors, xmax)
    x = base + np.minimum(offsets, xmax - base)
    return QueryWorkload(_as_ranges(x, ell), ell, KIND_CORRELATED, seed, u, D)


def gen_true_queries(
    keys, n_q: int, ell: int, seed: int = 0, u: int = UNIVERSE
) -> QueryWorkload:
    """Ranges guaranteed non-empty: anchor at a random key k, left endpoint
    uniform in [k-ell+1, k], clamped into the universe (the clamp keeps k
    inside the range)."""
    keys = np.ascontiguousarray(keys, dtype=np.uint64)
    if keys.size == 0:
        raise ValueError("need a non-empty key set")
    _check_sizes(n_q, ell, u)
    rng = make_rng(seed, _STREAM_TRUE)
    anchors = keys[rng.integers(0, keys.size, size=n_q)]
    low = anchors - np.minimum(anchors, np.uint64(ell - 1))
    x = rng.integers(low=low, high=anchors, dtype=np.uint64, endpoint=True)
    x = np.minimum(x, np.uint64(u - ell))
    return QueryWorkload(_as_ranges(x, ell), ell, KIND_TRUE, seed, u)


def _intersects(ranges: np.ndarray, keys: np.ndarray) -> np.ndarray:
    """Boolean mask: does each closed range contain at least one key?"""
    idx = np.searchsorted(keys, ranges[:, 0], side="left")
    safe = np.minimum(idx, keys.size - 1)
    return (idx < keys.size) & (keys[safe] <= ranges[:, 1])


def enforce_empty(
    workload: QueryWorkload, keys, max_factor: int = 100
) -> QueryWorkload:
    """Keep only ranges that contain no key, topping up with freshly seeded
    batches until the original count is restored. Gives up (and raises) once
    max_factor times the requested count has been generated, which signals a
    workload that cannot be made empty."""
    keys = np.ascontiguousarray(keys, dtype=np.uint64)
    if keys.size == 0:
        raise ValueError("need a non-empty key set")
    if np.any(keys[1:] < keys[:-1]):
        raise ValueError("keys must be sorted")
    target = len(workload.ranges)
    kept = workload.ranges[~_intersects(workload.ranges, keys)]
    generated = target
    round_no = 0
    while kept.shape[0] < target:
        if generated >= max_factor * target:
            raise RuntimeError(
                f"could not collect {target} empty ranges after generating "
                f"{generated}; the key set is too dense for this workload"
            )
        round_no += 1
        chunk = min(2 * (target - kept.shape[0]) + 16, max_factor * target - generated)
        refill_seed = int(
            np.random.SeedSequence(
                entropy=workload.seed, spawn_key=(_STREAM_REFILL, round_no)
            ).generate_state(1, np.uint64)[0]
        )
        if workload.kind == KIND_CORRELATED:
            extra = gen_correlated_queries(
                keys, chunk, workload.range_size, workload.corr_degree,
                refill_seed, workload.u,
            )
        elif workload.kind == KIND_UNCORRELATED:
            extra = gen_uncorrelated_queries(
                chunk, workload.range_size, workload.u, refill_seed
            )
        else:
            raise ValueError(f"cannot regenerate a workload of kind {workload.kind!r}")
        generated += chunk
        fresh = extra.ranges[~_intersects(extra.ranges, keys)]
        kept = np.concatenate((kept, fresh), axis=0)
    return QueryWorkload(
        kept[:target], workload.range_size, workload.kind,
        workload.seed, workload.u, workload.corr_degree,
    )


# -- binary file formats -----------------------------------------------------

def write_binary_dataset(path, keys) -> None:
    """Little-endian u64 count followed by that many little-endian u64 keys."""
    arr = np.ascontiguousarray(keys, dtype=np.uint64)
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", arr.size))
        fh.write(arr.astype("<u8", copy=False).tobytes())


def load_binary_dataset(path) -> np.ndarray:
    """Read a count-prefixed u64 key file; returns sorted deduplicated keys."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 8:
        raise ValueError("truncated dataset file")
    (count,) = struct.unpack_from("<Q", data, 0)
    if count == 0:
        raise ValueError("dataset declares zero keys")
    if len(data) != 8 + 8 * count:
        raise ValueError("dataset length disagrees with the declared count")
    keys = np.frombuffer(data, dtype="<u8", count=count, offset=8)
    return np.unique(keys.astype(np.uint64))


def save_workload(path, workload: QueryWorkload) -> None:
    """Same count-prefixed layout with (a, b) u64 pairs as the payload."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", len(workload.ranges)))
        fh.write(workload.ranges.astype("<u8", copy=False).tobytes())


def load_workload(path, u: int = UNIVERSE) -> QueryWorkload:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 8:
        raise ValueError("truncated workload file")
    (count,) = struct.unpack_from("<Q", data, 0)
    if count == 0:
        raise ValueError("workload declares zero ranges")
    if len(data) != 8 + 16 * count:
        raise ValueError("workload length disagrees with the declared count")
    flat = np.frombuffer(data, dtype="<u8", count=2 * count, offset=8)
    ranges = flat.astype(np.uint64).reshape(count, 2)
    if np.any(ranges[:, 0] > ranges[:, 1]):
        raise ValueError("workload contains an inverted range")
    ell = int(ranges[0, 1] - ranges[0, 0]) + 1
    if np.any(ranges[:, 1] - ranges[:, 0] != np.uint64(ell - 1)):
        raise ValueError("workload ranges disagree on the range size")
    return QueryWorkload(ranges, ell, KIND_FILE, 0, u)
