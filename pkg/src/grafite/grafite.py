"""Range-emptiness filter with a correlation-independent false positive rate.

Keys are mapped into a reduced universe [0, r) by a locality-preserving
pairwise-independent hash; the sorted, deduplicated codes are stored in an
Elias-Fano sequence. A query [a, b] is answered by checking whether any code
falls inside the hashed image of the range, which preserves emptiness exactly
(no false negatives) and produces false positives with probability that
depends only on the range length, never on where keys or queries sit.
"""

from __future__ import annotations

import struct
import warnings
from fractions import Fraction

import numpy as np

from .eliasfano import EliasFanoSequence, _decode_u64, _encode_u64
from .modhash import (
    PairwiseHash,
    locality_hash_batch,
    make_pairwise_hash,
    q_eval,
)

MAGIC = b"GRFT"
VERSION = 1
UNIVERSE = 1 << 64

_HEADER = struct.Struct("<4sIQQQQQQQ")  # magic, version, n, m, L, eps num/den, r, u
_U128 = 1 << 128


def expected_duplicates(n: int, L: int, epsilon) -> float:
    """Expected number of hash codes lost to collisions when building with
    n keys, max range size L and false positive rate epsilon. Reporting
    helper only; nothing in the filter corrects for it."""
    return float(Fraction(epsilon) * (n - 1) / (2 * L))


class GrafiteFilter:
    """Immutable after construction; queries are pure and thread-safe."""

    def __init__(self, hash_: PairwiseHash, codes: EliasFanoSequence,
                 n: int, L: int, epsilon: Fraction, u: int):
        if codes.bound != hash_.r:
            raise ValueError("code sequence bound must equal the hash range")
        self.hash = hash_
        self.codes = codes
        self.n = n
        self.L = L
        self.epsilon = epsilon
        self.u = u

    @property
    def r(self) -> int:
        return self.hash.r

    @property
    def m(self) -> int:
        return self.codes.m

    # -- construction ---------------------------------------------------

    @classmethod
    def build(cls, keys, L: int, epsilon, seed: int = 0, u: int = UNIVERSE,
              hash_override: PairwiseHash | None = None) -> "GrafiteFilter":
        """Build for max range size L and false positive rate epsilon.

        r is set to ceil(n*L/epsilon), capped at the universe size. Passing
        L > u*epsilon/n only weakens the guarantee for the longest ranges,
        so it warns instead of failing. ``hash_override`` substitutes fixed
        hash parameters (it must carry r equal to the computed one).
        """
        keys, n = cls._check_keys(keys, u)
        eps = Fraction(epsilon)
        if not (0 < eps < 1):
            raise ValueError("epsilon must lie in (0, 1)")
        if L < 1:
            raise ValueError("L must be >= 1")
        if n * L > u * eps:
            warnings.warn(
                "L exceeds u*epsilon/n; ranges near the maximum size get a "
                "weaker false positive guarantee",
                stacklevel=2,
            )
        num = n * L * eps.denominator
        den = eps.numerator
        r = min((num + den - 1) // den, u)
        return cls._assemble(keys, n, r, L, eps, seed, u, hash_override)

    @classmethod
    def build_with_budget(cls, keys, B: int, L_hint: int = 1, seed: int = 0,
                          u: int = UNIVERSE,
                          hash_override: PairwiseHash | None = None) -> "GrafiteFilter":
        """Build against a space budget of B bits per key.

        Sets r = n * 2^(B-2), which bounds the false positive rate of a
        length-ell query by min(1, ell / 2^(B-2)). L and epsilon are recorded
        for reporting as L_hint and L_hint / 2^(B-2).
        """
        if B < 3:
            raise ValueError("budget must be at least 3 bits per key")
        if L_hint < 1:
            raise ValueError("L_hint must be >= 1")
        keys, n = cls._check_keys(keys, u)
        r = min(n << (B - 2), u)
        eps = Fraction(L_hint, 1 << (B - 2))
        if eps >= 1:
            eps = Fraction(1, 1)  # degenerate: bound is vacuous at this size
        return cls._assemble(keys, n, r, L_hint, eps, seed, u, hash_override)

    @staticmethod
    def _check_keys(keys, u):
        arr = np.ascontiguousarray(keys, dtype=np.uint64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("need a one-dimensional, non-empty key sequence")
        if int(arr.max()) >= u:
            raise ValueError("key >= universe size")
        return arr, int(arr.size)

    @classmethod
    def _assemble(cls, keys, n, r, L, eps, seed, u, hash_override):
        if hash_override is not None:
            if hash_override.r != r:
                raise ValueError(f"hash_override.r = {hash_override.r}, expected {r}")
            h = hash_override
        else:
            h = make_pairwise_hash(r, seed)
        codes = np.unique(locality_hash_batch(h, keys))
        return cls(h, EliasFanoSequence.build(codes, r), n, L, eps, u)

    # -- queries ----------------------------------------------------------

    def _check_range(self, a: int, b: int) -> None:
        if a > b:
            raise ValueError(f"empty interval: a={a} > b={b}")
        if a < 0 or b >= self.u:
            raise ValueError("interval outside [0, u)")

    def _probe(self, a: int, b: int) -> bool:
        """Emptiness check for a range inside a single width-r block."""
        r = self.r
        q = q_eval(self.hash, a // r)
        ha = (q + a) % r
        hb = (q + b) % r
        if ha <= hb:
            pred = self.codes.predecessor(hb)
            return pred is not None and pred >= ha
        # hashed range wraps past r: occupied iff either arc holds a code
        return self.codes.first <= hb or self.codes.last >= ha

    def query(self, a: int, b: int) -> bool:
        """True means "possibly not empty"; False is always correct.

        Ranges at least r wide, or spanning two or more width-r blocks,
        cover every hash code and answer True outright. A range straddling
        exactly one block boundary splits at it and ORs the two halves.
        """
        self._check_range(a, b)
        r = self.r
        if b - a + 1 >= r:
            return True
        block_a = a // r
        block_b = b // r
        if block_b - block_a >= 2:
            return True
        if block_a == block_b:
            return self._probe(a, b)
        b_start = b - (b % r)
        return self._probe(a, b_start - 1) or self._probe(b_start, b)

    def approx_count(self, a: int, b: int) -> int:
        """Number of stored codes in the hashed image of [a, b].

        Zero exactly when query(a, b) is False. Collisions make this an
        estimate of the true key count; no adjustment is applied.
        """
        self._check_range(a, b)
        r = self.r
        if b - a + 1 >= r:
            return self.m
        block_a = a // r
        block_b = b // r
        if block_b - block_a >= 2:
            return self.m
        if block_a == block_b:
            return self._count(a, b)
        b_start = b - (b % r)
        return min(self.m, self._count(a, b_start - 1) + self._count(b_start, b))

    def _count(self, a: int, b: int) -> int:
        r = self.r
        q = q_eval(self.hash, a // r)
        ha = (q + a) % r
        hb = (q + b) % r
        if ha <= hb:
            return self.codes.rank(hb) - (self.codes.rank(ha - 1) if ha else 0)
        return self.m - self.codes.rank(ha - 1) + self.codes.rank(hb)

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
        r = self.r
        if r > 1 << 63:
            # rare huge-r regime: exact scalar arithmetic per row
            return np.fromiter(
                (self.query(int(x), int(y)) for x, y in zip(a, b)),
                dtype=bool, count=a.size,
            )
        rv = np.uint64(r)
        result = (b - a) >= np.uint64(r - 1) if r > 1 else np.ones(a.shape, bool)
        block_a = a // rv
        block_b = b // rv
        span = block_b - block_a
        result |= span >= np.uint64(2)
        same = ~result & (span == np.uint64(0))
        split = ~result & (span == np.uint64(1))
        b_start = b[split] - b[split] % rv
        probe_a = np.concatenate((a[same], a[split], b_start))
        probe_b = np.concatenate((b[same], b_start - np.uint64(1), b[split]))
        answers = self._probe_batch(probe_a, probe_b)
        n_same = int(same.sum())
        n_split = int(split.sum())
        result[same] = answers[:n_same]
        result[split] = (
            answers[n_same:n_same + n_split] | answers[n_same + n_split:]
        )
        return result

    def _probe_batch(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.size == 0:
            return np.zeros(0, dtype=bool)
        rv = np.uint64(self.r)
        blocks = a // rv
        uniq, inv = np.unique(blocks, return_inverse=True)
        qs = np.array([q_eval(self.hash, int(x)) for x in uniq], dtype=np.uint64)
        ha = (qs[inv] + a % rv) % rv
        hb = (qs[inv] + b % rv) % rv
        decoded = self.codes._decoded()
        idx = np.searchsorted(decoded, hb, side="right")
        pred = decoded[np.maximum(idx, 1) - 1]
        normal = (ha <= hb) & (idx > 0) & (pred >= ha)
        wrap = (ha > hb) & (
            (np.uint64(self.codes.first) <= hb) | (np.uint64(self.codes.last) >= ha)
        )
        return normal | wrap

    # -- size and serialization ---------------------------------------------

    def size_in_bits(self) -> int:
        """Payload bits of the code sequence (fixed header excluded)."""
        return self.codes.size_in_bits()

    def bits_per_key(self) -> float:
        return self.size_in_bits() / self.n

    def serialize(self) -> bytes:
        eps = self.epsilon
        if eps.numerator >= 1 << 64 or eps.denominator >= 1 << 64:
            raise ValueError("epsilon rational too wide to serialize")
        h = self.hash
        if h.p >= _U128:
            raise ValueError("prime modulus too wide to serialize")
        header = _HEADER.pack(
            MAGIC, VERSION, self.n, self.m, self.L,
            eps.numerator, eps.denominator,
            _encode_u64(self.r), _encode_u64(self.u),
        )
        params = b"".join(x.to_bytes(16, "little") for x in (h.p, h.c1, h.c2))
        return header + params + self.codes.serialize()

    @classmethod
    def deserialize(cls, data: bytes) -> "GrafiteFilter":
        if len(data) < _HEADER.size + 48:
            raise ValueError("truncated filter header")
        magic, version, n, m, L, eps_num, eps_den, r_enc, u_enc = _HEADER.unpack_from(data, 0)
        if magic != MAGIC:
            raise ValueError("bad magic for filter payload")
        if version != VERSION:
            raise ValueError(f"unsupported filter version {version}")
        pos = _HEADER.size
        p, c1, c2 = (
            int.from_bytes(data[pos + 16 * i:pos + 16 * (i + 1)], "little")
            for i in range(3)
        )
        pos += 48
        if eps_den == 0 or not (0 < Fraction(eps_num, eps_den) <= 1):
            raise ValueError("corrupt epsilon encoding")
        codes, end = EliasFanoSequence._read(data, pos)
        if end != len(data):
            raise ValueError("trailing bytes after filter payload")
        if codes.m != m:
            raise ValueError("code count disagrees with header")
        h = PairwiseHash(p=p, c1=c1, c2=c2, r=_decode_u64(r_enc))
        return cls(h, codes, n, L, Fraction(eps_num, eps_den), _decode_u64(u_enc))
