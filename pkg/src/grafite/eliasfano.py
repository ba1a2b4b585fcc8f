"""Elias-Fano encoding of a strictly increasing integer sequence.

Each value z is split at bit l = max(0, floor(log2(bound/m))): the low l bits
go into a packed array V, and the high parts hi(z_i) are unary-coded into a
bit vector H that has a 1-bit at position hi(z_i) + i (1-indexed). On top of
H, sampled select positions give near-constant-time select0/select1, which in
turn give random access and predecessor search without decompressing.

Positions follow the 1-indexed convention throughout the public API, with
select0(0) = select1(0) = 0. Internal storage is 0-indexed.
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"EFSQ"
VERSION = 1

# Sample the position of every 1024th 0-bit and 1-bit of H (the first sample
# marks the 1025th bit of its kind, so short sequences carry no samples at
# all). A select call scans at most the span between two consecutive sampled
# bits, which for hashed (near-uniform) data is a few dozen words.
SAMPLE_RATE = 1024

_MASK64 = (1 << 64) - 1
_HEADER = struct.Struct("<4sIQQBQ")


def _encode_u64(x: int) -> int:
    """Map values in [1, 2^64] into a u64 field; 2^64 is stored as 0."""
    if not (1 <= x <= 1 << 64):
        raise ValueError("value out of the [1, 2^64] encodable range")
    return x & _MASK64


def _decode_u64(x: int) -> int:
    return x if x != 0 else 1 << 64


class EliasFanoSequence:
    """Immutable compressed monotone sequence with select, access, rank and
    predecessor. Build once with :meth:`build`, then share freely across
    threads; no method mutates logical state.
    """

    __slots__ = ("m", "bound", "l", "V", "H", "h_bits", "samples0", "samples1",
                 "_first", "_last", "_lmask", "_hw", "_vw", "_dec")

    def __init__(self, m, bound, l, V, H, h_bits, samples0, samples1):
        self.m = m
        self.bound = bound
        self.l = l
        self.V = V
        self.H = H
        self.h_bits = h_bits
        self.samples0 = samples0
        self.samples1 = samples1
        self._lmask = (1 << l) - 1
        self._hw = None   # lazy: H words as Python ints, for scalar scans
        self._vw = None   # lazy: V words as Python ints
        self._dec = None  # lazy: fully decoded value array, for batch ops
        self._first = self.access(1)
        self._last = self.access(self.m)

    # -- construction --------------------------------------------------

    @classmethod
    def build(cls, values, bound: int) -> "EliasFanoSequence":
        """Encode a strictly increasing sequence of integers < bound.

        Rejects empty, unsorted or duplicated input. Runs in time linear in
        the sequence length.
        """
        vals = np.ascontiguousarray(values, dtype=np.uint64)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("need a one-dimensional, non-empty sequence")
        m = int(vals.size)
        if bound < 1 or bound > 1 << 64:
            raise ValueError("bound must lie in [1, 2^64]")
        if m > bound:
            raise ValueError("more values than the bound allows")
        if m > 1 and not np.all(vals[1:] > vals[:-1]):
            raise ValueError("values must be strictly increasing")
        if int(vals[-1]) >= bound:
            raise ValueError("value >= bound")

        l = max(0, (bound // m).bit_length() - 1)
        if l >= 64:
            highs = np.zeros(m, dtype=np.uint64)
            lows = vals
        else:
            lshift = np.uint64(l)
            highs = vals >> lshift
            lows = vals & np.uint64((1 << l) - 1)

        # H: 1-bit at 0-indexed position hi(z_i) + i, one trailing 0-bit
        pos = highs + np.arange(m, dtype=np.uint64)
        h_bits = int(highs[-1]) + m + 1
        nh = (h_bits + 63) // 64
        H = np.zeros(nh, dtype=np.uint64)
        np.bitwise_or.at(
            H,
            (pos >> np.uint64(6)).astype(np.int64),
            np.left_shift(np.uint64(1), pos & np.uint64(63)),
        )

        # V: m cells of l bits, tightly packed, cells may cross word bounds
        nv = (m * l + 63) // 64
        if l == 0:
            V = np.zeros(0, dtype=np.uint64)
        else:
            bitpos = np.arange(m, dtype=np.uint64) * np.uint64(l)
            widx = (bitpos >> np.uint64(6)).astype(np.int64)
            off = bitpos & np.uint64(63)
            V = np.zeros(nv + 1, dtype=np.uint64)  # spill word, trimmed below
            np.bitwise_or.at(V, widx, np.left_shift(lows, off))
            sel = off > 0
            if np.any(sel):
                np.bitwise_or.at(
                    V,
                    widx[sel] + 1,
                    np.right_shift(lows[sel], np.uint64(64) - off[sel]),
                )
            V = V[:nv].copy()

        ones_1idx = pos + np.uint64(1)
        samples1 = ones_1idx[SAMPLE_RATE::SAMPLE_RATE].copy()
        isone = np.zeros(h_bits, dtype=bool)
        isone[pos.astype(np.int64)] = True
        zeros_0idx = np.flatnonzero(~isone)
        samples0 = (zeros_0idx[SAMPLE_RATE::SAMPLE_RATE] + 1).astype(np.uint64)

        return cls(m, int(bound), l, V, H, h_bits, samples0, samples1)

    # -- bit-level primitives -------------------------------------------

    def _h_words(self):
        if self._hw is None:
            self._hw = self.H.tolist()
        return self._hw

    def _v_words(self):
        if self._vw is None:
            self._vw = self.V.tolist()
        return self._vw

    def _scan(self, start: int, need: int, ones: bool) -> int:
        """1-indexed position of the need-th target bit at 0-indexed
        position >= start. Caller guarantees it exists."""
        words = self._h_words()
        w = start >> 6
        off = start & 63
        cur = words[w] if ones else ~words[w] & _MASK64
        cur = (cur >> off) << off
        c = cur.bit_count()
        while need > c:
            need -= c
            w += 1
            cur = words[w] if ones else ~words[w] & _MASK64
            c = cur.bit_count()
        for _ in range(need - 1):
            cur &= cur - 1
        return (w << 6) + (cur & -cur).bit_length()

    def _select(self, k: int, count: int, samples, ones: bool) -> int:
        if k == 0:
            return 0
        if k < 0 or k > count:
            raise IndexError(f"select argument {k} outside [0, {count}]")
        j = (k - 1) // SAMPLE_RATE
        if j == 0:
            return self._scan(0, k, ones)
        anchor = int(samples[j - 1])  # position of the (j*RATE + 1)-th bit
        rem = k - j * SAMPLE_RATE
        if rem == 1:
            return anchor
        return self._scan(anchor, rem - 1, ones)

    def select1(self, k: int) -> int:
        """1-indexed position of the k-th 1-bit of H; select1(0) = 0."""
        return self._select(k, self.m, self.samples1, ones=True)

    def select0(self, k: int) -> int:
        """1-indexed position of the k-th 0-bit of H; select0(0) = 0."""
        return self._select(k, self.h_bits - self.m, self.samples0, ones=False)

    def _v_cell(self, i: int) -> int:
        """Low part of the (i+1)-th value (0-indexed cell read)."""
        l = self.l
        if l == 0:
            return 0
        words = self._v_words()
        bitpos = i * l
        w = bitpos >> 6
        off = bitpos & 63
        cell = words[w] >> off
        if off + l > 64:
            cell |= words[w + 1] << (64 - off)
        return cell & self._lmask

    # -- queries ---------------------------------------------------------

    def access(self, i: int) -> int:
        """The i-th smallest stored value, 1 <= i <= m."""
        if not (1 <= i <= self.m):
            raise IndexError(f"index {i} outside [1, {self.m}]")
        hi = self.select1(i) - i
        return (hi << self.l) | self._v_cell(i - 1)

    @property
    def first(self) -> int:
        return self._first

    @property
    def last(self) -> int:
        return self._last

    def __len__(self) -> int:
        return self.m

    def _pred(self, y: int) -> tuple[int | None, int]:
        """(predecessor value or None, rank); rank counts stored values <= y."""
        if not (0 <= y < self.bound):
            raise ValueError(f"argument {y} outside [0, {self.bound})")
        if y < self._first:
            return None, 0
        if y >= self._last:
            return self._last, self.m
        p = y >> self.l
        # elements whose high part equals p occupy 1-indexed slots [i, j]
        i = self.select0(p) - p + 1
        j = self.select0(p + 1) - p - 1
        lo_y = y & self._lmask
        lo, hi = i, j
        best = 0
        while lo <= hi:
            mid = (lo + hi) // 2
            if self._v_cell(mid - 1) <= lo_y:
                best = mid
                lo = mid + 1
            else:
                hi = mid - 1
        if best:
            return (p << self.l) | self._v_cell(best - 1), best
        if i == 1:
            return None, 0
        return self.access(i - 1), i - 1

    def predecessor(self, y: int) -> int | None:
        """Largest stored value <= y, or None when every value exceeds y."""
        return self._pred(y)[0]

    def rank(self, y: int) -> int:
        """Number of stored values <= y."""
        return self._pred(y)[1]

    # -- batch decoding ----------------------------------------------------

    def to_array(self) -> np.ndarray:
        """Decode the whole sequence into a fresh uint64 array."""
        bits = np.unpackbits(
            self.H.astype("<u8", copy=False).view(np.uint8),
            bitorder="little",
            count=self.h_bits,
        )
        pos = np.flatnonzero(bits)
        his = (pos - np.arange(self.m)).astype(np.uint64)
        if self.l == 0:
            return his
        lows = self._all_cells()
        if self.l >= 64:
            return lows.copy()
        return (his << np.uint64(self.l)) | lows

    def _all_cells(self) -> np.ndarray:
        l = self.l
        bitpos = np.arange(self.m, dtype=np.uint64) * np.uint64(l)
        w = (bitpos >> np.uint64(6)).astype(np.int64)
        off = bitpos & np.uint64(63)
        out = self.V[w] >> off
        cross = (off.astype(np.int64) + l) > 64
        if np.any(cross):
            out[cross] |= self.V[w[cross] + 1] << (np.uint64(64) - off[cross])
        if l < 64:
            out &= np.uint64((1 << l) - 1)
        return out

    def _decoded(self) -> np.ndarray:
        if self._dec is None:
            self._dec = self.to_array()
        return self._dec

    def rank_batch(self, ys: np.ndarray) -> np.ndarray:
        """Vectorized rank: counts of stored values <= y for each y."""
        return np.searchsorted(self._decoded(), ys, side="right")

    # -- size and serialization --------------------------------------------

    def size_in_bits(self) -> int:
        """Payload bits: packed lows, the H bit vector, and select samples."""
        return (
            self.m * self.l
            + self.h_bits
            + 64 * (len(self.samples0) + len(self.samples1))
        )

    def serialize(self) -> bytes:
        header = _HEADER.pack(
            MAGIC, VERSION, self.m, _encode_u64(self.bound), self.l, self.h_bits
        )
        return b"".join(
            (
                header,
                self.V.astype("<u8", copy=False).tobytes(),
                self.H.astype("<u8", copy=False).tobytes(),
                self.samples0.astype("<u8", copy=False).tobytes(),
                self.samples1.astype("<u8", copy=False).tobytes(),
            )
        )

    @classmethod
    def deserialize(cls, data: bytes) -> "EliasFanoSequence":
        seq, used = cls._read(data)
        if used != len(data):
            raise ValueError("trailing bytes after sequence payload")
        return seq

    @classmethod
    def _read(cls, data: bytes, offset: int = 0) -> tuple["EliasFanoSequence", int]:
        """Parse one serialized sequence starting at offset; returns the
        sequence and the offset one past its end (for embedding)."""
        if len(data) - offset < _HEADER.size:
            raise ValueError("truncated header")
        magic, version, m, bound_enc, l, h_bits = _HEADER.unpack_from(data, offset)
        if magic != MAGIC:
            raise ValueError("bad magic for sequence payload")
        if version != VERSION:
            raise ValueError(f"unsupported sequence version {version}")
        bound = _decode_u64(bound_enc)
        if m < 1 or l > 64 or h_bits < m + 1:
            raise ValueError("inconsistent sequence header")
        nv = (m * l + 63) // 64
        nh = (h_bits + 63) // 64
        c0 = h_bits - m
        ns0 = max(0, (c0 - 1) // SAMPLE_RATE)
        ns1 = max(0, (m - 1) // SAMPLE_RATE)
        need = _HEADER.size + 8 * (nv + nh + ns0 + ns1)
        if len(data) - offset < need:
            raise ValueError("truncated sequence payload")
        pos = offset + _HEADER.size

        def take(count):
            nonlocal pos
            arr = np.frombuffer(data, dtype="<u8", count=count, offset=pos)
            pos += 8 * count
            return arr.astype(np.uint64)

        V = take(nv)
        H = take(nh)
        samples0 = take(ns0)
        samples1 = take(ns1)
        return cls(m, bound, l, V, H, h_bits, samples0, samples1), pos
