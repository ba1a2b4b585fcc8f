"""
A compressed sorted-integer sequence with search
================================================

EliasFanoSequence stores a strictly increasing sequence of integers in
roughly log2(bound/m) + 2 bits per value and still answers positional
access, predecessor and rank queries without decompressing.
"""

import numpy as np

from grafite import EliasFanoSequence

values = np.sort(np.random.default_rng(7).choice(10**6, 50000, replace=False))
values = values.astype(np.uint64)
seq = EliasFanoSequence.build(values, bound=10**6)

plain_bits = 64 * len(values)
print(f"m={seq.m} values below {seq.bound}")
print(f"plain uint64: {plain_bits} bits, encoded: {seq.size_in_bits()} bits "
      f"({seq.size_in_bits() / len(values):.2f} per value)")

# positions are 1-based
print("access(1) =", seq.access(1), " access(m) =", seq.access(seq.m))

# predecessor(y): largest stored value <= y
y = 123456
print(f"predecessor({y}) =", seq.predecessor(y))
print(f"rank({y}) = {seq.rank(y)} stored values are <= {y}")

# the answers match the plain array exactly
idx = np.searchsorted(values, y, side="right")
assert seq.predecessor(y) == int(values[idx - 1])
assert seq.rank(y) == int(idx)

# batch rank for query-heavy callers
ys = np.array([0, 10, 10**5, 999999], dtype=np.uint64)
print("rank_batch:", seq.rank_batch(ys).tolist())

# serialization is a self-describing little-endian blob
blob = seq.serialize()
back = EliasFanoSequence.deserialize(blob)
print(f"{len(blob)} bytes on disk; round trip equal:",
      bool(np.array_equal(back.to_array(), values)))
