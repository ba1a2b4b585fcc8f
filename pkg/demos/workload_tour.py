"""
Generating keys and query workloads
===================================

Benchmarking a range filter needs three ingredients: a key set, a batch
of query ranges, and a guarantee that the ranges are empty (otherwise a
"not empty" answer is not a false positive). All three are seeded and
reproducible.
"""

import tempfile

import numpy as np

from grafite import workloads as wl

u = 1 << 32
keys = wl.gen_uniform_keys(10000, u=u, seed=1)
print(f"keys: {len(keys)} distinct, sorted; first three {keys[:3].tolist()}")

# uncorrelated queries land anywhere in the universe
uncorr = wl.gen_uncorrelated_queries(5000, 16, u=u, seed=2)
print("uncorrelated left endpoints, mean/u =",
      round(float(uncorr.ranges[:, 0].mean()) / u, 3), "(expect ~0.5)")

# correlated queries start near a random key; the degree D in [0, 1]
# shrinks the offset scale 2^(30 (1 - D)) from 2^30 down to 1
for D in (0.0, 0.5, 1.0):
    q = wl.gen_correlated_queries(keys, 5000, 16, D=D, seed=3)
    gap = q.ranges[:, 0] - keys[np.searchsorted(keys, q.ranges[:, 0],
                                                side="right") - 1]
    print(f"D={D}: median distance from the nearest key below = "
          f"{int(np.median(gap))}")

# enforce_empty discards ranges that intersect the keys and tops the
# batch back up from a fresh stream
empty = wl.enforce_empty(wl.gen_correlated_queries(keys, 5000, 16, D=1.0,
                                                   seed=4), keys)
a = empty.ranges[:, 0]
b = empty.ranges[:, 1]
lo = np.searchsorted(keys, a)
touching = int(np.count_nonzero((lo < len(keys)) & (keys[np.minimum(lo, len(keys) - 1)] <= b)))
print(f"after enforce_empty: {touching} of {len(empty)} ranges touch a key")

# "true" workloads guarantee the opposite: every range contains a key
true_q = wl.gen_true_queries(keys, 1000, 16, seed=5, u=u)
print("true workload generated:", len(true_q), "ranges, each hits a key")

# key sets ship as count-prefixed little-endian u64 files
with tempfile.NamedTemporaryFile(suffix=".bin") as fh:
    wl.write_binary_dataset(fh.name, keys)
    back = wl.load_binary_dataset(fh.name)
    print("dataset file round trip equal:", bool(np.array_equal(back, keys)))
