"""
Sweeping filters into a CSV
===========================

The bench module crosses filters x space budgets x range sizes x
workloads and writes one CSV row per cell. The same thing is scriptable
from the shell as `grafite-bench suite ...`; this is the library route.
"""

import tempfile
from pathlib import Path

from grafite import bench

out = Path(tempfile.gettempdir()) / "sweep_demo.csv"
config = bench.SuiteConfig(
    out=str(out),
    keys_spec="uniform:5000",
    filters=("grafite", "bucketing"),
    budgets=(8, 12, 16),
    range_sizes=(16,),
    corr_degrees=(0.0, 1.0),
    queries=20000,
    seed=11,
    u=1 << 40,
)
bench.run_suite(config)

print(out.read_text())
print("columns: the fpr column is exact for the seed; the two timing")
print("columns (ns_per_query, construct_s) vary run to run")

# single measurements are available without the suite plumbing
keys, _ = bench.load_keys("uniform:5000", seed=11, u=1 << 40)
filt = bench.FILTER_BUILDERS["grafite"](keys, 12, 0, 1 << 40)
workload = bench._make_empty_workload(keys, 20000, 16, None, seed=1, u=1 << 40)
print("one-off fpr:", bench.measure_fpr(filt, workload))
ns, checksum = bench.measure_query_time(filt, workload, batch=True)
print(f"batched queries: {ns:.0f} ns/query, checksum {checksum}")
