"""Benchmark harness and CLI for the range filters.

Measures false positive rate, query throughput and construction time over
configurable key sets and workloads, and writes cross-product sweeps as CSV
rows with the fixed header

    filter,dataset,n,bpk,range_size,corr_degree,fpr,ns_per_query,construct_s,seed

All answer-dependent columns are reproducible bit-exactly from the seed; the
two timing columns are the only ones that vary between runs.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import workloads as wl
from .bucketing import BucketingFilter
from .grafite import GrafiteFilter

UNIVERSE = 1 << 64

CSV_HEADER = [
    "filter", "dataset", "n", "bpk", "range_size", "corr_degree",
    "fpr", "ns_per_query", "construct_s", "seed",
]

# sweep roughly from very tight to generous space budgets
DEFAULT_BUDGETS = (8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28)

FILTER_BUILDERS = {
    "grafite": lambda keys, B, seed, u: GrafiteFilter.build_with_budget(
        keys, B=B, seed=seed, u=u
    ),
    "bucketing": lambda keys, B, seed, u: BucketingFilter.build_with_budget(
        keys, B=B, u=u
    ),
}

log = logging.getLogger(__name__)


def count_positives(filt, workload: wl.QueryWorkload) -> int:
    """Number of NotEmpty answers over the workload."""
    ranges = workload.ranges
    if hasattr(filt, "query_batch"):
        return int(np.count_nonzero(filt.query_batch(ranges[:, 0], ranges[:, 1])))
    return sum(bool(filt.query(int(a), int(b))) for a, b in ranges)


def measure_fpr(filt, empty_workload: wl.QueryWorkload) -> float:
    """Fraction of NotEmpty answers; the workload must already be empty."""
    n = len(empty_workload)
    if n == 0:
        raise ValueError("workload has no ranges")
    return count_positives(filt, empty_workload) / n


def measure_query_time(
    filt, workload: wl.QueryWorkload, warmup_rounds: int = 1, batch: bool = False
) -> tuple[float, int]:
    """(mean ns per query, checksum of answers) over a single-threaded pass.

    The default times one query call per range; batch=True times the
    vectorized entry point instead, which is the throughput a scanning
    client sees. The checksum (number of NotEmpty answers) is identical
    either way and pins the answers against dead-code elimination.
    """
    ranges = workload.ranges
    if len(ranges) == 0:
        raise ValueError("workload has no ranges")
    if batch:
        a, b = ranges[:, 0], ranges[:, 1]
        for _ in range(warmup_rounds):
            filt.query_batch(a, b)
        t0 = time.perf_counter_ns()
        answers = filt.query_batch(a, b)
        t1 = time.perf_counter_ns()
        return (t1 - t0) / len(ranges), int(np.count_nonzero(answers))
    pairs = [(int(a), int(b)) for a, b in ranges]
    checksum = 0
    for _ in range(warmup_rounds):
        checksum = sum(filt.query(a, b) for a, b in pairs)
    t0 = time.perf_counter_ns()
    checksum = sum(filt.query(a, b) for a, b in pairs)
    t1 = time.perf_counter_ns()
    return (t1 - t0) / len(pairs), int(checksum)


def measure_construction(keys, builder, repeats: int = 3) -> float:
    """Median wall-clock seconds to run ``builder(keys)``."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        builder(keys)
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


@dataclass(frozen=True)
class SuiteConfig:
    out: str
    keys_spec: str = "uniform:100000"
    filters: tuple = ("grafite", "bucketing")
    budgets: tuple = DEFAULT_BUDGETS
    range_sizes: tuple = (32,)
    corr_degrees: tuple | None = None  # None means uncorrelated queries
    queries: int = 10**6
    seed: int = 0
    u: int = UNIVERSE


@dataclass
class BenchResult:
    filter_name: str
    dataset: str
    n: int
    bits_per_key: float
    range_size: int
    corr_degree: float | None
    fpr: float
    ns_per_query: float
    construct_s: float
    seed: int
    positives: int
    queries: int

    def to_row(self):
        return [
            self.filter_name,
            self.dataset,
            self.n,
            repr(self.bits_per_key),
            self.range_size,
            "" if self.corr_degree is None else repr(self.corr_degree),
            repr(self.fpr),
            f"{self.ns_per_query:.1f}",
            f"{self.construct_s:.6f}",
            self.seed,
        ]


def _child_seed(master: int, *key: int) -> int:
    ss = np.random.SeedSequence(entropy=master, spawn_key=key)
    return int(ss.generate_state(1, np.uint64)[0])


def load_keys(keys_spec: str, seed: int, u: int = UNIVERSE) -> tuple[np.ndarray, str]:
    """Resolve a --keys argument: 'uniform:N' draws, anything else is a
    path to a count-prefixed binary dataset. Returns (keys, descriptor)."""
    if keys_spec.startswith("uniform:"):
        n = int(keys_spec.split(":", 1)[1])
        return wl.gen_uniform_keys(n, u=u, seed=_child_seed(seed, 100)), keys_spec
    keys = wl.load_binary_dataset(keys_spec)
    if u < UNIVERSE and int(keys.max()) >= u:
        raise ValueError("dataset contains keys outside the universe")
    return keys, keys_spec


def _make_empty_workload(keys, n_q, ell, D, seed, u):
    if D is None:
        raw = wl.gen_uncorrelated_queries(n_q, ell, u=u, seed=seed)
    else:
        raw = wl.gen_correlated_queries(keys, n_q, ell, D=D, seed=seed, u=u)
    return wl.enforce_empty(raw, keys)


def run_suite(config: SuiteConfig) -> str:
    """Cross product of {filter} x {budget} x {range size} x {workload};
    one CSV row per cell. Budgets beyond the explicit-encoding threshold
    log2(u/n) + 2 are skipped (a plain sorted key array would already be
    smaller) with the reason logged."""
    if not config.filters or not config.budgets or not config.range_sizes:
        raise ValueError("filters, budgets and range_sizes must be non-empty")
    for name in config.filters:
        if name not in FILTER_BUILDERS:
            raise ValueError(f"unknown filter {name!r}")
    if config.queries < 1:
        raise ValueError("need at least one query per cell")
    keys, dataset = load_keys(config.keys_spec, config.seed, config.u)
    n = len(keys)
    threshold = math.log2(config.u / n) + 2
    degrees = tuple(config.corr_degrees) if config.corr_degrees else (None,)
    results = []
    for fname in config.filters:
        builder = FILTER_BUILDERS[fname]
        for B in config.budgets:
            if B > threshold:
                log.warning(
                    "skipping %s at %d bpk: budget exceeds the explicit-encoding "
                    "threshold log2(u/n)+2 = %.2f", fname, B, threshold,
                )
                continue
            build_seed = _child_seed(config.seed, 1)
            t0 = time.perf_counter()
            filt = builder(keys, B, build_seed, config.u)
            construct_s = time.perf_counter() - t0
            bpk = filt.size_in_bits() / n
            for ell in config.range_sizes:
                for D in degrees:
                    cell_seed = _child_seed(
                        config.seed, 2, B, ell,
                        0 if D is None else 1 + int(D * 1000),
                    )
                    workload = _make_empty_workload(
                        keys, config.queries, ell, D, cell_seed, config.u
                    )
                    positives = count_positives(filt, workload)
                    fpr = positives / len(workload)
                    ns, _ = measure_query_time(filt, workload, batch=True)
                    results.append(BenchResult(
                        filter_name=fname, dataset=dataset, n=n,
                        bits_per_key=bpk, range_size=ell, corr_degree=D,
                        fpr=fpr, ns_per_query=ns, construct_s=construct_s,
                        seed=config.seed, positives=positives,
                        queries=len(workload),
                    ))
    write_csv(config.out, results)
    return config.out


def write_csv(path: str, results) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for res in results:
            writer.writerow(res.to_row())


# -- command line -------------------------------------------------------------

def _int_list(text: str):
    return tuple(int(x) for x in text.split(",") if x)


def _float_list(text: str):
    return tuple(float(x) for x in text.split(",") if x)


def _add_common(parser):
    parser.add_argument("--keys", default="uniform:100000",
                        help="'uniform:N' or a path to a binary key file")
    parser.add_argument("--filter", default="grafite",
                        help="grafite or bucketing (suite: comma-separated list)")
    parser.add_argument("--range-size", default="32",
                        help="query range size (suite: comma-separated list)")
    parser.add_argument("--corr-degree", default=None,
                        help="correlation degree in [0,1]; omit for uncorrelated "
                             "queries (suite: comma-separated list)")
    parser.add_argument("--queries", type=int, default=10**6)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--universe-bits", type=int, default=64,
                        help="keys and queries live in [0, 2^bits)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="grafite-bench",
        description="Benchmark range filters: false positive rate, query "
                    "timing, construction timing, and full CSV sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fpr = sub.add_parser("fpr", help="measure false positive rate on empty queries")
    _add_common(p_fpr)
    p_fpr.add_argument("--bpk", default="16", help="bits-per-key budget")

    p_time = sub.add_parser("time", help="measure mean query latency")
    _add_common(p_time)
    p_time.add_argument("--bpk", default="16", help="bits-per-key budget")
    p_time.add_argument("--batch", action="store_true",
                        help="time the vectorized batch entry point")

    p_con = sub.add_parser("construct", help="measure construction time")
    _add_common(p_con)
    p_con.add_argument("--bpk", default="16", help="bits-per-key budget")
    p_con.add_argument("--repeats", type=int, default=3)

    p_suite = sub.add_parser("suite", help="run a cross-product sweep to CSV")
    _add_common(p_suite)
    p_suite.add_argument("--bpk", default=",".join(str(b) for b in DEFAULT_BUDGETS),
                         help="comma-separated bits-per-key budgets")
    p_suite.add_argument("--out", required=True, help="output CSV path")
    return parser


def _universe(args) -> int:
    if not 1 <= args.universe_bits <= 64:
        raise ValueError("universe-bits must lie in [1, 64]")
    return 1 << args.universe_bits


def _single_cell(args):
    u = _universe(args)
    keys, _ = load_keys(args.keys, args.seed, u)
    B = int(args.bpk)
    builder = FILTER_BUILDERS.get(args.filter)
    if builder is None:
        raise ValueError(f"unknown filter {args.filter!r}")
    filt = builder(keys, B, _child_seed(args.seed, 1), u)
    D = None if args.corr_degree is None else float(args.corr_degree)
    workload = _make_empty_workload(
        keys, args.queries, int(args.range_size), D, _child_seed(args.seed, 2),
        u,
    )
    return keys, filt, workload


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fpr":
            _, filt, workload = _single_cell(args)
            print(f"fpr={measure_fpr(filt, workload)!r}")
        elif args.command == "time":
            _, filt, workload = _single_cell(args)
            ns, checksum = measure_query_time(filt, workload, batch=args.batch)
            print(f"ns_per_query={ns:.1f} checksum={checksum}")
        elif args.command == "construct":
            u = _universe(args)
            keys, _ = load_keys(args.keys, args.seed, u)
            builder = FILTER_BUILDERS.get(args.filter)
            if builder is None:
                raise ValueError(f"unknown filter {args.filter!r}")
            B = int(args.bpk)
            seed = _child_seed(args.seed, 1)
            seconds = measure_construction(
                keys, lambda k: builder(k, B, seed, u), repeats=args.repeats
            )
            print(f"construct_s={seconds:.6f}")
        else:
            config = SuiteConfig(
                out=args.out,
                keys_spec=args.keys,
                filters=tuple(args.filter.split(",")),
                budgets=_int_list(args.bpk),
                range_sizes=_int_list(args.range_size),
                corr_degrees=(
                    _float_list(args.corr_degree) if args.corr_degree else None
                ),
                queries=args.queries,
                seed=args.seed,
                u=_universe(args),
            )
            out = run_suite(config)
            print(f"wrote {out}")
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
