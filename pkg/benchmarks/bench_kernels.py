#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py --limit 1e8 --queries 1e6

Times three stages for each backend: full sieve construction, checkpoint
table build, and batched prefix-count queries (the verifier's hot path),
plus one end-to-end verification walk.
"""

import argparse
import time

import numpy as np

import semiprime_bias as spb
from semiprime_bias import _kernels, _kernels_py

try:
    from semiprime_bias import _kernels_cy
except ImportError:
    _kernels_cy = None


def with_backend(impl):
    _kernels.mark_composites = impl.mark_composites
    _kernels.prefix_counts = impl.prefix_counts


def bench_one(name, impl, limit, n_queries, goal):
    with_backend(impl)
    wheel = spb.build_wheel()

    t0 = time.perf_counter()
    flags = spb.sieve_primes(limit, wheel)
    t_sieve = time.perf_counter() - t0

    t0 = time.perf_counter()
    tables = spb.build_checkpoints(flags)
    t_tables = time.perf_counter() - t0

    rng = np.random.default_rng(1)
    qs = rng.integers(3, limit, n_queries)
    from semiprime_bias.tables import batch_counts
    t0 = time.perf_counter()
    call, c3 = batch_counts(tables, qs)
    t_query = time.perf_counter() - t0

    splist = spb.build_small_prime_list(flags, min(limit, 10**7))
    t0 = time.perf_counter()
    rep = spb.verify_range(9, goal, flags, tables, splist)
    t_verify = time.perf_counter() - t0

    print(f"{name:8s} sieve({limit:.0e}): {t_sieve:7.2f}s   "
          f"tables: {t_tables:5.2f}s   "
          f"{n_queries:.0e} queries: {t_query:6.3f}s   "
          f"verify(9..{goal:.0e}): {t_verify:6.2f}s [{rep.status}]")
    return int(call.sum()), int(c3.sum())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--limit", default="1e8")
    ap.add_argument("--queries", default="1e6")
    ap.add_argument("--goal", default=None,
                    help="verification goal (default limit^2, capped at 1e13)")
    args = ap.parse_args()
    limit = int(float(args.limit))
    n_queries = int(float(args.queries))
    goal = int(float(args.goal)) if args.goal else min(limit * limit, 10**13)

    results = {}
    results["python"] = bench_one("python", _kernels_py, limit, n_queries, goal)
    if _kernels_cy is not None:
        results["cython"] = bench_one("cython", _kernels_cy, limit, n_queries, goal)
        assert results["python"] == results["cython"], "backends disagree"
        print("backends agree on all query results")
    else:
        print("cython extension not built; fallback only")


if __name__ == "__main__":
    main()
