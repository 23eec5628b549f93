"""Benchmark the sparse scoring kernels: compiled extension vs numpy
fallback, plus a naive per-row Python dict loop for reference.

The workload mirrors checkpoint evaluation: one accumulated-vector CSR
matrix (rows = observed targets), scored against a stream of sparse
queries. Run after `pip install -e . --no-build-isolation`:

    python3 benchmarks/bench_scoring.py --targets 4000 --dim 10000 \
        --row-nnz 40 --queries 500
"""

import argparse
import time

import numpy as np

from subtutor.kernels import CySparseScorer, PySparseScorer


def build_state(rng, n_targets, dim, row_nnz):
    indptr = np.zeros(n_targets + 1, dtype=np.int64)
    indices, data = [], []
    for row in range(n_targets):
        nnz = int(rng.integers(row_nnz // 2, row_nnz + 1))
        cols = np.sort(rng.choice(dim, size=min(nnz, dim), replace=False))
        indices.extend(cols.tolist())
        data.extend(rng.random(len(cols)).tolist())
        indptr[row + 1] = len(indices)
    return indptr, np.array(indices, dtype=np.int64), np.array(data)


def build_queries(rng, n_queries, dim, nnz):
    queries = []
    for _ in range(n_queries):
        idx = np.sort(rng.choice(dim, size=min(nnz, dim),
                                 replace=False)).astype(np.int64)
        queries.append((idx, rng.random(len(idx))))
    return queries


def time_scorer(scorer, queries, repeats=3):
    best = float("inf")
    checksum = 0.0
    for _ in range(repeats):
        started = time.perf_counter()
        for q_idx, q_val in queries:
            dots = scorer.dots(q_idx, q_val)
        best = min(best, time.perf_counter() - started)
        checksum = float(dots.sum())
    return best, checksum


def naive_dict_loop(indptr, indices, data, queries):
    rows = []
    for row in range(len(indptr) - 1):
        rows.append({int(indices[j]): data[j]
                     for j in range(indptr[row], indptr[row + 1])})
    started = time.perf_counter()
    for q_idx, q_val in queries:
        pairs = list(zip(q_idx.tolist(), q_val.tolist()))
        dots = [sum(val * row.get(i, 0.0) for i, val in pairs)
                for row in rows]
    return time.perf_counter() - started, float(sum(dots))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--targets", type=int, default=2000)
    parser.add_argument("--dim", type=int, default=10000)
    parser.add_argument("--row-nnz", type=int, default=40)
    parser.add_argument("--query-nnz", type=int, default=15)
    parser.add_argument("--queries", type=int, default=300)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--skip-naive", action="store_true")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    indptr, indices, data = build_state(rng, args.targets, args.dim,
                                        args.row_nnz)
    queries = build_queries(rng, args.queries, args.dim, args.query_nnz)
    print(f"state: {args.targets} rows x {args.dim} dims, "
          f"{len(data)} nnz; {args.queries} queries "
          f"({args.query_nnz} nnz each)")

    results = []
    py = PySparseScorer(indptr, indices, data, args.dim)
    py_time, py_sum = time_scorer(py, queries)
    results.append(("numpy fallback", py_time, py_sum))

    if CySparseScorer is not None:
        cy = CySparseScorer(indptr, indices, data, args.dim)
        cy_time, cy_sum = time_scorer(cy, queries)
        results.append(("cython kernel", cy_time, cy_sum))
        match = "bitwise-equal" if all(
            np.array_equal(py.dots(*q), cy.dots(*q))
            for q in queries[:20]) else "MISMATCH"
        print(f"backend agreement on 20 probe queries: {match}")
    else:
        print("compiled kernel not built; benchmarking fallback only")

    if not args.skip_naive:
        naive_time, naive_sum = naive_dict_loop(indptr, indices, data,
                                                queries)
        results.append(("naive dict loop", naive_time, naive_sum))

    baseline = results[0][1]
    print(f"{'backend':<16} {'seconds':>9} {'queries/s':>11} {'speedup':>8}")
    for name, seconds, _ in results:
        print(f"{name:<16} {seconds:>9.4f} "
              f"{args.queries / seconds:>11.0f} {baseline / seconds:>7.2f}x")


if __name__ == "__main__":
    main()
