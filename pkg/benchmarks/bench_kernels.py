"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 3]

Prints one JSON line per (kernel, case, backend) with the best wall time.
"""
import argparse
import json
import time

import numpy as np

from effalg import kernels
from effalg.core import boolean, chain, product


def best_of(fn, repeat):
    out = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        out = min(out, time.perf_counter() - t)
    return out


def assoc_cases():
    yield "boolean(7)", boolean(7).table
    yield "chain(60)", chain(60).table
    yield "product(chain(6),boolean(4))", product(chain(6), boolean(4)).table


def uf_cases(rng):
    for n, e in ((200_000, 400_000), (2_000_000, 4_000_000)):
        left = rng.integers(0, n, size=e)
        right = rng.integers(0, n, size=e)
        yield f"n={n},edges={e}", n, left, right


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    backends = ["python"] + (["compiled"] if kernels.BACKEND == "compiled" else [])
    for name, table in assoc_cases():
        for be in backends:
            t = best_of(lambda: kernels.assoc_violations(table, 10, backend=be), args.repeat)
            print(json.dumps({"kernel": "assoc_violations", "case": name, "backend": be, "seconds": round(t, 4)}))
    rng = np.random.default_rng(args.seed)
    for name, n, left, right in uf_cases(rng):
        labels = {}
        for be in backends:
            def go():
                uf = kernels.union_find(n, backend=be)
                uf.union_arrays(left, right)
                labels[be] = uf.labels()
            t = best_of(go, args.repeat)
            print(json.dumps({"kernel": "union_find", "case": name, "backend": be, "seconds": round(t, 4)}))
        if len(labels) == 2:
            assert np.array_equal(labels["python"], labels["compiled"]), "backends disagree"


if __name__ == "__main__":
    main()
