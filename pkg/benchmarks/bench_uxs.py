"""Compare the numba and numpy UXS kernels.

    python benchmarks/bench_uxs.py [--n 4] [--repeat 5] [--search]

Times exhaustive verification of the cached sequence for bound n and,
with --search, a fresh greedy search.  The first numba call includes JIT
compilation and is reported separately.
"""
from __future__ import annotations

import argparse
import time

from explorable import _kernels
from explorable.enumeration import enumerate_all_graphs
from explorable.uxs import get_uxs, search_uxs, verify_uxs


def timed(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--search", action="store_true")
    a = ap.parse_args()

    pairs = sum(g.n for g in enumerate_all_graphs.upto(a.n))
    seq = get_uxs(a.n)
    print(f"N={a.n}: {pairs} (graph, start) pairs, sequence length {len(seq)}")
    if not _kernels.USE_NUMBA:
        print("numba disabled; only the numpy kernels run")

    t0 = time.perf_counter()
    verify_uxs(seq, a.n, use_numba=_kernels.USE_NUMBA)
    print(f"first call (includes any JIT): {time.perf_counter() - t0:.3f}s")

    impls = [False] + ([True] if _kernels.USE_NUMBA else [])
    for use in impls:
        label = "numba" if use else "numpy"
        t = timed(lambda: verify_uxs(seq, a.n, use_numba=use), a.repeat)
        print(f"verify  {label:5s} {t:.4f}s")
        if a.search:
            t = timed(lambda: search_uxs(a.n, use_numba=use), 1)
            print(f"search  {label:5s} {t:.4f}s")


if __name__ == "__main__":
    main()
