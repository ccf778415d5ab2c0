"""Compiled kernel against the pure-Python fallback on shared workloads.

Run with no arguments to get the side-by-side table; the script re-invokes
itself once per kernel selection (HHX_PURE_PYTHON picks the fallback) so
both measurements come from fresh processes.
"""

import os
import random
import subprocess
import sys
import time


def _sparse_rows(n: int, m: int, density: float, bound: int, seed: int):
    rng = random.Random(seed)
    rows = []
    for _ in range(n):
        row = {}
        for j in range(m):
            if rng.random() < density:
                v = 0
                while v == 0:
                    v = rng.randint(-bound, bound)
                row[j] = v
        rows.append(row)
    return [r for r in rows if r]


def _best_of(runs: int, fn) -> float:
    best = None
    for _ in range(runs):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def workloads():
    from hhx import _kernel
    from hhx.catalog import dual_numbers, mat2
    from hhx.fields import GF
    from hhx.loday import cyclic_bar_oracle, hh, oracle_hh
    from hhx.simplicial import circle_min

    big = _sparse_rows(220, 220, 0.06, 9, seed=7)
    fp_rows = [{j: v % 10007 for j, v in r.items()} for r in big]
    fp_med = [
        {j: v % 10007 for j, v in r.items()}
        for r in _sparse_rows(150, 150, 0.08, 9, seed=11)
    ]
    # a structured boundary matrix: entries are signs, content reduction
    # keeps intermediates machine-sized
    boundary = [
        r for r in cyclic_bar_oracle(mat2(), 6).diffs[6]._kernel_rows() if r
    ]

    yield "rank mod 10007, random 220x220 at 6%", _best_of(
        3, lambda: _kernel.rank_fp(fp_rows, 10007)
    )
    yield "rref mod 10007, random 150x150 at 8%", _best_of(
        3, lambda: _kernel.rref_fp(fp_med, 10007)
    )
    yield "rank over Z, 4096x16384 boundary matrix", _best_of(
        3, lambda: _kernel.rank_int(boundary)
    )
    yield "rank over Z, random 220x220 (overflow rerun)", _best_of(
        1, lambda: _kernel.rank_int(big)
    )
    yield "circle homology, dual numbers, s<=4", _best_of(
        1, lambda: hh(dual_numbers(), circle_min(), 4)
    )
    yield "mod-3 circle homology, 2x2 matrices, s<=4", _best_of(
        1, lambda: oracle_hh(mat2(GF(3)), 4)
    )


def run_single() -> None:
    from hhx import _kernel

    print(f"kernel: {_kernel.KERNEL_TAG}")
    for name, seconds in workloads():
        print(f"{name}\t{seconds:.4f}")


def run_pair() -> None:
    results = {}
    tags = {}
    for label, extra in (("compiled", {}), ("pure", {"HHX_PURE_PYTHON": "1"})):
        env = dict(os.environ)
        env.pop("HHX_PURE_PYTHON", None)
        env.update(extra)
        proc = subprocess.run(
            [sys.executable, __file__, "--single"],
            capture_output=True, text=True, env=env,
        )
        if proc.returncode != 0:
            sys.stderr.write(proc.stderr)
            raise SystemExit(proc.returncode)
        lines = proc.stdout.strip().splitlines()
        tags[label] = lines[0].split(": ", 1)[1]
        for line in lines[1:]:
            name, seconds = line.rsplit("\t", 1)
            results.setdefault(name, {})[label] = float(seconds)
    if tags["compiled"] == tags["pure"]:
        print("note: compiled extension unavailable; both runs used "
              f"{tags['pure']}")
    else:
        print(f"kernels: {tags['compiled']} vs {tags['pure']}")
    width = max(len(name) for name in results)
    print(f"{'workload':<{width}}  {'compiled':>9}  {'pure':>9}  {'speedup':>8}")
    for name, times in results.items():
        ratio = times["pure"] / times["compiled"] if times["compiled"] else 0.0
        print(
            f"{name:<{width}}  {times['compiled']:>8.4f}s  "
            f"{times['pure']:>8.4f}s  {ratio:>7.1f}x"
        )


if __name__ == "__main__":
    if "--single" in sys.argv[1:]:
        run_single()
    else:
        run_pair()
