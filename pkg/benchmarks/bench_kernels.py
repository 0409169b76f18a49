"""Compiled vs numpy kernels on a large tree and a random sparse graph.

    python benchmarks/bench_kernels.py [--n 20000] [--repeat 5]

Also times one end-to-end game (slow cat on a random graph) per backend by
re-running this script in a subprocess with RELLOC_PURE set.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from relloc import _kernels_py
from relloc.generators import gen_random_connected

try:
    from relloc import _ckernels
except ImportError:
    _ckernels = None


def bench(label: str, fn, repeat: int) -> float:
    best = min(timeit.repeat(fn, number=1, repeat=repeat))
    print(f"  {label:<34} {best * 1e3:9.3f} ms")
    return best


def kernel_table(n: int, repeat: int) -> None:
    g = gen_random_connected(n, 2.0 / n, 4, seed=1)
    rng = np.random.default_rng(0)
    mask = rng.random(n + 1) < 0.3
    mask[0] = False
    d0 = _kernels_py.bfs_distances(g.indptr, g.indices, 1)
    d1 = _kernels_py.bfs_distances(g.indptr, g.indices, n // 2)
    tables = [_kernels_py.bfs_distances(g.indptr, g.indices, s) for s in range(1, 41)]
    backends = [("python", _kernels_py)] + ([("cython", _ckernels)] if _ckernels else [])
    results: dict[str, dict[str, float]] = {}
    print(f"graph: {g.name}, {g.num_edges} edges")
    for name, mod in backends:
        print(f"{name}:")
        results[name] = {
            "bfs": bench("bfs_distances", lambda: mod.bfs_distances(g.indptr, g.indices, 1), repeat),
            "update": bench(
                "update_candidates (moving)",
                lambda: mod.update_candidates(g.closed_nbrs, mask, d0, d1, 1, True),
                repeat,
            ),
            "frozen": bench(
                "update_candidates (frozen)",
                lambda: mod.update_candidates(g.closed_nbrs, mask, d0, d1, 0, False),
                repeat,
            ),
            "ecc": bench("masked_eccentricity (40 tables)", lambda: mod.masked_eccentricity(tables), repeat),
        }
    if "cython" in results:
        print("speed-up (python / cython):")
        for key, t in results["python"].items():
            print(f"  {key:<34} {t / results['cython'][key]:9.2f}x")
    else:
        print("compiled extension not built; only the fallback was timed")


GAME_SNIPPET = """
import time
from relloc import BACKEND, GameConfig, GreedyEvader, SlowCat, play_game
from relloc.generators import gen_random_connected
g = gen_random_connected(300, 0.01, 4, seed=3)
t = time.perf_counter()
play_game(g, SlowCat(4), GreedyEvader(), GameConfig(horizon=16 * 310, slowness=16))
print(f"{BACKEND} {time.perf_counter() - t:.3f}")
"""


def game_table() -> None:
    print("end-to-end game (slow cat vs greedy, n=300):")
    for pure in ("1", "0"):
        env = dict(os.environ, RELLOC_PURE=pure)
        out = subprocess.run(
            [sys.executable, "-c", GAME_SNIPPET], env=env, capture_output=True, text=True, check=True
        ).stdout.split()
        print(f"  {out[0]:<34} {float(out[1]) * 1e3:9.1f} ms")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--no-game", action="store_true")
    args = ap.parse_args()
    kernel_table(args.n, args.repeat)
    if not args.no_game:
        game_table()


if __name__ == "__main__":
    main()
