#!/usr/bin/env python3
"""Wall-time comparison of the arrowhead eigensolver against dense LAPACK.

The arrowhead path only exists for J = 0, where the Hamiltonian is diagonal
plus one border row/column.  Expect roughly O(N^2) vs O(N^3):

    python3 scripts/benchmark_solvers.py --sizes 500 1000 2000 4000 --repeats 3
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np

from semiloc.lattice import chain
from semiloc.model import ModelParams, build_hamiltonian, sample_disorder
from semiloc.spectral import diagonalize_arrowhead, diagonalize_dense


def best_of(repeats, fn):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=(500, 1000, 2000))
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    # one throwaway call so jit compilation does not pollute the first row
    warm = ModelParams(n_sites=64, W=25.0, J=0.0, g_c=30.0)
    diagonalize_arrowhead(sample_disorder(warm, seed=args.seed, index=0), warm)

    print(f"{'N':>6} {'arrowhead [s]':>14} {'dense [s]':>12} {'speedup':>8} {'max|dE|/span':>13}")
    for n in args.sizes:
        params = ModelParams(n_sites=n, W=25.0, J=0.0, g_c=30.0)
        disorder = sample_disorder(params, seed=args.seed, index=0)
        H = build_hamiltonian(chain(n, boundary="open"), params, disorder)
        t_fast = best_of(args.repeats, lambda: diagonalize_arrowhead(disorder, params))
        t_dense = best_of(args.repeats, lambda: diagonalize_dense(H))
        fast = diagonalize_arrowhead(disorder, params)
        ref = diagonalize_dense(H)
        span = ref.energies[-1] - ref.energies[0]
        err = float(np.max(np.abs(fast.energies - ref.energies)) / span)
        print(f"{n:>6} {t_fast:>14.4f} {t_dense:>12.4f} {t_dense / t_fast:>8.1f} {err:>13.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
