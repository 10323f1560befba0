"""Compare the compiled nearest-codeword kernel with the NumPy fallback.

    python benchmarks/bench_kernels.py [--points N] [--repeat R]
"""
import argparse
import timeit

import numpy as np

from lossybounds import _kernels_py
from lossybounds.kernels import BACKEND, compiled_backend

CASES = [(1, 16), (1, 256), (3, 64), (3, 1024), (8, 256), (16, 64)]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    print(f"active backend: {BACKEND}")
    if compiled_backend is None:
        print("compiled extension not built; only the NumPy path is timed")
    rng = np.random.default_rng(0)
    print(f"{'dim':>4} {'codebook':>9} {'numpy s':>10} {'cython s':>10} {'speedup':>8}")
    for dim, size in CASES:
        pts = rng.random((args.points, dim))
        book = rng.random((size, dim))
        t_py = min(timeit.repeat(lambda: _kernels_py.nearest_sq(pts, book), number=1, repeat=args.repeat))
        if compiled_backend is None:
            print(f"{dim:>4} {size:>9} {t_py:>10.4f} {'-':>10} {'-':>8}")
            continue
        a, b = compiled_backend.nearest_sq(pts, book), _kernels_py.nearest_sq(pts, book)
        assert np.array_equal(a[1], b[1]), "backends disagree"
        t_cy = min(timeit.repeat(lambda: compiled_backend.nearest_sq(pts, book), number=1, repeat=args.repeat))
        print(f"{dim:>4} {size:>9} {t_py:>10.4f} {t_cy:>10.4f} {t_py / t_cy:>8.2f}")


if __name__ == "__main__":
    main()
