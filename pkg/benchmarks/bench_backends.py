"""Compare the compiled and pure-Python tridiagonal solver backends.

Times the two hot kernels (Sturm-bisection eigenvalues and shifted solves
for inverse iteration) on matrices shaped like the radial discretizations
the package actually builds, then times a full spectrum assembly.

Usage: python benchmarks/bench_backends.py [--mesh 2000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from heatcap import _sturm_py, geometry, spectral, tridiag

try:
    from heatcap import _sturm
    BACKENDS = {"cython": _sturm, "python": _sturm_py}
except ImportError:
    BACKENDS = {"python": _sturm_py}


def radial_matrix(mesh):
    """The l = 0 hemisphere sector matrix, symmetrized."""
    model = geometry.make_round_cap(2, 1.0, 1.0)
    from heatcap.spectral import _sector_matrix
    d, e, *_ = _sector_matrix(model, 0, mesh)
    return d, e


def best_of(repeat, fn, *args):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--mesh", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    d, e = radial_matrix(args.mesh)
    rhs = np.random.default_rng(0).standard_normal(args.mesh)
    shift = 5.99

    print(f"mesh = {args.mesh}, active backend = {tridiag.BACKEND}\n")
    print(f"{'kernel':<34}" + "".join(f"{k:>12}" for k in BACKENDS))

    rows = [
        ("eigvals_smallest (20 modes)",
         lambda b: b.eigvals_smallest(d, e, 20, 1e-12)),
        ("sturm_count (single shift)",
         lambda b: b.sturm_count(d, e, shift)),
        ("solve_shifted (one rhs)",
         lambda b: b.solve_shifted(d, e, shift, rhs.copy())),
    ]
    for name, call in rows:
        cells = "".join(
            f"{best_of(args.repeat, call, mod) * 1e3:>10.2f}ms"
            for mod in BACKENDS.values())
        print(f"{name:<34}{cells}")

    model = geometry.make_round_cap(2, 1.0, 1.0)
    t0 = time.perf_counter()
    spectral.assemble_spectrum(model, l_max=24, mesh_points=args.mesh,
                               modes_per_l=20)
    print(f"\nfull spectrum assembly (l_max=24): "
          f"{time.perf_counter() - t0:.2f}s with {tridiag.BACKEND} backend")


if __name__ == "__main__":
    main()
