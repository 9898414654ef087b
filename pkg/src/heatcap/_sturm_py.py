"""Pure-Python (numpy) backend for the symmetric tridiagonal eigensolver.

Same contract as the compiled backend in ``_sturm.pyx``: Sturm-sequence
eigenvalue counts, index-based bisection for the smallest eigenvalues, and a
partially pivoted shifted tridiagonal solve used by inverse iteration.  The
bisection recurrence is vectorized across shift values; the solve goes through
LAPACK's dgtsv.
"""

import numpy as np
from scipy.linalg import lapack

BACKEND_NAME = "python"


def _pivmin(e2max: float) -> float:
    return max(e2max, 1.0) * 1e-290


def sturm_counts(d, e, shifts):
    """Number of eigenvalues strictly below each shift (vectorized)."""
    d = np.asarray(d, dtype=float)
    e2 = np.square(np.asarray(e, dtype=float))
    x = np.atleast_1d(np.asarray(shifts, dtype=float))
    piv = _pivmin(float(e2.max()) if e2.size else 1.0)
    q = d[0] - x
    count = (q < 0).astype(np.int64)
    for i in range(1, d.size):
        np.copyto(q, np.where(np.abs(q) < piv, -piv, q))
        q = d[i] - x - e2[i - 1] / q
        count += q < 0
    return count


def sturm_count(d, e, x) -> int:
    return int(sturm_counts(d, e, [x])[0])


def eigvals_smallest(d, e, num: int, tol: float = 1e-12):
    """The num smallest eigenvalues, ascending, by index bisection to abs tol."""
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    radius = np.zeros_like(d)
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    lo = np.full(num, float((d - radius).min()))
    hi = np.full(num, float((d + radius).max()))
    idx = np.arange(num)
    while True:
        mid = 0.5 * (lo + hi)
        # skip brackets already at tolerance or at floating-point resolution
        active = (hi - lo > tol) & (mid > lo) & (mid < hi)
        if not bool(active.any()):
            break
        counts = sturm_counts(d, e, mid)
        below = counts <= idx
        lo = np.where(active & below, mid, lo)
        hi = np.where(active & ~below, mid, hi)
    return 0.5 * (lo + hi)


def solve_shifted(d, e, lam: float, rhs):
    """Solve (T - lam*I) x = rhs for symmetric tridiagonal T = (d, e)."""
    dl = np.asarray(e, dtype=float).copy()
    du = dl.copy()
    db = np.asarray(d, dtype=float) - lam
    _, _, _, x, info = lapack.dgtsv(dl, db, du, np.asarray(rhs, dtype=float))
    if info != 0:
        raise ZeroDivisionError(f"singular shifted tridiagonal system (info={info})")
    return x
