"""Symmetric tridiagonal eigensolver: backend selection and the eigenpair driver.

The hot kernels (Sturm counts, bisection, shifted solves) live in the compiled
extension ``heatcap._sturm`` when it is available; otherwise the numpy fallback
``heatcap._sturm_py`` is used.  Set HEATCAP_BACKEND=python to force the
fallback (e.g. for benchmarking).
"""

import os

import numpy as np

from .errors import SolverError

if os.environ.get("HEATCAP_BACKEND", "").lower() == "python":
    from . import _sturm_py as _impl
else:
    try:
        from . import _sturm as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _sturm_py as _impl  # type: ignore[no-redef]

BACKEND = _impl.BACKEND_NAME

sturm_count = _impl.sturm_count
sturm_counts = _impl.sturm_counts
eigvals_smallest = _impl.eigvals_smallest
solve_shifted = _impl.solve_shifted

BISECT_TOL = 1e-12


def _inverse_iteration(d, e, lam, scale):
    n = d.size
    shift = lam
    rng = np.random.RandomState(1234)
    v = np.full(n, 1.0 / np.sqrt(n))
    for attempt in range(6):
        ok = True
        try:
            for _ in range(3):
                v = solve_shifted(d, e, shift, v)
                nv = float(np.linalg.norm(v))
                if not np.isfinite(nv) or nv == 0.0:
                    ok = False
                    break
                v /= nv
        except ZeroDivisionError:
            ok = False
        if ok and _residual(d, e, lam, v) <= 1e-8 * scale:
            break
        # perturb the shift / restart direction and retry
        shift = lam + (attempt + 1) * 1e-13 * scale
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
    else:
        raise SolverError(f"inverse iteration failed to converge at eigenvalue {lam}")
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    return v


def _residual(d, e, lam, v):
    r = (d - lam) * v
    r[:-1] += e * v[1:]
    r[1:] += e * v[:-1]
    return float(np.linalg.norm(r, np.inf))


def solve_smallest(d, e, num):
    """The num smallest eigenpairs of the symmetric tridiagonal matrix (d, e).

    Eigenvalues come from index-based Sturm bisection (no eigenvalue below the
    largest returned one can be missed), eigenvectors from inverse iteration.
    Returns (lams, vecs) with vecs[:, j] the unit eigenvector for lams[j].
    """
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    if num < 1 or num > d.size:
        raise ValueError(f"num must be in [1, {d.size}], got {num}")
    scale = float(np.max(np.abs(d)) + 2.0 * (np.max(np.abs(e)) if e.size else 0.0))
    lams = np.asarray(eigvals_smallest(d, e, num, BISECT_TOL), dtype=float)
    vecs = np.empty((d.size, num))
    for j, lam in enumerate(lams):
        vecs[:, j] = _inverse_iteration(d, e, lam, scale)
    return lams, vecs
