"""Adaptive Simpson quadrature.

A fixed, simple scheme is used for every 1-D integral in the package so that
results are bit-reproducible across platforms; the integrands are all smooth,
so adaptive Simpson reaches absolute tolerances of 1e-12 cheaply.
"""

from typing import Callable

__all__ = ["adaptive_simpson"]

_MAX_DEPTH = 60


def _simpson(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _recurse(f, a, fa, b, fb, m, fm, whole, tol, depth):
    lm, flm, left = _simpson(f, a, fa, m, fm)
    rm, frm, right = _simpson(f, m, fm, b, fb)
    err = left + right - whole
    if abs(err) <= 15.0 * tol or depth >= _MAX_DEPTH:
        # Richardson extrapolation of the two half-interval estimates.
        return left + right + err / 15.0
    half = 0.5 * tol
    return _recurse(f, a, fa, m, fm, lm, flm, left, half, depth + 1) + _recurse(
        f, m, fm, b, fb, rm, frm, right, half, depth + 1
    )


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12) -> float:
    """Integrate f over [a, b] to absolute tolerance tol."""
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m, fm, whole = _simpson(f, a, fa, b, fb)
    return _recurse(f, a, fa, b, fb, m, fm, whole, tol, 0)
