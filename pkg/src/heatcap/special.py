"""Small special-function helpers: log-Gamma and unit-sphere areas.

Everything is done in log space so that dimensions up to n ~ 200 (needed by the
large-n volume-ratio diagnostics) neither overflow nor lose accuracy.
"""

import math

__all__ = ["log_gamma", "log_sphere_area", "sphere_area"]


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if x <= 0.0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def log_sphere_area(n: int) -> float:
    """ln of the area of the unit (n-1)-sphere, omega_{n-1} = 2 pi^{n/2} / Gamma(n/2)."""
    if n < 1:
        raise ValueError(f"sphere dimension parameter must satisfy n >= 1, got {n}")
    return math.log(2.0) + 0.5 * n * math.log(math.pi) - log_gamma(0.5 * n)


def sphere_area(n: int) -> float:
    """Area omega_{n-1} of the unit (n-1)-sphere (omega_1 = 2 pi, omega_2 = 4 pi)."""
    return math.exp(log_sphere_area(n))
