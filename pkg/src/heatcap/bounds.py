"""Closed-form evaluators for every explicit heat-kernel and eigenvalue bound.

Pure functions of the scalar inputs (n, rho, mu, diam); anything that could
overflow for large n or k is computed through logarithms with expm1/log1p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import DomainError
from .geometry import comparison_diameter, comparison_volume, comparison_volume_inverse
from .special import log_gamma

__all__ = [
    "BoundInputs",
    "LiYauCoeffs",
    "liyau_coeffs",
    "harnack_factor",
    "ondiag_bounds",
    "RefinedUpper",
    "refined_upper",
    "trace_bounds",
    "eigen_lower_bounds",
    "bound2_threshold",
    "asymptotics",
    "volume_bounds",
]


@dataclass(frozen=True)
class BoundInputs:
    """Scalar inputs feeding every closed-form bound."""

    n: int
    rho: float
    mu: float
    diam: float

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 2):
            raise DomainError(f"n must be an integer >= 2, got {self.n}")
        for name in ("rho", "mu", "diam"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class LiYauCoeffs:
    """Gradient-estimate coefficients: |grad ln P_t f|^2 <= a * Lap/P + b."""

    a: float
    b: float


def liyau_coeffs(n: int, rho: float, t: float) -> LiYauCoeffs:
    """a = e^{-2rho t/3}, b = (n rho/3) e^{-4rho t/3} / (1 - e^{-2rho t/3})."""
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    x = 2.0 * rho * t / 3.0
    a = math.exp(-x)
    b = (n * rho / 3.0) * math.exp(-2.0 * x) / (-math.expm1(-x))
    return LiYauCoeffs(a=a, b=b)


def harnack_factor(n: int, rho: float, s: float, t: float, d: float) -> float:
    """Multiplicative factor comparing P_s f(x) with P_t f(y), d = d(x, y).

    At s = 0 the factor genuinely diverges and +inf is returned.
    """
    if s < 0 or d < 0:
        raise DomainError(f"need s >= 0 and d >= 0, got s={s}, d={d}")
    if s >= t:
        raise DomainError(f"need s < t, got s={s}, t={t}")
    if s == 0.0:
        return math.inf
    c = 2.0 * rho / 3.0
    power = (n / 2.0) * (math.log(-math.expm1(-c * t)) - math.log(-math.expm1(-c * s)))
    gauss = (rho / 6.0) * d * d / (math.exp(c * t) - math.exp(c * s))
    return math.exp(power + gauss)


def ondiag_bounds(n: int, rho: float, mu: float, t: float) -> Tuple[float, float]:
    """On-diagonal sandwich (lower, upper) for p(t, x, x).

    lower <= upper is not forced by the formulas; it encodes the admissibility
    condition mu <= (6 pi / rho)^{n/2}.
    """
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    log_core = -(n / 2.0) * math.log(-math.expm1(-2.0 * rho * t / 3.0))
    lower = math.exp((n / 2.0) * math.log(rho / (6.0 * math.pi)) + log_core)
    upper = math.exp(log_core - math.log(mu))
    return lower, upper


@dataclass(frozen=True)
class RefinedUpper:
    """Diameter-refined on-diagonal upper bound with its reporting intermediates."""

    value: float
    branch: str       # "small_time" | "large_time"
    r_of_t: float
    tau: float
    clamped: bool = False


def refined_upper(n: int, rho: float, mu: float, diam: float, t: float) -> RefinedUpper:
    """Two-branch upper bound for p(t, x, x) using the comparison volume profile."""
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    tau = (3.0 / (2.0 * rho)) * math.log(
        (1.0 + math.sqrt(1.0 + 4.0 * rho * diam * diam / (3.0 * n))) / 2.0
    )
    x = 2.0 * rho * t / 3.0
    r_of_t = (3.0 * n / rho) * (math.exp(2.0 * x) - math.exp(x))
    base = (1.0 + math.exp(-x)) ** (n / 2.0) * math.exp(n / 2.0) / mu
    if t >= tau:
        return RefinedUpper(value=base, branch="large_time", r_of_t=r_of_t, tau=tau)
    s = math.sqrt(r_of_t)
    d_comp = comparison_diameter(rho, n)
    clamped = s > d_comp
    v_s = comparison_volume(rho, n, min(s, d_comp))
    v_d = comparison_volume(rho, n, min(diam, d_comp))
    return RefinedUpper(
        value=base * v_d / v_s, branch="small_time", r_of_t=r_of_t, tau=tau, clamped=clamped
    )


def trace_bounds(n: int, rho: float, mu: float, t: float) -> Tuple[float, float]:
    """Sandwich (lower, upper) for the heat trace sum e^{-lambda_k t}."""
    lower, upper = ondiag_bounds(n, rho, mu, t)
    return lower * mu, upper * mu


def bound2_threshold(n: int) -> float:
    """Validity threshold for the diameter-dependent bound: k > 2^{n/2} e^n - e^{n/2}."""
    return math.exp(0.5 * n * math.log(2.0) + n) - math.exp(0.5 * n)


def eigen_lower_bounds(
    n: int, rho: float, diam: float, k: int
) -> Tuple[float, Optional[float]]:
    """Lower bounds for the k-th Neumann eigenvalue.

    bound1 depends only on (n, rho, k) and is defined as 0 at k = 0 (the limit
    of the formula, matching lambda_0 = 0).  bound2 additionally uses the
    diameter through the inverse comparison volume, and is present only above
    its validity threshold.
    """
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if k == 0:
        bound1 = 0.0
    else:
        # (1 + e^{-n/2} k)^{2/n} in logs; then ln(1 - e^{-g}) via expm1
        g = (2.0 / n) * math.log1p(k * math.exp(-n / 2.0))
        bound1 = -n * rho / (3.0 * math.log(-math.expm1(-g)))

    bound2 = None
    if k > bound2_threshold(n):
        log_v = (
            (n / 2.0) * (math.log(2.0) + 1.0)
            - math.log1p(k * math.exp(-n / 2.0))
            + math.log(comparison_volume(rho, n, min(diam, comparison_diameter(rho, n))))
        )
        s = comparison_volume_inverse(rho, n, math.exp(log_v))
        bound2 = n * rho / (
            3.0 * math.log((1.0 + math.sqrt(1.0 + (4.0 * rho / (3.0 * n)) * s * s)) / 2.0)
        )
    return bound1, bound2


def asymptotics(n: int, rho: float, mu: float, diam: float, k: int) -> Tuple[float, float, float]:
    """Large-k equivalents (lb1_asym, lb2_asym, weyl).

    lb1_asym = (n rho / 3e) k^{2/n}.  lb2_asym is the exact large-k equivalent
    of the diameter-dependent bound, (n^{2-2/n} / 2e^2) (rho/(n-1))^{1-1/n}
    (k / V_rho(D))^{2/n}.  weyl solves lambda^{n/2} = (4 pi)^{n/2}
    Gamma(1+n/2) k / mu.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    lb1 = (n * rho / 3.0) * math.exp((2.0 / n) * math.log(k) - 1.0)
    v_d = comparison_volume(rho, n, min(diam, comparison_diameter(rho, n)))
    lb2 = math.exp(
        (2.0 - 2.0 / n) * math.log(n)
        - math.log(2.0)
        - 2.0
        + (1.0 - 1.0 / n) * math.log(rho / (n - 1.0))
        + (2.0 / n) * (math.log(k) - math.log(v_d))
    )
    weyl = math.exp(
        (2.0 / n)
        * ((n / 2.0) * math.log(4.0 * math.pi) + log_gamma(1.0 + n / 2.0) + math.log(k) - math.log(mu))
    )
    return lb1, lb2, weyl


def volume_bounds(n: int, rho: float) -> Tuple[float, float, float]:
    """Volume bound (6 pi / rho)^{n/2}, the Bishop comparison volume, and their ratio."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if rho <= 0:
        raise DomainError(f"rho must be positive, got {rho}")
    log_heat = (n / 2.0) * math.log(6.0 * math.pi / rho)
    log_bishop = (
        math.log(2.0)
        + ((n + 1) / 2.0) * math.log(math.pi)
        - log_gamma((n + 1) / 2.0)
        + (n / 2.0) * math.log((n - 1.0) / rho)
    )
    return math.exp(log_heat), math.exp(log_bishop), math.exp(log_heat - log_bishop)
