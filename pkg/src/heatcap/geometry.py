"""Rotationally symmetric model manifolds and their geometric invariants.

A model is the warped product ([0, r_max] x S^{n-1}, dr^2 + f(r)^2 g_{S^{n-1}})
with a smooth pole at r = 0 and boundary at r = r_max.  The canonical family is
the geodesic cap of a round sphere; sampled warp profiles are supported for
curvature certification but are excluded from distance/diameter computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import minimize_scalar

from .errors import DomainError, HypothesisError, UnsupportedModelError
from .quadrature import adaptive_simpson
from .special import sphere_area

__all__ = [
    "WarpedProductModel",
    "GeometryReport",
    "make_round_cap",
    "make_warped",
    "curvature_report",
    "comparison_volume",
    "comparison_volume_inverse",
    "geodesic_distance",
    "comparison_diameter",
]

QUAD_TOL = 1e-12


@dataclass(frozen=True)
class WarpedProductModel:
    """Immutable rotationally symmetric manifold with convex boundary."""

    n: int
    r_max: float
    family: str  # "round_cap" | "warped"
    rho0: Optional[float] = None
    cap_fraction: Optional[float] = None
    _spline: Optional[CubicSpline] = None

    def warp(self, r):
        """Profile f(r)."""
        if self.family == "round_cap":
            kappa = self._kappa
            return np.sin(kappa * np.asarray(r, dtype=float)) / kappa
        return self._spline(r)

    def dwarp(self, r):
        """f'(r)."""
        if self.family == "round_cap":
            return np.cos(self._kappa * np.asarray(r, dtype=float))
        return self._spline(r, 1)

    def d2warp(self, r):
        """f''(r)."""
        if self.family == "round_cap":
            kappa = self._kappa
            return -kappa * np.sin(kappa * np.asarray(r, dtype=float))
        return self._spline(r, 2)

    @property
    def _kappa(self) -> float:
        return math.sqrt(self.rho0 / (self.n - 1))

    @property
    def is_round(self) -> bool:
        return self.family == "round_cap"


@dataclass(frozen=True)
class GeometryReport:
    """Certified geometric invariants consumed by the closed-form bounds."""

    rho_eff: float
    pi_min: float
    volume: float
    diameter: Optional[float]  # None for sampled profiles (see module docstring)


def make_round_cap(n: int, rho0: float, cap_fraction: float) -> WarpedProductModel:
    """Geodesic cap of the round n-sphere with Ricci curvature exactly rho0.

    cap_fraction = 1 is the hemisphere (totally geodesic, hence convex, boundary);
    cap_fraction > 1 would make the boundary non-convex and is rejected.
    """
    if not isinstance(n, int) or n < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {n}")
    if not rho0 > 0:
        raise DomainError(f"rho0 must be positive, got {rho0}")
    if not 0 < cap_fraction <= 1:
        raise DomainError(
            f"cap_fraction must lie in (0, 1], got {cap_fraction} "
            "(cap_fraction > 1 gives a non-convex boundary)"
        )
    r_max = cap_fraction * 0.5 * math.pi * math.sqrt((n - 1) / rho0)
    return WarpedProductModel(n=n, r_max=r_max, family="round_cap", rho0=rho0, cap_fraction=cap_fraction)


def make_warped(n: int, r_max: float, samples) -> WarpedProductModel:
    """Model from warp-profile samples on a uniform grid over [0, r_max].

    The profile is interpolated with a C^2 cubic spline.  Pole smoothness
    (f(0) = 0, f'(0) = 1) and positivity on (0, r_max] are validated.
    """
    if not isinstance(n, int) or n < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {n}")
    if not r_max > 0:
        raise DomainError(f"r_max must be positive, got {r_max}")
    vals = np.asarray(samples, dtype=float)
    if vals.ndim != 1 or vals.size < 4:
        raise DomainError("warp samples must be a 1-D sequence with at least 4 entries")
    grid = np.linspace(0.0, r_max, vals.size)
    # not-a-knot: a natural spline would force f'' = 0 at the ends, flattening
    # the Ricci curvature the profile is supposed to encode
    spline = CubicSpline(grid, vals, bc_type="not-a-knot")
    if abs(vals[0]) > 1e-10:
        raise DomainError(f"warp profile must vanish at the pole, got f(0) = {vals[0]}")
    d0 = float(spline(0.0, 1))
    if abs(d0 - 1.0) > 1e-6:
        raise DomainError(f"smooth pole requires f'(0) = 1, got {d0}")
    probe = np.linspace(r_max / vals.size, r_max, 4 * vals.size)
    if np.any(spline(probe) <= 0):
        raise DomainError("warp profile must be positive on (0, r_max]")
    return WarpedProductModel(n=n, r_max=r_max, family="warped", _spline=spline)


def _ricci_min(model: WarpedProductModel, r):
    """Pointwise smaller Ricci eigenvalue of dr^2 + f^2 g_{S^{n-1}}."""
    f = model.warp(r)
    d2 = model.d2warp(r)
    radial = -(model.n - 1) * d2 / f
    if model.n == 2:
        return radial
    d1 = model.dwarp(r)
    tangential = -d2 / f + (model.n - 2) * (1.0 - d1 * d1) / (f * f)
    return np.minimum(radial, tangential)


def curvature_report(model: WarpedProductModel, samples: int = 200) -> GeometryReport:
    """Certify the curvature/convexity hypotheses and compute volume and diameter.

    rho_eff is minimized over a grid of 10*samples points then polished locally;
    a non-positive rho_eff or a negative boundary second fundamental form raises
    HypothesisError naming the failed hypothesis.
    """
    grid = np.linspace(model.r_max / (10.0 * samples), model.r_max, 10 * samples)
    vals = _ricci_min(model, grid)
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    rho_eff = float(vals[i])
    if hi > lo:
        res = minimize_scalar(lambda r: float(_ricci_min(model, r)), bounds=(lo, hi), method="bounded")
        rho_eff = min(rho_eff, float(res.fun))

    f_b = float(model.warp(model.r_max))
    pi_min = float(model.dwarp(model.r_max)) / f_b

    if not rho_eff > 0:
        raise HypothesisError(f"Ricci lower bound hypothesis fails: certified rho_eff = {rho_eff} <= 0")
    if pi_min < -1e-12:
        raise HypothesisError(f"convex-boundary hypothesis fails: min boundary shape eigenvalue = {pi_min} < 0")
    pi_min = max(pi_min, 0.0)

    omega = sphere_area(model.n)
    volume = omega * adaptive_simpson(lambda r: float(model.warp(r)) ** (model.n - 1), 0.0, model.r_max, QUAD_TOL)
    diameter = 2.0 * model.r_max if model.is_round else None
    return GeometryReport(rho_eff=rho_eff, pi_min=pi_min, volume=volume, diameter=diameter)


def comparison_diameter(rho: float, n: int) -> float:
    """Diameter pi*sqrt((n-1)/rho) of the constant-curvature comparison sphere."""
    return math.pi * math.sqrt((n - 1) / rho)


def comparison_volume(rho: float, n: int, s: float) -> float:
    """Comparison volume profile V_rho(s) = int_0^s sin^{n-1}(sqrt(rho/(n-1)) u) du."""
    if rho <= 0:
        raise DomainError(f"rho must be positive, got {rho}")
    d = comparison_diameter(rho, n)
    if not 0 <= s <= d * (1 + 1e-12):
        raise DomainError(f"s must lie in [0, {d}], got {s}")
    kappa = math.sqrt(rho / (n - 1))
    return adaptive_simpson(lambda u: math.sin(kappa * u) ** (n - 1), 0.0, min(s, d), QUAD_TOL)


def comparison_volume_inverse(rho: float, n: int, v: float) -> float:
    """Inverse of comparison_volume in s, by bracketed bisection (V is increasing)."""
    d = comparison_diameter(rho, n)
    vmax = comparison_volume(rho, n, d)
    if not 0 <= v <= vmax * (1 + 1e-12):
        raise DomainError(f"v must lie in [0, {vmax}], got {v}")
    lo, hi = 0.0, d
    while hi - lo > 1e-13 * d:
        mid = 0.5 * (lo + hi)
        if comparison_volume(rho, n, mid) < v:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def geodesic_distance(model: WarpedProductModel, x, y) -> float:
    """Intrinsic distance between co-planar points x = (r1, th1), y = (r2, th2).

    Only round caps are supported: a convex cap contains the ambient minimizing
    geodesic, so the ambient spherical distance is the intrinsic one.
    """
    if not model.is_round:
        raise UnsupportedModelError("geodesic_distance is only defined for round-cap models")
    r1, t1 = x
    r2, t2 = y
    for r in (r1, r2):
        if not 0 <= r <= model.r_max * (1 + 1e-12):
            raise DomainError(f"radial coordinate {r} outside [0, {model.r_max}]")
    kappa = model._kappa
    c = math.cos(r1 * kappa) * math.cos(r2 * kappa) + math.sin(r1 * kappa) * math.sin(r2 * kappa) * math.cos(t1 - t2)
    return math.acos(min(1.0, max(-1.0, c))) / kappa
