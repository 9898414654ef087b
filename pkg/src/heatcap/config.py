"""Run configuration: JSON parsing, strict schema validation, defaults.

Validation is structural only (types, ranges, unknown keys); geometric
hypotheses are checked later by the geometry module, so e.g. cap_fraction = 1.2
passes the schema and fails at certification time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional

from .errors import ConfigError

ALL_CHECKS = ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11"]


@dataclass(frozen=True)
class ModelConfig:
    family: str = "round_cap"
    n: int = 2
    rho0: float = 1.0
    cap_fraction: float = 1.0
    samples: Optional[List[float]] = None
    r_max: Optional[float] = None


@dataclass(frozen=True)
class SolverConfig:
    mesh_points: int = 800
    l_max: int = 24
    modes_per_l: int = 20
    refine: bool = False


@dataclass(frozen=True)
class TGridConfig:
    min: Optional[float] = None  # None: auto from rho_eff and the tail policy
    max: Optional[float] = None  # None: 5 / rho_eff
    count: int = 16
    log: bool = True


@dataclass(frozen=True)
class GridConfig:
    t: TGridConfig = field(default_factory=TGridConfig)
    k_max: int = 200


@dataclass(frozen=True)
class OutputConfig:
    format: str = "csv"
    path: Optional[str] = None
    precision: int = 9


@dataclass(frozen=True)
class RunConfig:
    model: ModelConfig = field(default_factory=ModelConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    grids: GridConfig = field(default_factory=GridConfig)
    checks: List[str] = field(default_factory=lambda: list(ALL_CHECKS))
    output: OutputConfig = field(default_factory=OutputConfig)

    def effective(self) -> dict:
        """Fully defaulted configuration, echoed into every output artifact."""
        return {
            "model": {
                "family": self.model.family,
                "n": self.model.n,
                **(
                    {"rho0": self.model.rho0, "cap_fraction": self.model.cap_fraction}
                    if self.model.family == "round_cap"
                    else {"samples": self.model.samples, "r_max": self.model.r_max}
                ),
            },
            "solver": {
                "mesh_points": self.solver.mesh_points,
                "l_max": self.solver.l_max,
                "modes_per_l": self.solver.modes_per_l,
                "refine": self.solver.refine,
            },
            "grids": {
                "t": {
                    "min": self.grids.t.min,
                    "max": self.grids.t.max,
                    "count": self.grids.t.count,
                    "log": self.grids.t.log,
                },
                "k_max": self.grids.k_max,
            },
            "checks": list(self.checks),
            "output": {
                "format": self.output.format,
                "path": self.output.path,
                "precision": self.output.precision,
            },
        }


def _require_keys(obj: dict, allowed: set, where: str):
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")


def _typed(obj: dict, key: str, types, where: str, default):
    if key not in obj:
        return default
    val = obj[key]
    if isinstance(val, bool) and bool not in (types if isinstance(types, tuple) else (types,)):
        raise ConfigError(f"field {where}.{key} has wrong type (bool)")
    if not isinstance(val, types):
        raise ConfigError(f"field {where}.{key} has wrong type ({type(val).__name__})")
    return val


def _parse_model(obj: dict) -> ModelConfig:
    family = _typed(obj, "family", str, "model", "round_cap")
    if family == "round_cap":
        _require_keys(obj, {"family", "n", "rho0", "cap_fraction"}, "model")
        n = _typed(obj, "n", int, "model", 2)
        rho0 = float(_typed(obj, "rho0", (int, float), "model", 1.0))
        cap = float(_typed(obj, "cap_fraction", (int, float), "model", 1.0))
        if n < 2:
            raise ConfigError(f"model.n must be >= 2, got {n}")
        if rho0 <= 0:
            raise ConfigError(f"model.rho0 must be positive, got {rho0}")
        if cap <= 0:
            raise ConfigError(f"model.cap_fraction must be positive, got {cap}")
        return ModelConfig(family=family, n=n, rho0=rho0, cap_fraction=cap)
    if family == "warped":
        _require_keys(obj, {"family", "n", "samples", "r_max"}, "model")
        n = _typed(obj, "n", int, "model", 2)
        samples = _typed(obj, "samples", list, "model", None)
        r_max = _typed(obj, "r_max", (int, float), "model", None)
        if samples is None or r_max is None:
            raise ConfigError("model family 'warped' requires 'samples' and 'r_max'")
        return ModelConfig(family=family, n=n, samples=[float(s) for s in samples], r_max=float(r_max))
    raise ConfigError(f"unknown model.family {family!r} (expected 'round_cap' or 'warped')")


def _parse_solver(obj: dict) -> SolverConfig:
    _require_keys(obj, {"mesh_points", "l_max", "modes_per_l", "refine"}, "solver")
    cfg = SolverConfig(
        mesh_points=_typed(obj, "mesh_points", int, "solver", 800),
        l_max=_typed(obj, "l_max", int, "solver", 24),
        modes_per_l=_typed(obj, "modes_per_l", int, "solver", 20),
        refine=_typed(obj, "refine", bool, "solver", False),
    )
    if cfg.mesh_points < 64:
        raise ConfigError(f"solver.mesh_points must be >= 64, got {cfg.mesh_points}")
    if cfg.l_max < 0 or cfg.modes_per_l < 1:
        raise ConfigError("solver.l_max must be >= 0 and solver.modes_per_l >= 1")
    return cfg


def _parse_grids(obj: dict) -> GridConfig:
    _require_keys(obj, {"t", "k_max"}, "grids")
    tobj = obj.get("t", {})
    if not isinstance(tobj, dict):
        raise ConfigError("grids.t must be an object")
    _require_keys(tobj, {"min", "max", "count", "log"}, "grids.t")
    tmin = tobj.get("min")
    tmax = tobj.get("max")
    tcfg = TGridConfig(
        min=None if tmin is None else float(tmin),
        max=None if tmax is None else float(tmax),
        count=_typed(tobj, "count", int, "grids.t", 16),
        log=_typed(tobj, "log", bool, "grids.t", True),
    )
    if tcfg.count < 1:
        raise ConfigError(f"grids.t.count must be >= 1, got {tcfg.count}")
    k_max = _typed(obj, "k_max", int, "grids", 200)
    if k_max < 1:
        raise ConfigError(f"grids.k_max must be >= 1, got {k_max}")
    return GridConfig(t=tcfg, k_max=k_max)


def _parse_output(obj: dict) -> OutputConfig:
    _require_keys(obj, {"format", "path", "precision"}, "output")
    fmt = _typed(obj, "format", str, "output", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format must be 'csv' or 'json', got {fmt!r}")
    precision = _typed(obj, "precision", int, "output", 9)
    if not 1 <= precision <= 17:
        raise ConfigError(f"output.precision must be in [1, 17], got {precision}")
    path = obj.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError("output.path must be a string or null")
    return OutputConfig(format=fmt, path=path, precision=precision)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON configuration document."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ConfigError("top-level configuration must be a JSON object")
    _require_keys(obj, {"model", "solver", "grids", "checks", "output"}, "top level")
    for key in ("model", "solver", "grids", "output"):
        if key in obj and not isinstance(obj[key], dict):
            raise ConfigError(f"field {key} must be an object")
    checks = obj.get("checks", list(ALL_CHECKS))
    if not isinstance(checks, list) or not all(isinstance(c, str) for c in checks):
        raise ConfigError("checks must be a list of check identifiers")
    bad = [c for c in checks if c not in ALL_CHECKS]
    if bad:
        raise ConfigError(f"unknown check id(s) {bad}; valid ids: {ALL_CHECKS}")
    return RunConfig(
        model=_parse_model(obj.get("model", {})),
        solver=_parse_solver(obj.get("solver", {})),
        grids=_parse_grids(obj.get("grids", {})),
        checks=list(checks),
        output=_parse_output(obj.get("output", {})),
    )
