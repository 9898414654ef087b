"""Command-line front end: spectra, bound tables, verification reports.

Commands: spectrum, trace, bounds, verify, report.  Exit codes: 0 success /
all checks pass, 1 verification failures present, 2 configuration error,
3 solver / truncation / geometry error.  Output files are deterministic for a
fixed config (the effective config is echoed into each artifact, wall-clock
metadata goes to a .meta.json sidecar); numbers are printed with exactly
`output.precision` significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time
from typing import List

import numpy as np

from . import bounds as bnd
from . import spectral as spec
from .config import RunConfig, parse_config
from .errors import ConfigError, HeatcapError, HypothesisError, SolverError, TruncationError
from .geometry import curvature_report
from .verify import (
    build_model,
    default_t_grid,
    report_to_csv_rows,
    report_to_json,
    run_suite,
)

EXIT_OK = 0
EXIT_CHECK_FAILURES = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".heatcap-")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x, precision: int) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return f"{x:.{precision}g}"
    return str(x)


def _config_echo_line(cfg: RunConfig) -> str:
    return "# config " + json.dumps(cfg.effective(), separators=(",", ":")) + "\n"


def _build_spectrum(cfg: RunConfig):
    model = build_model(cfg.model)
    report = curvature_report(model)
    mesh = cfg.solver.mesh_points * (2 if cfg.solver.refine else 1)
    spectrum = spec.assemble_spectrum(model, cfg.solver.l_max, mesh,
                                      cfg.solver.modes_per_l,
                                      rho_eff=report.rho_eff, mu=report.volume)
    return model, report, spectrum


def _formula_t_grid(cfg: RunConfig, rho: float) -> np.ndarray:
    t = cfg.grids.t
    t_min = t.min if t.min is not None else 0.05 / rho
    t_max = t.max if t.max is not None else 5.0 / rho
    if t.count == 1:
        return np.array([t_min])
    if t.log:
        return np.exp(np.linspace(math.log(t_min), math.log(t_max), t.count))
    return np.linspace(t_min, t_max, t.count)


def cmd_spectrum(cfg: RunConfig, out_dir: str, quiet: bool) -> int:
    _, _, spectrum = _build_spectrum(cfg)
    path = os.path.join(out_dir, "spectrum.csv")
    _atomic_write(path, _config_echo_line(cfg) + spec.spectrum_to_csv(spectrum, cfg.output.precision))
    if not quiet:
        print(f"wrote {path} ({len(spectrum.modes)} modes, lambda_cut={spectrum.lambda_cut:.6g})")
    return EXIT_OK


def cmd_trace(cfg: RunConfig, out_dir: str, quiet: bool) -> int:
    model, report, spectrum = _build_spectrum(cfg)
    p = cfg.output.precision
    rows = [_config_echo_line(cfg), "t,trace,tail_bound,lower,upper\n"]
    for t in default_t_grid(spectrum, cfg.grids.t.count, cfg.grids.t.min,
                            cfg.grids.t.max, cfg.grids.t.log):
        value, tail = spec.heat_trace(spectrum, float(t))
        lower, upper = bnd.trace_bounds(model.n, report.rho_eff, report.volume, float(t))
        rows.append(",".join(_fmt(float(v), p) for v in (t, value, tail, lower, upper)) + "\n")
    path = os.path.join(out_dir, "trace.csv")
    _atomic_write(path, "".join(rows))
    if not quiet:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_bounds(cfg: RunConfig, out_dir: str, quiet: bool) -> int:
    model = build_model(cfg.model)
    report = curvature_report(model)
    n, rho, mu = model.n, report.rho_eff, report.volume
    diam = report.diameter
    p = cfg.output.precision

    rows = [_config_echo_line(cfg),
            "t,liyau_a,liyau_b,harnack_halft_d0,ondiag_lower,ondiag_upper,"
            "trace_lower,trace_upper,refined_upper,refined_branch\n"]
    for t in _formula_t_grid(cfg, rho):
        t = float(t)
        co = bnd.liyau_coeffs(n, rho, t)
        hf = bnd.harnack_factor(n, rho, t / 2.0, t, 0.0)
        od = bnd.ondiag_bounds(n, rho, mu, t)
        tr = bnd.trace_bounds(n, rho, mu, t)
        if diam is not None:
            ru = bnd.refined_upper(n, rho, mu, diam, t)
            ru_val, ru_branch = ru.value, ru.branch
        else:
            ru_val, ru_branch = math.nan, "n/a"
        rows.append(",".join([_fmt(t, p), _fmt(co.a, p), _fmt(co.b, p), _fmt(hf, p),
                              _fmt(od[0], p), _fmt(od[1], p), _fmt(tr[0], p), _fmt(tr[1], p),
                              _fmt(ru_val, p), ru_branch]) + "\n")
    path_t = os.path.join(out_dir, "bounds_t.csv")
    _atomic_write(path_t, "".join(rows))

    rows = [_config_echo_line(cfg), "k,bound1,bound2,lb1_asym,lb2_asym,weyl\n"]
    for k in range(1, cfg.grids.k_max + 1):
        b1, b2 = bnd.eigen_lower_bounds(n, rho, diam if diam is not None else 1.0, k)
        if diam is None:
            b2 = None
        lb1, lb2, weyl = bnd.asymptotics(n, rho, mu, diam if diam is not None else 1.0, k)
        rows.append(",".join([str(k), _fmt(b1, p),
                              _fmt(b2, p) if b2 is not None else "",
                              _fmt(lb1, p), _fmt(lb2, p) if diam is not None else "",
                              _fmt(weyl, p)]) + "\n")
    path_k = os.path.join(out_dir, "bounds_k.csv")
    _atomic_write(path_k, "".join(rows))
    if not quiet:
        print(f"wrote {path_t} and {path_k}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out_dir: str, quiet: bool) -> int:
    report = run_suite(cfg)
    path_json = os.path.join(out_dir, "verify_report.json")
    path_csv = os.path.join(out_dir, "verify_report.csv")
    _atomic_write(path_json, report_to_json(report) + "\n")
    _atomic_write(path_csv, _config_echo_line(cfg)
                  + "\n".join(report_to_csv_rows(report, cfg.output.precision)) + "\n")
    if not quiet:
        fails = sum(c.status == "fail" for c in report.checks)
        print(f"verdict: {report.verdict} ({len(report.checks)} checks, {fails} failures)")
        print(f"wrote {path_json} and {path_csv}")
    return EXIT_OK if report.verdict == "pass" else EXIT_CHECK_FAILURES


def cmd_report(cfg: RunConfig, out_dir: str, quiet: bool) -> int:
    report = run_suite(cfg)
    p = cfg.output.precision
    lines = [f"model: {report.model}", f"spectrum: {report.spectrum}",
             f"verdict: {report.verdict}", ""]
    lines.append(f"{'check':>6} {'count':>6} {'pass':>6} {'fail':>6} {'skip':>6} {'min_margin':>14}")
    for cid, agg in report.aggregates.items():
        mm = agg["min_margin"]
        lines.append(f"{cid:>6} {agg['count']:>6} {agg['passes']:>6} {agg['fails']:>6} "
                     f"{agg['skipped']:>6} {_fmt(mm, 6) if mm is not None else 'n/a':>14}")
    summary = "\n".join(lines) + "\n"

    dat = ["# gnuplot columns: index check_id margin slack status\n"]
    for i, c in enumerate(report.checks):
        if c.status == "skipped":
            continue
        dat.append(f"{i} {c.check_id} {_fmt(c.margin, p)} {_fmt(c.slack, p)} {c.status}\n")

    _atomic_write(os.path.join(out_dir, "report.txt"), summary)
    _atomic_write(os.path.join(out_dir, "report.dat"), "".join(dat))
    if not quiet:
        print(summary)
    return EXIT_OK if report.verdict == "pass" else EXIT_CHECK_FAILURES


COMMANDS = {
    "spectrum": cmd_spectrum,
    "trace": cmd_trace,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
    "report": cmd_report,
}


def main(argv: List[str] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="heatcap",
        description="Spectral verification of Neumann heat-kernel and eigenvalue bounds "
                    "on rotationally symmetric models.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="path to a JSON run configuration")
    parser.add_argument("--out", default=".", help="output directory (default: current)")
    parser.add_argument("--checks", default=None,
                        help="comma-separated check ids overriding the config (e.g. C1,C4)")
    parser.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)

    started = time.time()
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
        if args.checks:
            import dataclasses
            wanted = [c.strip() for c in args.checks.split(",") if c.strip()]
            probe = parse_config(json.dumps({"checks": wanted}))  # reuse validation
            cfg = dataclasses.replace(cfg, checks=probe.checks)
    except (OSError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        code = COMMANDS[args.command](cfg, args.out, args.quiet)
    except (SolverError, TruncationError, HypothesisError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except HeatcapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    meta = {"command": args.command, "config_path": args.config,
            "elapsed_seconds": time.time() - started, "finished_unix": time.time()}
    try:
        _atomic_write(os.path.join(args.out, f"{args.command}.meta.json"),
                      json.dumps(meta, indent=2) + "\n")
    except OSError:
        pass
    return code


if __name__ == "__main__":
    sys.exit(main())
