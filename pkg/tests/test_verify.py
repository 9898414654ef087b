import dataclasses
import json

import pytest

from heatcap import verify
from heatcap.config import (ModelConfig, RunConfig, SolverConfig,
                            parse_config)
from heatcap.errors import ConfigError, DomainError


def small_config(**model_kw):
    return RunConfig(
        model=ModelConfig(**model_kw),
        solver=SolverConfig(mesh_points=300, l_max=12, modes_per_l=10),
    )


@pytest.fixture(scope="module")
def hemi_report():
    return verify.run_suite(small_config())


class TestRunSuite:
    def test_hemisphere_passes(self, hemi_report):
        assert hemi_report.verdict == "pass"
        assert all(c.status != "fail" for c in hemi_report.checks)

    def test_all_checks_present(self, hemi_report):
        seen = {c.check_id for c in hemi_report.checks}
        assert seen == set(f"C{i}" for i in range(1, 12))

    def test_aggregates_consistent(self, hemi_report):
        for cid, agg in hemi_report.aggregates.items():
            inst = [c for c in hemi_report.checks if c.check_id == cid]
            assert agg["count"] == len(inst)
            assert agg["passes"] + agg["fails"] + agg["skipped"] == len(inst)

    def test_margins_have_slack_recorded(self, hemi_report):
        for c in hemi_report.checks:
            if c.status == "pass":
                assert c.margin >= -c.slack

    def test_check_filter(self):
        cfg = dataclasses.replace(small_config(), checks=["C1", "C5"])
        rep = verify.run_suite(cfg)
        assert {c.check_id for c in rep.checks} == {"C1", "C5"}

    def test_warped_model_skips_diameter_checks(self):
        import numpy as np
        samples = np.sin(np.linspace(0.0, 1.2, 256)).tolist()
        cfg = RunConfig(
            model=ModelConfig(family="warped", n=2, samples=samples,
                              r_max=1.2),
            solver=SolverConfig(mesh_points=300, l_max=10, modes_per_l=8),
        )
        rep = verify.run_suite(cfg)
        assert rep.verdict == "pass"
        c6 = [c for c in rep.checks if c.check_id == "C6"]
        assert c6 and all(c.status == "skipped" for c in c6)

    def test_invalid_geometry_raises(self):
        with pytest.raises(DomainError):
            verify.run_suite(small_config(cap_fraction=1.2))

    def test_determinism(self):
        a = verify.report_to_json(verify.run_suite(small_config()))
        b = verify.report_to_json(verify.run_suite(small_config()))
        assert a == b


class TestSerialization:
    def test_json_roundtrip(self, hemi_report):
        text = verify.report_to_json(hemi_report)
        back = verify.report_from_json(text)
        assert verify.report_to_json(back) == text
        assert back.verdict == hemi_report.verdict
        assert len(back.checks) == len(hemi_report.checks)

    def test_json_structure(self, hemi_report):
        obj = json.loads(verify.report_to_json(hemi_report))
        assert obj["verdict"] == "pass"
        assert obj["model"]["n"] == 2
        assert "lambda_cut" in obj["spectrum"]
        assert obj["config_echo"]["solver"]["mesh_points"] == 300

    def test_csv_rows(self, hemi_report):
        rows = verify.report_to_csv_rows(hemi_report)
        assert rows[0] == "check_id,params,lhs,rhs,margin,status"
        assert len(rows) == len(hemi_report.checks) + 1
        assert all(r.split(",")[0].startswith("C") for r in rows[1:])


class TestConfigParsing:
    def test_defaults(self):
        cfg = parse_config("{}")
        assert cfg.model.family == "round_cap"
        assert cfg.solver.mesh_points == 800
        assert cfg.grids.k_max == 200

    def test_unknown_key_rejected_with_path(self):
        with pytest.raises(ConfigError, match="solver"):
            parse_config('{"solver": {"mesh": 100}}')
        with pytest.raises(ConfigError, match="unknown"):
            parse_config('{"extra": 1}')

    def test_malformed_json_diagnostics(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_config('{"model":')

    def test_type_errors(self):
        with pytest.raises(ConfigError):
            parse_config('{"solver": {"mesh_points": "lots"}}')
        with pytest.raises(ConfigError):
            parse_config('{"checks": ["C99"]}')

    def test_effective_echo_round_trips(self):
        cfg = parse_config('{"model": {"n": 3, "rho0": 2.0}}')
        echo = cfg.effective()
        cfg2 = parse_config(json.dumps(echo))
        assert cfg2.effective() == echo


class TestTGrid:
    def test_grid_properties(self, hemi_report):
        cfg = small_config()
        model = verify.build_model(cfg.model)
        import heatcap.spectral as spec
        from heatcap.geometry import curvature_report
        rep = curvature_report(model)
        sp = spec.assemble_spectrum(model, 12, 300, 10, rho_eff=rep.rho_eff,
                                    mu=rep.volume)
        grid = verify.default_t_grid(sp)
        assert len(grid) == 16
        assert all(a < b for a, b in zip(grid, grid[1:]))
        # smallest t keeps the truncated kernel resolvable
        assert spec.kernel_tail_bound(sp, grid[0]) * rep.volume <= 1e-6
