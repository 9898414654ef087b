"""End-to-end acceptance suite.

Each test prints one PASS/FAIL line so the run log doubles as a checklist.
The heavy hemisphere spectrum (mesh 2000, 41 angular sectors) is shared
across criteria through a module fixture.
"""

import math
import time

import numpy as np
import pytest

from heatcap import bounds, geometry, spectral, verify
from heatcap.config import ModelConfig, RunConfig, SolverConfig


RESULTS = []


def _report(name, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    line = f"[{tag}] {name}" + (f" ({detail})" if detail else "")
    print(line)
    RESULTS.append(line)
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def hemi_fine():
    model = geometry.make_round_cap(n=2, rho0=1.0, cap_fraction=1.0)
    t0 = time.time()
    sp = spectral.assemble_spectrum(model, l_max=40, mesh_points=2000,
                                    modes_per_l=20)
    return model, sp, time.time() - t0


def test_criterion_1_hemisphere_spectrum(hemi_fine):
    _, sp, elapsed = hemi_fine
    want = np.array([0, 2, 2, 6, 6, 6, 12, 12, 12, 12], dtype=float)
    got = sp.sorted_eigs[:10]
    rel = np.abs(got - want) / np.where(want > 0, want, 1.0)
    _report("criterion 1: hemisphere first 10 eigenvalues, rel err <= 1e-4",
            bool(np.all(rel <= 1e-4)) and elapsed <= 60.0,
            f"max rel err {rel.max():.2e}, solve time {elapsed:.1f}s")


def test_criterion_2_trace_sandwich(hemi_fine):
    _, sp, _ = hemi_fine
    ok, details = True, []
    for t in (0.25, 0.5, 1.0, 2.0):
        value, _ = spectral.heat_trace(sp, t)
        lo, hi = bounds.trace_bounds(2, 1.0, 2 * math.pi, t)
        ok &= lo < value < hi
        details.append(f"t={t}: {lo:.4f} < {value:.4f} < {hi:.4f}")
    v1, _ = spectral.heat_trace(sp, 1.0)
    lo1, hi1 = bounds.trace_bounds(2, 1.0, 2 * math.pi, 1.0)
    triple_ok = (abs(lo1 - 0.685117) <= 1e-4
                 and abs(v1 - 1.278131) <= 1e-4
                 and abs(hi1 - 2.055150) <= 1e-4)
    _report("criterion 2: trace sandwich at t in {0.25,0.5,1,2} + t=1 triple",
            ok and triple_ok, "; ".join(details))


def test_criterion_3_eigenvalue_lower_bounds(hemi_fine):
    _, sp, _ = hemi_fine
    ok = True
    worst = math.inf
    for k in range(1, 201):
        lam = sp.sorted_eigs[k]
        b1, b2 = bounds.eigen_lower_bounds(2, 1.0, math.pi, k)
        ok &= b1 <= lam + 1e-9
        if b2 is not None:
            ok &= b2 <= lam + 1e-9
            worst = min(worst, lam - b2)
        worst = min(worst, lam - b1)

    cap = geometry.make_round_cap(n=2, rho0=1.0, cap_fraction=0.75)
    rep = geometry.curvature_report(cap)
    spc = spectral.assemble_spectrum(cap, l_max=40, mesh_points=1200,
                                     modes_per_l=20)
    for k in range(1, 201):
        lam = spc.sorted_eigs[k]
        b1, _ = bounds.eigen_lower_bounds(2, rep.rho_eff, rep.diameter, k)
        ok &= b1 <= lam + 1e-9
        worst = min(worst, lam - b1)

    b1_1, _ = bounds.eigen_lower_bounds(2, 1.0, math.pi, 1)
    fixture_ok = abs(b1_1 - 0.507642) <= 1e-5
    _report("criterion 3: bound1/bound2 below lambda_k for k <= 200, both caps",
            ok and fixture_ok, f"min margin {worst:.4f}, bound1(1)={b1_1:.6f}")


def test_criterion_4_pointwise_suite():
    cfg = RunConfig(checks=["C1", "C2", "C3", "C4", "C6", "C10", "C11"])
    t0 = time.time()
    rep = verify.run_suite(cfg)
    elapsed = time.time() - t0
    fails = sum(c.status == "fail" for c in rep.checks)
    _report("criterion 4: pointwise inequality checks, zero failures, <= 5 min",
            fails == 0 and elapsed <= 300.0,
            f"{len(rep.checks)} checks, {fails} failures, {elapsed:.1f}s")


def test_criterion_5_asymptotic_consistency():
    k = 10 ** 8
    b1, b2 = bounds.eigen_lower_bounds(2, 1.0, math.pi, k)
    lb1, lb2, _ = bounds.asymptotics(2, 1.0, 2 * math.pi, math.pi, k)
    r1, r2 = b1 / lb1, b2 / lb2
    _report("criterion 5: k=1e8 bound/asymptote ratios in [0.99, 1.01]",
            0.99 <= r1 <= 1.01 and 0.99 <= r2 <= 1.01,
            f"ratios {r1:.8f}, {r2:.8f}")


def test_criterion_6_volume_bounds():
    catalog = [
        geometry.make_round_cap(2, 1.0, 1.0),
        geometry.make_round_cap(2, 1.0, 0.6),
        geometry.make_round_cap(3, 2.0, 0.75),
        geometry.make_round_cap(4, 1.5, 0.5),
    ]
    ok = True
    for m in catalog:
        rep = geometry.curvature_report(m)
        cap_bound, _, _ = bounds.volume_bounds(m.n, rep.rho_eff)
        ok &= rep.volume <= cap_bound

    paper_b, bishop_b, _ = bounds.volume_bounds(2, 1.0)
    fixture_ok = (abs(paper_b - 6 * math.pi) <= 1e-10
                  and abs(bishop_b - 4 * math.pi) <= 1e-10)

    # sharpness-gap ratio normalized by its true (3/e)^{n/2} growth law
    def q(n):
        _, _, r = bounds.volume_bounds(n, 1.0)
        return r / (3 / math.e) ** (n / 2)
    stable = abs(q(100) / q(200) - 1.0) < 0.05
    _report("criterion 6: volume bound over catalog + (6pi, 4pi) fixture + "
            "large-n ratio stability",
            ok and fixture_ok and stable,
            f"q(100)={q(100):.5f}, q(200)={q(200):.5f}")


def test_criterion_7_flat_limit():
    c = bounds.liyau_coeffs(n=2, rho=1e-8, t=1.0)
    a_ok = 1.0 - 1e-7 <= c.a <= 1.0
    b_ok = abs(c.b * 2 * 1.0 / 2 - 1.0) <= 1e-6
    _report("criterion 7: rho->0 Li-Yau limit (a->1, b->n/2t)",
            a_ok and b_ok, f"a={c.a:.10f}, b*2t/n={c.b:.8f}")


def test_criterion_8_self_consistency():
    ok, details = True, []
    for frac, mesh in ((1.0, 600), (0.6, 600)):
        model = geometry.make_round_cap(2, 1.0, frac)
        sp = spectral.assemble_spectrum(model, l_max=16, mesh_points=mesh,
                                        modes_per_l=12)
        f = 1.0 + 0.3 * np.cos(2 * sp.r / model.r_max)
        t, dt = 0.5, 1e-5
        um = spectral.apply_semigroup_radial(sp, f, t - dt)
        u0 = spectral.apply_semigroup_radial(sp, f, t)
        up = spectral.apply_semigroup_radial(sp, f, t + dt)
        res = np.abs((up.ptf - um.ptf) / (2 * dt) - u0.lap).max()
        heat_ok = res <= 1e-5 * np.abs(u0.ptf).max()

        a = spectral.apply_semigroup_radial(sp, f, 0.9).ptf
        b = spectral.apply_semigroup_radial(
            sp, spectral.apply_semigroup_radial(sp, f, 0.4).ptf, 0.5).ptf
        semi_ok = np.abs(a - b).max() <= 1e-8

        ref = 6.0 if frac == 1.0 else None
        lams = []
        for mp in (mesh // 2, mesh, 2 * mesh):
            lams.append(spectral.solve_radial_modes(model, l=0, mesh_points=mp,
                                                    num_modes=2)[1].lam)
        if ref is None:
            ref = spectral.solve_radial_modes(model, l=0, mesh_points=8 * mesh,
                                              num_modes=2)[1].lam
        e = [abs(x - ref) for x in lams]
        ratio = e[0] / e[1]
        conv_ok = 3.0 <= ratio <= 5.0
        ok &= heat_ok and semi_ok and conv_ok
        details.append(f"cap {frac}: heat-res {res:.1e}, conv ratio {ratio:.2f}")
    _report("criterion 8: heat-equation, semigroup, mesh-convergence checks",
            ok, "; ".join(details))
