import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heatcap import bounds
from heatcap.errors import DomainError
from heatcap.quadrature import adaptive_simpson


class TestLiYau:
    def test_frozen_values(self):
        c = bounds.liyau_coeffs(n=2, rho=3.0, t=1.0)
        assert c.a == pytest.approx(0.135335283, rel=1e-8)
        assert c.b == pytest.approx(0.04236472, rel=1e-6)

    def test_flat_limit(self):
        # as rho -> 0 the estimate degenerates to |grad log u|^2 <= n/(2t)
        for t in (0.3, 1.0, 4.0):
            c = bounds.liyau_coeffs(n=3, rho=1e-10, t=t)
            assert c.a == pytest.approx(1.0, rel=1e-8)
            assert c.b * 2 * t / 3 == pytest.approx(1.0, rel=1e-6)

    def test_b_decreasing_in_t(self):
        ts = np.linspace(0.1, 5, 40)
        bs = [bounds.liyau_coeffs(2, 1.0, t).b for t in ts]
        assert all(x > y for x, y in zip(bs, bs[1:]))

    def test_rejects_bad_args(self):
        with pytest.raises(DomainError):
            bounds.liyau_coeffs(2, 1.0, 0.0)


class TestHarnack:
    def test_frozen_values(self):
        v = bounds.harnack_factor(n=2, rho=3.0, s=0.5, t=1.0, d=0.3)
        assert v == pytest.approx(1.381121, rel=1e-6)
        v0 = bounds.harnack_factor(n=2, rho=3.0, s=0.5, t=1.0, d=0.0)
        assert v0 == pytest.approx(1.367879, rel=1e-6)

    def test_s_zero_infinite(self):
        assert bounds.harnack_factor(2, 1.0, 0.0, 1.0, 0.5) == math.inf

    def test_factor_at_least_one(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            t = rng.uniform(0.1, 3.0)
            s = rng.uniform(0.01, 1.0) * t
            v = bounds.harnack_factor(3, 0.7, s, t, rng.uniform(0, 2))
            assert v >= 1.0

    def test_telescoping(self):
        # chaining s->m and m->t with d split proportionally can't beat s->t
        n, rho = 2, 1.0
        s, m, t = 0.4, 0.7, 1.3
        d = 0.8
        direct = bounds.harnack_factor(n, rho, s, t, d)
        # optimal split of distance for the additive d^2 exponent
        best = min(
            bounds.harnack_factor(n, rho, s, m, a)
            * bounds.harnack_factor(n, rho, m, t, d - a)
            for a in np.linspace(0, d, 101)
        )
        assert direct <= best * (1 + 1e-12)

    def test_exponent_integral_identity(self):
        # d=0 factor equals exp of the integral of b/a over [s, t]
        n, rho, s, t = 3, 2.0, 0.3, 1.1
        val = adaptive_simpson(
            lambda u: bounds.liyau_coeffs(n, rho, u).b
            / bounds.liyau_coeffs(n, rho, u).a,
            s, t, tol=1e-13)
        assert bounds.harnack_factor(n, rho, s, t, 0.0) == pytest.approx(
            math.exp(val), rel=1e-10)


class TestOnDiag:
    def test_frozen_values(self):
        lo, hi = bounds.ondiag_bounds(n=2, rho=1.0, mu=2 * math.pi, t=1.0)
        assert lo == pytest.approx(0.109028, rel=1e-5)
        assert hi == pytest.approx(0.327084, rel=1e-5)

    def test_ordering_and_long_time(self):
        mu = 2 * math.pi
        for t in np.geomspace(0.05, 50, 20):
            lo, hi = bounds.ondiag_bounds(2, 1.0, mu, t)
            assert lo < hi
        lo, hi = bounds.ondiag_bounds(2, 1.0, mu, 1e6)
        assert hi == pytest.approx(1.0 / mu, rel=1e-6)

    def test_small_time_blowup_rate(self):
        # upper bound ~ mu^{-1} (2 rho t/3)^{-n/2} ~ (4 pi t)^{-n/2} * const
        t = 1e-8
        _, hi = bounds.ondiag_bounds(2, 1.0, 2 * math.pi, t)
        assert hi == pytest.approx(1.0 / (2 * math.pi) / (2 * t / 3), rel=1e-6)


class TestRefinedUpper:
    def test_tau_and_value(self):
        r = bounds.refined_upper(n=2, rho=1.0, mu=2 * math.pi,
                                 diam=math.pi, t=1.0)
        assert r.tau == pytest.approx(0.94416, abs=1e-4)
        assert r.branch == "large_time"
        assert r.value == pytest.approx(0.654747, rel=1e-4)

    def test_never_below_equilibrium(self):
        mu = 2 * math.pi
        for t in np.geomspace(0.02, 30, 25):
            r = bounds.refined_upper(2, 1.0, mu, math.pi, t)
            assert r.value >= 1.0 / mu - 1e-15

    def test_large_time_limit(self):
        # large-time branch tends to e^{n/2}/mu from above
        mu = 2 * math.pi
        r = bounds.refined_upper(2, 1.0, mu, math.pi, 40.0)
        assert r.value == pytest.approx(math.e / mu, rel=1e-10)

    def test_branch_switch(self):
        r = bounds.refined_upper(2, 1.0, 2 * math.pi, math.pi, 0.1)
        assert r.branch == "small_time"


class TestTrace:
    def test_frozen_values(self):
        lo, hi = bounds.trace_bounds(n=2, rho=1.0, mu=2 * math.pi, t=1.0)
        assert lo == pytest.approx(0.6850494, rel=1e-5)
        assert hi == pytest.approx(2.055150, rel=1e-5)

    def test_is_mu_times_ondiag(self):
        mu = 5.7
        for t in (0.2, 1.1, 3.0):
            lo, hi = bounds.trace_bounds(3, 2.0, mu, t)
            plo, phi = bounds.ondiag_bounds(3, 2.0, mu, t)
            assert lo == pytest.approx(mu * plo, rel=1e-12)
            assert hi == pytest.approx(mu * phi, rel=1e-12)


class TestEigenLower:
    def test_frozen_values(self):
        b1, b2 = bounds.eigen_lower_bounds(n=2, rho=1.0, diam=math.pi, k=1)
        assert b1 == pytest.approx(0.507642, rel=1e-5)
        assert b2 is None
        b1, b2 = bounds.eigen_lower_bounds(n=2, rho=1.0, diam=math.pi, k=13)
        assert b2 == pytest.approx(1.26926, rel=1e-4)

    def test_k_zero_is_zero(self):
        b1, b2 = bounds.eigen_lower_bounds(2, 1.0, math.pi, 0)
        assert b1 == 0.0

    def test_bound1_monotone_in_k(self):
        vals = [bounds.eigen_lower_bounds(2, 1.0, math.pi, k)[0]
                for k in range(1, 60)]
        assert all(x < y for x, y in zip(vals, vals[1:]))

    def test_threshold_exact(self):
        n = 2
        thr = bounds.bound2_threshold(n)
        assert thr == pytest.approx(2 * math.e ** 2 - math.e, rel=1e-12)
        k_lo = math.floor(thr)
        assert bounds.eigen_lower_bounds(n, 1.0, math.pi, k_lo)[1] is None
        assert bounds.eigen_lower_bounds(n, 1.0, math.pi, k_lo + 1)[1] is not None

    @given(st.integers(min_value=20, max_value=10 ** 6))
    @settings(max_examples=30, deadline=None)
    def test_bound2_positive_above_threshold(self, k):
        _, b2 = bounds.eigen_lower_bounds(2, 1.0, math.pi, k)
        assert b2 is not None and b2 > 0

    def test_large_k_asymptotics(self):
        mu = 2 * math.pi
        k = 10 ** 8
        b1, b2 = bounds.eigen_lower_bounds(2, 1.0, math.pi, k)
        lb1, lb2, _ = bounds.asymptotics(2, 1.0, mu, math.pi, k)
        assert b1 / lb1 == pytest.approx(1.0, rel=1e-6)
        assert b2 / lb2 == pytest.approx(1.0, rel=1e-6)

    def test_asymptotic_formulas(self):
        # n=2, rho=1, D=pi, mu=2pi: lb1 -> (2/3e)k, lb2 -> k/(2e^2), weyl = 2k
        k = 1000
        lb1, lb2, weyl = bounds.asymptotics(2, 1.0, 2 * math.pi, math.pi, k)
        assert lb1 == pytest.approx(2 * k / (3 * math.e), rel=1e-12)
        assert lb2 == pytest.approx(k / (2 * math.e ** 2), rel=1e-12)
        assert weyl == pytest.approx(2 * k, rel=1e-12)


class TestVolume:
    def test_frozen_values(self):
        hi, bishop, ratio = bounds.volume_bounds(n=2, rho=1.0)
        assert hi == pytest.approx(6 * math.pi, rel=1e-12)
        assert bishop == pytest.approx(4 * math.pi, rel=1e-12)
        assert ratio == pytest.approx(1.5, rel=1e-12)

    def test_always_weaker_than_bishop(self):
        for n in range(2, 40):
            hi, bishop, ratio = bounds.volume_bounds(n, 2.3)
            assert ratio > 1.0

    def test_large_n_ratio_growth(self):
        # ratio ~ sqrt(pi n) (3/e)^{n/2} / sqrt(2): check the (3/e)^{1/2}
        # per-dimension growth factor between consecutive large n
        _, _, r1 = bounds.volume_bounds(200, 1.0)
        _, _, r2 = bounds.volume_bounds(202, 1.0)
        assert r2 / r1 == pytest.approx(3 / math.e, rel=0.02)
