import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from abelmeans.kernel import KernelParams, h, k, phi, phi_offset, profile

# Frozen with mpmath at 30 digits: 1 / (2 pi^2 0.2^2).
PEAK_ALPHA_02 = 1.26651479552922214


def test_params_validation():
    assert KernelParams(0.1).epsilon == pytest.approx(0.2)
    assert KernelParams(0.1, 3.0).epsilon == pytest.approx(0.3)
    for bad in (0.0, -1.0, float("inf"), float("nan")):
        with pytest.raises(ValueError):
            KernelParams(bad)
    with pytest.raises(ValueError):
        KernelParams(1.0, 0.0)


class TestPhi:
    p = KernelParams(0.2)

    def test_peak(self):
        assert phi(self.p, (0, 0), 0.0, 0.0) == pytest.approx(PEAK_ALPHA_02, rel=1e-15)

    def test_zero_at_alpha(self):
        assert phi(self.p, (0, 0), 0.2, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_minimum_is_minus_eighth_of_peak(self):
        v = phi(self.p, (0, 0), 0.2 * math.sqrt(3), 0.0)
        assert v == pytest.approx(-PEAK_ALPHA_02 / 8, rel=1e-13)

    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3),
           st.floats(0, math.pi), st.floats(-5, 5))
    def test_translation_along_normal(self, x1, x2, t, psi, delta):
        n = (math.cos(psi), math.sin(psi))
        a = phi(self.p, (x1, x2), t, psi)
        b = phi(self.p, (x1 + delta * n[0], x2 + delta * n[1]), t + delta, psi)
        assert b == pytest.approx(a, rel=1e-10, abs=1e-14)

    def test_decays_like_inverse_square(self):
        a = self.p.alpha
        scaled = [abs(phi_offset(a, m * a)) * (m * a) ** 2 for m in (10, 100, 1000)]
        # Tends to 1/(2 pi^2) from below.
        assert all(s <= 1 / (2 * math.pi**2) for s in scaled)
        assert scaled[-1] == pytest.approx(1 / (2 * math.pi**2), rel=1e-5)

    def test_zero_mean_in_t(self):
        # The t-antiderivative is d / (alpha^2 + d^2) / (2 pi^2), which vanishes at +-inf.
        val, _ = integrate.quad(lambda d: phi_offset(0.3, d), -np.inf, np.inf)
        assert val == pytest.approx(0.0, abs=1e-10)


class TestH:
    def test_values(self):
        p = KernelParams(1.0)
        assert h(p, (0.0, 0.0)) == pytest.approx(1 / (2 * math.pi), rel=1e-15)
        assert h(p, (0.0, math.sqrt(3))) == pytest.approx(0.0198943678864869170, rel=1e-14)

    @given(st.floats(0.01, 10), st.floats(-5, 5), st.floats(-5, 5))
    def test_symmetric(self, alpha, y1, y2):
        p = KernelParams(alpha)
        assert h(p, (y1, y2)) == h(p, (-y1, -y2))

    def test_uniform_decay(self):
        # Outside |y| > delta: h <= alpha / (2 pi delta^3).
        for delta in (0.1, 1.0):
            for alpha in (0.01, 0.1):
                r = np.linspace(delta, 50, 2000)
                y = np.stack([r, np.zeros_like(r)], axis=-1)
                assert np.all(h(KernelParams(alpha), y) <= alpha / (2 * math.pi * delta**3))


class TestK:
    def test_values(self):
        p = KernelParams(1.0)
        assert k(p, -1.0) == 0.0
        assert k(p, 0.0) == 0.0
        assert k(p, 1.0) == pytest.approx(0.353553390593273762, rel=1e-15)

    @pytest.mark.parametrize("alpha", [0.1, 1.0, 10.0])
    def test_unit_integral(self, alpha):
        val, _ = integrate.quad(lambda r: k(KernelParams(alpha), r), 0, np.inf)
        assert val == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("delta", [0.1, 1.0])
    def test_uniform_bound(self, delta):
        for alpha in (0.001, 0.01, 0.1):
            r = np.concatenate([-np.geomspace(delta, 1e3, 500), np.geomspace(delta, 1e3, 500)])
            assert np.max(k(KernelParams(alpha), r)) <= alpha / delta**2

    def test_nonnegative(self):
        r = np.linspace(-10, 10, 1001)
        assert np.all(k(KernelParams(0.3), r) >= 0)


class TestProfile:
    def test_closed_forms(self):
        prof = profile(KernelParams(0.2), (0, 0), 0.0)
        assert prof.beta == 0.0 and prof.t_max == 0.0
        assert prof.peak_value == pytest.approx(PEAK_ALPHA_02, rel=1e-15)
        assert prof.t_min_right == pytest.approx(0.2 * math.sqrt(3))
        assert prof.t_min_left == pytest.approx(-0.2 * math.sqrt(3))
        assert prof.min_value / prof.peak_value == pytest.approx(-1 / 8, abs=1e-15)
        assert prof.zero_crossings == pytest.approx((-0.2, 0.2))

    def test_beta(self):
        assert profile(KernelParams(1), (1, 0), 0.0).beta == 1.0
        assert profile(KernelParams(1), (0, 1), math.pi / 2).beta == pytest.approx(1.0)

    @pytest.mark.parametrize("alpha, x, psi", [(0.2, (0, 0), 0.0), (0.05, (0.4, -1.1), 1.0),
                                               (1.3, (2, 1), 2.5)])
    def test_matches_brute_force(self, alpha, x, psi):
        p = KernelParams(alpha)
        prof = profile(p, x, psi)
        t = prof.beta + np.arange(-5000, 5001) * (alpha / 1000)
        v = phi(p, x, t, psi)
        assert abs(t[np.argmax(v)] - prof.t_max) <= alpha / 100
        left = t < prof.beta
        assert abs(t[left][np.argmin(v[left])] - prof.t_min_left) <= alpha / 100
        assert abs(t[~left][np.argmin(v[~left])] - prof.t_min_right) <= alpha / 100
        assert v.max() == pytest.approx(prof.peak_value, rel=1e-6)
        assert v.min() == pytest.approx(prof.min_value, rel=1e-6)
        s = v > 0
        crossings = t[:-1][s[:-1] != s[1:]]
        assert crossings == pytest.approx(prof.zero_crossings, abs=alpha / 100)
