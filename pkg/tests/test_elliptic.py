import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import ellipj

from mkawahara import (
    complete_elliptic_E,
    complete_elliptic_K,
    csch,
    elliptic_derivatives,
    elliptic_values,
    jacobi_dn,
    jacobi_sn,
)

K_GRID = [round(0.01 * i, 2) for i in range(1, 100)]


def k_integrand(theta, k):
    return 1.0 / math.sqrt(1.0 - (k * math.sin(theta)) ** 2)


def e_integrand(theta, k):
    return math.sqrt(1.0 - (k * math.sin(theta)) ** 2)


class TestCompleteEllipticK:
    def test_degenerate_modulus(self):
        assert complete_elliptic_K(0.0) == pytest.approx(math.pi / 2, abs=1e-15)

    def test_sqrt_half(self):
        assert complete_elliptic_K(math.sqrt(0.5)) == pytest.approx(1.854074677301372, abs=1e-13)

    @pytest.mark.parametrize("k", [0.3, 0.9, 0.99])
    def test_matches_quadrature(self, k):
        ref, _ = quad(k_integrand, 0.0, math.pi / 2, args=(k,), epsabs=1e-14, epsrel=1e-14)
        assert complete_elliptic_K(k) == pytest.approx(ref, abs=1e-12)

    @pytest.mark.parametrize("k", [-0.1, 1.0, 1.5])
    def test_domain(self, k):
        with pytest.raises(ValueError):
            complete_elliptic_K(k)


class TestCompleteEllipticE:
    def test_degenerate_moduli(self):
        assert complete_elliptic_E(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
        assert complete_elliptic_E(1.0) == 1.0

    @pytest.mark.parametrize("k", [0.5, 0.9])
    def test_matches_quadrature(self, k):
        ref, _ = quad(e_integrand, 0.0, math.pi / 2, args=(k,), epsabs=1e-14, epsrel=1e-14)
        assert complete_elliptic_E(k) == pytest.approx(ref, abs=1e-12)

    @pytest.mark.parametrize("k", [-0.1, 1.01])
    def test_domain(self, k):
        with pytest.raises(ValueError):
            complete_elliptic_E(k)


class TestEllipticDerivatives:
    def test_finite_difference_at_half(self):
        h = 1e-6
        dK_fd = (complete_elliptic_K(0.5 + h) - complete_elliptic_K(0.5 - h)) / (2 * h)
        dE_fd = (complete_elliptic_E(0.5 + h) - complete_elliptic_E(0.5 - h)) / (2 * h)
        dK, dE = elliptic_derivatives(0.5)
        assert dK == pytest.approx(dK_fd, rel=1e-8)
        assert dE == pytest.approx(dE_fd, rel=1e-8)

    @pytest.mark.parametrize("k", np.arange(0.05, 0.951, 0.05))
    def test_finite_difference_grid(self, k):
        h = 1e-6
        dK_fd = (complete_elliptic_K(k + h) - complete_elliptic_K(k - h)) / (2 * h)
        dE_fd = (complete_elliptic_E(k + h) - complete_elliptic_E(k - h)) / (2 * h)
        dK, dE = elliptic_derivatives(k)
        assert dK == pytest.approx(dK_fd, rel=1e-7)
        assert dE == pytest.approx(dE_fd, rel=1e-7)

    def test_monotonicity_signs(self):
        assert elliptic_derivatives(0.5)[1] < 0  # E strictly decreasing
        assert elliptic_derivatives(0.9)[0] > 0  # K strictly increasing

    @pytest.mark.parametrize("k", [0.0, 1.0])
    def test_domain(self, k):
        with pytest.raises(ValueError):
            elliptic_derivatives(k)


class TestJacobi:
    def test_dn_degenerate_modulus(self):
        x = np.array([-3.7, 0.0, 0.4, 12.0])
        assert np.allclose(jacobi_dn(x, 0.0), 1.0, atol=1e-15)

    @pytest.mark.parametrize("k", [0.1, 0.5, 0.9, 0.995])
    def test_dn_at_origin(self, k):
        assert jacobi_dn(0.0, k) == pytest.approx(1.0, abs=1e-15)

    def test_dn_unit_modulus_is_sech(self):
        assert jacobi_dn(1.0, 1.0) == pytest.approx(1.0 / math.cosh(1.0), abs=1e-14)
        assert jacobi_dn(1.0, 1.0) == pytest.approx(0.6480542736, abs=1e-10)

    @pytest.mark.parametrize("k", [0.1, 0.5, 0.9, 0.99])
    def test_dn_periodicity(self, k):
        rng = np.random.default_rng(7)
        x = rng.uniform(-20.0, 20.0, 64)
        K = complete_elliptic_K(k)
        assert np.abs(jacobi_dn(x + 2 * K, k) - jacobi_dn(x, k)).max() < 1e-12

    @pytest.mark.parametrize("k", [0.05, 0.5, 0.95])
    def test_sn_dn_identity(self, k):
        rng = np.random.default_rng(3)
        x = rng.uniform(-10.0, 10.0, 128)
        dn = jacobi_dn(x, k)
        sn = jacobi_sn(x, k)
        assert np.abs(dn**2 + k * k * sn**2 - 1.0).max() < 1e-12

    @pytest.mark.parametrize("k", [0.05, 0.3, 0.7, 0.95])
    def test_against_scipy(self, k):
        K = complete_elliptic_K(k)
        x = np.concatenate([np.array([0.0, K, 2 * K, -K]), np.linspace(-8, 8, 101)])
        sn_ref, _, dn_ref, _ = ellipj(x, k * k)
        assert np.abs(jacobi_dn(x, k) - dn_ref).max() < 1e-12
        assert np.abs(jacobi_sn(x, k) - sn_ref).max() < 1e-12

    def test_dn_range(self):
        x = np.linspace(-5, 5, 200)
        kp = math.sqrt(1 - 0.8**2)
        dn = jacobi_dn(x, 0.8)
        assert dn.min() >= kp - 1e-12 and dn.max() <= 1.0 + 1e-12

    def test_modulus_domain(self):
        with pytest.raises(ValueError):
            jacobi_dn(1.0, 1.2)


class TestCsch:
    def test_at_pi(self):
        assert csch(math.pi) == pytest.approx(1.0 / math.sinh(math.pi), abs=1e-16)
        assert csch(math.pi) == pytest.approx(0.0865895, abs=1e-7)

    def test_odd(self):
        for y in (0.3, 2.0, 40.0):
            assert csch(-y) == -csch(y)

    def test_decay_and_underflow(self):
        ys = np.array([5.0, 50.0, 300.0, 700.0])
        vals = csch(ys)
        assert np.all(np.diff(vals) < 0) and np.all(vals > 0)
        assert csch(800.0) == 0.0  # graceful underflow

    def test_zero_raises(self):
        with pytest.raises(ValueError):
            csch(0.0)

    def test_below_reciprocal(self):
        y = np.linspace(1e-3, 50.0, 10_000)
        assert np.all(csch(y) < 1.0 / y)


class TestEllipticValues:
    @pytest.mark.parametrize("k", K_GRID)
    def test_legendre_relation(self, k):
        ev = elliptic_values(k)
        evp = elliptic_values(ev.k_prime)
        residual = ev.E * evp.K + evp.E * ev.K - ev.K * evp.K - math.pi / 2
        assert abs(residual) < 1e-12

    @pytest.mark.parametrize("k", [0.0, 0.3, 0.9])
    def test_bounds_and_complement(self, k):
        ev = elliptic_values(k)
        if k == 0.0:
            assert ev.K == pytest.approx(math.pi / 2, abs=1e-15)
            assert ev.E == pytest.approx(math.pi / 2, abs=1e-15)
        else:
            assert ev.K > math.pi / 2
            assert ev.E < math.pi / 2
        assert ev.k_prime**2 + k**2 == pytest.approx(1.0, abs=1e-15)
