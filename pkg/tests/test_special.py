"""Elliptic integrals, Jacobi dn, theta3: oracle and identity tests."""

import math

import numpy as np
import pytest
from scipy import integrate, special as sps

from kdvgas.errors import DomainError, NearZeroError
from kdvgas.special import (
    EllipticData,
    clamp_modulus,
    dlog_theta3,
    elliptic_E,
    elliptic_K,
    elliptic_KE,
    jacobi_dn,
    theta3,
)


def quad_K(m):
    """Defining integral of K, adaptive quadrature (independent oracle)."""
    f = lambda t: 1.0 / math.sqrt(1.0 - (m * math.sin(t)) ** 2)
    val, _ = integrate.quad(f, 0.0, 0.5 * math.pi, epsabs=1e-15, epsrel=1e-14)
    return val


def quad_E(m):
    f = lambda t: math.sqrt(1.0 - (m * math.sin(t)) ** 2)
    val, _ = integrate.quad(f, 0.0, 0.5 * math.pi, epsabs=1e-15, epsrel=1e-14)
    return val


class TestEllipticIntegrals:
    def test_K_at_zero(self):
        assert elliptic_K(0.0) == pytest.approx(0.5 * math.pi, abs=1e-16)

    def test_K_near_one_diverges(self):
        m = 1.0 - 1e-12
        K = elliptic_K(m)
        assert K > 14.0
        # asymptotic K ~ (1/2) log(16/(1-m^2)), cross-checked
        approx = 0.5 * math.log(16.0 / (1.0 - m * m))
        assert K == pytest.approx(approx, rel=1e-6)

    def test_K_against_quadrature(self):
        m = 1.0 / 3.0
        assert elliptic_K(m) == pytest.approx(quad_K(m), rel=1e-13)

    def test_E_trivial_values(self):
        assert elliptic_E(0.0) == pytest.approx(0.5 * math.pi, abs=1e-16)
        assert elliptic_E(1.0) == 1.0

    def test_E_against_quadrature(self):
        m = 1.0 / 3.0
        assert elliptic_E(m) == pytest.approx(quad_E(m), rel=1e-13)

    @pytest.mark.parametrize("m", [0.05, 0.3, 1.0 / 3.0, 0.6, 0.9, 0.999])
    def test_against_scipy(self, m):
        # scipy uses the parameter (= modulus squared) convention
        assert elliptic_K(m) == pytest.approx(sps.ellipk(m * m), rel=1e-14)
        assert elliptic_E(m) == pytest.approx(sps.ellipe(m * m), rel=1e-14)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            elliptic_K(-0.1)
        with pytest.raises(DomainError):
            elliptic_K(1.0)
        with pytest.raises(DomainError):
            elliptic_E(1.0 + 1e-12)

    @pytest.mark.parametrize("m", [0.1 * j for j in range(1, 10)])
    def test_legendre_relation(self, m):
        data = EllipticData.from_modulus(m)
        assert abs(data.legendre_residual()) < 1e-12

    def test_bundle_invariants(self):
        data = EllipticData.from_modulus(1.0 / 3.0)
        assert data.K >= 0.5 * math.pi
        assert data.E <= 0.5 * math.pi
        assert data.tau2.imag > 0.0
        assert data.tau2.real == 0.0
        K, E = elliptic_KE(1.0 / 3.0)
        assert (K, E) == (data.K, data.E)

    def test_clamp(self):
        assert clamp_modulus(0.5) == (0.5, False)
        m, flag = clamp_modulus(1.0 - 1e-14)
        assert flag and m == 1.0 - 1e-10

    def test_deterministic(self):
        vals = {elliptic_K(0.77) for _ in range(5)}
        assert len(vals) == 1


class TestJacobiDn:
    def test_degenerate_modulus(self):
        for z in [-3.0, 0.0, 1.7, 40.0]:
            assert jacobi_dn(z, 0.0) == 1.0

    def test_at_zero(self):
        for m in [0.1, 1.0 / 3.0, 0.9, 0.999999]:
            assert jacobi_dn(0.0, m) == pytest.approx(1.0, abs=1e-15)

    def test_at_quarter_period(self):
        m = 1.0 / 3.0
        K = elliptic_K(m)
        assert jacobi_dn(K, m) == pytest.approx(math.sqrt(8.0) / 3.0, abs=1e-13)

    @pytest.mark.parametrize("m", [0.2, 1.0 / 3.0, 0.8, 0.99])
    def test_periodicity(self, m):
        K = elliptic_K(m)
        for z in np.linspace(-4.0, 4.0, 23):
            assert abs(jacobi_dn(z + 2.0 * K, m) - jacobi_dn(z, m)) < 1e-12

    @pytest.mark.parametrize("m", [0.1, 0.5, 0.9, 0.9999])
    def test_against_scipy(self, m):
        for z in np.linspace(-6.0, 6.0, 41):
            dn = sps.ellipj(z, m * m)[2]
            assert jacobi_dn(z, m) == pytest.approx(dn, abs=1e-13)

    def test_range(self):
        m = 0.7
        lo = math.sqrt(1.0 - m * m)
        for z in np.linspace(0.0, 10.0, 101):
            v = jacobi_dn(z, m)
            assert lo - 1e-12 <= v <= 1.0 + 1e-12

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            jacobi_dn(0.3, 1.0)
        with pytest.raises(DomainError):
            jacobi_dn(math.inf, 0.5)


class TestTheta3:
    def test_period_one(self):
        tau2 = 0.9j
        for z in [0.0, 0.21, 0.5 + 0.1j, -1.3]:
            a, b = theta3(z + 1.0, tau2), theta3(z, tau2)
            assert abs(a - b) < 1e-14 * (1.0 + abs(b))

    def test_vanishes_on_half_period(self):
        for s in [0.6, 1.0, 2.3]:
            tau2 = 1j * s
            z = 0.5 + tau2 / 2.0
            assert abs(theta3(z, tau2)) < 1e-12

    def test_large_imag_tau_limit(self):
        assert theta3(0.37, 60j) == pytest.approx(1.0, abs=1e-15)

    def test_quasi_periodicity(self):
        tau2 = 0.8j
        z = 0.13 + 0.05j
        lhs = theta3(z + tau2, tau2)
        rhs = np.exp(-1j * math.pi * tau2 - 2j * math.pi * z) * theta3(z, tau2)
        assert abs(lhs - rhs) < 1e-12 * abs(rhs)

    def test_even(self):
        tau2 = 1.1j
        assert theta3(0.3, tau2) == pytest.approx(theta3(-0.3, tau2), abs=1e-15)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            theta3(0.1, -0.5j)
        with pytest.raises(DomainError):
            theta3(0.1, 1.0)


class TestDlogTheta3:
    def test_odd_derivative_at_zero(self):
        assert dlog_theta3(0.0, 0.7j, 1) == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("m", [0.2, 1.0 / 3.0, 0.8])
    def test_theta_dn_identity(self, m):
        # (1/4K^2) (log theta3)''(z; 2tau) = -E/K + dn^2(2Kz + K | m)
        data = EllipticData.from_modulus(m)
        K, E, tau2 = data.K, data.E, data.tau2
        worst = 0.0
        for z in np.linspace(0.0, 1.0, 50):
            lhs = dlog_theta3(z, tau2, 2) / (4.0 * K * K)
            rhs = -E / K + jacobi_dn(2.0 * K * z + K, m) ** 2
            worst = max(worst, abs(lhs - rhs))
        assert worst < 1e-10

    def test_order2_vs_finite_difference(self):
        tau2 = 0.55j
        h = 1e-5
        for z in [0.05, 0.31, 0.77]:
            fd = (dlog_theta3(z + h, tau2, 1) - dlog_theta3(z - h, tau2, 1)) / (2 * h)
            assert dlog_theta3(z, tau2, 2) == pytest.approx(fd, abs=1e-7)

    def test_near_zero_guard(self):
        # Displace slightly off the divisor so theta3 is tiny but nonzero.
        tau2 = 1j * 0.8
        with pytest.raises((NearZeroError, DomainError)):
            dlog_theta3(0.5 + 0.4j, tau2, 2)

    def test_real_output(self):
        v = dlog_theta3(0.2, 0.9j, 2)
        assert isinstance(v, float)
