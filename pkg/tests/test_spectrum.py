import dataclasses
import math

import numpy as np
import pytest

from mkawahara import (
    apply_operator,
    assemble_operator,
    build_wave_params,
    constant_limit_profile,
    csch,
    log_concavity_d2,
    low_spectrum,
    q_weights,
    sample_profile,
    spectral_derivative,
    verify_proposition_criterion,
    zero_mode_residual,
)

TWO_PI = 2.0 * math.pi


class TestAssembly:
    def test_constant_solution_spectrum(self):
        # phi = a, omega = 1.5, a^2 = 2.5 at L = 2pi: eigenvalues n^4 - 1
        prof = constant_limit_profile(TWO_PI, 256)
        op = assemble_operator(prof, 8)
        ev = np.sort(np.linalg.eigvalsh(op.entries))
        expected = np.sort(np.array([n**4 - 1.0 for n in range(-8, 9)]))
        assert np.abs(ev - expected).max() < 1e-6

    def test_gamma_adds_xi_squared(self, profile_k05):
        op0 = assemble_operator(profile_k05, 16)
        prof1 = dataclasses.replace(
            profile_k05, params=dataclasses.replace(profile_k05.params, gamma=1)
        )
        op1 = assemble_operator(prof1, 16)
        xi = 2 * np.pi * np.arange(-16, 17) / TWO_PI
        assert np.allclose(np.diag(op1.entries) - np.diag(op0.entries), xi**2, atol=1e-14)

    def test_zero_frequency_column(self, profile_k05):
        # column at xi = 0: omega on the diagonal minus the phi^2 coefficients
        m = 16
        op = assemble_operator(profile_k05, m)
        n = profile_k05.n
        sq_hat = np.fft.fft(profile_k05.samples**2) / n
        idx = np.arange(-m, m + 1)
        expected = -sq_hat[idx % n].real
        expected[m] += profile_k05.params.omega
        assert np.allclose(op.entries[:, m], expected, atol=1e-12)

    def test_exactly_symmetric(self, profile_k05):
        op = assemble_operator(profile_k05, 48)
        assert np.array_equal(op.entries, op.entries.T)

    def test_mode_limit(self, profile_k05):
        with pytest.raises(ValueError):
            assemble_operator(profile_k05, profile_k05.n // 3 + 1)


class TestLowSpectrum:
    def test_hypothesis_at_reference(self, profile_k05):
        rep = low_spectrum(assemble_operator(profile_k05, 64))
        assert rep.n_negative == 1
        assert abs(rep.eigenvalues[1]) < 1e-6
        assert rep.zero_cosine > 1 - 1e-8
        assert rep.hypothesis_ok

    def test_refinement_invariance(self, profile_k05):
        ev32 = low_spectrum(assemble_operator(profile_k05, 32), count=5).eigenvalues
        ev64 = low_spectrum(assemble_operator(profile_k05, 64), count=5).eigenvalues
        assert np.abs(ev32 - ev64).max() < 1e-8

    @pytest.mark.parametrize("m", [32, 64, 128])
    def test_counts_stable_under_refinement(self, profile_k05, m):
        rep = low_spectrum(assemble_operator(profile_k05, m))
        assert rep.n_negative == 1 and rep.hypothesis_ok

    def test_degenerate_constant_case(self):
        prof = constant_limit_profile(TWO_PI, 256)
        rep = low_spectrum(assemble_operator(prof, 8))
        # two eigenvalues at zero (modes n = +-1), phi' identically zero
        assert np.sum(np.abs(rep.eigenvalues) < 1e-9) == 2
        assert not rep.hypothesis_ok

    def test_count_validation(self, profile_k05):
        with pytest.raises(ValueError):
            low_spectrum(assemble_operator(profile_k05, 8), count=100)

    def test_eigenvalues_real_sorted(self, profile_k05):
        rep = low_spectrum(assemble_operator(profile_k05, 32))
        assert rep.eigenvalues.dtype == np.float64
        assert np.all(np.diff(rep.eigenvalues) >= 0)


class TestZeroMode:
    def test_reference_gamma0(self, profile_k05):
        op = assemble_operator(profile_k05, 64)
        assert zero_mode_residual(op, profile_k05) < 1e-8

    def test_reference_gamma1(self, profile_k09_g1):
        op = assemble_operator(profile_k09_g1, 64)
        assert zero_mode_residual(op, profile_k09_g1) < 1e-8

    def test_constant_profile_degenerate(self):
        prof = constant_limit_profile(TWO_PI, 256)
        with pytest.raises(ValueError):
            zero_mode_residual(assemble_operator(prof, 8), prof)

    def test_matrix_matches_grid_application(self, profile_k05):
        m = 64
        op = assemble_operator(profile_k05, m)
        res_matrix = zero_mode_residual(op, profile_k05)
        L = profile_k05.params.L
        dphi = spectral_derivative(profile_k05.samples, L, 1)
        lv = apply_operator(profile_k05, dphi, m_cut=m)
        res_grid = math.sqrt(np.mean(lv**2)) / math.sqrt(np.mean(dphi**2))
        assert abs(res_matrix - res_grid) < 1e-8

    def test_lphi_orthogonal_to_dphi(self, profile_k05):
        # <L Phi, phi'> = 0 by even/odd parity
        L = profile_k05.params.L
        n = profile_k05.n
        xi = 2 * np.pi * np.fft.fftfreq(n, d=L / n)
        dphi = (np.fft.ifft(1j * xi * np.fft.fft(profile_k05.samples) / n) * n).real
        l_phi_k = apply_operator(profile_k05, profile_k05.dk_samples)
        assert abs(L * np.mean(l_phi_k * dphi)) < 1e-8


class TestLogConcavity:
    def test_spot_value(self):
        # k = sqrt(2)/2 makes c = pi: -1 + pi^2 csch^2(pi)
        val = log_concavity_d2(1.0, math.sqrt(2) / 2)
        assert val == pytest.approx(-1.0 + math.pi**2 / math.sinh(math.pi) ** 2, abs=1e-12)
        assert val == pytest.approx(-0.9260, abs=1e-3)

    def test_negative_everywhere(self):
        rng = np.random.default_rng(11)
        for k in (0.05, 0.3, math.sqrt(2) / 2, 0.97):
            x = rng.uniform(0.01, 30.0, 200) * rng.choice([-1, 1], 200)
            assert np.all(log_concavity_d2(x, k) < 0)

    def test_even_in_x(self):
        x = np.linspace(0.1, 5.0, 50)
        assert np.allclose(log_concavity_d2(-x, 0.6), log_concavity_d2(x, 0.6), rtol=0, atol=0)

    def test_domain(self):
        with pytest.raises(ValueError):
            log_concavity_d2(0.0, 0.5)
        with pytest.raises(ValueError):
            log_concavity_d2(1.0, 1.0)


class TestPropositionCriterion:
    def test_reference_passes(self, profile_k05):
        x = np.linspace(0.05, 10.0, 100)
        rep = verify_proposition_criterion(profile_k05, x)
        assert rep.profile_positive and rep.coefficients_positive and rep.log_concave
        assert rep.passed

    def test_negated_coefficients_fail(self, profile_k05):
        broken = dataclasses.replace(profile_k05, fourier=-profile_k05.fourier)
        rep = verify_proposition_criterion(broken, np.array([1.0, 2.0]))
        assert not rep.coefficients_positive
        assert not rep.passed

    def test_gamma1_passes(self, profile_k09_g1):
        x = np.linspace(0.1, 10.0, 50)
        assert verify_proposition_criterion(profile_k09_g1, x).passed


class TestIdentity:
    @pytest.mark.parametrize("k", np.arange(0.2, 0.91, 0.1))
    def test_lphi_identity(self, k):
        # L Phi = -omega_k phi - A_k, relative max norm below 1e-5
        prof = sample_profile(build_wave_params(k, TWO_PI, 0), 512)
        w_omega, w_a = q_weights(k, TWO_PI)
        rhs = -(w_omega * prof.samples + w_a)
        l_phi_k = apply_operator(prof, prof.dk_samples)
        assert np.abs(l_phi_k - rhs).max() / np.abs(rhs).max() < 1e-5

    def test_csch_inequality_backs_concavity(self):
        y = np.linspace(5e-3, 50.0, 10_000)
        assert np.all(csch(y) < 1.0 / y)
