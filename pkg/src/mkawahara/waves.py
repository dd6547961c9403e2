"""Explicit periodic traveling waves of u_t + u^2 u_x + gamma u_xxx - u_xxxxx = 0.

The wave family is the dnoidal ansatz

    phi(x) = a + b [dn^2(2K x / L, k) - E/K],

whose coefficients a, b, the speed omega and the integration constant A are
closed forms in (k, L, gamma). The traveling-wave ODE is

    phi'''' - gamma phi'' + omega phi - phi^3/3 + A = 0,

and ode_residual evaluates it pseudospectrally as the family's acceptance
oracle. Fourier coefficients of phi are available in closed form through
csch, which the spectral and index modules rely on.
"""

from dataclasses import dataclass

import numpy as np

from .elliptic import (
    complete_elliptic_K,
    csch,
    elliptic_derivatives,
    elliptic_values,
    jacobi_dn,
)

SQRT10 = np.sqrt(10.0)

K_MIN, K_MAX = 0.005, 0.995

# Spectral coefficients below this fraction of the peak are indistinguishable
# from FFT roundoff; they are zeroed before any ksi^4-weighted operation.
COEFF_FLOOR = 1e-14

# Step for the k-derivative of the profile. 1e-3 balances the Richardson
# truncation (~h^4) against roundoff amplification in the fourth spatial
# derivative of the result; smaller steps let FD noise through the filter.
DK_STEP = 1e-3
DK_FILTER = 1e-11


@dataclass
class WaveParams:
    """One point (L, k, gamma) -> (a, b, omega, A) on the solution curve."""

    L: float
    k: float
    gamma: int
    a: float
    b: float
    omega: float
    A: float


@dataclass
class WaveProfile:
    """Grid samples, closed-form Fourier coefficients and dphi/dk of a wave.

    fourier is a centered real array: fourier[i] is the coefficient of
    exp(2 pi i m x / L) with m = i - n//2, normalized as a period average.
    dk_samples is None when k is too close to the ends of its range for the
    finite-difference stencil.
    """

    params: WaveParams
    n: int
    samples: np.ndarray
    fourier: np.ndarray
    dk_samples: np.ndarray | None


@dataclass
class FunctionalValues:
    P: float
    F: float
    M: float
    G: float


def _validate_gamma(gamma) -> int:
    if gamma not in (0, 1):
        raise ValueError(f"gamma={gamma} unsupported, expected 0 or 1")
    return int(gamma)


def _fourier_closed(a: float, b: float, k: float, L: float, m_max: int) -> np.ndarray:
    """Centered coefficient array from the csch closed form.

    phi_hat(0) = a and phi_hat(m) = (Gamma/2) |m| csch(|m| pi K'/K) with
    Gamma = b pi^2 / K^2; real, even and positive.
    """
    K = complete_elliptic_K(k)
    Kp = complete_elliptic_K(np.sqrt((1.0 - k) * (1.0 + k)))
    gam = b * np.pi**2 / K**2
    m = np.arange(1, m_max + 1)
    pos = 0.5 * gam * m * csch(m * np.pi * Kp / K)
    out = np.empty(2 * m_max + 1)
    out[m_max] = a
    out[m_max + 1 :] = pos
    out[:m_max] = pos[::-1]
    return out


def build_wave_params(k: float, L: float, gamma: int) -> WaveParams:
    """Coefficients of the dnoidal wave at modulus k, period L.

    For gamma = 1 the speed picks up a constant 1/10 (the dn^2 ansatz fixes
    it; see the ledger note on the printed form) and A is not available in
    closed form, so it is recovered by evaluating the ODE spectrally at x = 0.
    """
    gamma = _validate_gamma(gamma)
    if not K_MIN <= k <= K_MAX:
        raise ValueError(f"k={k} outside [{K_MIN}, {K_MAX}]")
    if L <= 0:
        raise ValueError(f"period L={L} must be positive")
    ev = elliptic_values(k)
    K, E = ev.K, ev.E
    b = 24.0 * SQRT10 * K**2 / L**2
    a = 8.0 * SQRT10 * K * ((k * k - 2.0) * K + 3.0 * E) / L**2 + gamma * SQRT10 / 10.0
    omega = 384.0 * (k**4 - k**2 + 1.0) * K**4 / L**4 + gamma * 0.1
    if gamma == 0:
        A = (
            -(2048.0 * SQRT10 / 3.0)
            * (k * k - 2.0)
            * (2.0 * k * k - 1.0)
            * (k * k + 1.0)
            * K**6
            / L**6
        )
    else:
        # evaluate phi'''' - phi'' + omega phi - phi^3/3 at x=0 through the
        # coefficient series (all modes add in phase there) and solve for A
        m_max = 256
        coeffs = _fourier_closed(a, b, k, L, m_max)
        m = np.arange(1, m_max + 1)
        xi = 2.0 * np.pi * m / L
        deriv_terms = 2.0 * np.sum((xi**4 + gamma * xi**2) * coeffs[m_max + 1 :])
        phi0 = a + b * (1.0 - E / K)
        A = -(deriv_terms + omega * phi0 - phi0**3 / 3.0)
    return WaveParams(L=L, k=k, gamma=gamma, a=a, b=b, omega=omega, A=A)


def _grid(L: float, n: int) -> np.ndarray:
    return np.arange(n) * (L / n)


def _validate_grid_size(n: int) -> None:
    if n < 64 or (n & (n - 1)) != 0:
        raise ValueError(f"grid size n={n} must be a power of two >= 64")


def _samples(params: WaveParams, n: int) -> np.ndarray:
    ev = elliptic_values(params.k)
    x = _grid(params.L, n)
    dn = jacobi_dn(2.0 * ev.K * x / params.L, params.k)
    return params.a + params.b * (dn**2 - ev.E / ev.K)


def sample_profile(params: WaveParams, n: int) -> WaveProfile:
    """Sample phi on n equispaced points and attach coefficients and dphi/dk."""
    _validate_grid_size(n)
    samples = _samples(params, n)
    m_max = n // 2
    fourier = _fourier_closed(params.a, params.b, params.k, params.L, m_max)
    dk = None
    if 0.01 <= params.k <= 0.99:
        dk = dphi_dk(params, n)
    return WaveProfile(params=params, n=n, samples=samples, fourier=fourier, dk_samples=dk)


def constant_limit_profile(L: float, n: int, gamma: int = 0) -> WaveProfile:
    """The k -> 0 member of the family: phi identically equal to a.

    Outside the regular k range (the translation mode degenerates there) but
    needed as the closed-form reference case for the operator spectrum.
    """
    gamma = _validate_gamma(gamma)
    _validate_grid_size(n)
    half_pi = np.pi / 2.0
    a = 2.0 * SQRT10 * np.pi**2 / L**2 + gamma * SQRT10 / 10.0
    b = 6.0 * SQRT10 * np.pi**2 / L**2
    omega = 24.0 * np.pi**4 / L**4 + gamma * 0.1
    A = a**3 / 3.0 - omega * a
    params = WaveParams(L=L, k=0.0, gamma=gamma, a=a, b=b, omega=omega, A=A)
    fourier = np.zeros(n + 1)
    fourier[n // 2] = a
    return WaveProfile(
        params=params,
        n=n,
        samples=np.full(n, a),
        fourier=fourier,
        dk_samples=np.zeros(n),
    )


def fourier_coefficients(params: WaveParams, m_max: int) -> np.ndarray:
    """Two-sided coefficients phi_hat(m), |m| <= m_max, as a centered array."""
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    return _fourier_closed(params.a, params.b, params.k, params.L, m_max)


def centered_to_fft(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Reorder a centered coefficient array into numpy fft layout."""
    m_max = (len(coeffs) - 1) // 2
    out = np.zeros(n, dtype=complex)
    for m in range(-min(m_max, n // 2 - 1), min(m_max, n // 2 - 1) + 1):
        out[m % n] = coeffs[m_max + m]
    return out


def spectral_derivative(samples: np.ndarray, L: float, order: int) -> np.ndarray:
    """FFT derivative with a noise-floor cutoff on the coefficients.

    Coefficients below COEFF_FLOOR relative to the peak are roundoff, not
    signal; zeroing them keeps high-order derivatives of analytic profiles
    clean instead of amplifying FFT noise by xi^4.
    """
    n = len(samples)
    uh = np.fft.fft(samples) / n
    uh[np.abs(uh) < COEFF_FLOOR * np.abs(uh).max()] = 0.0
    xi = 2.0 * np.pi * np.fft.fftfreq(n, d=L / n)
    return (np.fft.ifft((1j * xi) ** order * uh) * n).real


def ode_residual(profile: WaveProfile) -> float:
    """Max-norm residual of the traveling-wave ODE, scaled by max |phi^3/3|."""
    p = profile.params
    u = profile.samples
    lin = spectral_derivative(u, p.L, 4) - p.gamma * spectral_derivative(u, p.L, 2)
    r = lin + p.omega * u - u**3 / 3.0 + p.A
    return float(np.abs(r).max() / np.abs(u**3 / 3.0).max())


def functional_M(profile: WaveProfile) -> float:
    """Mean functional M = integral of u over the period."""
    return float(profile.params.L * profile.samples.mean())


def functional_F(profile: WaveProfile) -> float:
    """Half L2 mass F = (1/2) integral of u^2."""
    return float(0.5 * profile.params.L * (profile.samples**2).mean())


def functional_P(profile: WaveProfile) -> float:
    """Energy P = (1/2) integral of (u_xx^2 + gamma u_x^2 - u^4/6)."""
    return _functional_P_samples(profile.samples, profile.params.L, profile.params.gamma)


def _functional_P_samples(u: np.ndarray, L: float, gamma: int) -> float:
    ux = spectral_derivative(u, L, 1)
    uxx = spectral_derivative(u, L, 2)
    return float(L * np.mean(0.5 * (uxx**2 + gamma * ux**2) - u**4 / 12.0))


def functional_G(profile: WaveProfile) -> FunctionalValues:
    """P, F, M and the Lyapunov combination G = P + omega F + A M."""
    P = functional_P(profile)
    F = functional_F(profile)
    M = functional_M(profile)
    p = profile.params
    return FunctionalValues(P=P, F=F, M=M, G=P + p.omega * F + p.A * M)


def closed_form_M(k: float, L: float) -> float:
    """M(phi) = a L for the gamma = 0 family."""
    return build_wave_params(k, L, 0).a * L


def closed_form_F(k: float, L: float) -> float:
    """F(phi) = 320 (k^4 - k^2 + 1) K^4 / L^3 for the gamma = 0 family.

    Derived by integrating the dn^2 ansatz directly (the E-dependent terms
    cancel); verified against quadrature to machine precision.
    """
    K = complete_elliptic_K(k)
    return 320.0 * (k**4 - k**2 + 1.0) * K**4 / L**3


def dphi_dk(params: WaveParams, n: int) -> np.ndarray:
    """Phi = dphi/dk on the grid: Richardson-extrapolated central differences.

    The result is spectrally filtered at DK_FILTER relative so that the FD
    roundoff (white in x) cannot contaminate fourth derivatives downstream.
    """
    k = params.k
    if not 0.01 <= k <= 0.99:
        raise ValueError(f"k={k} too close to the range ends for the dk stencil")
    _validate_grid_size(n)
    h = DK_STEP

    def s(kk: float) -> np.ndarray:
        return _samples(build_wave_params(kk, params.L, params.gamma), n)

    d_h = (s(k + h) - s(k - h)) / (2.0 * h)
    d_h2 = (s(k + h / 2.0) - s(k - h / 2.0)) / h
    phi_k = (4.0 * d_h2 - d_h) / 3.0
    ph = np.fft.fft(phi_k) / n
    ph[np.abs(ph) < DK_FILTER * np.abs(ph).max()] = 0.0
    return (np.fft.ifft(ph) * n).real


def param_derivatives(k: float, L: float) -> tuple[float, float, float, float]:
    """(domega/dk, dA/dk, dF(phi)/dk, dM(phi)/dk) for the gamma = 0 curve.

    Analytic differentiation of the closed forms using dK/dk and dE/dk.
    """
    if not K_MIN < k < K_MAX:
        raise ValueError(f"k={k} outside ({K_MIN}, {K_MAX})")
    ev = elliptic_values(k)
    K, E = ev.K, ev.E
    dK, dE = elliptic_derivatives(k)
    q = k**4 - k**2 + 1.0
    dq = 4.0 * k**3 - 2.0 * k
    d_omega = 384.0 / L**4 * (dq * K**4 + 4.0 * q * K**3 * dK)
    pf = (k * k - 2.0) * (2.0 * k * k - 1.0) * (k * k + 1.0)
    dpf = (
        2.0 * k * (2.0 * k * k - 1.0) * (k * k + 1.0)
        + (k * k - 2.0) * 4.0 * k * (k * k + 1.0)
        + (k * k - 2.0) * (2.0 * k * k - 1.0) * 2.0 * k
    )
    d_A = -(2048.0 * SQRT10 / (3.0 * L**6)) * (dpf * K**6 + 6.0 * pf * K**5 * dK)
    da = (
        8.0
        * SQRT10
        / L**2
        * (dK * ((k * k - 2.0) * K + 3.0 * E) + K * (2.0 * k * K + (k * k - 2.0) * dK + 3.0 * dE))
    )
    d_M = L * da
    d_F = 320.0 / L**3 * (dq * K**4 + 4.0 * q * K**3 * dK)
    return d_omega, d_A, d_F, d_M
