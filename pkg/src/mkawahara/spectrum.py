"""Fourier-Galerkin spectrum of the linearized operator around the wave.

The operator is L = d^4/dx^4 - gamma d^2/dx^2 + omega - phi^2. In the complex
exponential basis its matrix is real symmetric: a diagonal symbol
xi^4 + gamma xi^2 + omega minus the Toeplitz convolution with the coefficients
of phi^2. The spectral hypothesis behind orbital stability is that exactly one
eigenvalue is negative and zero is a simple eigenvalue carried by phi'.

The log-concavity criterion that guarantees the hypothesis is checked through
the analytic second derivative of log of the coefficient interpolant,
-1/x^2 + c^2 csch^2(c x) with c = pi K(k')/K(k), which is negative because
csch(y) < 1/y for y > 0.
"""

from dataclasses import dataclass

import numpy as np

from .elliptic import complete_elliptic_K, csch
from .waves import WaveProfile

# residual tolerance for accepting phi' as the zero eigenfunction
ZERO_RESIDUAL_TOL = 1e-6


@dataclass
class OperatorMatrix:
    """Truncated operator in the exponential basis e^{2 pi i m x / L}, |m| <= m."""

    m: int
    entries: np.ndarray
    symbol: np.ndarray
    L: float
    gamma: int
    omega: float
    phi_fourier: np.ndarray  # centered coefficients of phi, |mode| <= m


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    n_negative: int
    zero_residual: float
    zero_gap: float
    zero_cosine: float
    hypothesis_ok: bool


@dataclass
class PropositionReport:
    profile_positive: bool
    coefficients_positive: bool
    log_concave: bool
    min_sample: float
    min_coefficient: float
    max_d2: float

    @property
    def passed(self) -> bool:
        return self.profile_positive and self.coefficients_positive and self.log_concave


def assemble_operator(profile: WaveProfile, m: int) -> OperatorMatrix:
    """Dense symmetric matrix of L in 2m+1 Fourier modes.

    The potential phi^2 is squared on the fine profile grid and truncated,
    which keeps its low coefficients alias-free; this requires m <= n/3.
    """
    n = profile.n
    if m > n // 3:
        raise ValueError(f"m={m} exceeds n/3={n // 3}; potential would alias")
    p = profile.params
    sq_hat = np.fft.fft(profile.samples**2) / n
    idx = np.arange(-m, m + 1)
    xi = 2.0 * np.pi * idx / p.L
    symbol = xi**4 + p.gamma * xi**2 + p.omega
    diff = idx[:, None] - idx[None, :]
    potential = sq_hat[diff % n].real
    # phi^2 is real and even, so the matrix is symmetric up to FFT roundoff;
    # symmetrize so it holds exactly
    entries = np.diag(symbol) - 0.5 * (potential + potential.T)
    mid = len(profile.fourier) // 2
    phi_fourier = profile.fourier[mid - m : mid + m + 1].copy()
    return OperatorMatrix(
        m=m,
        entries=entries,
        symbol=symbol,
        L=p.L,
        gamma=p.gamma,
        omega=p.omega,
        phi_fourier=phi_fourier,
    )


def _dphi_vector(op: OperatorMatrix) -> np.ndarray:
    """Realified coefficient vector of phi' (the i factor is a global phase)."""
    xi = 2.0 * np.pi * np.arange(-op.m, op.m + 1) / op.L
    return xi * op.phi_fourier


def zero_mode_residual(op: OperatorMatrix, profile: WaveProfile) -> float:
    """|L phi'| / |phi'| with phi' from the profile's spectral derivative."""
    mid = len(profile.fourier) // 2
    coeffs = profile.fourier[mid - op.m : mid + op.m + 1]
    xi = 2.0 * np.pi * np.arange(-op.m, op.m + 1) / op.L
    dphi = xi * coeffs
    norm = np.linalg.norm(dphi)
    if norm == 0.0:
        raise ValueError("phi' vanishes identically; zero-mode residual undefined")
    return float(np.linalg.norm(op.entries @ dphi) / norm)


def apply_operator(profile: WaveProfile, v: np.ndarray, m_cut: int | None = None) -> np.ndarray:
    """Apply L to a grid function by spectral differentiation.

    Input coefficients above m_cut (default n/3) are discarded first, which
    bounds the xi^4 amplification of any coefficient noise in v.
    """
    p = profile.params
    n = profile.n
    if len(v) != n:
        raise ValueError("grid function does not match the profile grid")
    if m_cut is None:
        m_cut = n // 3
    vh = np.fft.fft(v) / n
    modes = np.fft.fftfreq(n, d=1.0 / n)
    vh[np.abs(modes) > m_cut] = 0.0
    xi = 2.0 * np.pi * np.fft.fftfreq(n, d=p.L / n)
    deriv = (np.fft.ifft((xi**4 + p.gamma * xi**2) * vh) * n).real
    v_band = (np.fft.ifft(vh) * n).real
    return deriv + p.omega * v_band - profile.samples**2 * v_band


def low_spectrum(op: OperatorMatrix, count: int = 10, profile: WaveProfile | None = None) -> SpectrumReport:
    """Lowest eigenvalues and the hypothesis verdict.

    A full dense eigendecomposition is cheap at these sizes. The zero mode is
    classified against tol_zero = 1e-6 (1 + |lambda_min|) and its eigenvector
    is compared with phi' by cosine similarity.
    """
    if count > op.entries.shape[0]:
        raise ValueError("count exceeds the matrix dimension")
    eigenvalues, vectors = np.linalg.eigh(op.entries)
    tol_zero = 1e-6 * (1.0 + abs(eigenvalues[0]))
    n_negative = int(np.sum(eigenvalues < -tol_zero))
    n_zero = int(np.sum(np.abs(eigenvalues) <= tol_zero))
    outside = np.abs(eigenvalues)[np.abs(eigenvalues) > tol_zero]
    zero_gap = float(outside.min()) if outside.size else float("inf")

    dphi = _dphi_vector(op)
    dphi_norm = np.linalg.norm(dphi)
    if dphi_norm == 0.0:
        zero_residual = float("inf")
        zero_cosine = 0.0
    else:
        zero_residual = float(np.linalg.norm(op.entries @ dphi) / dphi_norm)
        i0 = int(np.argmin(np.abs(eigenvalues)))
        zero_cosine = float(abs(vectors[:, i0] @ dphi) / dphi_norm)

    hypothesis_ok = (
        n_negative == 1
        and n_zero == 1
        and zero_residual < ZERO_RESIDUAL_TOL
        and eigenvalues[2] > tol_zero
    )
    return SpectrumReport(
        eigenvalues=eigenvalues[:count].copy(),
        n_negative=n_negative,
        zero_residual=zero_residual,
        zero_gap=zero_gap,
        zero_cosine=zero_cosine,
        hypothesis_ok=hypothesis_ok,
    )


def log_concavity_d2(x, k: float):
    """Second derivative of log g_k at x: -1/x^2 + c^2 csch^2(c x).

    g_k interpolates the wave's Fourier coefficients; its prefactor drops out
    of the second log-derivative. Negative for every x != 0 since
    csch(y) < 1/y on y > 0.
    """
    if not 0.0 < k < 1.0:
        raise ValueError(f"k={k} outside (0, 1)")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr == 0.0):
        raise ValueError("log-concavity check is singular at x = 0")
    K = complete_elliptic_K(k)
    Kp = complete_elliptic_K(np.sqrt((1.0 - k) * (1.0 + k)))
    c = np.pi * Kp / K
    out = -1.0 / x_arr**2 + c**2 * csch(c * x_arr) ** 2
    return float(out) if np.ndim(x) == 0 else out


def verify_proposition_criterion(
    profile: WaveProfile, x_grid: np.ndarray, coeff_modes: int = 32
) -> PropositionReport:
    """Check the three sufficient conditions for the spectral hypothesis.

    (i) the profile is positive, (ii) its Fourier coefficients are positive
    (checked strictly on |m| <= coeff_modes, where they are safely above the
    underflow floor, and non-negative beyond), (iii) log g is concave on the
    supplied grid.
    """
    p = profile.params
    min_sample = float(profile.samples.min())
    mid = len(profile.fourier) // 2
    lo = max(mid - coeff_modes, 0)
    hi = min(mid + coeff_modes + 1, len(profile.fourier))
    core = profile.fourier[lo:hi]
    min_coefficient = float(core.min())
    coefficients_positive = bool(np.all(core > 0.0) and np.all(profile.fourier >= 0.0))
    d2 = log_concavity_d2(np.asarray(x_grid, dtype=float), p.k)
    return PropositionReport(
        profile_positive=min_sample > 0.0,
        coefficients_positive=coefficients_positive,
        log_concave=bool(np.all(d2 < 0.0)),
        min_sample=min_sample,
        min_coefficient=min_coefficient,
        max_d2=float(np.max(d2)),
    )
