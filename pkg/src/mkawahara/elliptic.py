"""Complete elliptic integrals and Jacobi elliptic functions.

Everything is built on the arithmetic-geometric mean (AGM): K and E from the
classical Gauss iteration, dn/sn from the descending Landen chain with the
backward amplitude recursion (Abramowitz & Stegun 16.4). Self-contained on
purpose; the rest of the package treats this module as its special-function
oracle.
"""

import math
from dataclasses import dataclass

import numpy as np

# AGM converges quadratically; 30 iterations is far more than double
# precision ever needs.
_MAX_AGM_ITER = 30
_AGM_RTOL = 1e-16


@dataclass
class EllipticValues:
    """K, E and the complementary modulus at a single modulus k."""

    k: float
    K: float
    E: float
    k_prime: float


def complete_elliptic_K(k: float) -> float:
    """Complete elliptic integral of the first kind via the AGM iteration.

    Requires 0 <= k < 1; K diverges logarithmically as k -> 1.
    """
    if not 0.0 <= k < 1.0:
        raise ValueError(f"modulus k={k} outside [0, 1) for K(k)")
    a = 1.0
    b = math.sqrt((1.0 - k) * (1.0 + k))
    for _ in range(_MAX_AGM_ITER):
        if abs(a - b) <= _AGM_RTOL * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def complete_elliptic_E(k: float) -> float:
    """Complete elliptic integral of the second kind.

    Uses the AGM with the scale sum E = K (1 - sum 2^(n-1) c_n^2), c_0 = k.
    Valid on 0 <= k <= 1 with E(1) = 1 handled exactly.
    """
    if not 0.0 <= k <= 1.0:
        raise ValueError(f"modulus k={k} outside [0, 1] for E(k)")
    if k == 1.0:
        return 1.0
    a = 1.0
    b = math.sqrt((1.0 - k) * (1.0 + k))
    s = 0.5 * k * k
    p = 1.0
    for _ in range(_MAX_AGM_ITER):
        if abs(a - b) <= _AGM_RTOL * a:
            break
        c = 0.5 * (a - b)
        s += p * c * c
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        p *= 2.0
    K = math.pi / (2.0 * a)
    return K * (1.0 - s)


def elliptic_values(k: float) -> EllipticValues:
    """Bundle K(k), E(k) and k' = sqrt(1 - k^2)."""
    return EllipticValues(
        k=k,
        K=complete_elliptic_K(k),
        E=complete_elliptic_E(k),
        k_prime=math.sqrt((1.0 - k) * (1.0 + k)),
    )


def elliptic_derivatives(k: float) -> tuple[float, float]:
    """dK/dk and dE/dk from the standard closed identities.

    dK/dk = (E - (1-k^2) K) / (k (1-k^2)),  dE/dk = (E - K) / k.
    Both are singular at k = 0 and k = 1, so the open interval is required.
    """
    if not 0.0 < k < 1.0:
        raise ValueError(f"modulus k={k} outside (0, 1) for elliptic derivatives")
    K = complete_elliptic_K(k)
    E = complete_elliptic_E(k)
    kp2 = (1.0 - k) * (1.0 + k)
    return (E - kp2 * K) / (k * kp2), (E - K) / k


def _jacobi_sn_cn_dn(x, k: float):
    """sn, cn, dn via the AGM chain; x may be a scalar or an array.

    Backward pass in the cotangent-like variable a = cn/sn (the sncndn scheme
    of Numerical Recipes) rather than the amplitude angle: the dn ratio
    (b_i + a)/(a_i + a) stays well conditioned at u = K, where the classical
    cos(phi)/cos(phi_1 - phi_0) form is 0/0.
    """
    x = np.asarray(x, dtype=float)
    if not 0.0 <= k <= 1.0:
        raise ValueError(f"modulus k={k} outside [0, 1] for Jacobi functions")
    if k == 1.0:
        sech = 1.0 / np.cosh(x)
        return np.tanh(x), sech, sech
    if k < 1e-8:
        # below double precision resolution of the k^2 corrections
        sn = np.sin(x)
        return sn, np.cos(x), np.sqrt(1.0 - (k * sn) ** 2)
    a_seq = []
    b_seq = []
    a = 1.0
    b = math.sqrt((1.0 - k) * (1.0 + k))
    for _ in range(_MAX_AGM_ITER):
        a_seq.append(a)
        b_seq.append(b)
        if abs(a - b) <= _AGM_RTOL * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    agm = 0.5 * (a + b)
    K = math.pi / (2.0 * agm)
    # reduce to one fundamental period (4K for sn/cn; dn repeats every 2K)
    u = x - 4.0 * K * np.round(x / (4.0 * K))
    phi = agm * u
    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = np.ones_like(sn)
    zero = sn == 0.0
    sn_safe = np.where(zero, 1.0, sn)
    t = cn / sn_safe
    c = agm * t
    for a_i, b_i in zip(reversed(a_seq), reversed(b_seq)):
        t = c * t
        c = c * dn
        dn = (b_i + t) / (a_i + t)
        t = c / a_i
    sn_out = np.sign(sn) / np.sqrt(c * c + 1.0)
    cn_out = c * sn_out
    sn_out = np.where(zero, 0.0, sn_out)
    cn_out = np.where(zero, cn, cn_out)
    dn = np.where(zero, 1.0, dn)
    return sn_out, cn_out, dn


def jacobi_dn(x, k: float):
    """Jacobi dn(x, k); periodic with period 2K(k), k' <= dn <= 1."""
    dn = _jacobi_sn_cn_dn(x, k)[2]
    return float(dn) if np.ndim(x) == 0 else dn


def jacobi_sn(x, k: float):
    """Jacobi sn(x, k) from the same Landen recursion as dn."""
    sn = _jacobi_sn_cn_dn(x, k)[0]
    return float(sn) if np.ndim(x) == 0 else sn


def csch(y):
    """1/sinh(y), overflow-safe: underflows to 0 for large |y|, rejects y = 0."""
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr == 0.0):
        raise ValueError("csch is singular at y = 0")
    ay = np.abs(y_arr)
    # 2 e^{-|y|} / (1 - e^{-2|y|}) avoids sinh overflow past |y| ~ 710
    with np.errstate(over="ignore"):
        small = np.where(ay < 1.0, y_arr, 1.0)
        direct = 1.0 / np.sinh(small)
    e = np.exp(-ay)
    safe = np.sign(y_arr) * 2.0 * e / (1.0 - e * e)
    out = np.where(ay < 1.0, direct, safe)
    return float(out) if np.ndim(y) == 0 else out
