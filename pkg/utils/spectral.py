"""Closed-form resonance layer of the open oscillator models.

Polariton frequencies, eigenmodes, critical dissipation strengths, the
drive-amplitude scaling delta and the resonance predictions, plus an
independent eigenvalue oracle built from the rotated-frame matrix.
"""
import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from exceptions import ConfigurationError, PoleError
from models.dicke import critical_coupling

BRANCH_TOLERANCE = 1e-12
POLE_TOLERANCE = 1e-12


def _csqrt(value):
    """Principal complex square root; arguments within 1e-12 of zero give 0."""
    value = complex(value)
    if abs(value) < BRANCH_TOLERANCE:
        return 0j
    # keep the cut on the negative real axis with a +0 imaginary part
    if value.imag == 0:
        value = complex(value.real, 0.0)
    return cmath.sqrt(value)


def _check(omega, kappa, g_ratio):
    if not omega > 0:
        raise ConfigurationError(f'omega must be > 0, got {omega}')
    if not kappa >= 0:
        raise ConfigurationError(f'kappa must be >= 0, got {kappa}')
    if not g_ratio >= 0:
        raise ConfigurationError(f'g_ratio must be >= 0, got {g_ratio}')


def polariton_frequencies(omega, kappa, g_ratio):
    """Complex polariton frequencies (Omega_+, Omega_-) at omega = omega0."""
    _check(omega, kappa, g_ratio)
    g = g_ratio * critical_coupling(omega, omega, kappa)
    root = _csqrt(g * g - 0.25 * kappa * kappa)
    base = omega * omega - 0.25 * kappa * kappa
    return _csqrt(base + 2.0 * omega * root), _csqrt(base - 2.0 * omega * root)


@dataclass(frozen=True)
class PolaritonSpectrum:
    omega_plus: complex
    omega_minus: complex
    eps_plus_upper: complex
    eps_plus_lower: complex
    eps_minus_upper: complex
    eps_minus_lower: complex
    upper_asymptote: complex
    lower_asymptote: complex

    @property
    def modes(self):
        return (self.eps_plus_upper, self.eps_plus_lower, self.eps_minus_upper, self.eps_minus_lower)


def _damped_root(frequency):
    # the root with Im <= 0 puts the less damped mode on the upper branch
    return -frequency if frequency.imag > 0 else frequency


def eigenmodes(omega, kappa, g_ratio):
    """Eigenmodes -kappa/2 +/- i*Omega_+/- with their large-kappa asymptotes."""
    omega_plus, omega_minus = polariton_frequencies(omega, kappa, g_ratio)
    shift = -0.5 * kappa
    plus, minus = _damped_root(omega_plus), _damped_root(omega_minus)
    slow = omega * math.sqrt(max(0.0, 1.0 - g_ratio ** 2))
    return PolaritonSpectrum(
        omega_plus=omega_plus,
        omega_minus=omega_minus,
        eps_plus_upper=shift + 1j * plus,
        eps_plus_lower=shift - 1j * plus,
        eps_minus_upper=shift + 1j * minus,
        eps_minus_lower=shift - 1j * minus,
        upper_asymptote=complex(0.0, slow),
        lower_asymptote=complex(-kappa, slow),
    )


def rotated_frame_matrix(omega, kappa, g_ratio):
    """Real 4x4 generator of (x+, dx+/dt, x-, dx-/dt) in the frame without the -kappa/2 envelope."""
    _check(omega, kappa, g_ratio)
    g = g_ratio * critical_coupling(omega, omega, kappa)
    base = omega * omega + 0.25 * kappa * kappa
    w_plus, w_minus = base + 2.0 * g * omega, base - 2.0 * g * omega
    return np.array([
        [0.0, 1.0, 0.0, 0.0],
        [-w_plus, 0.0, 0.0, -kappa],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, -kappa, -w_minus, 0.0],
    ])


def eigen_oracle(omega, kappa, g_ratio):
    """Eigenvalues of the rotated-frame matrix from its biquadratic characteristic polynomial.

    Returns ``(+i Omega_+, -i Omega_+, +i Omega_-, -i Omega_-)`` where the
    polynomial roots s^2 = -Omega^2 are assigned to Omega_+ by larger real part
    of Omega^2 (ties by larger imaginary part).
    """
    m = rotated_frame_matrix(omega, kappa, g_ratio)
    # det(sI - M) = s^4 + c2 s^2 + c0 for this sparsity pattern
    c2 = -m[1, 0] - m[3, 2] - m[1, 3] * m[3, 1]
    c0 = m[1, 0] * m[3, 2]
    disc = _csqrt(c2 * c2 - 4.0 * c0)
    roots = [0.5 * (-c2 + disc), 0.5 * (-c2 - disc)]
    squares = [-u for u in roots]
    scale = max(1.0, max(abs(s) for s in squares))
    first, second = squares
    if abs(first.real - second.real) > 1e-12 * scale:
        plus_sq, minus_sq = (first, second) if first.real > second.real else (second, first)
    else:
        plus_sq, minus_sq = (first, second) if first.imag >= second.imag else (second, first)
    omega_plus, omega_minus = _csqrt(plus_sq), _csqrt(minus_sq)
    return (1j * omega_plus, -1j * omega_plus, 1j * omega_minus, -1j * omega_minus)


def oracle_polariton_frequencies(omega, kappa, g_ratio):
    plus, _, minus, _ = eigen_oracle(omega, kappa, g_ratio)
    return -1j * plus, -1j * minus


def lom_jacobian(omega, omega0, kappa, g0):
    """Linear generator of the LOM in (Re a, Im a, Re b, Im b)."""
    return np.array([
        [-kappa, omega, 0.0, 0.0],
        [-omega, -kappa, -2.0 * g0, 0.0],
        [0.0, 0.0, 0.0, omega0],
        [-2.0 * g0, 0.0, -omega0, 0.0],
    ])


@dataclass(frozen=True)
class CriticalDissipation:
    kappa_c_prime: Optional[float]
    kappa_c_dprime: float
    kappa_plus_prime: Optional[float]

    def in_overdamped_window(self, kappa):
        return self.kappa_c_prime is not None and self.kappa_c_prime < kappa < self.kappa_c_dprime


def kappa_critical(omega, g_ratio):
    """Dissipation strengths bounding the overdamped window of the lower polariton."""
    if not 0 < g_ratio <= 1:
        raise ConfigurationError(f'g_ratio must lie in (0, 1], got {g_ratio}')
    if g_ratio == 1:
        dprime = math.inf
    else:
        dprime = omega / math.sqrt(1.0 / g_ratio ** 2 - 1.0)
    discriminant = 4.0 * g_ratio ** 2 - 3.0
    if discriminant < 0:
        return CriticalDissipation(None, dprime, None)
    root = g_ratio * math.sqrt(discriminant)
    lower = 2.0 * g_ratio ** 2 - 1.0 - root
    upper = 2.0 * g_ratio ** 2 - 1.0 + root
    # lower vanishes exactly at g' = 1; clip rounding noise
    prime = 2.0 * omega * math.sqrt(max(lower, 0.0)) if lower > -BRANCH_TOLERANCE else None
    plus = 2.0 * omega * math.sqrt(upper) if upper >= 0 else None
    return CriticalDissipation(prime, dprime, plus)


def drive_amp_scaling(omega, kappa, g_ratio):
    """Scaling delta between the coupling modulation and the polariton drive."""
    numerator = g_ratio ** 2 * (kappa ** 2 + omega ** 2)
    denominator = numerator - kappa ** 2
    if abs(denominator) < POLE_TOLERANCE:
        raise PoleError(f'delta has a pole at kappa = {kappa}')
    return numerator / denominator


@dataclass(frozen=True)
class ResonancePrediction:
    omega_r: float
    a_r: float
    kappa_c_prime: Optional[float]
    kappa_c_dprime: float
    kappa_plus_prime: Optional[float]
    delta: Optional[float]
    omega_large_kappa: float
    kappa_max: float
    reliable: bool


def minimum_resonant_amplitude(omega, kappa, g_ratio):
    slow = omega * math.sqrt(1.0 - g_ratio ** 2)
    return 2.0 * slow * kappa / (omega ** 2 + kappa ** 2)


def resonance_prediction(omega, kappa, g_ratio):
    """Primary resonance 2 Re(Omega_-) and minimum resonant amplitude.

    ``reliable`` is False inside the overdamped window, where the numerically
    observed resonance departs from the closed form. ``delta`` is None at its pole.
    """
    _, omega_minus = polariton_frequencies(omega, kappa, g_ratio)
    critical = kappa_critical(omega, g_ratio)
    try:
        delta = drive_amp_scaling(omega, kappa, g_ratio)
    except PoleError:
        delta = None
    return ResonancePrediction(
        omega_r=2.0 * omega_minus.real,
        a_r=minimum_resonant_amplitude(omega, kappa, g_ratio),
        kappa_c_prime=critical.kappa_c_prime,
        kappa_c_dprime=critical.kappa_c_dprime,
        kappa_plus_prime=critical.kappa_plus_prime,
        delta=delta,
        omega_large_kappa=2.0 * omega * math.sqrt(1.0 - g_ratio ** 2),
        # d/dkappa [kappa / (omega^2 + kappa^2)] = 0
        kappa_max=omega,
        reliable=not critical.in_overdamped_window(kappa),
    )


def eigenmode_scan(omega, g_ratio, kappas):
    """Rows (kappa, eps+U, eps+L, eps-U, eps-L) across a dissipation range."""
    rows = []
    for kappa in kappas:
        spectrum = eigenmodes(omega, float(kappa), g_ratio)
        rows.append((float(kappa),) + spectrum.modes)
    return rows
