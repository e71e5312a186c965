"""Semiclassical open LMG model with anisotropy gamma and collective decay Gamma.

Kernel parameter arrays are ``LmgParams.as_array()``:
``[omega0, lambda0, gamma, Gamma, A, omega_d]``.
"""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from exceptions import ConfigurationError, NotApplicableError
from extensions import jit
from models.models import LmgState, LmgSteadyState, LmgSteadyStates

LMG_COMPONENTS = ('X', 'Y', 'Z')
DEFAULT_Y0 = 5e-8


@jit
def lmg_kernel(t, y, p):
    omega0, gamma, decay = p[0], p[2], p[3]
    lam = p[1] * (1.0 + p[4] * np.sin(p[5] * t))
    x, yy, z = y[0], y[1], y[2]
    half = 0.5 * decay
    dy = np.empty(3)
    dy[0] = -omega0 * yy - lam * gamma * yy * z + half * x * z
    dy[1] = omega0 * x + lam * x * z + half * yy * z
    dy[2] = -lam * x * yy + lam * gamma * x * yy - half * (x * x + yy * yy)
    return dy


def lmg_rhs(params, state, t):
    values = state.as_array() if hasattr(state, 'as_array') else np.asarray(state, dtype=np.float64)
    return lmg_kernel(float(t), values, params.as_array())


def lmg_initial_state(y0=DEFAULT_Y0, x0=0.0, upper=False):
    """Unit-norm seed close to a pole of the Bloch sphere.

    The default sits next to the spin-down normal state (0, 0, -1), the
    state the natural frequency and the critical couplings are linearised
    about. ``upper=True`` gives the mirror seed with Z0 = +sqrt(1 - X0^2 - Y0^2).
    """
    rest = 1.0 - x0 * x0 - y0 * y0
    if rest < 0:
        raise ConfigurationError('initial X0, Y0 leave the unit sphere')
    z = math.sqrt(rest)
    return LmgState(x0, y0, z if upper else -z)


def perturbed_lmg_initial_state(delta=1e-6, y0=DEFAULT_Y0, x0=0.0, upper=False):
    return lmg_initial_state(y0=y0 + delta, x0=x0, upper=upper)


def lmg_steady_state(params):
    """Normal state plus the pair of symmetry-broken fixed points, when they exist."""
    lam, omega0, decay = params.lambda0, params.omega0, params.Gamma
    lam_minus = lam * params.gamma_minus
    radicand = lam_minus ** 2 - decay ** 2
    if radicand < 0:
        return LmgSteadyStates(reason='overdamped: lambda^2 gamma_-^2 < Gamma^2')
    if lam_minus == 0:
        return LmgSteadyStates(reason='isotropic coupling has no symmetry-broken branch')
    root = math.sqrt(radicand)
    big_lambda = 0.5 * (lam * params.gamma_plus + root)
    if big_lambda == 0:
        return LmgSteadyStates(reason='Lambda vanishes')
    zs = -omega0 / big_lambda
    if abs(zs) >= 1:
        return LmgSteadyStates(reason='|Zs| >= 1: normal phase only')

    # ratio Ys/Xs = 2(Lambda - lambda)/Gamma, written without cancellation when lam_minus > 0
    if lam_minus > 0:
        xs2 = (1.0 - zs * zs) / (1.0 + (decay / (root + lam_minus)) ** 2)
        xs = math.sqrt(xs2)
        ys = -decay / (root + lam_minus) * xs
    elif decay > 0:
        ratio = 2.0 * (big_lambda - lam) / decay
        xs = math.sqrt((1.0 - zs * zs) / (1.0 + ratio * ratio))
        ys = ratio * xs
    else:
        xs, ys = 0.0, math.sqrt(1.0 - zs * zs)
    branches = (
        LmgSteadyState(+1, xs, ys, zs, big_lambda),
        LmgSteadyState(-1, -xs, -ys, zs, big_lambda),
    )
    return LmgSteadyStates(branches=branches)


@dataclass(frozen=True)
class CriticalCouplings:
    roots: Tuple[float, ...]
    real: bool


def lambda_critical(params):
    """Critical interaction strength(s) of the NP -> SB transition."""
    omega0, gamma, decay = params.omega0, params.gamma, params.Gamma
    if gamma == 0:
        return CriticalCouplings((decay ** 2 / (4.0 * omega0) + omega0,), True)
    radicand = omega0 ** 2 * (1.0 - gamma) ** 2 - decay ** 2 * gamma
    if radicand < 0:
        return CriticalCouplings((), False)
    root = math.sqrt(radicand)
    shift = omega0 * (1.0 + gamma)
    return CriticalCouplings(((shift + root) / (2.0 * gamma), (shift - root) / (2.0 * gamma)), True)


@dataclass(frozen=True)
class NaturalFrequency:
    value: float
    imaginary: bool

    def ladder(self, n_max):
        """Resonant drive frequencies 2*Omega0/n, n = 1..n_max."""
        if self.imaginary or n_max < 1:
            return []
        return [2.0 * self.value / n for n in range(1, int(n_max) + 1)]


def natural_frequency(params):
    """Small-oscillation frequency about the spin-down state.

    Imaginary values (the symmetry-broken side) are flagged and reported by
    magnitude.
    """
    radicand = (params.omega0 - params.lambda0) * (params.omega0 - params.gamma * params.lambda0)
    return NaturalFrequency(math.sqrt(abs(radicand)), radicand < 0)


def resonance_ladder(params, n_max=4):
    return natural_frequency(params).ladder(n_max)


def isotropic_z_analytic(Gamma, Z0, t):
    """Z(t) of the isotropic model: tanh(artanh(Z0) - Gamma t / 2)."""
    if abs(Z0) > 1:
        raise ConfigurationError(f'|Z0| must be <= 1, got {Z0}')
    t = np.asarray(t, dtype=np.float64)
    if abs(Z0) == 1 or Gamma == 0:
        return np.full_like(t, Z0) if t.ndim else float(Z0)
    values = np.tanh(math.atanh(Z0) - 0.5 * Gamma * t)
    return values if t.ndim else float(values)


def _isotropic_phase(params, z0, t):
    rate = params.omega0 + params.lambda0 * z0
    phase = rate * t
    if params.amplitude > 0:
        phase = phase + params.lambda0 * z0 * params.amplitude * (1.0 - np.cos(params.drive_frequency * t)) / params.drive_frequency
    return phase


def isotropic_xy_analytic(params, state0, t):
    """(X, Y) of the closed isotropic model: rigid precession about Z."""
    if params.gamma != 1:
        raise NotApplicableError('isotropic solution requires gamma = 1')
    if params.Gamma != 0:
        raise NotApplicableError('isotropic precession solution requires Gamma = 0')
    t = np.asarray(t, dtype=np.float64)
    radius = math.hypot(state0.X, state0.Y)
    phase0 = math.atan2(state0.Y, state0.X)
    angle = _isotropic_phase(params, state0.Z, t) + phase0
    return radius * np.cos(angle), radius * np.sin(angle)


def isotropic_x_analytic(params, state0, t):
    x, _ = isotropic_xy_analytic(params, state0, t)
    return x if np.ndim(x) else float(x)


def gamma_dissipation_map(gamma, gamma_a=0.0, gamma_b=0.0, alpha=0.0, beta=0.0):
    """Effective collective decay for the three channel configurations."""
    if gamma == -1:
        return beta ** 2 * gamma_b - alpha ** 2 * gamma_a
    if gamma == 0:
        return -0.5 * gamma_b
    if gamma == 1:
        return 0.5 * (gamma_a - gamma_b)
    raise ConfigurationError(f'no dissipation channel map for gamma = {gamma}')
