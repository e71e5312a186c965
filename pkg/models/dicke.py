"""Mean-field open Dicke model and its linear/nonlinear oscillator reductions.

All variables are intensive: alpha = a/sqrt(N), beta = b/sqrt(N) and
s_i = 2 J_i / N, so that J_x/N is sx/2 (mean field) or Re(beta) (oscillators).
Parameter arrays handed to the kernels are ``DickeParams.as_array()``:
``[omega, omega0, kappa, g0, A, omega_d]``.
"""
import math

import numpy as np

from exceptions import ConfigurationError, ValidityError
from extensions import jit
from models.models import DickeMfState, ModelKind, OmState

DICKE_MF_COMPONENTS = ('alpha_re', 'alpha_im', 'sx', 'sy', 'sz')
OM_COMPONENTS = ('alpha_re', 'alpha_im', 'beta_re', 'beta_im')


def critical_coupling(omega, omega0, kappa=0.0):
    """Static critical coupling of the open Dicke model."""
    if not (omega > 0 and omega0 > 0):
        raise ConfigurationError('omega and omega0 must be > 0')
    return 0.5 * math.sqrt((omega0 / omega) * (kappa ** 2 + omega ** 2))


@jit
def _coupling(t, p):
    return p[3] * (1.0 + p[4] * np.sin(p[5] * t))


@jit
def dicke_mf_kernel(t, y, p):
    omega, omega0, kappa = p[0], p[1], p[2]
    g = _coupling(t, p)
    ar, ai, sx, sy, sz = y[0], y[1], y[2], y[3], y[4]
    field = 2.0 * g * (2.0 * ar)
    dy = np.empty(5)
    dy[0] = omega * ai - kappa * ar
    dy[1] = -omega * ar - g * sx - kappa * ai
    dy[2] = -omega0 * sy
    dy[3] = omega0 * sx - field * sz
    dy[4] = field * sy
    return dy


@jit
def lom_kernel(t, y, p):
    omega, omega0, kappa = p[0], p[1], p[2]
    g = _coupling(t, p)
    ar, ai, br, bi = y[0], y[1], y[2], y[3]
    dy = np.empty(4)
    dy[0] = omega * ai - kappa * ar
    dy[1] = -omega * ar - 2.0 * g * br - kappa * ai
    dy[2] = omega0 * bi
    dy[3] = -omega0 * br - 2.0 * g * ar
    return dy


@jit
def nom_kernel(t, y, p):
    omega, omega0, kappa = p[0], p[1], p[2]
    g = _coupling(t, p)
    ar, ai, br, bi = y[0], y[1], y[2], y[3]
    beta_sq = br * br + bi * bi
    # 1 - (2|b|^2 + b^2)/2 split into real and imaginary parts
    corr_re = 1.0 - 0.5 * (3.0 * br * br + bi * bi)
    corr_im = -br * bi
    dy = np.empty(4)
    dy[0] = omega * ai - kappa * ar
    dy[1] = -omega * ar - 2.0 * g * br * (1.0 - 0.5 * beta_sq) - kappa * ai
    dy[2] = omega0 * bi + 2.0 * g * ar * corr_im
    dy[3] = -omega0 * br - 2.0 * g * ar * corr_re
    return dy


def dicke_mf_rhs(params, state, t):
    return dicke_mf_kernel(float(t), _as_array(state), params.as_array())


def lom_rhs(params, state, t):
    return lom_kernel(float(t), _as_array(state), params.as_array())


def nom_rhs(params, state, t):
    return nom_kernel(float(t), _as_array(state), params.as_array())


def _as_array(state):
    if hasattr(state, 'as_array'):
        return state.as_array()
    return np.asarray(state, dtype=np.float64)


def _check_epsilon(epsilon):
    if not 0 <= epsilon < 0.5:
        raise ConfigurationError(f'epsilon must lie in [0, 0.5), got {epsilon}')


def np_initial_state(epsilon=0.01):
    """Seed next to the normal phase: alpha = eps, beta = -eps (sx = -2 eps)."""
    _check_epsilon(epsilon)
    sx = -2.0 * epsilon
    mf = DickeMfState(epsilon, 0.0, sx, 0.0, -math.sqrt(1.0 - sx * sx))
    om = OmState(epsilon, 0.0, -epsilon, 0.0)
    return mf, om


def perturbed_initial_state(epsilon=0.01, delta=1e-6):
    """Seed shifted by delta in both alpha and beta."""
    _check_epsilon(epsilon)
    alpha, beta = epsilon + delta, -epsilon + delta
    sx = 2.0 * beta
    if abs(sx) >= 1:
        raise ConfigurationError('perturbed seed leaves the Bloch sphere')
    mf = DickeMfState(alpha, 0.0, sx, 0.0, -math.sqrt(1.0 - sx * sx))
    om = OmState(alpha, 0.0, beta, 0.0)
    return mf, om


def jx_observable(state, model_kind, corrected=False):
    """J_x/N of a single state.

    Mean field: sx/2. Oscillators: Re(beta), or Re(beta)*sqrt(1-|beta|^2)
    with ``corrected=True``.

    Raises:
        ValidityError: oscillator state with |beta|^2 > 1.
    """
    kind = ModelKind.parse(model_kind)
    if kind is ModelKind.DICKE_MF:
        return 0.5 * state.sx
    if kind is ModelKind.LMG:
        raise ConfigurationError('jx_observable is defined for the Dicke models only')
    fraction = excitation_fraction(state)
    if fraction > 1:
        raise ValidityError(f'|beta|^2 = {fraction:.6g} exceeds 1')
    if corrected:
        return state.beta_re * math.sqrt(1.0 - fraction)
    return state.beta_re


def excitation_fraction(state):
    return state.beta_re ** 2 + state.beta_im ** 2


def spin_norm(state):
    return state.sx ** 2 + state.sy ** 2 + state.sz ** 2


def pseudo_coordinates(state, omega, omega0):
    """(x, p_x, y, p_y) position/momentum view of an oscillator state."""
    return (
        math.sqrt(2.0 / omega) * state.alpha_re,
        -math.sqrt(2.0 * omega) * state.alpha_im,
        math.sqrt(2.0 / omega0) * state.beta_re,
        -math.sqrt(2.0 * omega0) * state.beta_im,
    )


def oscillator_energy(params, state, nonlinear=False):
    """Closed-system energy at the static coupling g0.

    Conserved by the undriven LOM (``nonlinear=False``) and NOM flows at kappa = 0.
    """
    values = _as_array(state)
    return float(_energy(values, params.omega, params.omega0, params.g0, nonlinear))


def _energy(values, omega, omega0, g0, nonlinear):
    ar, ai, br, bi = values[..., 0], values[..., 1], values[..., 2], values[..., 3]
    beta_sq = br * br + bi * bi
    coupling = 4.0 * g0 * ar * br
    if nonlinear:
        coupling = coupling * (1.0 - 0.5 * beta_sq)
    return omega * (ar * ar + ai * ai) + omega0 * beta_sq + coupling


def energy_series(params, trajectory, nonlinear=False):
    """Oscillator energy of every sample of an OM trajectory."""
    return _energy(trajectory.samples, params.omega, params.omega0, params.g0, nonlinear)


def max_excitation(trajectory):
    """Largest |beta|^2 reached along an oscillator trajectory."""
    beta_re = trajectory.component('beta_re')
    beta_im = trajectory.component('beta_im')
    return float(np.max(beta_re ** 2 + beta_im ** 2))
