"""Fixed-step RK4 integration shared by every model.

Right-hand sides use the signature ``rhs(t, y, p) -> dy`` with ``y`` and
``p`` float64 arrays. Compiled kernels (numba dispatchers) are stepped by a
compiled loop built once per kernel; any other callable runs through the
Python loop below. Both apply the same update and the same divergence rule.
"""
import math

import numpy as np
import numba
import structlog

from exceptions import DivergenceError
from models.models import Trajectory

logger = structlog.get_logger(__name__)

_EMPTY = np.zeros(0, dtype=np.float64)
_compiled_loops = {}


def drive_value(spec, t):
    """Return ``base * (1 + amplitude * sin(frequency * t))``."""
    return spec.base * (1.0 + spec.amplitude * math.sin(spec.frequency * t))


def _first_non_finite(values):
    bad = np.flatnonzero(~np.isfinite(values))
    return int(bad[0]) if bad.size else -1


def rk4_step(rhs, state, t, dt, params=None):
    """One classical RK4 step.

    Raises:
        DivergenceError: if any stage derivative is non-finite; carries the
            index of the first offending component.
    """
    p = _EMPTY if params is None else params
    y = np.asarray(state, dtype=np.float64)
    half = 0.5 * dt
    k1 = np.asarray(rhs(t, y, p), dtype=np.float64)
    k2 = np.asarray(rhs(t + half, y + half * k1, p), dtype=np.float64)
    k3 = np.asarray(rhs(t + half, y + half * k2, p), dtype=np.float64)
    k4 = np.asarray(rhs(t + dt, y + dt * k3, p), dtype=np.float64)
    for stage in (k1, k2, k3, k4):
        bad = _first_non_finite(stage)
        if bad >= 0:
            raise DivergenceError(bad, t)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _is_compiled(rhs):
    return isinstance(rhs, numba.core.dispatcher.Dispatcher)


def _compiled_loop(rhs):
    loop = _compiled_loops.get(rhs)
    if loop is not None:
        return loop

    @numba.njit
    def loop(y0, p, t0, dt, n_steps, stride, cutoff):
        dim = y0.shape[0]
        out = np.empty((n_steps // stride + 1, dim))
        out[0, :] = y0
        y = y0.copy()
        recorded = 1
        half = 0.5 * dt
        for n in range(n_steps):
            t = t0 + n * dt
            k1 = rhs(t, y, p)
            k2 = rhs(t + half, y + half * k1, p)
            k3 = rhs(t + half, y + half * k2, p)
            k4 = rhs(t + dt, y + dt * k3, p)
            y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            for i in range(dim):
                # NaN fails the comparison as well
                if not abs(y[i]) <= cutoff:
                    return out, recorded, n + 1, i
            if (n + 1) % stride == 0:
                out[recorded, :] = y
                recorded += 1
        return out, recorded, -1, -1

    _compiled_loops[rhs] = loop
    return loop


def _python_loop(rhs, y0, p, t0, dt, n_steps, stride, cutoff):
    dim = y0.shape[0]
    out = np.empty((n_steps // stride + 1, dim))
    out[0] = y0
    y = y0.copy()
    recorded = 1
    for n in range(n_steps):
        try:
            y = rk4_step(rhs, y, t0 + n * dt, dt, p)
        except DivergenceError as exc:
            return out, recorded, n + 1, exc.component
        bad = np.flatnonzero(~(np.abs(y) <= cutoff))
        if bad.size:
            return out, recorded, n + 1, int(bad[0])
        if (n + 1) % stride == 0:
            out[recorded] = y
            recorded += 1
    return out, recorded, -1, -1


def integrate(rhs, state0, config, params=None, model_id='custom', components=()):
    """Integrate ``rhs`` from ``state0`` under ``config``.

    Every ``config.stride``-th state is recorded. When a component leaves
    ``[-divergence_cutoff, divergence_cutoff]`` (or turns non-finite) the run
    stops, the samples recorded so far are kept and the trajectory is flagged
    ``diverged`` with the offending step as ``truncation_index``.
    """
    y0 = np.array(state0, dtype=np.float64)
    if _first_non_finite(y0) >= 0:
        raise DivergenceError(_first_non_finite(y0), config.t0)
    p = _EMPTY if params is None else np.asarray(params, dtype=np.float64)
    stride = int(config.stride)
    args = (y0, p, float(config.t0), float(config.dt), config.n_steps, stride,
            float(config.divergence_cutoff))
    if _is_compiled(rhs):
        out, recorded, stop, component = _compiled_loop(rhs)(*args)
    else:
        out, recorded, stop, component = _python_loop(rhs, *args)

    diverged = stop >= 0
    if diverged:
        logger.info('integration_diverged', model=model_id, step=int(stop), component=int(component))
    return Trajectory(
        samples=out[:recorded].copy() if diverged else out,
        t0=float(config.t0),
        dt=float(config.dt),
        stride=stride,
        model_id=model_id,
        components=tuple(components),
        diverged=diverged,
        truncation_index=int(stop) if diverged else None,
    )
