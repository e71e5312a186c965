"""Per-model wiring: parameter names, kernels, seeds and observables.

Sweeps, the classifier and the CLI address models through flat parameter
dictionaries keyed by the names below.
"""
import numpy as np

from exceptions import ConfigurationError
from models.dicke import (
    DICKE_MF_COMPONENTS, OM_COMPONENTS, dicke_mf_kernel, lom_kernel, nom_kernel,
    np_initial_state, perturbed_initial_state,
)
from models.dynamics import integrate
from models.lmg import LMG_COMPONENTS, lmg_initial_state, lmg_kernel, perturbed_lmg_initial_state
from models.models import DickeParams, LmgParams, ModelKind

DICKE_DEFAULTS = {
    'omega': 1.0, 'omega0': 1.0, 'kappa': 0.5, 'gprime': 0.9,
    'epsilon': 0.01, 'wd': 0.8, 'A': 0.0,
}
LMG_DEFAULTS = {
    'omega0': 1.0, 'lambda0': 0.8, 'gamma': 0.0, 'Gamma': 0.1,
    'wd': 0.85, 'A': 0.0, 'y0': 5e-8,
}

_KERNELS = {
    ModelKind.DICKE_MF: dicke_mf_kernel,
    ModelKind.LOM: lom_kernel,
    ModelKind.NOM: nom_kernel,
    ModelKind.LMG: lmg_kernel,
}


def defaults_for(model):
    kind = ModelKind.parse(model)
    return dict(LMG_DEFAULTS if kind is ModelKind.LMG else DICKE_DEFAULTS)


def parameter_names(model):
    return tuple(defaults_for(model))


def resolve_values(model, values=None):
    """Merge ``values`` over the model defaults, rejecting unknown names."""
    merged = defaults_for(model)
    unknown = sorted(set(values or {}) - set(merged))
    if unknown:
        raise ConfigurationError(f'unknown parameter(s) for {ModelKind.parse(model).value}: {", ".join(unknown)}')
    for key, value in (values or {}).items():
        try:
            merged[key] = float(value)
        except (TypeError, ValueError):
            raise ConfigurationError(f'parameter {key} must be a number, got {value!r}') from None
    return merged


def build_params(model, values=None):
    kind = ModelKind.parse(model)
    v = resolve_values(kind, values)
    if kind is ModelKind.LMG:
        return LmgParams(omega0=v['omega0'], lambda0=v['lambda0'], gamma=v['gamma'],
                         Gamma=v['Gamma'], amplitude=v['A'], drive_frequency=v['wd'])
    return DickeParams(omega=v['omega'], omega0=v['omega0'], kappa=v['kappa'],
                       g_ratio=v['gprime'], amplitude=v['A'], drive_frequency=v['wd'])


def kernel_for(model):
    return _KERNELS[ModelKind.parse(model)]


def components(model):
    kind = ModelKind.parse(model)
    if kind is ModelKind.DICKE_MF:
        return DICKE_MF_COMPONENTS
    if kind is ModelKind.LMG:
        return LMG_COMPONENTS
    return OM_COMPONENTS


def initial_states(model, values=None, delta=1e-6):
    """Original and delta-perturbed seed vectors."""
    kind = ModelKind.parse(model)
    v = resolve_values(kind, values)
    if kind is ModelKind.LMG:
        return (lmg_initial_state(y0=v['y0']).as_array(),
                perturbed_lmg_initial_state(delta, y0=v['y0']).as_array())
    mf, om = np_initial_state(v['epsilon'])
    mf_p, om_p = perturbed_initial_state(v['epsilon'], delta)
    if kind is ModelKind.DICKE_MF:
        return mf.as_array(), mf_p.as_array()
    return om.as_array(), om_p.as_array()


def simulate(model, values, integrator, state0=None):
    kind = ModelKind.parse(model)
    params = build_params(kind, values)
    if state0 is None:
        state0, _ = initial_states(kind, values)
    return integrate(kernel_for(kind), state0, integrator, params=params.as_array(),
                     model_id=kind.value, components=components(kind))


def simulate_pair(model, values, integrator, delta=1e-6, perturbed=True):
    """Integrate the seed and, unless ``perturbed=False``, its delta-shifted twin."""
    kind = ModelKind.parse(model)
    params = build_params(kind, values).as_array()
    seed, shifted = initial_states(kind, values, delta)
    kernel = kernel_for(kind)
    names = components(kind)
    original = integrate(kernel, seed, integrator, params=params, model_id=kind.value, components=names)
    if not perturbed:
        return original, None
    twin = integrate(kernel, shifted, integrator, params=params, model_id=kind.value, components=names)
    return original, twin


def order_parameter(samples, model):
    """Order parameter per sample: J_x/N for the Dicke models, X for LMG."""
    kind = ModelKind.parse(model)
    samples = np.atleast_2d(samples)
    if kind is ModelKind.DICKE_MF:
        return 0.5 * samples[:, 2]
    if kind is ModelKind.LMG:
        return samples[:, 0]
    return samples[:, 2]


def jx_over_n(samples, model):
    """J_x/N column written to trajectory files (X/2 for LMG)."""
    kind = ModelKind.parse(model)
    if kind is ModelKind.LMG:
        return 0.5 * np.atleast_2d(samples)[:, 0]
    return order_parameter(samples, kind)


def decorrelator_observables(samples, model):
    """Columns fed to the decorrelator: (J_x/N, 2 Re alpha) or (X, Y)."""
    kind = ModelKind.parse(model)
    samples = np.atleast_2d(samples)
    if kind is ModelKind.LMG:
        return samples[:, 0:2]
    return np.column_stack((order_parameter(samples, kind), 2.0 * samples[:, 0]))


def mean_z(samples, model):
    if ModelKind.parse(model) is not ModelKind.LMG:
        return None
    return float(np.mean(np.atleast_2d(samples)[:, 2]))
