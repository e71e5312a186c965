"""Closed-form reports: resonance layer of the Dicke models and LMG fixed points."""
import click

from commands.options import collect, config_option, echo_report, model_options, translate_errors
from config import model_values
from exceptions import ConfigurationError
from models.dicke import critical_coupling
from models.lmg import lambda_critical, lmg_steady_state, natural_frequency
from models.models import ModelKind
from models.registry import build_params, resolve_values
from utils.helpers import format_float
from utils.spectral import eigenmodes, resonance_prediction

ANALYTIC_MODELS = click.Choice(['dicke', 'lmg'], case_sensitive=False)


def format_complex(value):
    return '%.17g%+.17gj' % (value.real, value.imag)


def dicke_report(values):
    v = resolve_values(ModelKind.NOM, values)
    omega, omega0, kappa, g_ratio = v['omega'], v['omega0'], v['kappa'], v['gprime']
    build_params(ModelKind.NOM, v)
    if omega0 != omega:
        raise ConfigurationError('polariton closed forms need omega0 = omega')
    items = [('g_c', format_float(critical_coupling(omega, omega0, kappa)))]
    spectrum = eigenmodes(omega, kappa, g_ratio)
    prediction = resonance_prediction(omega, kappa, g_ratio)
    items += [
        ('omega_plus', format_complex(spectrum.omega_plus)),
        ('omega_minus', format_complex(spectrum.omega_minus)),
        ('eps_plus_upper', format_complex(spectrum.eps_plus_upper)),
        ('eps_plus_lower', format_complex(spectrum.eps_plus_lower)),
        ('eps_minus_upper', format_complex(spectrum.eps_minus_upper)),
        ('eps_minus_lower', format_complex(spectrum.eps_minus_lower)),
        ('kappa_c_prime', format_float(prediction.kappa_c_prime)),
        ('kappa_c_dprime', format_float(prediction.kappa_c_dprime)),
        ('kappa_plus_prime', format_float(prediction.kappa_plus_prime)),
        ('delta', format_float(prediction.delta)),
        ('omega_r', format_float(prediction.omega_r)),
        ('a_r', format_float(prediction.a_r)),
        ('kappa_max', format_float(prediction.kappa_max)),
        ('omega_large_kappa', format_float(prediction.omega_large_kappa)),
        ('reliable', 'true' if prediction.reliable else 'false'),
    ]
    return items


def steady_state_items(params):
    states = lmg_steady_state(params)
    items = [('normal', 'X=0 Y=0 Z=-1'), ('symmetry_broken', 'true' if states.symmetry_broken else 'false')]
    if states.reason:
        items.append(('reason', states.reason))
    for state in states.branches:
        prefix = 'branch_plus' if state.branch > 0 else 'branch_minus'
        items += [
            (f'{prefix}_X', format_float(state.Xs)),
            (f'{prefix}_Y', format_float(state.Ys)),
            (f'{prefix}_Z', format_float(state.Zs)),
        ]
    if states.branches:
        items.append(('Lambda', format_float(states.branches[0].Lambda)))
    return items


def lmg_report(values):
    params = build_params(ModelKind.LMG, values)
    critical = lambda_critical(params)
    frequency = natural_frequency(params)
    items = [
        ('lambda_c', ';'.join(format_float(root) for root in critical.roots) if critical.real else 'none'),
        ('omega_nat', format_float(frequency.value)),
        ('omega_nat_imaginary', 'true' if frequency.imaginary else 'false'),
        ('resonances', ';'.join(format_float(w) for w in frequency.ladder(4))),
    ]
    return items + steady_state_items(params)


@click.command('analytic')
@click.option('--model', type=ANALYTIC_MODELS, default=None, help='dicke (default) or lmg.')
@model_options
@click.option('--output', type=click.Path(dir_okay=False), default=None, help='Also save the report here.')
@config_option
@translate_errors
def analytic_command(model, output, config_path, **flags):
    """Print the closed-form resonance quantities as key=value lines."""
    merged = collect(flags, config_path)
    if model is None:
        model = 'lmg' if str(merged.get('model', '')).lower() == 'lmg' else 'dicke'
    values = model_values(merged)
    echo_report(lmg_report(values) if model.lower() == 'lmg' else dicke_report(values), output)


@click.command('steady-state')
@model_options
@config_option
@translate_errors
def steady_state_command(config_path, **flags):
    """Fixed points of the open LMG model."""
    values = model_values(collect(flags, config_path))
    echo_report(steady_state_items(build_params(ModelKind.LMG, values)))
