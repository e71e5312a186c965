"""Options shared by the subcommands and the error-to-exit-code mapping.

Every flag defaults to None so that a value from ``--config`` is only
overridden when the flag is given.
"""
import functools
import os

import click
import structlog

from config import Config, classifier_config, integrator_config, model_values, normalize_keys, read_config_file
from exceptions import ConfigurationError, DtcError
from models.models import ModelKind

logger = structlog.get_logger(__name__)

# click lower-cases derived parameter names; these flags keep their case
RENAMED = {'decay': 'Gamma', 'amplitude': 'A'}

MODEL_OPTIONS = [
    click.option('--omega', type=float, default=None, help='Cavity frequency (Dicke models).'),
    click.option('--omega0', type=float, default=None, help='Atomic / spin frequency.'),
    click.option('--kappa', type=float, default=None, help='Cavity decay rate.'),
    click.option('--gprime', type=float, default=None, help='Coupling ratio g0/g_c.'),
    click.option('--epsilon', type=float, default=None, help='Seed displacement from the normal phase.'),
    click.option('--lambda0', type=float, default=None, help='LMG interaction strength.'),
    click.option('--gamma', type=float, default=None, help='LMG anisotropy.'),
    click.option('--Gamma', 'decay', type=float, default=None, help='LMG collective decay rate.'),
    click.option('--y0', type=float, default=None, help='LMG seed Y component.'),
    click.option('--wd', type=float, default=None, help='Angular drive frequency.'),
    click.option('--A', 'amplitude', type=float, default=None, help='Drive amplitude.'),
]

INTEGRATOR_OPTIONS = [
    click.option('--dt', type=float, default=None, help=f'Time step (default {Config.DT}).'),
    click.option('--t-final', type=float, default=None, help=f'End time (default {Config.T_FINAL}).'),
    click.option('--stride', type=int, default=None, help=f'Keep every n-th step (default {Config.STRIDE}).'),
    click.option('--cutoff', type=float, default=None, help='Divergence cutoff on any component.'),
]

CLASSIFIER_OPTIONS = [
    click.option('--np-threshold', type=float, default=None),
    click.option('--ub-threshold', type=float, default=None),
    click.option('--d2-threshold', type=float, default=None),
    click.option('--sigma-threshold', type=float, default=None),
    click.option('--fft-periods', type=int, default=None),
    click.option('--delta', type=float, default=None, help='Offset of the perturbed twin.'),
    click.option('--envelope-window', type=float, default=None),
]

MODEL_CHOICE = click.Choice([kind.value for kind in ModelKind], case_sensitive=False)


def _stack(options):
    def decorator(func):
        for option in reversed(options):
            func = option(func)
        return func
    return decorator


model_options = _stack(MODEL_OPTIONS)
integrator_options = _stack(INTEGRATOR_OPTIONS)
classifier_options = _stack(CLASSIFIER_OPTIONS)
config_option = click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
                             help='key=value settings file; flags override its entries.')


def collect(flags, config_path=None):
    """Merge config-file entries with the given flags (flags win)."""
    merged = read_config_file(config_path) if config_path else {}
    for key, value in flags.items():
        if value is None:
            continue
        merged[RENAMED.get(key, key)] = value
    return normalize_keys(merged)


def settings(flags, config_path=None):
    """(model kind, model values, integrator config, classifier config, merged settings) for one run"""
    merged = collect(flags, config_path)
    if not merged.get('model'):
        raise ConfigurationError('a model is required (--model or model= in the config file)')
    kind = ModelKind.parse(merged['model'])
    return kind, model_values(merged), integrator_config(merged), classifier_config(merged), merged


def default_output(name):
    return os.path.join(Config.OUTPUT_DIR, name)


def translate_errors(func):
    """Map library errors onto click's exit codes: 2 for configuration, 1 otherwise."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConfigurationError as exc:
            logger.debug('configuration_error', error=str(exc))
            raise click.UsageError(str(exc)) from None
        except (DtcError, OSError) as exc:
            logger.error('command_failed', error=str(exc))
            raise click.ClickException(str(exc)) from None
    return wrapper


def echo_report(items, output=None):
    """Print ``key=value`` lines and optionally save them to ``output``."""
    lines = [f'{key}={value}' for key, value in items]
    for line in lines:
        click.echo(line)
    if output:
        parent = os.path.dirname(os.path.abspath(output))
        os.makedirs(parent, exist_ok=True)
        with open(output, 'w') as handle:
            handle.write('\n'.join(lines) + '\n')
