import os

import click

from commands.options import classifier_options, collect, config_option, echo_report, translate_errors
from config import classifier_config
from exceptions import ConfigurationError
from models.models import ModelKind
from storage.files import perturbed_path, read_trajectory
from utils.helpers import format_float
from utils.phase_classifier import classify


@click.command('classify')
@click.argument('original', type=click.Path(exists=True, dir_okay=False))
@click.argument('perturbed', type=click.Path(exists=True, dir_okay=False), required=False)
@click.option('--wd', type=float, default=None, help='Drive frequency; read from the file when omitted.')
@click.option('--A', 'amplitude', type=float, default=None, help='Drive amplitude; read from the file when omitted.')
@click.option('--single', is_flag=True, help='Ignore the stored perturbed twin and skip the chaos test.')
@classifier_options
@config_option
@translate_errors
def classify_command(original, perturbed, wd, amplitude, single, config_path, **flags):
    """Label stored trajectories (seed and, optionally, its perturbed twin).

    Without PERTURBED the twin written by ``simulate`` next to ORIGINAL is used
    when it exists.
    """
    if perturbed is None and not single and os.path.isfile(perturbed_path(original)):
        perturbed = perturbed_path(original)
    traj_o, params = read_trajectory(original)
    traj_p = read_trajectory(perturbed)[0] if perturbed and not single else None
    kind = ModelKind.parse(traj_o.model_id)
    if wd is None:
        wd = params.get('wd')
    if amplitude is None:
        amplitude = params.get('A')
    if wd is None:
        raise ConfigurationError('drive frequency unknown: pass --wd')

    label = classify(traj_o, traj_p, kind, float(wd), classifier_config(collect(flags, config_path)),
                     drive_amplitude=None if amplitude is None else float(amplitude))
    d = label.diagnostics
    echo_report([
        ('label', label.kind.value),
        ('n', '' if label.order is None else label.order),
        ('max_amp', format_float(d.max_amp)),
        ('d2', format_float(d.d2)),
        ('sigma_amp', format_float(d.sigma_amp)),
        ('dominant_freq', format_float(d.dominant_freq)),
        ('perturbed', perturbed if traj_p is not None else ''),
    ])
