import click

from commands.options import (
    MODEL_CHOICE, classifier_options, config_option, default_output, echo_report,
    integrator_options, model_options, settings, translate_errors,
)
from models.dicke import max_excitation
from models.registry import resolve_values, simulate_pair
from storage.files import perturbed_path, write_trajectory
from utils.helpers import format_float
from utils.phase_classifier import classify


@click.command('simulate')
@click.option('--model', type=MODEL_CHOICE, default=None, help='dicke_mf, lom, nom or lmg.')
@model_options
@integrator_options
@classifier_options
@config_option
@click.option('--output', type=click.Path(dir_okay=False), default=None, help='Trajectory CSV path.')
@translate_errors
def simulate_command(config_path, **flags):
    """Integrate one parameter point, save the trajectory and print its label."""
    kind, values, integrator, classifier, merged = settings(flags, config_path)
    resolved = resolve_values(kind, values)
    output = merged.get('output') or default_output(f'trajectory_{kind.value}.csv')

    traj_o, traj_p = simulate_pair(kind, resolved, integrator, classifier.delta)
    label = classify(traj_o, traj_p, kind, resolved['wd'], classifier, drive_amplitude=resolved['A'])
    write_trajectory(output, traj_o, params=resolved)
    twin = write_trajectory(perturbed_path(output), traj_p, params=dict(resolved, delta=classifier.delta))

    d = label.diagnostics
    report = [
        ('model', kind.value),
        ('samples', len(traj_o)),
        ('diverged', 'true' if traj_o.diverged else 'false'),
        ('max_amp', format_float(d.max_amp)),
        ('dominant_freq', format_float(d.dominant_freq)),
        ('label', label.kind.value),
    ]
    if label.order is not None:
        report.append(('n', label.order))
    if kind.is_oscillator:
        report.append(('max_beta_sq', format_float(max_excitation(traj_o))))
    report.append(('output', output))
    report.append(('perturbed', twin))
    echo_report(report)
