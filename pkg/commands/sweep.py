import click

from commands.options import (
    MODEL_CHOICE, RENAMED, classifier_options, config_option, default_output, echo_report,
    integrator_options, model_options, translate_errors,
)
from config import build_sweep_config, read_config_file
from storage.files import write_diagram
from utils.helpers import format_float
from utils.sweep import run_sweep, summarize


@click.command('sweep')
@click.option('--model', type=MODEL_CHOICE, default=None)
@click.option('--axis1', default=None, help='name:min:max:count (rows).')
@click.option('--axis2', default=None, help='name:min:max:count (columns).')
@model_options
@integrator_options
@classifier_options
@click.option('--workers', type=int, default=None, help='Parallel workers (-1 for all cores).')
@click.option('--output', type=click.Path(dir_okay=False), default=None)
@click.option('--format', 'output_format', type=click.Choice(['csv', 'npz']), default=None)
@config_option
@translate_errors
def sweep_command(config_path, output_format, **flags):
    """Classify every point of a two-parameter grid and save the phase diagram."""
    file_values = read_config_file(config_path) if config_path else {}
    overrides = {RENAMED.get(key, key): value for key, value in flags.items()}
    overrides['format'] = output_format
    config = build_sweep_config(file_values, overrides)

    diagram = run_sweep(config)
    output = config.output or default_output(f'diagram_{config.model.value}.{config.output_format}')
    write_diagram(output, diagram, config.output_format)

    report = [('cells', len(diagram.cells)), ('errors', len(diagram.errors()))]
    report.extend((f'area_{kind}', format_float(ratio)) for kind, ratio in summarize(diagram))
    report.append(('output', output))
    echo_report(report)
