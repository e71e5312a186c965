import click

from config import VERSION, Config

# logging is configured on import of extensions.py
from extensions import configure_logging


def create_cli():
    @click.group(name='dtcres')
    @click.version_option(VERSION, prog_name='dtcres')
    @click.option('--verbose', is_flag=True, help='Log at DEBUG level.')
    def cli(verbose):
        """Parametric-resonance time crystals: simulate, classify, sweep."""
        configure_logging('DEBUG' if verbose else Config.LOG_LEVEL)

    # commands import config; register them after the group exists
    from commands.analysis import analytic_command, steady_state_command
    from commands.classify import classify_command
    from commands.simulate import simulate_command
    from commands.sweep import sweep_command

    cli.add_command(simulate_command)
    cli.add_command(sweep_command)
    cli.add_command(classify_command)
    cli.add_command(steady_state_command)
    cli.add_command(analytic_command)
    return cli


cli = create_cli()


if __name__ == '__main__':
    cli()
