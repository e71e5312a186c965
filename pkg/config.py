import os

from dotenv import dotenv_values, load_dotenv

from exceptions import ConfigurationError
from models.models import IntegratorConfig
from utils.phase_classifier import ClassifierConfig
from utils.sweep import AxisSpec, SweepConfig

basedir = os.path.abspath(os.path.dirname(__file__))
load_dotenv(os.path.join(basedir, '.env'))

VERSION = '0.1.0'


class Config:
    # Integrator defaults
    DT = float(os.environ.get('DTCRES_DT', 1e-3))
    T_FINAL = float(os.environ.get('DTCRES_T_FINAL', 1000.0))
    STRIDE = int(os.environ.get('DTCRES_STRIDE', 10))
    DIVERGENCE_CUTOFF = float(os.environ.get('DTCRES_DIVERGENCE_CUTOFF', 1e6))

    # Classifier thresholds
    NP_THRESHOLD = float(os.environ.get('DTCRES_NP_THRESHOLD', 1e-3))
    UB_THRESHOLD = float(os.environ.get('DTCRES_UB_THRESHOLD', 1.0))
    D2_THRESHOLD = float(os.environ.get('DTCRES_D2_THRESHOLD', 1e-3))
    SIGMA_THRESHOLD = float(os.environ.get('DTCRES_SIGMA_THRESHOLD', 1e-2))
    FFT_PERIODS = int(os.environ.get('DTCRES_FFT_PERIODS', 10))
    DELTA = float(os.environ.get('DTCRES_DELTA', 1e-6))
    ENVELOPE_WINDOW = float(os.environ.get('DTCRES_ENVELOPE_WINDOW', 0.5))

    # Sweep settings
    WORKERS = int(os.environ.get('DTCRES_WORKERS', 1))
    GRID_COUNT = int(os.environ.get('DTCRES_GRID_COUNT', 60))
    OUTPUT_DIR = os.environ.get('DTCRES_OUTPUT_DIR') or os.path.join(basedir, 'results')
    OUTPUT_FORMAT = os.environ.get('DTCRES_OUTPUT_FORMAT', 'csv')

    LOG_LEVEL = os.environ.get('DTCRES_LOG_LEVEL', 'INFO')


INTEGRATOR_KEYS = {'dt', 't_final', 'stride', 'cutoff', 't0'}
CLASSIFIER_KEYS = {
    'np_threshold', 'ub_threshold', 'd2_threshold', 'sigma_threshold',
    'fft_periods', 'delta', 'envelope_window',
}
SWEEP_KEYS = {'model', 'axis1', 'axis2', 'workers', 'output', 'format'}


def normalize_keys(values):
    """Keys with '-' read as '_', case kept; None values are dropped"""
    return {
        str(key).strip().replace('-', '_'): value
        for key, value in (values or {}).items()
        if value is not None
    }


def read_config_file(path):
    """Read a key=value sweep configuration file"""
    if not os.path.isfile(path):
        raise ConfigurationError(f'config file not found: {path}')
    return normalize_keys(dotenv_values(path))


def _number(values, key, default, cast=float):
    raw = values.get(key, default)
    try:
        return cast(raw)
    except (TypeError, ValueError):
        raise ConfigurationError(f'{key} must be a number, got {raw!r}') from None


def integrator_config(values=None):
    values = normalize_keys(values)
    return IntegratorConfig(
        dt=_number(values, 'dt', Config.DT),
        t_final=_number(values, 't_final', Config.T_FINAL),
        stride=_number(values, 'stride', Config.STRIDE, int),
        divergence_cutoff=_number(values, 'cutoff', Config.DIVERGENCE_CUTOFF),
        t0=_number(values, 't0', 0.0),
    )


def classifier_config(values=None):
    values = normalize_keys(values)
    return ClassifierConfig(
        np_threshold=_number(values, 'np_threshold', Config.NP_THRESHOLD),
        ub_threshold=_number(values, 'ub_threshold', Config.UB_THRESHOLD),
        d2_threshold=_number(values, 'd2_threshold', Config.D2_THRESHOLD),
        sigma_amp_threshold=_number(values, 'sigma_threshold', Config.SIGMA_THRESHOLD),
        fft_window_periods=_number(values, 'fft_periods', Config.FFT_PERIODS, int),
        delta=_number(values, 'delta', Config.DELTA),
        envelope_window=_number(values, 'envelope_window', Config.ENVELOPE_WINDOW),
    )


def model_values(values):
    """Model parameters: every key that is not an integrator, classifier or sweep setting"""
    reserved = INTEGRATOR_KEYS | CLASSIFIER_KEYS | SWEEP_KEYS
    return {key: value for key, value in normalize_keys(values).items() if key not in reserved}


def build_sweep_config(file_values=None, overrides=None):
    """
    Assemble a SweepConfig from config-file values and command-line overrides

    Args:
        file_values: mapping read by read_config_file
        overrides: mapping from flags; these win over the file

    Returns:
        SweepConfig
    """
    merged = normalize_keys(file_values)
    merged.update(normalize_keys(overrides))
    for key in ('model', 'axis1', 'axis2'):
        if not merged.get(key):
            raise ConfigurationError(f'sweep needs {key}')
    return SweepConfig(
        model=merged['model'],
        axis1=AxisSpec.parse(merged['axis1']),
        axis2=AxisSpec.parse(merged['axis2']),
        fixed=model_values(merged),
        integrator=integrator_config(merged),
        classifier=classifier_config(merged),
        workers=_number(merged, 'workers', Config.WORKERS, int),
        output=merged.get('output'),
        output_format=str(merged.get('format', Config.OUTPUT_FORMAT)).lower(),
    )
