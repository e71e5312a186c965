"""Parallel phase-diagram sweeps and resonance scans.

Every grid cell is an independent simulate-and-classify job; joblib returns
results in submission order, so the assembled diagram depends only on the
cell index and never on which worker finished first.
"""
import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import structlog
from joblib import Parallel, delayed

from exceptions import ConfigurationError, DtcError
from models.dicke import max_excitation
from models.models import IntegratorConfig, ModelKind
from models.registry import build_params, parameter_names, resolve_values, simulate_pair
from utils.helpers import axis_values, calculate_fraction
from utils.phase_classifier import ClassifierConfig, PhaseKind, PhaseLabel, classify

logger = structlog.get_logger(__name__)

OUTPUT_FORMATS = ('csv', 'npz')


@dataclass(frozen=True)
class AxisSpec:
    name: str
    minimum: float
    maximum: float
    count: int

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 2:
            raise ConfigurationError(f'axis {self.name}: count must be an integer >= 2, got {self.count}')
        if not self.maximum > self.minimum:
            raise ConfigurationError(f'axis {self.name}: max must exceed min')

    @classmethod
    def parse(cls, text):
        """Read ``name:min:max:count``."""
        parts = [part.strip() for part in str(text).split(':')]
        if len(parts) != 4:
            raise ConfigurationError(f'axis spec must be name:min:max:count, got {text!r}')
        try:
            return cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))
        except ValueError:
            raise ConfigurationError(f'axis spec has non-numeric bounds: {text!r}') from None

    @property
    def values(self):
        return axis_values(self.minimum, self.maximum, self.count)

    @property
    def step(self):
        return (self.maximum - self.minimum) / (self.count - 1)

    def __str__(self):
        return f'{self.name}:{self.minimum!r}:{self.maximum!r}:{self.count}'


@dataclass(frozen=True)
class SweepConfig:
    model: ModelKind
    axis1: AxisSpec
    axis2: AxisSpec
    fixed: Dict[str, float] = field(default_factory=dict)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)
    workers: int = 1
    output: Optional[str] = None
    output_format: str = 'csv'

    def __post_init__(self):
        object.__setattr__(self, 'model', ModelKind.parse(self.model))
        names = parameter_names(self.model)
        for axis in (self.axis1, self.axis2):
            if axis.name not in names:
                raise ConfigurationError(f'axis {axis.name!r} is not a {self.model.value} parameter')
        if self.axis1.name == self.axis2.name:
            raise ConfigurationError('axis1 and axis2 must name different parameters')
        resolve_values(self.model, self.fixed)
        object.__setattr__(self, 'fixed', {key: float(value) for key, value in self.fixed.items()})
        if self.workers == 0 or self.workers < -1:
            raise ConfigurationError(f'workers must be >= 1 or -1, got {self.workers}')
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigurationError(f'output format must be one of {OUTPUT_FORMATS}')
        # reject grids whose corners leave the model's validity region
        for first in (self.axis1.minimum, self.axis1.maximum):
            for second in (self.axis2.minimum, self.axis2.maximum):
                build_params(self.model, self.cell_values(first, second))

    def cell_values(self, first, second):
        values = dict(self.fixed)
        values[self.axis1.name] = float(first)
        values[self.axis2.name] = float(second)
        return resolve_values(self.model, values)

    def grid(self):
        """Cells in row-major order: (index, axis1 value, axis2 value)."""
        cells = []
        for first in self.axis1.values:
            for second in self.axis2.values:
                cells.append((len(cells), float(first), float(second)))
        return cells

    def echo(self):
        """Plain dictionary of every setting, used for sidecars and reruns."""
        return {
            'model': self.model.value,
            'axis1': str(self.axis1),
            'axis2': str(self.axis2),
            'fixed': dict(sorted(self.fixed.items())),
            'integrator': {
                'dt': self.integrator.dt, 't_final': self.integrator.t_final,
                'stride': self.integrator.stride, 'cutoff': self.integrator.divergence_cutoff,
                't0': self.integrator.t0,
            },
            'classifier': {
                'np_threshold': self.classifier.np_threshold,
                'ub_threshold': self.classifier.ub_threshold,
                'd2_threshold': self.classifier.d2_threshold,
                'sigma_threshold': self.classifier.sigma_amp_threshold,
                'fft_periods': self.classifier.fft_window_periods,
                'delta': self.classifier.delta,
                'envelope_window': self.classifier.envelope_window,
            },
            'workers': self.workers,
            'output': self.output,
            'format': self.output_format,
        }

    @classmethod
    def from_echo(cls, echo):
        """Inverse of ``echo``."""
        try:
            integrator = echo['integrator']
            classifier = echo['classifier']
            return cls(
                model=echo['model'],
                axis1=AxisSpec.parse(echo['axis1']),
                axis2=AxisSpec.parse(echo['axis2']),
                fixed=dict(echo.get('fixed') or {}),
                integrator=IntegratorConfig(
                    dt=integrator['dt'], t_final=integrator['t_final'], stride=integrator['stride'],
                    divergence_cutoff=integrator['cutoff'], t0=integrator.get('t0', 0.0),
                ),
                classifier=ClassifierConfig(
                    np_threshold=classifier['np_threshold'], ub_threshold=classifier['ub_threshold'],
                    d2_threshold=classifier['d2_threshold'],
                    sigma_amp_threshold=classifier['sigma_threshold'],
                    fft_window_periods=classifier['fft_periods'], delta=classifier['delta'],
                    envelope_window=classifier['envelope_window'],
                ),
                workers=echo.get('workers', 1),
                output=echo.get('output'),
                output_format=echo.get('format', 'csv'),
            )
        except (KeyError, TypeError) as exc:
            raise ConfigurationError(f'incomplete sweep settings: missing {exc}') from None


@dataclass(frozen=True)
class CellResult:
    index: int
    axis1: float
    axis2: float
    label: PhaseLabel
    error: Optional[str] = None


@dataclass(frozen=True)
class PhaseDiagram:
    config: SweepConfig
    cells: Tuple[CellResult, ...]
    wall_time: float = 0.0

    def label_grid(self):
        shape = (self.config.axis1.count, self.config.axis2.count)
        return np.array([cell.label.kind.value for cell in self.cells], dtype=object).reshape(shape)

    def errors(self):
        return {cell.index: cell.error for cell in self.cells if cell.error}


def evaluate_cell(model, values, integrator, classifier):
    """Simulate seed and twin at one parameter point and classify the pair.

    Returns:
        (PhaseLabel, error message or None); failures become ``Error`` labels.
    """
    try:
        traj_o, traj_p = simulate_pair(model, values, integrator, classifier.delta)
        label = classify(traj_o, traj_p, model, values['wd'], classifier, drive_amplitude=values['A'])
        return label, None
    except (DtcError, ArithmeticError, ValueError) as exc:
        logger.warning('cell_failed', model=str(model), error=str(exc))
        return PhaseLabel(PhaseKind.ERROR), str(exc)


def run_sweep(config):
    """Evaluate every grid cell of ``config`` and assemble a PhaseDiagram."""
    grid = config.grid()
    logger.info('sweep_started', model=config.model.value, cells=len(grid), workers=config.workers)
    started = time.perf_counter()
    outcomes = Parallel(n_jobs=config.workers)(
        delayed(evaluate_cell)(config.model, config.cell_values(first, second),
                               config.integrator, config.classifier)
        for _, first, second in grid
    )
    cells = tuple(
        CellResult(index, first, second, label, error)
        for (index, first, second), (label, error) in zip(grid, outcomes)
    )
    wall_time = time.perf_counter() - started
    logger.info('sweep_finished', cells=len(cells), errors=sum(1 for c in cells if c.error), seconds=round(wall_time, 3))
    return PhaseDiagram(config, cells, wall_time)


def area_ratio(diagram, label):
    """Fraction of cells carrying ``label``."""
    if not diagram.cells:
        raise ConfigurationError('area ratio of an empty diagram')
    wanted = label.value if isinstance(label, PhaseKind) else str(label)
    hits = sum(1 for cell in diagram.cells if cell.label.kind.value == wanted)
    return calculate_fraction(hits, len(diagram.cells))


def _unstable(model, values, amplitude, integrator, classifier):
    point = dict(values, A=float(amplitude))
    traj, _ = simulate_pair(model, point, integrator, classifier.delta, perturbed=False)
    return classify(traj, None, model, point['wd'], classifier, drive_amplitude=point['A']).kind is not PhaseKind.NP


def instability_threshold(model, values, a_max=1.0, tolerance=1e-3, integrator=None, classifier=None):
    """Smallest drive amplitude (to ``tolerance``) whose label is not NP; inf if none up to a_max."""
    integrator = integrator or IntegratorConfig()
    classifier = classifier or ClassifierConfig()
    if not _unstable(model, values, a_max, integrator, classifier):
        return math.inf
    low, high = 0.0, float(a_max)
    while high - low > tolerance:
        middle = 0.5 * (low + high)
        if _unstable(model, values, middle, integrator, classifier):
            high = middle
        else:
            low = middle
    return high


@dataclass(frozen=True)
class LobeScan:
    wd_values: Tuple[float, ...]
    thresholds: Tuple[float, ...]
    tip_wd: Optional[float]
    tip_amplitude: float


def lobe_tip(model, values, wd_values, a_max=1.0, tolerance=1e-3, integrator=None,
             classifier=None, workers=1):
    """Minimum-amplitude instability point across a drive-frequency scan.

    Columns whose thresholds tie with the minimum (within ``tolerance``)
    are resolved to the middle one.
    """
    kind = ModelKind.parse(model)
    base = resolve_values(kind, values)
    wd_values = [float(w) for w in wd_values]
    thresholds = Parallel(n_jobs=workers)(
        delayed(instability_threshold)(kind, dict(base, wd=wd), a_max, tolerance, integrator, classifier)
        for wd in wd_values
    )
    finite = [t for t in thresholds if math.isfinite(t)]
    if not finite:
        return LobeScan(tuple(wd_values), tuple(thresholds), None, math.inf)
    lowest = min(finite)
    ties = [i for i, t in enumerate(thresholds) if t <= lowest + tolerance]
    tip = ties[len(ties) // 2]
    return LobeScan(tuple(wd_values), tuple(thresholds), wd_values[tip], lowest)


def _excitation(values, integrator):
    traj, _ = simulate_pair(ModelKind.NOM, values, integrator, perturbed=False)
    return max_excitation(traj)


def excitation_profile(values, amplitudes, integrator=None, workers=1):
    """Largest |beta|^2 of the NOM for each drive amplitude."""
    integrator = integrator or IntegratorConfig()
    base = resolve_values(ModelKind.NOM, values)
    return list(Parallel(n_jobs=workers)(
        delayed(_excitation)(dict(base, A=float(a)), integrator) for a in amplitudes
    ))


def summarize(diagram) -> List[Tuple[str, float]]:
    """Area ratio of every label present, most frequent first."""
    kinds = sorted({cell.label.kind.value for cell in diagram.cells})
    ratios = [(kind, area_ratio(diagram, kind)) for kind in kinds]
    return sorted(ratios, key=lambda item: (-item[1], item[0]))
