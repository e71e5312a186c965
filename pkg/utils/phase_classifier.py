"""Dynamical-phase classifier.

A pair of trajectories (seed and delta-perturbed twin) is reduced to a
``PhaseLabel`` by boundedness thresholds, the decorrelator, amplitude-envelope
statistics and subharmonic Fourier peak detection, applied in that order.
"""
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
import structlog
from scipy import signal

from exceptions import ConfigurationError, InsufficientDataError, TrajectoryMismatchError
from models.models import ModelKind
from models.registry import decorrelator_observables, mean_z, order_parameter
from utils.helpers import evenly_spaced, tail_start

logger = structlog.get_logger(__name__)


class PhaseKind(str, Enum):
    NP = 'NP'
    SB = 'SB'
    UB = 'UB'
    DTC_2T = 'DTC_2T'
    DTC_HO = 'DTC_HO'
    NB = 'NB'
    SBB = 'SBB'
    CHAOTIC = 'Chaotic'
    OTHER = 'OtherNonDTC'
    ERROR = 'Error'


@dataclass(frozen=True)
class ClassifierConfig:
    np_threshold: float = 1e-3
    ub_threshold: float = 1.0
    d2_threshold: float = 1e-3
    sigma_amp_threshold: float = 1e-2
    fft_window_periods: int = 10
    delta: float = 1e-6
    envelope_window: float = 0.5
    subharmonic_tolerance: float = 0.05
    # NP allowance relative to the seed amplitude |O(0)|
    np_seed_factor: float = 3.0
    np_growth_ratio: float = 10.0
    sb_ripple: float = 0.05
    nb_tolerance: float = 0.05
    peak_floor: float = 0.05
    zero_padding: int = 8

    def __post_init__(self):
        for name in ('np_threshold', 'ub_threshold', 'd2_threshold', 'sigma_amp_threshold',
                     'delta', 'subharmonic_tolerance', 'np_growth_ratio', 'sb_ripple',
                     'nb_tolerance', 'peak_floor'):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f'{name} must be > 0, got {getattr(self, name)}')
        if self.fft_window_periods < 4:
            raise ConfigurationError(f'fft_window_periods must be >= 4, got {self.fft_window_periods}')
        if not 0 < self.envelope_window <= 1:
            raise ConfigurationError(f'envelope_window must lie in (0, 1], got {self.envelope_window}')
        if self.np_seed_factor < 0 or self.zero_padding < 1:
            raise ConfigurationError('np_seed_factor must be >= 0 and zero_padding >= 1')


@dataclass(frozen=True)
class PhaseDiagnostics:
    max_amp: float = math.nan
    d2: float = math.nan
    sigma_amp: float = math.nan
    response_order_n: Optional[int] = None
    dominant_freq: float = math.nan
    tail_amp: float = math.nan
    mean_z: Optional[float] = None


@dataclass(frozen=True)
class PhaseLabel:
    kind: PhaseKind
    order: Optional[int] = None
    diagnostics: PhaseDiagnostics = field(default_factory=PhaseDiagnostics)

    def __str__(self):
        return self.kind.value

    @property
    def is_dtc(self):
        return self.kind in (PhaseKind.DTC_2T, PhaseKind.DTC_HO)

    def as_dict(self):
        return {'label': self.kind.value, 'order': self.order, **asdict(self.diagnostics)}


def _observable_matrix(data, observables):
    samples = data.samples if hasattr(data, 'samples') else np.asarray(data, dtype=np.float64)
    if observables is not None:
        samples = observables(samples)
    matrix = np.asarray(samples, dtype=np.float64)
    return matrix.reshape(len(matrix), -1)


def decorrelator(traj_o, traj_p, observables=None):
    """Time-averaged squared difference of squared observables.

    The average runs over whatever samples are passed in. ``PhaseClassifier``
    passes only the tail window (the last ``envelope_window`` fraction), not
    the whole run from the first sample, so transients before the tail do
    not count towards d2.

    ``observables`` maps a sample array to an (n, k) observable array; with
    None the inputs are taken as observables already.

    Raises:
        TrajectoryMismatchError: lengths or sampling differ.
    """
    if hasattr(traj_o, 'sample_dt') and hasattr(traj_p, 'sample_dt'):
        if traj_o.sample_dt != traj_p.sample_dt or traj_o.t0 != traj_p.t0:
            raise TrajectoryMismatchError('trajectories are sampled differently')
    first = _observable_matrix(traj_o, observables)
    second = _observable_matrix(traj_p, observables)
    if first.shape != second.shape:
        raise TrajectoryMismatchError(f'observable shapes differ: {first.shape} vs {second.shape}')
    if not len(first):
        raise TrajectoryMismatchError('empty trajectories')
    diff = np.abs(first) ** 2 - np.abs(second) ** 2
    return float(np.mean(np.sum(diff * diff, axis=1)))


def amplitude_envelope(series, config=None, min_separation=None):
    """Signed maxima of the series over the tail window and their relative spread.

    Maxima are measured from the tail mean. With ``min_separation`` set to
    most of a response period only the main crest of each period survives,
    so unequal positive and negative lobes do not read as a fluctuating
    envelope.

    Returns:
        (envelope, sigma_amp) with sigma_amp = std(envelope)/mean(envelope).

    Raises:
        InsufficientDataError: fewer than four maxima in the window.
    """
    config = config or ClassifierConfig()
    values = np.asarray(series, dtype=np.float64)
    tail = values[tail_start(len(values), config.envelope_window):]
    tail = tail - np.mean(tail) if len(tail) else tail
    distance = max(1, int(min_separation)) if min_separation else None
    peaks, _ = signal.find_peaks(tail, distance=distance)
    if len(peaks) < 4:
        raise InsufficientDataError(f'only {len(peaks)} envelope maxima in the tail window')
    envelope = tail[peaks]
    mean = float(np.mean(envelope))
    if mean <= 0:
        return envelope, math.inf
    return envelope, float(np.std(envelope) / mean)


def _fft_window(series, omega_d, sample_dt, config):
    values = np.asarray(series, dtype=np.float64)
    if omega_d and omega_d > 0:
        length = int(round(config.fft_window_periods * 2.0 * math.pi / omega_d / sample_dt))
    else:
        length = len(values) - tail_start(len(values), config.envelope_window)
    length = max(2, min(length, len(values)))
    return values[-length:]


def _spectrum(window, sample_dt, config):
    """Hann-windowed, zero-padded magnitude spectrum in angular frequency."""
    centred = window - np.mean(window)
    tapered = centred * signal.get_window('hann', len(window))
    nfft = 1 << int(math.ceil(math.log2(len(window) * config.zero_padding)))
    magnitude = np.abs(np.fft.rfft(tapered, n=nfft))
    frequencies = 2.0 * math.pi * np.fft.rfftfreq(nfft, d=sample_dt)
    return frequencies, magnitude


def _refine_peak(magnitude, index):
    if index <= 0 or index >= len(magnitude) - 1:
        return float(index)
    a, b, c = np.log(magnitude[index - 1:index + 2] + 1e-300)
    curvature = a - 2.0 * b + c
    if curvature >= 0:
        return float(index)
    return index + 0.5 * (a - c) / curvature


def subharmonic_order(omega_d, freq, tolerance=0.05):
    """n = round(omega_d/freq) when omega_d/freq lies within ``tolerance`` of it"""
    if not (omega_d and omega_d > 0 and freq > 0):
        return None
    ratio = omega_d / freq
    n = int(round(ratio))
    if n >= 1 and abs(ratio - n) < tolerance:
        return n
    return None


def dominant_response_frequency(series, omega_d, config=None, sample_dt=1.0):
    """Peak angular frequency over the last ``fft_window_periods`` drive periods.

    Returns:
        (freq, n): n is the subharmonic order or None; a flat window gives (0.0, None).
    """
    config = config or ClassifierConfig()
    window = _fft_window(series, omega_d, sample_dt, config)
    if np.ptp(window) == 0:
        return 0.0, None
    frequencies, magnitude = _spectrum(window, sample_dt, config)
    if magnitude[1:].max() <= 0:
        return 0.0, None
    index = int(np.argmax(magnitude[1:])) + 1
    freq = _refine_peak(magnitude, index) * (frequencies[1] - frequencies[0])
    return float(freq), subharmonic_order(omega_d, freq, config.subharmonic_tolerance)


def spectral_peaks(series, omega_d, config=None, sample_dt=1.0, floor=None):
    """Spectral peaks above ``floor`` times the highest one, as (freq, relative height)."""
    config = config or ClassifierConfig()
    floor = config.peak_floor if floor is None else floor
    window = _fft_window(series, omega_d, sample_dt, config)
    if np.ptp(window) == 0:
        return []
    frequencies, magnitude = _spectrum(window, sample_dt, config)
    top = magnitude[1:].max()
    if top <= 0:
        return []
    # Hann main lobe spans two raw bins either side
    indices, _ = signal.find_peaks(magnitude, height=floor * top, distance=2 * config.zero_padding)
    step = frequencies[1] - frequencies[0]
    return [(_refine_peak(magnitude, int(i)) * step, float(magnitude[i] / top)) for i in indices if i > 0]


class PhaseClassifier:
    """Decision pipeline from a trajectory pair to a ``PhaseLabel``."""

    def __init__(self, config=None):
        self.config = config or ClassifierConfig()

    def _is_normal(self, order, tail):
        config = self.config
        seed = abs(float(order[0])) if len(order) else 0.0
        limit = max(config.np_threshold, config.np_seed_factor * seed)
        if np.max(np.abs(tail)) > limit:
            return False
        quarter = max(1, len(tail) // 4)
        early = float(np.max(np.abs(tail[:quarter])))
        late = float(np.max(np.abs(tail[-quarter:])))
        # slow exponential growth that has not reached the threshold yet
        return not (late > 0 and late > config.np_growth_ratio * early)

    def _is_static(self, tail):
        centre = float(np.mean(tail))
        ripple = float(np.max(np.abs(tail - centre)))
        return abs(centre) > self.config.np_threshold and ripple <= self.config.sb_ripple * abs(centre)

    def classify(self, traj_o, traj_p, model_kind, omega_d, drive_amplitude=None):
        config = self.config
        kind = ModelKind.parse(model_kind)
        order = order_parameter(traj_o.samples, kind)
        finite = np.isfinite(order).all()
        max_amp = float(np.max(np.abs(order))) if finite else math.inf
        start = tail_start(len(order), config.envelope_window)
        tail = order[start:]
        tail_amp = float(np.max(np.abs(tail))) if finite else math.inf
        centre_z = mean_z(traj_o.samples[start:], kind)
        diverged = traj_o.diverged or (traj_p is not None and traj_p.diverged)

        def label(phase, order_n=None, **extra):
            diagnostics = PhaseDiagnostics(max_amp=max_amp, tail_amp=tail_amp, mean_z=centre_z, **extra)
            logger.debug('phase_labelled', model=kind.value, label=phase.value, n=order_n, max_amp=max_amp)
            return PhaseLabel(phase, order_n, diagnostics)

        if diverged or max_amp > config.ub_threshold:
            return label(PhaseKind.UB)
        if self._is_normal(order, tail):
            return label(PhaseKind.NP)
        if kind is ModelKind.LMG and (drive_amplitude == 0 or self._is_static(tail)):
            return label(PhaseKind.SB)

        d2 = math.nan
        if traj_p is not None:
            observables = lambda samples: decorrelator_observables(samples, kind)  # noqa: E731
            d2 = decorrelator(traj_o.samples[start:], traj_p.samples[start:], observables)
        sample_dt = traj_o.sample_dt
        freq, n = dominant_response_frequency(order, omega_d, config, sample_dt)
        try:
            separation = 0.75 * 2.0 * math.pi / freq / sample_dt if freq > 0 else None
            _, sigma = amplitude_envelope(order, config, separation)
        except InsufficientDataError:
            sigma = math.nan
        stats = dict(d2=d2, sigma_amp=sigma, response_order_n=n, dominant_freq=freq)

        if d2 > config.d2_threshold:
            return label(PhaseKind.CHAOTIC, **stats)
        if sigma <= config.sigma_amp_threshold and n is not None and n >= 2:
            return label(PhaseKind.DTC_2T if n == 2 else PhaseKind.DTC_HO, n, **stats)
        if kind is ModelKind.LMG:
            peaks = spectral_peaks(order, omega_d, config, sample_dt)
            if evenly_spaced([f for f, _ in peaks]):
                beating = PhaseKind.NB if abs(centre_z + 1.0) < config.nb_tolerance else PhaseKind.SBB
                return label(beating, **stats)
        return label(PhaseKind.OTHER, **stats)


def classify(traj_o, traj_p, model_kind, omega_d, config=None, drive_amplitude=None):
    """Label a trajectory pair; ``traj_p`` may be None to skip the chaos test."""
    return PhaseClassifier(config).classify(traj_o, traj_p, model_kind, omega_d, drive_amplitude)
