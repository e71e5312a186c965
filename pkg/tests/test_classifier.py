import math

import numpy as np
import pytest

from exceptions import ConfigurationError, InsufficientDataError, TrajectoryMismatchError
from models.dicke import OM_COMPONENTS
from models.models import ModelKind, Trajectory
from models.registry import order_parameter, simulate_pair
from utils.phase_classifier import (
    ClassifierConfig, PhaseKind, amplitude_envelope, classify, decorrelator,
    dominant_response_frequency, spectral_peaks, subharmonic_order,
)

DICKE_DTC = {'kappa': 0.5, 'gprime': 0.9, 'wd': 0.8, 'A': 0.5, 'epsilon': 0.01}
CLOSED_BEATING = {'kappa': 0.0, 'gprime': 0.9, 'wd': 0.6, 'A': 0.1, 'epsilon': 0.01}
LMG_DTC = {'lambda0': 0.8, 'gamma': 0.0, 'Gamma': 0.1, 'A': 0.5, 'wd': 0.85}
CHAOTIC = {'lambda0': 1.1, 'gamma': 0.0, 'Gamma': 0.1, 'A': 0.6, 'wd': 0.55}
LONG_WINDOW = ClassifierConfig(fft_window_periods=40)


def synthetic(order, sample_dt=0.01, diverged=False):
    samples = np.zeros((len(order), 4))
    samples[:, 2] = order
    return Trajectory(samples, 0.0, sample_dt, 1, 'nom', OM_COMPONENTS, diverged=diverged)


def run_label(model, values, integrator, delta=1e-6):
    traj_o, traj_p = simulate_pair(model, values, integrator, delta=delta)
    return classify(traj_o, traj_p, model, values['wd'], drive_amplitude=values['A']), traj_o


@pytest.mark.parametrize('n', [1, 2, 4])
def test_subharmonic_order_of_pure_tone(time_axis, sample_dt, n):
    series = np.sin(time_axis / n)
    freq, order = dominant_response_frequency(series, 1.0, LONG_WINDOW, sample_dt)
    assert order == n
    assert freq == pytest.approx(1.0 / n, rel=0.01)


def test_flat_series_has_no_response(sample_dt):
    assert dominant_response_frequency(np.full(5000, 0.3), 1.0, sample_dt=sample_dt) == (0.0, None)


def test_subharmonic_order_edge_cases():
    assert subharmonic_order(1.0, 0.5) == 2
    assert subharmonic_order(1.0, 0.3) is None
    assert subharmonic_order(0.0, 0.5) is None
    assert subharmonic_order(1.0, 0.0) is None


def test_decorrelator_of_identical_series_is_zero():
    values = np.random.default_rng(3).normal(size=(200, 2))
    assert decorrelator(values, values.copy()) == 0.0


def test_decorrelator_of_constants():
    assert decorrelator(np.ones(50), np.zeros(50)) == 1.0


def test_decorrelator_rejects_mismatch():
    with pytest.raises(TrajectoryMismatchError):
        decorrelator(np.ones(50), np.ones(40))


def test_envelope_of_steady_tone(time_axis):
    envelope, sigma = amplitude_envelope(np.sin(time_axis))
    assert len(envelope) >= 4
    assert sigma < 1e-4


def test_envelope_of_beating_tone(time_axis):
    _, sigma = amplitude_envelope((1.0 + 0.5 * np.sin(0.05 * time_axis)) * np.sin(time_axis))
    assert sigma > 0.1


def test_envelope_needs_four_maxima():
    with pytest.raises(InsufficientDataError):
        amplitude_envelope(np.sin(np.linspace(0.0, 4.0 * math.pi, 1000)))


@pytest.mark.parametrize('kwargs', [{'fft_window_periods': 2}, {'envelope_window': 0.0}, {'d2_threshold': 0.0}])
def test_classifier_config_validation(kwargs):
    with pytest.raises(ConfigurationError):
        ClassifierConfig(**kwargs)


def test_synthetic_period_doubling(time_axis):
    traj = synthetic(0.5 * np.sin(0.5 * time_axis))
    label = classify(traj, None, ModelKind.NOM, 1.0)
    assert label.kind is PhaseKind.DTC_2T
    assert label.order == 2
    assert label.is_dtc
    assert str(label) == 'DTC_2T'


def test_synthetic_higher_order(time_axis):
    label = classify(synthetic(0.5 * np.sin(time_axis / 3.0)), None, ModelKind.NOM, 1.0)
    assert label.kind is PhaseKind.DTC_HO
    assert label.order == 3


def unequal_lobes(t, n):
    """Period-n response with crest 0.18 and trough -0.42, starting from zero."""
    return 0.3 * np.sin(t / n) + 0.06 * (np.cos(2.0 * t / n) - 1.0)


def test_envelope_of_unequal_lobes(time_axis):
    series = unequal_lobes(time_axis, 2)
    assert (series.min(), series.max()) == pytest.approx((-0.42, 0.18), abs=1e-4)
    one_period = 2.0 * math.pi / 0.5 / 0.01
    envelope, sigma = amplitude_envelope(series, min_separation=0.75 * one_period)
    assert len(envelope) >= 4
    assert sigma < 1e-3


@pytest.mark.parametrize('n, kind', [(2, PhaseKind.DTC_2T), (3, PhaseKind.DTC_HO)])
def test_synthetic_unequal_lobes_are_dtc(time_axis, n, kind):
    label = classify(synthetic(unequal_lobes(time_axis, n)), None, ModelKind.NOM, 1.0, LONG_WINDOW)
    assert label.kind is kind
    assert label.order == n
    assert label.diagnostics.sigma_amp < 1e-3


def test_synthetic_beating_is_not_dtc(time_axis):
    series = 0.3 * (1.0 + 0.5 * np.sin(0.05 * time_axis)) * np.sin(0.5 * time_axis)
    label = classify(synthetic(series), None, ModelKind.NOM, 1.0)
    assert label.kind is PhaseKind.OTHER


def test_diverged_trajectory_is_unbounded(time_axis):
    traj = synthetic(0.5 * np.sin(0.5 * time_axis), diverged=True)
    assert classify(traj, None, ModelKind.NOM, 1.0).kind is PhaseKind.UB


def test_large_amplitude_is_unbounded(time_axis):
    assert classify(synthetic(2.0 * np.sin(0.5 * time_axis)), None, ModelKind.NOM, 1.0).kind is PhaseKind.UB


def test_classification_is_repeatable(time_axis):
    traj = synthetic(0.5 * np.sin(0.5 * time_axis))
    first = classify(traj, None, ModelKind.NOM, 1.0)
    second = classify(traj, None, ModelKind.NOM, 1.0)
    assert (first.kind, first.order, first.diagnostics.dominant_freq) == \
        (second.kind, second.order, second.diagnostics.dominant_freq)


def test_label_as_dict(time_axis):
    row = classify(synthetic(0.5 * np.sin(0.5 * time_axis)), None, ModelKind.NOM, 1.0).as_dict()
    assert row['label'] == 'DTC_2T'
    assert row['response_order_n'] == 2
    assert row['max_amp'] == pytest.approx(0.5, abs=1e-6)


def test_undriven_nom_is_normal(short_run):
    label, _ = run_label(ModelKind.NOM, dict(DICKE_DTC, A=0.0), short_run)
    assert label.kind is PhaseKind.NP


def test_undriven_lmg_below_critical_is_normal(short_run):
    label, _ = run_label(ModelKind.LMG, dict(LMG_DTC, A=0.0), short_run)
    assert label.kind is PhaseKind.NP


def test_undriven_lmg_above_critical_is_symmetry_broken(short_run):
    values = {'lambda0': 1.25, 'gamma': 0.0, 'Gamma': 0.03, 'A': 0.0, 'wd': 0.85}
    label, _ = run_label(ModelKind.LMG, values, short_run)
    assert label.kind is PhaseKind.SB
    assert label.diagnostics.mean_z is not None


def test_period_doubled_dicke_fixture(full_run):
    nom, _ = run_label(ModelKind.NOM, DICKE_DTC, full_run)
    assert nom.kind is PhaseKind.DTC_2T
    # one raw bin of the ten-period window
    bin_width = DICKE_DTC['wd'] / 10
    assert abs(nom.diagnostics.dominant_freq - DICKE_DTC['wd'] / 2) < bin_width
    mf, _ = run_label(ModelKind.DICKE_MF, DICKE_DTC, full_run)
    assert mf.kind is PhaseKind.DTC_2T
    lom, _ = run_label(ModelKind.LOM, DICKE_DTC, full_run)
    assert lom.kind is PhaseKind.UB


def test_closed_cavity_beating_fixture(full_run):
    lom, _ = run_label(ModelKind.LOM, CLOSED_BEATING, full_run)
    assert lom.kind is PhaseKind.UB
    for model in (ModelKind.NOM, ModelKind.DICKE_MF):
        label, _ = run_label(model, CLOSED_BEATING, full_run)
        assert label.kind not in (PhaseKind.UB, PhaseKind.DTC_2T, PhaseKind.DTC_HO)


def test_lmg_period_doubling_fixture(full_run):
    label, traj = run_label(ModelKind.LMG, LMG_DTC, full_run)
    assert label.kind is PhaseKind.DTC_2T
    half = LMG_DTC['wd'] / 2
    bin_width = LMG_DTC['wd'] / 10
    assert abs(label.diagnostics.dominant_freq - half) < bin_width
    order = order_parameter(traj.samples, ModelKind.LMG)
    peaks = spectral_peaks(order, LMG_DTC['wd'], sample_dt=traj.sample_dt)
    main = max(peaks, key=lambda peak: peak[1])
    assert abs(main[0] - half) < bin_width
    for freq, _ in peaks:
        multiple = freq / half
        assert abs(multiple - round(multiple)) < 0.15
        assert round(multiple) % 2 == 1


@pytest.mark.slow
def test_chaotic_lmg_fixture(full_run):
    label, _ = run_label(ModelKind.LMG, CHAOTIC, full_run)
    assert label.kind is PhaseKind.CHAOTIC
    assert label.diagnostics.d2 > 1e-3


@pytest.mark.slow
@pytest.mark.parametrize('model, values', [
    (ModelKind.NOM, DICKE_DTC), (ModelKind.LMG, LMG_DTC), (ModelKind.LMG, CHAOTIC),
])
def test_label_stable_when_perturbation_halves(full_run, model, values):
    full, _ = run_label(model, values, full_run, delta=1e-6)
    half, _ = run_label(model, values, full_run, delta=5e-7)
    assert full.is_dtc == half.is_dtc
    assert (full.kind is PhaseKind.CHAOTIC) == (half.kind is PhaseKind.CHAOTIC)
