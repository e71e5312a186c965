import math

import numpy as np
import pytest

import utils.sweep as sweep
from config import Config, build_sweep_config
from exceptions import ConfigurationError
from models.lmg import lambda_critical
from models.models import IntegratorConfig, LmgParams, ModelKind
from models.registry import resolve_values
from utils.helpers import detect_boundary
from utils.phase_classifier import ClassifierConfig, PhaseKind, PhaseLabel
from utils.spectral import resonance_prediction
from utils.sweep import (
    AxisSpec, CellResult, PhaseDiagram, SweepConfig, area_ratio, evaluate_cell, excitation_profile,
    instability_threshold, lobe_tip, run_sweep, summarize,
)

QUICK = IntegratorConfig(dt=1e-2, t_final=100.0, stride=1)
SCAN = IntegratorConfig(dt=1e-2, t_final=1000.0, stride=10)


def tiny_config(**kwargs):
    settings = dict(
        model='lom', axis1=AxisSpec.parse('wd:0.6:0.8:2'), axis2=AxisSpec.parse('A:0:0.5:2'),
        fixed={'kappa': 0.5}, integrator=QUICK,
    )
    settings.update(kwargs)
    return SweepConfig(**settings)


def diagram_of(kinds):
    config = tiny_config()
    cells = tuple(CellResult(i, 0.0, 0.0, PhaseLabel(PhaseKind(kind))) for i, kind in enumerate(kinds))
    return PhaseDiagram(config, cells)


def test_axis_spec_parse():
    axis = AxisSpec.parse('wd:0.2:2.0:60')
    assert (axis.name, axis.minimum, axis.maximum, axis.count) == ('wd', 0.2, 2.0, 60)
    assert axis.values[0] == 0.2 and axis.values[-1] == 2.0
    assert axis.step == pytest.approx(1.8 / 59)
    assert str(axis) == 'wd:0.2:2.0:60'


@pytest.mark.parametrize('text', ['wd:1:0:5', 'wd:0:1:1', 'wd:0:1', 'wd:a:1:5'])
def test_axis_spec_rejects(text):
    with pytest.raises(ConfigurationError):
        AxisSpec.parse(text)


@pytest.mark.parametrize('kwargs', [
    {'axis1': AxisSpec.parse('lambda0:0:1:3')},
    {'axis2': AxisSpec.parse('wd:0:1:3')},
    {'workers': 0},
    {'output_format': 'xlsx'},
    {'fixed': {'bogus': 1.0}},
    {'model': 'lmg', 'axis1': AxisSpec.parse('gamma:-1.5:1:3'), 'fixed': {}},
])
def test_sweep_config_validation(kwargs):
    with pytest.raises(ConfigurationError):
        tiny_config(**kwargs)


def test_sweep_config_grid_is_row_major():
    grid = tiny_config().grid()
    assert [(first, second) for _, first, second in grid] == [(0.6, 0.0), (0.6, 0.5), (0.8, 0.0), (0.8, 0.5)]
    assert [index for index, _, _ in grid] == [0, 1, 2, 3]


def test_sweep_config_echo_round_trip():
    config = tiny_config(output='out.csv', workers=2)
    assert SweepConfig.from_echo(config.echo()) == config


def test_sweep_config_from_incomplete_echo():
    with pytest.raises(ConfigurationError):
        SweepConfig.from_echo({'model': 'lom'})


def test_sweep_matches_individual_cells():
    config = tiny_config()
    diagram = run_sweep(config)
    assert len(diagram.cells) == 4
    for cell in diagram.cells:
        label, error = evaluate_cell(config.model, config.cell_values(cell.axis1, cell.axis2),
                                     config.integrator, config.classifier)
        assert error is None
        assert (cell.label.kind, cell.label.order) == (label.kind, label.order)
        assert cell.label.diagnostics.max_amp == label.diagnostics.max_amp


def test_sweep_independent_of_worker_count():
    serial = run_sweep(tiny_config(workers=1))
    parallel = run_sweep(tiny_config(workers=2))
    np.testing.assert_array_equal(serial.label_grid(), parallel.label_grid())
    assert [c.label.diagnostics.max_amp for c in serial.cells] == \
        [c.label.diagnostics.max_amp for c in parallel.cells]


def test_failed_cell_becomes_error_label():
    values = dict(resolve_values(ModelKind.LMG), gamma=2.0)
    label, error = evaluate_cell(ModelKind.LMG, values, QUICK, ClassifierConfig())
    assert label.kind is PhaseKind.ERROR
    assert 'gamma' in error


def test_area_ratio_and_summary():
    diagram = diagram_of(['NP', 'NP', 'NP', 'DTC_2T'])
    assert area_ratio(diagram, PhaseKind.NP) == 0.75
    assert area_ratio(diagram, 'UB') == 0.0
    assert summarize(diagram) == [('NP', 0.75), ('DTC_2T', 0.25)]
    assert diagram.label_grid().shape == (2, 2)


def test_area_ratio_of_empty_diagram():
    with pytest.raises(ConfigurationError):
        area_ratio(PhaseDiagram(tiny_config(), ()), 'NP')


def test_instability_threshold_bisects(monkeypatch):
    monkeypatch.setattr(sweep, '_unstable', lambda model, values, amplitude, integrator, classifier: amplitude >= 0.37)
    threshold = instability_threshold(ModelKind.NOM, {}, tolerance=1e-3)
    assert 0.37 <= threshold <= 0.37 + 1e-3


def test_instability_threshold_stable_everywhere(monkeypatch):
    monkeypatch.setattr(sweep, '_unstable', lambda *args: False)
    assert instability_threshold(ModelKind.NOM, {}) == math.inf


def test_lobe_tip_resolves_ties_to_middle(monkeypatch):
    table = {0.5: 0.3, 0.6: 0.1, 0.7: 0.1005, 0.8: 0.1, 0.9: math.inf}
    monkeypatch.setattr(sweep, 'instability_threshold', lambda kind, values, *args: table[values['wd']])
    scan = lobe_tip(ModelKind.NOM, {}, list(table))
    assert scan.tip_wd == 0.7
    assert scan.tip_amplitude == 0.1
    assert scan.thresholds[-1] == math.inf


def test_lobe_tip_without_instability(monkeypatch):
    monkeypatch.setattr(sweep, 'instability_threshold', lambda *args: math.inf)
    scan = lobe_tip(ModelKind.NOM, {}, [0.5, 0.6])
    assert scan.tip_wd is None
    assert scan.tip_amplitude == math.inf


def test_build_sweep_config_precedence():
    file_values = {'model': 'lom', 'axis1': 'wd:0.2:2:3', 'axis2': 'A:0:1:3', 'kappa': '0.3', 'dt': '0.01'}
    config = build_sweep_config(file_values, {'kappa': 0.7, 'workers': None})
    assert config.fixed == {'kappa': 0.7}
    assert config.integrator.dt == 0.01
    assert config.integrator.t_final == Config.T_FINAL
    assert config.workers == Config.WORKERS


def test_build_sweep_config_keeps_parameter_case():
    file_values = {'model': 'lmg', 'axis1': 'lambda0:0.5:1.5:3', 'axis2': 'A:0:1:3', 'Gamma': '0.2', 'gamma': '0.5'}
    config = build_sweep_config(file_values)
    assert config.fixed == {'Gamma': 0.2, 'gamma': 0.5}


def test_build_sweep_config_needs_axes():
    with pytest.raises(ConfigurationError):
        build_sweep_config({'model': 'lom', 'axis1': 'wd:0.2:2:3'})


def test_isotropic_lmg_has_no_instability():
    config = SweepConfig(
        model='lmg', axis1=AxisSpec.parse('wd:0.125:2.5:20'), axis2=AxisSpec.parse('A:0:1:20'),
        fixed={'gamma': 1.0}, integrator=IntegratorConfig(dt=1e-2, t_final=200.0, stride=1),
    )
    assert area_ratio(run_sweep(config), PhaseKind.NP) == 1.0


@pytest.mark.slow
@pytest.mark.parametrize('kappa', [0.05, 0.1])
def test_lobe_tip_tracks_lower_polariton(kappa):
    values = {'kappa': kappa, 'gprime': 0.9}
    wd_values = np.linspace(0.4, 1.0, 60)
    scan = lobe_tip(ModelKind.NOM, values, wd_values, integrator=SCAN, workers=-1)
    expected = resonance_prediction(1.0, kappa, 0.9).omega_r
    assert abs(scan.tip_wd - expected) <= wd_values[1] - wd_values[0]


@pytest.mark.slow
def test_lobe_tip_in_bad_cavity_limit():
    wd_values = np.linspace(0.5, 1.2, 60)
    scan = lobe_tip(ModelKind.NOM, {'kappa': 20.0, 'gprime': 0.9}, wd_values, integrator=SCAN, workers=-1)
    expected = resonance_prediction(1.0, 20.0, 0.9).omega_large_kappa
    assert abs(scan.tip_wd - expected) <= wd_values[1] - wd_values[0]


@pytest.mark.slow
def test_minimum_resonant_amplitude_trend():
    wd_values = np.linspace(0.2, 1.6, 60)
    measured = {}
    for kappa in (0.5, 1.0, 2.0):
        scan = lobe_tip(ModelKind.NOM, {'kappa': kappa, 'gprime': 0.9}, wd_values, integrator=SCAN, workers=-1)
        measured[kappa] = scan.tip_amplitude
        predicted = resonance_prediction(1.0, kappa, 0.9).a_r
        assert measured[kappa] == pytest.approx(predicted, rel=0.25)
    assert max(measured, key=measured.get) == 1.0


@pytest.mark.slow
@pytest.mark.parametrize('gamma', [-1.0, -0.5, 0.0, 0.5])
@pytest.mark.parametrize('decay', [0.0, 0.05, 0.2])
def test_lmg_critical_line(gamma, decay):
    lambdas = np.linspace(0.0, 2.0, 200)
    classifier = ClassifierConfig()
    labels = []
    for lam in lambdas:
        values = resolve_values(ModelKind.LMG, {'lambda0': lam, 'gamma': gamma, 'Gamma': decay, 'A': 0.0})
        labels.append(evaluate_cell(ModelKind.LMG, values, SCAN, classifier)[0])
    boundary = detect_boundary(lambdas, labels)
    roots = lambda_critical(LmgParams(gamma=gamma, Gamma=decay)).roots
    expected = min(root for root in roots if 0 < root <= 2.0)
    assert abs(boundary - expected) <= lambdas[1] - lambdas[0]


@pytest.mark.slow
def test_nom_excitation_profile_below_one():
    profile = excitation_profile({'kappa': 0.5, 'gprime': 0.9, 'wd': 0.8}, np.linspace(0.0, 1.0, 11),
                                 integrator=IntegratorConfig(dt=1e-3, t_final=1000.0, stride=10), workers=-1)
    assert len(profile) == 11
    assert max(profile) < 1.0
