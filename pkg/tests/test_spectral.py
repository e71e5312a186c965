import math

import numpy as np
import pytest

from exceptions import ConfigurationError, PoleError
from models.dicke import critical_coupling
from utils.spectral import (
    drive_amp_scaling, eigen_oracle, eigenmode_scan, eigenmodes, kappa_critical, lom_jacobian,
    oracle_polariton_frequencies, polariton_frequencies, resonance_prediction,
)

G_RATIO = 0.9


def test_closed_polaritons():
    plus, minus = polariton_frequencies(1.0, 0.0, G_RATIO)
    assert plus == pytest.approx(1.378405, abs=1e-6)
    assert minus == pytest.approx(0.316228, abs=1e-6)
    assert plus.imag == 0 and minus.imag == 0


def test_lower_polariton_softens_with_dissipation():
    _, minus = polariton_frequencies(1.0, 0.5, G_RATIO)
    assert minus.real == pytest.approx(0.25355, abs=1e-5)


def test_polaritons_reject_negative_dissipation():
    with pytest.raises(ConfigurationError):
        polariton_frequencies(1.0, -0.1, G_RATIO)


def test_eigenmodes_share_decay_rate_when_underdamped():
    spectrum = eigenmodes(1.0, 0.5, G_RATIO)
    for mode in spectrum.modes:
        assert mode.real == pytest.approx(-0.25, abs=1e-12)
    assert spectrum.eps_minus_upper.imag == pytest.approx(-spectrum.eps_minus_lower.imag)


def test_large_dissipation_upper_mode_approaches_asymptote():
    spectrum = eigenmodes(1.0, 20.0, G_RATIO)
    upper = spectrum.eps_minus_upper
    assert abs(upper.real) < 1.0 / 20.0
    assert upper.imag == pytest.approx(0.43532, abs=1e-4)
    assert upper.imag == pytest.approx(spectrum.upper_asymptote.imag, abs=1e-2)
    assert spectrum.upper_asymptote.imag == pytest.approx(0.435890, abs=1e-6)
    assert spectrum.eps_minus_lower.real == pytest.approx(spectrum.lower_asymptote.real, abs=0.1)


@pytest.mark.parametrize('g_ratio', np.linspace(0.02, 0.99, 50))
def test_closed_form_matches_oracle(g_ratio):
    critical = kappa_critical(1.0, g_ratio)
    singular = [k for k in (critical.kappa_c_prime, critical.kappa_c_dprime, critical.kappa_plus_prime) if k]
    for kappa in np.linspace(0.0, 5.0, 50):
        if any(abs(kappa - k) < 1e-6 for k in singular):
            continue
        closed = polariton_frequencies(1.0, kappa, g_ratio)
        oracle = oracle_polariton_frequencies(1.0, kappa, g_ratio)
        assert abs(closed[0] - oracle[0]) < 1e-8
        assert abs(closed[1] - oracle[1]) < 1e-8


@pytest.mark.parametrize('g_ratio', [0.3, 0.8, 0.9, 0.95])
@pytest.mark.parametrize('offset', [-1e-4, -2e-6, 2e-6, 1e-4])
def test_closed_form_matches_oracle_next_to_branch_points(g_ratio, offset):
    critical = kappa_critical(1.0, g_ratio)
    branch_points = [k for k in (critical.kappa_c_prime, critical.kappa_c_dprime, critical.kappa_plus_prime)
                     if k and math.isfinite(k)]
    assert branch_points
    for point in branch_points:
        kappa = point + offset
        closed = polariton_frequencies(1.0, kappa, g_ratio)
        oracle = oracle_polariton_frequencies(1.0, kappa, g_ratio)
        for a, b in zip(closed, oracle):
            assert abs(a - b) <= 1e-8 * max(1.0, abs(a))


def test_oracle_returns_conjugate_pairs():
    plus_up, plus_down, minus_up, minus_down = eigen_oracle(1.0, 0.0, G_RATIO)
    assert plus_up == pytest.approx(-plus_down)
    assert minus_up == pytest.approx(-minus_down)


def test_kappa_critical_for_strong_coupling():
    critical = kappa_critical(1.0, G_RATIO)
    assert critical.kappa_c_prime == pytest.approx(0.846388, abs=1e-5)
    assert critical.kappa_c_dprime == pytest.approx(2.064742, abs=1e-5)
    assert critical.kappa_plus_prime == pytest.approx(2.060008, abs=1e-5)


def test_kappa_critical_without_overdamped_window():
    critical = kappa_critical(1.0, 0.8)
    assert critical.kappa_c_prime is None
    assert critical.kappa_c_dprime == pytest.approx(4.0 / 3.0)
    assert not critical.in_overdamped_window(1.0)


def test_kappa_critical_at_critical_coupling():
    critical = kappa_critical(1.0, 1.0)
    assert critical.kappa_c_prime == 0.0
    assert critical.kappa_c_dprime == math.inf


@pytest.mark.parametrize('g_ratio', [0.0, 1.2])
def test_kappa_critical_rejects_ratio(g_ratio):
    with pytest.raises(ConfigurationError):
        kappa_critical(1.0, g_ratio)


def test_lower_polariton_overdamped_inside_window():
    critical = kappa_critical(1.0, G_RATIO)
    for kappa in np.linspace(critical.kappa_c_prime + 0.01, critical.kappa_c_dprime - 0.01, 20):
        _, minus = polariton_frequencies(1.0, kappa, G_RATIO)
        assert minus.real == 0.0
        assert critical.in_overdamped_window(kappa)
    for kappa in (0.5, 3.0):
        _, minus = polariton_frequencies(1.0, kappa, G_RATIO)
        assert minus.real > 0.0


def test_drive_amp_scaling_values():
    assert drive_amp_scaling(1.0, 0.0, G_RATIO) == 1.0
    assert drive_amp_scaling(1.0, 0.5, G_RATIO) == pytest.approx(1.327869, abs=1e-6)


def test_drive_amp_scaling_pole():
    pole = kappa_critical(1.0, G_RATIO).kappa_c_dprime
    with pytest.raises(PoleError):
        drive_amp_scaling(1.0, pole, G_RATIO)
    assert resonance_prediction(1.0, pole, G_RATIO).delta is None


def test_resonance_prediction_closed_cavity():
    prediction = resonance_prediction(1.0, 0.0, G_RATIO)
    assert prediction.omega_r == pytest.approx(0.632456, abs=1e-6)
    assert prediction.a_r == 0.0
    assert prediction.kappa_max == 1.0
    assert prediction.omega_large_kappa == pytest.approx(0.871780, abs=1e-6)
    assert prediction.reliable


def test_resonance_prediction_peak_amplitude():
    prediction = resonance_prediction(1.0, 1.0, G_RATIO)
    assert prediction.a_r == pytest.approx(0.435890, abs=1e-6)
    assert not prediction.reliable


@pytest.mark.parametrize('kappa', [0.1, 0.4, 0.75, 2.5, 7.0])
def test_resonant_amplitude_symmetric_under_inversion(kappa):
    forward = resonance_prediction(1.0, kappa, G_RATIO).a_r
    inverse = resonance_prediction(1.0, 1.0 / kappa, G_RATIO).a_r
    assert forward == pytest.approx(inverse, rel=1e-12)


@pytest.mark.parametrize('kappa', [0.0, 0.5, 1.5, 3.0])
def test_lom_jacobian_spectrum_matches_eigenmodes(kappa):
    g0 = G_RATIO * critical_coupling(1.0, 1.0, kappa)
    numeric = np.linalg.eigvals(lom_jacobian(1.0, 1.0, kappa, g0))
    for mode in eigenmodes(1.0, kappa, G_RATIO).modes:
        assert np.min(np.abs(numeric - mode)) < 1e-9


def test_eigenmode_scan_rows():
    rows = eigenmode_scan(1.0, G_RATIO, [0.0, 0.5, 1.0])
    assert [row[0] for row in rows] == [0.0, 0.5, 1.0]
    assert all(len(row) == 5 for row in rows)
    assert rows[1][1:] == eigenmodes(1.0, 0.5, G_RATIO).modes
