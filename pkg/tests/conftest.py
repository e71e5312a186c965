import os
import sys

import numpy as np
import pytest

# Ensure project root on sys.path so the flat packages import from any cwd
PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from models.models import IntegratorConfig  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long integrations and phase-diagram scans')


@pytest.fixture
def short_run():
    """Integrator settings for quick classifier checks."""
    return IntegratorConfig(dt=1e-3, t_final=400.0, stride=10)


@pytest.fixture
def full_run():
    return IntegratorConfig(dt=1e-3, t_final=1000.0, stride=10)


@pytest.fixture
def sample_dt():
    return 0.01


@pytest.fixture
def time_axis(sample_dt):
    return np.arange(0, 400.0, sample_dt)

