"""
Shared fixtures for the ring-cavity test suite.
"""

import sys
from pathlib import Path

import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.physics.params import SystemParams, pump_steady_state
from src.utils.config import settings
from src.utils.run_config import RunConfig

MW = 1e-3


@pytest.fixture(scope='session')
def unequal_params() -> SystemParams:
    """Mirrors at 1.1 and 0.9 omega_m, the default reproduction parameters."""
    return SystemParams.from_mapping(RunConfig().parameter_values())


@pytest.fixture(scope='session')
def equal_params(unequal_params) -> SystemParams:
    """Both mirrors at omega_m."""
    return unequal_params.with_equal_frequencies()


@pytest.fixture(scope='session')
def drive_at():
    """Factory: drive state at a power given in mW."""
    def make(params: SystemParams, milliwatts: float):
        return pump_steady_state(params, milliwatts * MW)
    return make


@pytest.fixture
def paper_config_text() -> str:
    return (settings.resolve(settings.CONFIGS_PATH) / 'paper.cfg').read_text(encoding='utf-8')
