"""
Configuration module for the ring-cavity simulator.
Handles environment variables, application settings and physical constants.
"""

from pathlib import Path
from typing import Dict

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict
from scipy import constants as physical_constants

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    """Application settings configuration."""

    model_config = SettingsConfigDict(
        env_prefix="RINGCAV_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    # Project paths
    PROJECT_ROOT: Path = Path(__file__).parent.parent.parent
    CONFIGS_PATH: Path = Path("data/configs")
    OUTPUT_PATH: Path = Path("output")
    LOGS_PATH: Path = Path("logs")

    # Application settings
    LOG_LEVEL: str = "INFO"
    LOG_TO_FILE: bool = False
    SHOW_PROGRESS: bool = False

    # Probe-detuning grid, in units of omega_m
    DEFAULT_GRID_START: float = 0.5
    DEFAULT_GRID_STOP: float = 1.5
    DEFAULT_GRID_POINTS: int = 4001

    # Adaptive refinement
    REFINE_TOLERANCE: float = 1e-3
    REFINE_BUDGET: int = 1_000_000

    # Root finding
    ROOT_MAX_ITERATIONS: int = 500
    ROOT_TOLERANCE: float = 1e-14
    SINGULARITY_FLOOR: float = 1e-30

    # Feature extraction and analytic comparisons
    PROMINENCE_FLOOR: float = 1e-3
    COMPARISON_TOLERANCE: float = 0.15
    STRONG_COUPLING_THRESHOLD: float = 10.0

    def resolve(self, path: Path) -> Path:
        """Return ``path`` anchored at the project root when it is relative."""
        path = Path(path)
        return path if path.is_absolute() else self.PROJECT_ROOT / path

    def create_directories(self):
        """Create output and log directories if they don't exist."""
        for directory in (self.OUTPUT_PATH, self.LOGS_PATH):
            self.resolve(directory).mkdir(parents=True, exist_ok=True)


# Global settings instance
settings = Settings()

VERSION = "1.0.0"

# CODATA values, J s and m / s
HBAR = physical_constants.hbar
SPEED_OF_LIGHT = physical_constants.c

# Process exit codes of the command line front end
EXIT_CODES: Dict[str, int] = {
    'success': 0,
    'config': 2,
    'numerical': 3,
    'resolution': 4,
}

# Width and position formulas compared against measured spectral features
ANALYTIC_FORMULAS: Dict[str, str] = {
    'dip_width_1': "gamma_1 + G1^2/kappa",
    'dip_width_2': "gamma_2 + G2^2/kappa",
    'central_peak_width': "(omega_1 - omega_2) - (gamma + (G1^2 + G2^2)/(2 kappa))",
    'central_peak_width_strong': "gamma",
    'side_peak_width': "kappa + gamma/2",
    'splitting': "sqrt(2 (G1^2 + G2^2))",
    'eit_dip_width': "gamma + 2 G^2/kappa",
    'peak_position_lower': "omega_m - G",
    'peak_position_upper': "omega_m + G",
    'peak_separation': "2 G",
}

# Regime labels attached to predictions and diagnostics
REGIME_LABELS: Dict[str, str] = {
    'weak': "weak coupling: widths set by gamma + G^2/kappa broadening",
    'strong': "strong coupling: 2(G1^2+G2^2) >> (kappa - gamma/2)^2",
    'any': "valid at every power",
    'resolved_sideband': "kappa < min(omega_1, omega_2)",
    'unresolved_sideband': "kappa >= min(omega_1, omega_2)",
}
