"""
Package initialization for the ring-cavity simulator.
"""

from .utils.config import VERSION
from .simulation import RingCavitySimulation, run_command

__all__ = [
    'RingCavitySimulation',
    'run_command',
]

__version__ = VERSION
