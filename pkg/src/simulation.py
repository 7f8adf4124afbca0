"""
Run orchestrator for the ring-cavity simulator.
Turns a RunConfig into spectrum, Stokes, root and feature artifacts plus a manifest.
"""

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from .physics.features import SpectrumRequest, analytic_widths, compare_features, extract_features, refine_grid
from .physics.modes import (
    build_denominator,
    dressed_mode_predictions,
    find_roots,
    pinned_root_index,
    positive_branch,
    stability_check,
    sweep_roots,
)
from .physics.normalcoords import transformed_coeffs
from .physics.params import DriveState, SystemParams, pump_steady_state, regime_report
from .physics.response import ResponseSpectrum, detuning_grid, scan_spectrum, stokes_null_detuning
from .utils.config import VERSION
from .utils.data_validation import file_digest
from .utils.errors import ConfigError, ResolutionError, RingCavityError
from .utils.logging_config import SimulationLogger, get_logger
from .utils.run_config import RunConfig

logger = get_logger(__name__)

COMMANDS = ('spectrum', 'stokes', 'roots', 'features')

# 17 significant digits, scientific notation
FLOAT_FORMAT = '%.16e'


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True, default=_json_default) + "\n"


def power_label(index: int, power: float) -> str:
    return f"p{index:03d}_{power * 1e3:g}mW"


class RingCavitySimulation:
    """Runs one subcommand for a RunConfig and writes its artifacts."""

    def __init__(self, config: RunConfig, config_source: Optional[str] = None):
        """
        Args:
            config: Validated run configuration
            config_source: Where the config came from, for log messages
        """
        self.config = config
        self.config_source = config_source
        values = config.parameter_values()
        self.params = SystemParams.from_mapping(values)
        if not np.isclose(values['omega_m'], self.params.omega_m, rtol=1e-12, atol=0.0):
            logger.warning(
                f"Configured omega_m differs from the mirror midpoint (omega_1 + omega_2)/2 by a factor "
                f"{self.params.omega_m / values['omega_m']:.6g}; detunings are reported against the midpoint"
            )
        self.output_dir = Path(config.output_dir)
        self.files_written: List[Path] = []
        self.current_power: Optional[float] = None
        self.sim_logger = SimulationLogger('simulation')

        self.commands: Dict[str, Callable[[List[float]], None]] = {
            'spectrum': self.cmd_spectrum,
            'stokes': self.cmd_stokes,
            'roots': self.cmd_roots,
            'features': self.cmd_features,
        }

    def run(self, command: str, verbose: bool = False) -> Dict[str, Any]:
        """
        Run one subcommand.

        Args:
            command: One of ``spectrum``, ``stokes``, ``roots``, ``features``
            verbose: Log tracebacks of failures

        Returns:
            Run summary; ``exit_code`` is non-zero on failure
        """
        if command not in self.commands:
            raise ValueError(f"unknown command '{command}'")

        start_time = datetime.now()
        sim_logger = self.sim_logger = SimulationLogger(command)
        powers = self.config.power_values()

        summary: Dict[str, Any] = {
            'command': command,
            'powers': powers,
            'files': [],
            'duration_seconds': 0.0,
            'success': True,
            'exit_code': 0,
        }

        try:
            if not powers:
                raise ConfigError("no pump powers given", field='power')
            sim_logger.start_run(len(powers), self.config_source)

            self.files_written = []
            self.commands[command](powers)
            manifest = self.write_manifest(command)

            summary['files'] = [str(p) for p in self.files_written] + [str(manifest)]
            summary['duration_seconds'] = (datetime.now() - start_time).total_seconds()
            sim_logger.log_success(len(summary['files']), summary['duration_seconds'])
            return summary

        except RingCavityError as e:
            context = f"P = {self.current_power:.6g} W" if self.current_power is not None else None
            sim_logger.log_error(e, context=context, verbose=verbose)
            summary['success'] = False
            summary['exit_code'] = e.exit_code
            summary['error_message'] = str(e)
            summary['files'] = [str(p) for p in self.files_written]
            summary['duration_seconds'] = (datetime.now() - start_time).total_seconds()
            return summary

    # artifact writing

    def _path(self, name: str) -> Path:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        return self.output_dir / name

    def write_table(self, frame: pd.DataFrame, stem: str):
        """Write ``frame`` in every configured format."""
        for fmt in self.config.formats:
            path = self._path(f"{stem}.{fmt}")
            if fmt == 'csv':
                frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
            else:
                path.write_text(_dumps(frame.to_dict(orient='list')), encoding='utf-8', newline='\n')
            self.files_written.append(path)
            logger.debug(f"Wrote {path}")

    def write_json(self, data: Dict[str, Any], stem: str):
        path = self._path(f"{stem}.json")
        path.write_text(_dumps(data), encoding='utf-8', newline='\n')
        self.files_written.append(path)

    def write_manifest(self, command: str) -> Path:
        """Manifest with config snapshot, version, timestamp and file digests."""
        manifest = {
            'command': command,
            'config': self.config.snapshot(),
            'version': VERSION,
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'files': [
                {'path': p.relative_to(self.output_dir).as_posix(), 'sha256': file_digest(p)}
                for p in self.files_written
            ],
        }
        path = self._path(f"manifest_{command}.json")
        path.write_text(_dumps(manifest), encoding='utf-8', newline='\n')
        return path

    # spectra

    def _spectrum(self, drive: DriveState, quantity: str, refine: Optional[bool] = None) -> ResponseSpectrum:
        config = self.config
        refine = config.refine if refine is None else refine
        if refine:
            request = SpectrumRequest(
                params=self.params,
                drive=drive,
                start=config.grid_start,
                stop=config.grid_stop,
                points=config.grid_points,
                quantity=quantity,
                tolerance=config.refine_tolerance,
                budget=config.refine_budget,
            )
            hint = find_roots(build_denominator(self.params, drive)).roots
            grid = refine_grid(request, hint=hint) * self.params.omega_m
        else:
            grid = detuning_grid(self.params, config.grid_start, config.grid_stop, config.grid_points)
        return scan_spectrum(self.params, drive, grid)

    def cmd_spectrum(self, powers: List[float]):
        """Probe quadrature and output field per power."""
        for index, power in enumerate(powers):
            self.current_power = power
            spectrum = self._spectrum(pump_steady_state(self.params, power), 'nu_p')
            frame = spectrum.to_frame()[['delta_over_omega_m', 'nu_p', 're_eps_out_plus', 'im_eps_out_plus']]
            self.write_table(frame, f"spectrum_{power_label(index, power)}")
        self.current_power = None

    def cmd_stokes(self, powers: List[float]):
        """Stokes intensity per power."""
        for index, power in enumerate(powers):
            self.current_power = power
            spectrum = self._spectrum(pump_steady_state(self.params, power), 'stokes_intensity')
            frame = spectrum.to_frame()[['delta_over_omega_m', 'stokes_intensity']]
            self.write_table(frame, f"stokes_{power_label(index, power)}")
        self.current_power = None

    def cmd_roots(self, powers: List[float]):
        """Matched root trajectory with dressed-mode predictions and stability flags."""
        trajectory = sweep_roots(self.params, sorted(powers))
        rows = []
        weak = 0
        for i, (root_set, drive) in enumerate(zip(trajectory.root_sets, trajectory.drives)):
            self.current_power = drive.power
            row: Dict[str, Any] = {'power_mW': drive.power * 1e3}
            for j, root in enumerate(trajectory.matched[i]):
                row[f'root_{j}_re'] = root.real
                row[f'root_{j}_im'] = root.imag
            dressed = dressed_mode_predictions(self.params, drive, warn=False)
            weak += not dressed.strong_coupling
            for name in ('central', 'lower', 'upper'):
                value = getattr(dressed, name)
                row[f'dressed_{name}_re'] = value.real
                row[f'dressed_{name}_im'] = value.imag
            row['strong_coupling_ratio'] = dressed.strong_coupling_ratio
            stability = stability_check(root_set)
            row['stable'] = stability.stable
            row['min_margin'] = float(stability.margins.min())
            rows.append(row)
        self.current_power = None

        if weak:
            logger.warning(f"Dressed-mode predictions outside strong coupling at {weak} of {len(rows)} powers")
        columns, _ = positive_branch(trajectory)
        logger.info(f"Positive-frequency root columns {columns}; pinned column {pinned_root_index(trajectory)}")
        self.write_table(pd.DataFrame(rows), "roots")

    def _resolved_features(self, drive: DriveState):
        """
        Uniform-grid spectrum and features, retried on a refined grid when a
        feature is narrower than three grid steps.

        Raises:
            ResolutionError: still unresolved after refinement
        """
        spectrum = self._spectrum(drive, 'nu_p')
        try:
            return spectrum, extract_features(spectrum, 'nu_p', prominence_floor=self.config.prominence_floor)
        except ResolutionError as e:
            if self.config.refine:
                raise
            self.sim_logger.log_warning(f"{e}; retrying on a refined grid",
                                        metadata={'power_W': drive.power})
        spectrum = self._spectrum(drive, 'nu_p', refine=True)
        return spectrum, extract_features(spectrum, 'nu_p', prominence_floor=self.config.prominence_floor)

    def cmd_features(self, powers: List[float]):
        """Feature report with analytic comparisons and collective-coordinate diagnostics."""
        params = self.params
        mode = 'equal' if params.omega_1 == params.omega_2 else 'unequal'
        coeffs = transformed_coeffs(params)
        report: Dict[str, Any] = {
            'mode': mode,
            'regime': regime_report(params).to_dict(),
            'normal_coordinates': {
                'omega_over_omega_m': coeffs.omega / params.omega_m,
                'chi_over_omega_m': coeffs.chi / params.omega_m,
                'cavity_coupling': coeffs.cavity_coupling,
                'classification': coeffs.regime,
            },
            'comparison_tolerance': self.config.comparison_tolerance,
            'prominence_floor': self.config.prominence_floor,
            'powers': [],
        }

        comparison_rows = []
        for index, power in enumerate(powers):
            self.current_power = power
            drive = pump_steady_state(params, power)
            spectrum, features = self._resolved_features(drive)
            comparisons = compare_features(features.features, analytic_widths(params, drive, mode),
                                           self.config.comparison_tolerance)
            dressed = dressed_mode_predictions(params, drive)
            null = stokes_null_detuning(params, drive)
            stokes = spectrum.stokes_intensity

            report['powers'].append({
                'label': power_label(index, power),
                'power_W': power,
                'G1_over_omega_m': drive.G1 / params.omega_m,
                'G2_over_omega_m': drive.G2 / params.omega_m,
                'features': features.to_dict(),
                'comparisons': [c.to_dict() for c in comparisons],
                'dressed_modes': {
                    'central': dressed.central,
                    'lower': dressed.lower,
                    'upper': dressed.upper,
                    'strong_coupling_ratio': dressed.strong_coupling_ratio,
                    'strong_coupling': dressed.strong_coupling,
                },
                'stokes': {
                    'max_intensity': float(stokes.max()),
                    'null_over_omega_m': null.delta_over_omega_m if null is not None else None,
                },
            })
            for comparison in comparisons:
                comparison_rows.append({'power_mW': power * 1e3, **comparison.to_dict()})
            self.sim_logger.log_progress(index + 1, len(powers), f"{len(features)} feature(s) at {power * 1e3:g} mW")
        self.current_power = None

        self.write_json(report, "features")
        if 'csv' in self.config.formats:
            frame = pd.DataFrame(comparison_rows)
            path = self._path("features_comparisons.csv")
            frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
            self.files_written.append(path)


def run_command(command: str, config: RunConfig, config_source: Optional[str] = None,
                verbose: bool = False) -> Dict[str, Any]:
    """Convenience wrapper: build a simulation and run one subcommand."""
    return RingCavitySimulation(config, config_source).run(command, verbose=verbose)
