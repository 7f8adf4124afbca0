"""
Data validation utilities for the ring-cavity simulator.

Parameter checks return ``(is_valid, errors)`` so callers can report every
problem at once; ``validate_or_raise`` turns the first one into an exception.
"""

import hashlib
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Mapping, Tuple, Union

import pandas as pd

from .errors import ParameterError

logger = logging.getLogger(__name__)


class ParameterValidator:
    """Validation of physical parameters against their domain invariants."""

    def __init__(self):
        """Initialize parameter validator."""
        self.validation_rules = {
            'strictly_positive': [
                'wavelength', 'pull_parameter', 'mass_1', 'mass_2', 'omega_1', 'omega_2',
                'gamma_1', 'gamma_2', 'kappa',
            ],
            'finite': ['effective_detuning'],
            'theta_range': (0.0, math.pi),
        }

    def validate_parameters(self, values: Mapping[str, Any]) -> Tuple[bool, List[Tuple[str, str]]]:
        """
        Validate a mapping of SystemParams field values.

        Args:
            values: Field name to value

        Returns:
            Tuple of (is_valid, list of (field, message))
        """
        errors: List[Tuple[str, str]] = []

        for field in self.validation_rules['strictly_positive']:
            value = values.get(field)
            if value is None:
                errors.append((field, "missing required field"))
            elif not _is_finite_number(value):
                errors.append((field, f"must be a finite number, got {value!r}"))
            elif value <= 0:
                errors.append((field, f"must be strictly positive, got {value!r}"))

        for field in self.validation_rules['finite']:
            value = values.get(field)
            if value is None:
                errors.append((field, "missing required field"))
            elif not _is_finite_number(value):
                errors.append((field, f"must be a finite number, got {value!r}"))

        theta = values.get('theta')
        low, high = self.validation_rules['theta_range']
        if theta is None:
            errors.append(('theta', "missing required field"))
        elif not _is_finite_number(theta) or not (low <= theta < high):
            errors.append(('theta', f"must satisfy 0 <= theta < pi, got {theta!r}"))

        return len(errors) == 0, errors

    def validate_power(self, power: Any) -> Tuple[bool, List[Tuple[str, str]]]:
        """Validate a pump power in W."""
        if not _is_finite_number(power):
            return False, [('power', f"must be a finite number, got {power!r}")]
        if power < 0:
            return False, [('power', f"must be non-negative, got {power!r}")]
        return True, []


def _is_finite_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def validate_or_raise(is_valid: bool, errors: List[Tuple[str, str]]):
    """Raise ParameterError for the first validation failure."""
    if not is_valid:
        for field, message in errors:
            logger.debug(f"Validation failed for {field}: {message}")
        field, message = errors[0]
        raise ParameterError(field, message)


def file_digest(path: Union[str, Path]) -> str:
    """SHA-256 digest of a file's bytes."""
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            digest.update(chunk)
    return digest.hexdigest()


def validate_data_file(file_path: Union[str, Path]) -> Dict[str, Any]:
    """
    Check an emitted CSV table: readable, non-empty, finite numeric columns.

    Args:
        file_path: Path to a CSV file written by the simulator

    Returns:
        Validation summary
    """
    file_path = Path(file_path)
    try:
        frame = pd.read_csv(file_path)
    except Exception as e:
        return {'file': str(file_path), 'status': 'fail', 'errors': [f"unreadable: {e}"]}

    errors = []
    if frame.empty:
        errors.append("no rows")
    numeric = frame.select_dtypes(include='number')
    for column in numeric.columns:
        if not numeric[column].notna().all() or not numeric[column].map(math.isfinite).all():
            errors.append(f"non-finite values in column {column}")

    return {
        'file': str(file_path),
        'rows': int(len(frame)),
        'columns': list(frame.columns),
        'errors': errors,
        'status': 'pass' if not errors else 'fail',
    }


def verify_manifest(manifest_path: Union[str, Path]) -> Dict[str, Any]:
    """
    Re-hash every file listed in a run manifest.

    Args:
        manifest_path: Path to ``manifest.json``

    Returns:
        Report with missing and mismatched files
    """
    manifest_path = Path(manifest_path)
    manifest = json.loads(manifest_path.read_text(encoding='utf-8'))
    base = manifest_path.parent

    missing, mismatched = [], []
    for entry in manifest.get('files', []):
        path = base / entry['path']
        if not path.exists():
            missing.append(entry['path'])
        elif file_digest(path) != entry['sha256']:
            mismatched.append(entry['path'])

    listed = {entry['path'] for entry in manifest.get('files', [])}
    unlisted = sorted(
        str(p.relative_to(base)) for p in base.rglob('*')
        if p.is_file() and not p.name.startswith('manifest') and str(p.relative_to(base)) not in listed
    )

    report = {
        'manifest': str(manifest_path),
        'files_checked': len(listed),
        'missing': missing,
        'mismatched': mismatched,
        'unlisted': unlisted,
        'status': 'pass' if not (missing or mismatched) else 'fail',
    }
    if report['status'] == 'fail':
        logger.warning(f"Manifest check failed for {manifest_path}: {report}")
    return report
