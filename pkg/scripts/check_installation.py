"""
Quick installation check: imports, bundled configs, and one pump-off sanity value.
"""

import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))


def check_imports():
    """Check that the package and its dependencies import."""
    print("Checking imports...")

    try:
        import numpy, scipy, pandas, pydantic, pydantic_settings, structlog, loguru, tqdm  # noqa: F401
        print("✓ Third-party packages imported successfully")
    except ImportError as e:
        print(f"✗ Missing dependency: {e}")
        return False

    try:
        from src import RingCavitySimulation, __version__  # noqa: F401
        print(f"✓ ringcavity {__version__} imported successfully")
    except Exception as e:
        print(f"✗ Package import failed: {e}")
        return False

    return True


def check_configs():
    """Check that the bundled configs parse."""
    print("\nChecking bundled configs...")

    from src.physics.params import SystemParams
    from src.utils.config import settings
    from src.utils.run_config import load_run_config

    for config_path in sorted(settings.resolve(settings.CONFIGS_PATH).glob('*.cfg')):
        try:
            config = load_run_config(config_path)
            SystemParams.from_mapping(config.parameter_values())
            print(f"✓ {config_path.name}: {len(config.power_values())} pump power(s)")
        except Exception as e:
            print(f"✗ {config_path.name}: {e}")
            return False
    return True


def check_pump_off_peak():
    """With the pump off the probe quadrature peaks at 2 on resonance."""
    print("\nChecking pump-off response...")

    from src.physics.params import SystemParams, pump_steady_state
    from src.physics.response import scan_spectrum
    from src.utils.run_config import RunConfig

    params = SystemParams.from_mapping(RunConfig().parameter_values())
    spectrum = scan_spectrum(params, pump_steady_state(params, 0.0), [params.effective_detuning])
    value = float(spectrum.nu_p[0])
    if abs(value - 2.0) > 1e-12:
        print(f"✗ nu_p at resonance is {value!r}, expected 2")
        return False
    print("✓ nu_p at resonance is 2")
    return True


def main():
    """Run all checks."""
    print("Ring cavity simulator - installation check")
    print("=" * 50)

    checks = [check_imports, check_configs, check_pump_off_peak]
    passed = 0
    for check in checks:
        if check():
            passed += 1
        else:
            break

    print("\n" + "=" * 50)
    print(f"Checks passed: {passed}/{len(checks)}")
    sys.exit(0 if passed == len(checks) else 1)


if __name__ == "__main__":
    main()
