"""
Reproduction run: every subcommand for the bundled configs, then a manifest check.
Writes under output/paper and output/equal (or under the directory given as argument).
"""

import sys
import logging
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.simulation import COMMANDS, run_command
from src.utils.config import settings
from src.utils.data_validation import verify_manifest
from src.utils.logging_config import setup_logging
from src.utils.run_config import load_run_config

CONFIGS = ('paper.cfg', 'equal.cfg')


def reproduce(config_name: str, output_root: Path = None) -> bool:
    """Run all subcommands for one bundled config and verify their manifests."""
    logger = logging.getLogger(__name__)
    config_path = settings.resolve(settings.CONFIGS_PATH) / config_name
    config = load_run_config(config_path)
    if output_root is not None:
        config = config.with_overrides(output_dir=str(output_root / config_path.stem))

    ok = True
    for command in COMMANDS:
        summary = run_command(command, config, config_source=str(config_path))
        if not summary['success']:
            logger.error(f"{config_name} {command} failed: {summary.get('error_message')}")
            ok = False
            continue

        report = verify_manifest(Path(config.output_dir) / f"manifest_{command}.json")
        if report['status'] != 'pass':
            logger.error(f"{config_name} {command}: manifest check failed {report}")
            ok = False
        else:
            logger.info(f"{config_name} {command}: {len(summary['files'])} file(s), "
                        f"{summary['duration_seconds']:.1f}s")
    return ok


def main():
    """Reproduce every bundled configuration."""
    setup_logging()
    logger = logging.getLogger(__name__)

    output_root = Path(sys.argv[1]) if len(sys.argv) > 1 else None
    if settings.LOG_TO_FILE:
        settings.create_directories()

    results = {name: reproduce(name, output_root) for name in CONFIGS}

    print("\n" + "=" * 50)
    for name, ok in results.items():
        print(f"{'✓' if ok else '✗'} {name}")

    if all(results.values()):
        logger.info("All reproduction runs completed")
        sys.exit(0)
    logger.error("Some reproduction runs failed")
    sys.exit(1)


if __name__ == "__main__":
    main()
