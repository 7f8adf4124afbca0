"""
Logging configuration for the ring-cavity simulator.
"""

import functools
import logging
import logging.handlers
import sys
from datetime import datetime, timezone
from typing import Optional

import structlog
from loguru import logger as loguru_logger

from .config import settings


class ColoredFormatter(logging.Formatter):
    """Custom formatter with colors for different log levels."""

    COLORS = {
        'DEBUG': '\033[36m',    # Cyan
        'INFO': '\033[32m',     # Green
        'WARNING': '\033[33m',  # Yellow
        'ERROR': '\033[31m',    # Red
        'CRITICAL': '\033[35m', # Magenta
    }
    RESET = '\033[0m'

    def format(self, record):
        record = logging.makeLogRecord(record.__dict__)
        if record.levelname in self.COLORS:
            record.levelname = f"{self.COLORS[record.levelname]}{record.levelname}{self.RESET}"
        return super().format(record)


def _configure_structlog():
    """Route structlog through the stdlib loggers so levels and handlers apply."""
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            structlog.processors.JSONRenderer(sort_keys=True)
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def setup_logging(
    log_level: Optional[str] = None,
    log_file: Optional[str] = None,
    enable_structlog: bool = True,
    log_to_file: Optional[bool] = None,
):
    """
    Setup logging for a simulator run.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional extra log file path
        enable_structlog: Whether to enable structured logging
        log_to_file: Write rotating logs under LOGS_PATH (defaults to settings.LOG_TO_FILE)
    """
    log_level = (log_level or settings.LOG_LEVEL).upper()
    log_to_file = settings.LOG_TO_FILE if log_to_file is None else log_to_file

    # Clear existing handlers
    root_logger = logging.getLogger()
    root_logger.handlers.clear()
    root_logger.setLevel(getattr(logging, log_level))

    # Console handler with colors; stderr keeps stdout free for tables
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(getattr(logging, log_level))
    console_handler.setFormatter(ColoredFormatter(
        '%(asctime)s | %(levelname)s | %(name)s | %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    ))
    root_logger.addHandler(console_handler)

    file_formatter = logging.Formatter(
        '%(asctime)s | %(levelname)s | %(name)s | %(funcName)s:%(lineno)d | %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    loguru_logger.remove()
    if log_to_file:
        logs_path = settings.resolve(settings.LOGS_PATH)
        logs_path.mkdir(parents=True, exist_ok=True)

        file_handler = logging.handlers.RotatingFileHandler(
            logs_path / 'ringcavity.log',
            maxBytes=10*1024*1024,  # 10MB
            backupCount=5
        )
        file_handler.setLevel(logging.INFO)
        file_handler.setFormatter(file_formatter)
        root_logger.addHandler(file_handler)

        error_handler = logging.handlers.RotatingFileHandler(
            logs_path / 'errors.log',
            maxBytes=10*1024*1024,  # 10MB
            backupCount=5
        )
        error_handler.setLevel(logging.ERROR)
        error_handler.setFormatter(file_formatter)
        root_logger.addHandler(error_handler)

        # Analysis events as JSON lines
        loguru_logger.add(
            logs_path / 'analysis.log',
            rotation="100 MB",
            retention="30 days",
            level=log_level,
            format="{time:YYYY-MM-DD HH:mm:ss} | {level} | {name}:{function}:{line} | {message}",
            serialize=True
        )

    if log_file:
        custom_handler = logging.FileHandler(log_file)
        custom_handler.setLevel(getattr(logging, log_level))
        custom_handler.setFormatter(file_formatter)
        root_logger.addHandler(custom_handler)

    if enable_structlog:
        _configure_structlog()

    logging.getLogger(__name__).debug(f"Logging configured - Level: {log_level}, files: {log_to_file}")


def get_logger(name: str) -> logging.Logger:
    """Get a named logger instance."""
    return logging.getLogger(name)


def get_structured_logger(name: str):
    """Get a structured logger instance."""
    return structlog.get_logger(name)


def log_function_call(func):
    """Decorator to log function calls with execution time at DEBUG level."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = get_logger(func.__module__)
        if not logger.isEnabledFor(logging.DEBUG):
            return func(*args, **kwargs)

        start_time = datetime.now()
        logger.debug(f"Entering {func.__name__}")
        try:
            result = func(*args, **kwargs)
            execution_time = (datetime.now() - start_time).total_seconds()
            logger.debug(f"Completed {func.__name__} in {execution_time:.3f}s")
            return result
        except Exception as e:
            execution_time = (datetime.now() - start_time).total_seconds()
            logger.debug(f"Error in {func.__name__} after {execution_time:.3f}s: {str(e)}")
            raise

    return wrapper


def log_run_event(
    command: str,
    status: str,
    files_written: int = 0,
    error_message: Optional[str] = None,
    metadata: Optional[dict] = None
):
    """Log CLI run events with structured information."""
    logger = get_structured_logger('ringcavity.simulation')

    log_data = {
        'command': command,
        'status': status,
        'files_written': files_written,
        'timestamp': datetime.now(timezone.utc).isoformat()
    }
    if error_message:
        log_data['error_message'] = error_message
    if metadata:
        log_data['metadata'] = metadata

    if status == 'success':
        logger.info("Run completed", **log_data)
    elif status == 'error':
        logger.error("Run failed", **log_data)
    else:
        logger.info("Run event", **log_data)


def log_analysis_event(
    analysis_type: str,
    status: str,
    power: Optional[float] = None,
    points: int = 0,
    features_found: int = 0,
    metadata: Optional[dict] = None
):
    """Log analysis events (spectra, root solves, feature extraction)."""
    log_data = {
        'analysis_type': analysis_type,
        'status': status,
        'points': points,
        'features_found': features_found,
    }
    if power is not None:
        log_data['power_W'] = power
    if metadata:
        log_data['metadata'] = metadata

    if not logging.getLogger('ringcavity.analysis').isEnabledFor(logging.DEBUG):
        return
    get_structured_logger('ringcavity.analysis').debug("Analysis event", **log_data)
    loguru_logger.bind(**log_data).debug(f"{analysis_type}: {status}")


class SimulationLogger:
    """Specialized logger for one command-line run."""

    def __init__(self, command: str):
        self.command = command
        self.logger = get_logger(f'ringcavity.simulation.{command}')
        self.structured_logger = get_structured_logger(f'ringcavity.simulation.{command}')

    def start_run(self, powers: int, config_source: Optional[str] = None):
        """Log start of a run."""
        message = f"Starting {self.command} run for {powers} pump power(s)"
        if config_source:
            message += f" from {config_source}"
        self.logger.info(message)
        log_run_event(self.command, 'started', metadata={'powers': powers, 'config': config_source})

    def log_progress(self, done: int, total: int, message: Optional[str] = None):
        """Log run progress."""
        percentage = (done / total) * 100 if total else 100.0
        progress_msg = f"Progress: {done}/{total} ({percentage:.1f}%)"
        if message:
            progress_msg += f" - {message}"
        self.logger.info(progress_msg)

    def log_success(self, files_written: int, duration: Optional[float] = None):
        """Log successful run completion."""
        message = f"Completed {self.command}: {files_written} file(s) written"
        if duration is not None:
            message += f" in {duration:.2f}s"
        self.logger.info(message)
        log_run_event(self.command, 'success', files_written=files_written,
                      metadata={'duration_seconds': duration})

    def log_error(self, error: Exception, context: Optional[str] = None, verbose: bool = False):
        """Log run error."""
        error_message = f"Error in {self.command}"
        if context:
            error_message += f" ({context})"
        error_message += f": {error}"
        self.logger.error(error_message, exc_info=verbose)
        log_run_event(self.command, 'error', error_message=str(error))

    def log_warning(self, message: str, metadata: Optional[dict] = None):
        """Log warning message."""
        self.logger.warning(message)
        if metadata:
            self.structured_logger.warning(message, **metadata)


# stdlib routing until setup_logging runs
_configure_structlog()
