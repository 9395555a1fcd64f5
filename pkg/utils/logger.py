"""
Logging utility for the Dirac-Oscillator toolkit
"""
import logging
import sys
from typing import Any, Dict, List, TextIO


def setup_logger(name: str = "DiracOscillator", level: int = logging.INFO,
                 stream: TextIO = None) -> logging.Logger:
    """
    Set up and configure logger

    The library modules log under their own module names; their records
    reach the same handler through the root logger.

    Args:
        name: Logger name
        level: Logging level
        stream: Output stream, stdout by default

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Remove existing handlers
    logger.handlers = []

    # Create console handler
    console_handler = logging.StreamHandler(stream or sys.stdout)
    console_handler.setLevel(level)

    # Create formatter
    formatter = logging.Formatter(
        fmt='[%(asctime)s] %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)
    logger.propagate = False

    for package in ("dirac", "suites"):
        library = logging.getLogger(package)
        library.setLevel(level)
        library.handlers = [console_handler]
        library.propagate = False

    return logger


def log_run_config(logger: logging.Logger, config):
    """
    Log run configuration details

    Args:
        logger: Logger instance
        config: RunConfig instance
    """
    logger.info("=" * 50)
    logger.info(f"Command: {config.command}")
    logger.info("=" * 50)
    for key, value in config.summary().items():
        logger.info(f"  {key}: {value}")
    logger.info("=" * 50)


def log_checks(logger: logging.Logger, checks: List[Dict[str, Any]]):
    """
    Log verification checks, failures first

    Args:
        logger: Logger instance
        checks: Check dictionaries
    """
    failed = [c for c in checks if not c["pass"]]
    logger.info("=" * 50)
    logger.info(f"Total Checks: {len(checks)}, failed: {len(failed)}")
    logger.info("=" * 50)

    for check in failed:
        logger.warning(f"  FAIL {check['name']}: measured {check['measured']:.3e} "
                       f"> threshold {check['threshold']:.3e} ({check.get('error', check['relation'])})")
