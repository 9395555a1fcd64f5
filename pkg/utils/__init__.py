from .logger import setup_logger, log_run_config, log_checks
from .retry import refine_on_failure, safe_execute

__all__ = ['setup_logger', 'log_run_config', 'log_checks', 'refine_on_failure', 'safe_execute']
