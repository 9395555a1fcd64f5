from .run_config import COMMANDS, SUITES, GridSpec, RunConfig

__all__ = ['COMMANDS', 'SUITES', 'GridSpec', 'RunConfig']
