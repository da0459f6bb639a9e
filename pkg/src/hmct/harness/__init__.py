from .config import ConfigError, SimConfig, load_config, parse_config
from .runner import TrialResult, run_sweep, run_trial, sweep_csv

__all__ = [
    "ConfigError",
    "SimConfig",
    "TrialResult",
    "load_config",
    "parse_config",
    "run_sweep",
    "run_trial",
    "sweep_csv",
]
