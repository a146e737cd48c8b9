"""Experiment configs, reproducible sweeps and the command line."""

from .config import ConfigError, ExperimentConfig, dump_config, load_config
from .runner import BerCurve, StopDecision, predicted_diversity, run, run_ber, stop_rule

__all__ = [
    "BerCurve",
    "ConfigError",
    "ExperimentConfig",
    "StopDecision",
    "dump_config",
    "load_config",
    "predicted_diversity",
    "run",
    "run_ber",
    "stop_rule",
]
