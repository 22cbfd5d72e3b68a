"""Experiment harness: configs, presets, error metrics, runners, CLI."""

from .config import ExperimentConfig, load_config, parse_config
from .experiment import (ErrorReport, REPORT_COLUMNS, TIMING_COLUMNS,
                         initial_state, make_model, run_experiment,
                         run_prediction, sweep_modes_windows, write_report,
                         write_sweep)
from .metrics import l1_error, linf_error
from .presets import PRESETS, Preset, dam_break_bed, gaussian_bump_bed, get_preset

__all__ = [
    "ErrorReport", "ExperimentConfig", "PRESETS", "Preset", "REPORT_COLUMNS",
    "TIMING_COLUMNS", "dam_break_bed", "gaussian_bump_bed", "get_preset",
    "initial_state", "l1_error", "linf_error", "load_config", "make_model",
    "parse_config", "run_experiment", "run_prediction", "sweep_modes_windows",
    "write_report", "write_sweep",
]
