"""Configuration-driven reproduction pipelines."""

from .config import (
    DEFAULTS,
    EXPERIMENTS,
    ConstraintReport,
    ExperimentConfig,
    config_from_dict,
    default_config,
    load_config,
    validate_params,
)
from .pipelines import (
    EXIT_CODES,
    PIPELINES,
    ExperimentReport,
    reproduce_thm_empty,
    reproduce_thm_main,
    reproduce_thm_q65,
    run,
    scan_b_cap_t,
    synthetic_diff_agreement,
)

__all__ = [
    "DEFAULTS", "EXPERIMENTS", "ConstraintReport", "ExperimentConfig", "config_from_dict",
    "default_config", "load_config", "validate_params", "EXIT_CODES", "PIPELINES",
    "ExperimentReport", "reproduce_thm_empty", "reproduce_thm_main", "reproduce_thm_q65",
    "run", "scan_b_cap_t", "synthetic_diff_agreement",
]
