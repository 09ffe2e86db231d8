"""Adaptive significance levels for nested Gaussian linear models."""

__version__ = "0.1.0"

from .alpha import (
    AlphaResult,
    adaptive_alpha,
    alpha_for_design,
    anova_adaptive_alpha,
    bic_adaptive_alpha,
    one_way_layout_alpha,
)
from .calibration import CalibrationStrategy, PBICInputs, PBICTerm, StrategyKind, calibrate
from .dataset import Dataset, parse_dataset_csv
from .decision import TestReport, run_nested_test, run_regression_test
from .distcore import GammaLaw, PowerDesign, exact_null_law, null_law, solve_replicates
from .errors import AdaptiveAlphaError
from .linmod import NestedPair, lr_statistic, log_b_direct
from .simlab import Table3Config, null_law_mc_check, reproduce_table, table3_experiment

__all__ = [
    "AdaptiveAlphaError",
    "AlphaResult",
    "CalibrationStrategy",
    "Dataset",
    "GammaLaw",
    "NestedPair",
    "PBICInputs",
    "PBICTerm",
    "PowerDesign",
    "StrategyKind",
    "Table3Config",
    "TestReport",
    "adaptive_alpha",
    "alpha_for_design",
    "anova_adaptive_alpha",
    "bic_adaptive_alpha",
    "calibrate",
    "exact_null_law",
    "log_b_direct",
    "lr_statistic",
    "null_law",
    "null_law_mc_check",
    "one_way_layout_alpha",
    "parse_dataset_csv",
    "reproduce_table",
    "run_nested_test",
    "run_regression_test",
    "solve_replicates",
    "table3_experiment",
]
