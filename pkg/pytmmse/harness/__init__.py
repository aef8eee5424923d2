from .campaign import ResultRow, TrialResult, TrialSeed, aggregate, run_trial, trial_seed
from .config import Campaign, RunConfiguration, TrialConfig, balanced_factorization
from .output import (
    ComplexityPoint,
    ComplexityRow,
    complexity_tables,
    emit_complexity_csv,
    emit_complexity_table,
    emit_csv,
    emit_plot_data,
    emit_results,
    read_csv,
)
from .selftest import run_selftest

__all__ = [
    "Campaign",
    "ComplexityPoint",
    "ComplexityRow",
    "ResultRow",
    "RunConfiguration",
    "TrialConfig",
    "TrialResult",
    "TrialSeed",
    "aggregate",
    "balanced_factorization",
    "complexity_tables",
    "emit_complexity_csv",
    "emit_complexity_table",
    "emit_csv",
    "emit_plot_data",
    "emit_results",
    "read_csv",
    "run_selftest",
    "run_trial",
    "trial_seed",
]
