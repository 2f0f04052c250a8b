"""Numerical check catalog with refinement-stability verdicts."""

from .checks import CHECKS, CheckSpec
from .config import VerifyConfig
from .report import CheckReport, Measurement, format_table, write_reports, write_summary
from .runner import SuiteSummary, judge, run_check, run_suite

__all__ = [
    "CHECKS",
    "CheckSpec",
    "VerifyConfig",
    "CheckReport",
    "Measurement",
    "SuiteSummary",
    "format_table",
    "judge",
    "run_check",
    "run_suite",
    "write_reports",
    "write_summary",
]
