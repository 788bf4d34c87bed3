"""Verification suite: executable checks of the algebraic relations, with reports."""

from __future__ import annotations

from .core import (
    FAIL,
    FINDING,
    PASS,
    VACUOUS,
    CheckReport,
    SuiteConfig,
    iter_reports,
    run_suite,
    summarize,
)
from .scenario import scenario_cuntz_states

__all__ = [
    "PASS", "FAIL", "FINDING", "VACUOUS", "SuiteConfig", "CheckReport", "run_suite", "iter_reports",
    "summarize", "scenario_cuntz_states",
]
