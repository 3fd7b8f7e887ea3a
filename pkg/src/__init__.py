"""
Last-Passage Identities - Exact and Monte Carlo checks of last-passage laws.

This package computes the time spent below zero, the extremum times and the
last nonpositive time of:
- Finite lattice random walks, exactly, by enumerating every path
- Compound Poisson processes with drift, by simulation, against closed-form
  Laplace transforms

Usage:
    from src import run_suite, write_report
    from presets import MODEL_PRESETS

    report = run_suite("prop1", {"model": MODEL_PRESETS["M1"]}, N=100_000, seed=42)
    write_report(report, "json", "prop1.json")
"""

from .errors import ConfigError, LastPassageError
from .models import CpModel, model_from_dict
from .report import VerifyReport, write_report
from .suite_registry import SuiteRegistry
from .verify import run_suite

__version__ = "0.1.0"
__all__ = [
    "ConfigError",
    "CpModel",
    "LastPassageError",
    "SuiteRegistry",
    "VerifyReport",
    "model_from_dict",
    "run_suite",
    "write_report",
]
