"""
Presets - Named models, step laws and the verification suite catalog.

Usage:
    from presets import ALL_SUITES, MODEL_PRESETS
    from src import SuiteRegistry

    registry = SuiteRegistry()
    registry.register_many(ALL_SUITES)
"""

from .models import MODEL_PRESETS
from .step_laws import STEP_LAW_PRESETS
from .suites import SUITES

ALL_SUITES = SUITES

__all__ = ["ALL_SUITES", "MODEL_PRESETS", "STEP_LAW_PRESETS"]
