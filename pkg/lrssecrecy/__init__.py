"""
Physical-layer security metrics of links assisted by a large reflecting surface.

Closed forms for the secrecy outage probability and the average secrecy
capacity under phase-compensation errors, a Monte Carlo oracle over the
per-element channels, and a sweep/validation command line.
"""

from __future__ import annotations

from .channel import (
    Beckmann,
    EveDist,
    FoldedNormal,
    HopFading,
    Nakagami,
    PhaseErrorModel,
    Scenario,
    SystemConfig,
    eavesdropper_params,
    legitimate_params,
    moment_set,
    reference_scenario,
)
from .const import LOGGER
from .exceptions import (
    ChannelError,
    ConfigValidationError,
    DomainError,
    InversionError,
    LrsSecrecyError,
    NumericalError,
)
from .metrics import SecrecyPoint, asc, asc_asymptotic, evaluate, sop
from .montecarlo import simulate_batch

__version__ = "1.0.0"

__all__ = [
    "LOGGER",
    "Beckmann",
    "ChannelError",
    "ConfigValidationError",
    "DomainError",
    "EveDist",
    "FoldedNormal",
    "HopFading",
    "InversionError",
    "LrsSecrecyError",
    "Nakagami",
    "NumericalError",
    "PhaseErrorModel",
    "Scenario",
    "SecrecyPoint",
    "SystemConfig",
    "asc",
    "asc_asymptotic",
    "eavesdropper_params",
    "evaluate",
    "legitimate_params",
    "moment_set",
    "reference_scenario",
    "simulate_batch",
    "sop",
]
