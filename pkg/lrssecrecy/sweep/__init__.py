"""Sweep driver: grid evaluation of closed forms and Monte Carlo estimates."""

from __future__ import annotations

import asyncio
from collections.abc import Callable, Coroutine
from concurrent.futures import ThreadPoolExecutor
from typing import Any

from ..config import SweepSpec
from .coordinator import SweepCoordinator, evaluate_point, resolve_variants, scenario_config
from .output import SweepResult, SweepRow

__all__ = [
    "SweepCoordinator",
    "SweepResult",
    "SweepRow",
    "async_run_sweep",
    "evaluate_point",
    "resolve_variants",
    "run_sweep",
    "scenario_config",
]


async def async_run_sweep(
    spec: SweepSpec,
    data_update_callback: Callable[[dict[str, Any]], Coroutine[Any, Any, None]] | None = None,
) -> SweepResult:
    with ThreadPoolExecutor(max_workers=spec.workers, thread_name_prefix="sweep") as executor:
        coordinator = SweepCoordinator(spec, data_update_callback, executor)
        coordinator.start()
        try:
            return await coordinator.async_run()
        finally:
            coordinator.stop()


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate every (n, bits, g0b, variant) of the sweep; deterministic for a fixed seed."""
    return asyncio.run(async_run_sweep(spec))
