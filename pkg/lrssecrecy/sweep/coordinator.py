"""Concurrent evaluation of a sweep grid."""

from __future__ import annotations

import asyncio
from collections.abc import Callable, Coroutine
from concurrent.futures import Executor
import logging
import math
from typing import Any

from .. import metrics
from ..channel import (
    PhaseErrorModel,
    Scenario,
    SystemConfig,
    eavesdropper_params,
    legitimate_params,
    moment_set,
)
from ..config import SweepSpec
from ..const import ASYMPTOTIC_PREFIX, METRIC_ASC, METRIC_SNR, METRIC_SOP, VARIANT_MC
from ..exceptions import LrsSecrecyError
from ..montecarlo import (
    TrialBatch,
    empirical_asc,
    empirical_mean_snr,
    empirical_sop,
    resolvable_floor,
    simulate_batch,
)
from ..util import db_to_linear, format_bits
from .output import SweepResult, SweepRow

_LOGGER = logging.getLogger(__name__)

STATE_INITIALIZING = "INITIALIZING"
STATE_RUNNING = "RUNNING"
STATE_DONE = "DONE"
STATE_STOPPED = "STOPPED"


def resolve_variants(variants: tuple[str, ...], bits: int | None) -> list[tuple[str, Scenario | None, bool]]:
    """
    Map requested variants to (label, scenario, asymptotic) for one bit width.

    FR and BR name one family: bits=inf selects FR, finite bits select BR.
    MC has no scenario. Duplicates after resolution are dropped.
    """
    resolved: list[tuple[str, Scenario | None, bool]] = []
    for variant in variants:
        if variant == VARIANT_MC:
            entry = (VARIANT_MC, None, False)
        else:
            asymptotic = variant.startswith(ASYMPTOTIC_PREFIX)
            scenario = Scenario(variant.removeprefix(ASYMPTOTIC_PREFIX))
            if scenario is not Scenario.NR:
                wanted = Scenario.FR if bits is None else Scenario.BR
                if wanted is not scenario:
                    _LOGGER.warning(
                        f"Variant {variant} does not apply to bits={format_bits(bits)}; using {wanted}"
                    )
                scenario = wanted
            label = f"{ASYMPTOTIC_PREFIX}{scenario}" if asymptotic else str(scenario)
            entry = (label, scenario, asymptotic)
        if entry not in resolved:
            resolved.append(entry)
    return resolved


def scenario_config(spec: SweepSpec, n: int, bits: int | None, g0b_db: float) -> SystemConfig:
    """The only place sweep SNRs leave the dB domain."""
    return SystemConfig(
        n=n,
        phase_model=PhaseErrorModel(bits),
        hop_a_r=spec.hop_a_r,
        hop_r_b=spec.hop_r_b,
        hop_r_e=spec.hop_r_e,
        gamma0_b=db_to_linear(g0b_db),
        gamma0_e=db_to_linear(spec.g0e_db),
        rate_rs=spec.rate_rs,
    )


def _closed_form_value(spec: SweepSpec, cfg: SystemConfig, scenario: Scenario, asymptotic: bool) -> float:
    leg = legitimate_params(cfg, moment_set(cfg), scenario)
    eve = eavesdropper_params(cfg)
    if spec.metric == METRIC_SOP:
        return metrics.sop(leg, eve, cfg.rate_rs, asymptotic, spec.inversion)
    if spec.metric == METRIC_ASC:
        if asymptotic:
            return metrics.asc_asymptote(leg, eve, spec.inversion)
        return metrics.asc(leg, eve, spec.inversion)
    return leg.mean_snr


def evaluate_point(
    spec: SweepSpec, n: int, bits: int | None, g0b_db: float, batch: TrialBatch | None
) -> list[SweepRow]:
    """Rows of every resolved variant at one grid point."""
    cfg = scenario_config(spec, n, bits, g0b_db)
    rows: list[SweepRow] = []
    for label, scenario, asymptotic in resolve_variants(spec.variants, bits):
        stderr: float | None = None
        flagged = False
        try:
            if scenario is None:
                if batch is None:
                    raise LrsSecrecyError("Monte Carlo requested without a simulated batch")
                scaled = batch.with_snr(cfg.gamma0_b, cfg.gamma0_e)
                if spec.metric == METRIC_SOP:
                    estimate = empirical_sop(scaled, cfg.rate_rs)
                elif spec.metric == METRIC_SNR:
                    estimate = empirical_mean_snr(scaled)
                else:
                    estimate = empirical_asc(scaled)
                value, stderr = estimate.value, estimate.stderr
                if spec.metric == METRIC_SOP and value < resolvable_floor(estimate.trials):
                    flagged = True
                    _LOGGER.warning(
                        f"MC SOP {value:.3g} at n={n}, bits={format_bits(bits)}, g0b={g0b_db} dB "
                        f"is below the resolvable floor {resolvable_floor(estimate.trials):.3g}"
                    )
            else:
                value = _closed_form_value(spec, cfg, scenario, asymptotic)
        except Exception:
            _LOGGER.error(
                f"Failed to evaluate {label} at n={n}, bits={format_bits(bits)}, g0b={g0b_db} dB",
                exc_info=True,
            )
            value, stderr, flagged = math.nan, None, True
        rows.append(SweepRow(n, bits, g0b_db, label, value, stderr, flagged))
    return rows


class SweepCoordinator:
    """
    Evaluates a sweep grid on an executor and reports each finished
    (n, bits) group through an async callback.

    Grid points run concurrently; rows are assembled in grid order. Monte
    Carlo batches are simulated once per (n, bits) and rescaled per point.
    """

    def __init__(
        self,
        spec: SweepSpec,
        data_update_callback: Callable[[dict[str, Any]], Coroutine[Any, Any, None]] | None = None,
        executor: Executor | None = None,
    ):
        self.spec = spec
        self.data_update_callback = data_update_callback
        self._executor = executor
        self._current_schedule_state: list[str] = [STATE_INITIALIZING]
        self._is_running = False

    @property
    def state(self) -> str:
        return self._current_schedule_state[0]

    @property
    def is_running(self) -> bool:
        return self._is_running

    def start(self) -> None:
        if self._is_running:
            _LOGGER.warning("Sweep coordinator already running.")
            return
        self._is_running = True
        self._current_schedule_state[0] = STATE_RUNNING
        _LOGGER.info(
            f"Sweep coordinator starting: metric={self.spec.metric}, variants={list(self.spec.variants)}, "
            f"n={list(self.spec.n_list)}, bits={[format_bits(b) for b in self.spec.bits_list]}, "
            f"{len(self.spec.g0b_db)} g0b points"
        )

    def stop(self) -> None:
        self._is_running = False
        if self._current_schedule_state[0] != STATE_DONE:
            _LOGGER.info("Stopping sweep coordinator; remaining groups are skipped.")
            self._current_schedule_state[0] = STATE_STOPPED

    async def _simulate(self, loop: asyncio.AbstractEventLoop, n: int, bits: int | None) -> TrialBatch | None:
        if VARIANT_MC not in self.spec.variants:
            return None
        # reference SNRs do not affect the channel draws; points rescale the batch
        cfg = scenario_config(self.spec, n, bits, 0.0)
        try:
            return await loop.run_in_executor(
                self._executor,
                lambda: simulate_batch(
                    cfg,
                    seed=self.spec.seed,
                    trials=self.spec.trials,
                    workers=self.spec.workers,
                    chunk_elements=self.spec.chunk_elements,
                ),
            )
        except LrsSecrecyError:
            _LOGGER.error(f"Monte Carlo simulation failed for n={n}, bits={format_bits(bits)}", exc_info=True)
            return None

    async def _run_group(self, loop: asyncio.AbstractEventLoop, n: int, bits: int | None) -> list[SweepRow]:
        batch = await self._simulate(loop, n, bits)
        jobs = [
            loop.run_in_executor(self._executor, evaluate_point, self.spec, n, bits, g0b_db, batch)
            for g0b_db in self.spec.g0b_db
        ]
        # gather keeps submission order whatever the completion order
        per_point = await asyncio.gather(*jobs)
        return [row for rows in per_point for row in rows]

    async def async_run(self) -> SweepResult:
        """Run the whole grid and return the rows in grid order."""
        if not self._is_running:
            self.start()
        result = SweepResult(metric=self.spec.metric)
        loop = asyncio.get_running_loop()

        for n in self.spec.n_list:
            for bits in self.spec.bits_list:
                if not self._is_running:
                    _LOGGER.warning(f"Sweep stopped before n={n}, bits={format_bits(bits)}")
                    return result
                rows = await self._run_group(loop, n, bits)
                result.rows.extend(rows)
                _LOGGER.debug(f"Finished group n={n}, bits={format_bits(bits)}: {len(rows)} rows")
                if self.data_update_callback is not None:
                    await self.data_update_callback({"n": n, "bits": bits, "rows": rows})

        self._is_running = False
        self._current_schedule_state[0] = STATE_DONE
        _LOGGER.info(
            f"Sweep finished with {len(result.rows)} rows, {len(result.flagged)} flagged, "
            f"{len(result.failed)} failed"
        )
        return result
