"""Tests for the sweep coordinator and its CSV output."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
import math
from unittest.mock import AsyncMock, patch

import pytest

from lrssecrecy.channel import Scenario
from lrssecrecy.exceptions import NumericalError
from lrssecrecy.montecarlo import simulate_batch
from lrssecrecy.sweep import (
    SweepCoordinator,
    SweepResult,
    SweepRow,
    async_run_sweep,
    evaluate_point,
    resolve_variants,
    run_sweep,
    scenario_config,
)
from lrssecrecy.sweep.coordinator import STATE_DONE, STATE_INITIALIZING, STATE_RUNNING, STATE_STOPPED


@pytest.fixture
def mock_callback():
    """Mock group callback."""
    return AsyncMock()


@pytest.fixture
def coordinator(small_spec, mock_callback):
    """Create a SweepCoordinator on a small thread pool."""
    executor = ThreadPoolExecutor(max_workers=2)
    yield SweepCoordinator(small_spec, mock_callback, executor)
    executor.shutdown(wait=True)


def test_resolve_variants_for_ideal_phases():
    """Test that BR requests turn into FR without phase errors."""
    resolved = resolve_variants(("FR", "BR", "NR", "MC", "asymptotic-BR"), None)
    assert resolved == [
        ("FR", Scenario.FR, False),
        ("NR", Scenario.NR, False),
        ("MC", None, False),
        ("asymptotic-FR", Scenario.FR, True),
    ]


def test_resolve_variants_for_quantized_phases(caplog):
    """Test that FR requests turn into BR with phase errors, with a warning."""
    resolved = resolve_variants(("FR", "asymptotic-NR"), 2)
    assert resolved == [("BR", Scenario.BR, False), ("asymptotic-NR", Scenario.NR, True)]
    assert "does not apply" in caplog.text


def test_scenario_config_converts_db(small_spec):
    """Test the dB to linear conversion of a grid point."""
    cfg = scenario_config(small_spec, 4, 2, 20.0)
    assert cfg.gamma0_b == pytest.approx(100.0)
    assert cfg.gamma0_e == pytest.approx(10.0)
    assert cfg.phase_model.bits == 2
    assert cfg.rate_rs == small_spec.rate_rs


def test_evaluate_point_flags_missing_batch(small_spec, caplog):
    """Test that MC without a batch yields a failed, flagged row."""
    spec = replace(small_spec, variants=("MC",))
    (row,) = evaluate_point(spec, 4, 2, 0.0, None)
    assert row.failed
    assert row.flagged
    assert "Failed to evaluate MC" in caplog.text


def test_evaluate_point_records_numerical_failures(small_spec):
    """Test that a raising closed form does not drop the row."""
    with patch("lrssecrecy.sweep.coordinator.metrics.sop", side_effect=NumericalError("boom")):
        (row,) = evaluate_point(small_spec, 4, 2, 0.0, None)
    assert math.isnan(row.value)
    assert row.variant == "NR"


def test_asymptotic_asc_uses_capacity_difference_for_beckmann(small_spec):
    """Test that the asymptotic BR ASC is C_B - C_E and asymptotic NR is log2(mean_b) - t_Z - C_E."""
    spec = replace(small_spec, metric="asc", variants=("asymptotic-BR", "asymptotic-NR"))
    with (
        patch("lrssecrecy.sweep.coordinator.metrics.asc_high_snr", return_value=1.25) as mock_high,
        patch("lrssecrecy.sweep.coordinator.metrics.asc_asymptotic", return_value=0.75) as mock_severity,
    ):
        beckmann, nakagami = evaluate_point(spec, 4, 2, 10.0, None)
    assert (beckmann.variant, beckmann.value) == ("asymptotic-BR", 1.25)
    assert (nakagami.variant, nakagami.value) == ("asymptotic-NR", 0.75)
    assert mock_high.call_count == 1
    assert mock_severity.call_count == 1


def test_evaluate_point_flags_unresolvable_mc(small_spec):
    """Test that tiny MC SOPs are flagged but kept."""
    spec = replace(small_spec, variants=("MC",), trials=500)
    batch = simulate_batch(scenario_config(spec, 4, 2, 0.0), seed=spec.seed, trials=spec.trials)
    (row,) = evaluate_point(spec, 4, 2, 60.0, batch)
    assert row.value == 0.0
    assert row.flagged
    assert not row.failed


async def test_start_stop(coordinator):
    """Test coordinator state transitions."""
    assert coordinator.state == STATE_INITIALIZING
    coordinator.start()
    assert coordinator.is_running
    assert coordinator.state == STATE_RUNNING
    coordinator.stop()
    assert not coordinator.is_running
    assert coordinator.state == STATE_STOPPED


async def test_async_run_reports_each_group(coordinator, mock_callback):
    """Test that every (n, bits) group reaches the callback in grid order."""
    result = await coordinator.async_run()
    assert coordinator.state == STATE_DONE
    assert [(row.bits, row.g0b_db) for row in result.rows] == [(2, 0.0), (2, 10.0), (None, 0.0), (None, 10.0)]
    assert mock_callback.await_count == 2
    first = mock_callback.await_args_list[0].args[0]
    assert first["n"] == 4
    assert first["bits"] == 2
    assert len(first["rows"]) == 2


async def test_async_run_stops_between_groups(coordinator, mock_callback):
    """Test that a stop request skips the remaining groups."""

    async def stop_after_first(update):
        coordinator.stop()

    mock_callback.side_effect = stop_after_first
    result = await coordinator.async_run()
    assert len(result.rows) == 2
    assert coordinator.state == STATE_STOPPED


async def test_async_run_sweep_with_monte_carlo(small_spec):
    """Test MC rows next to closed-form rows."""
    spec = replace(small_spec, variants=("NR", "MC"), bits_list=(2,), g0b_db=(0.0,))
    result = await async_run_sweep(spec)
    assert [row.variant for row in result.rows] == ["NR", "MC"]
    assert result.rows[0].stderr is None
    assert result.rows[1].stderr > 0.0


def test_run_sweep_is_deterministic(small_spec):
    """Test byte-identical CSV for a fixed seed."""
    spec = replace(small_spec, variants=("NR", "MC"), workers=2)
    first = run_sweep(spec).to_csv()
    second = run_sweep(spec).to_csv()
    assert first == second
    assert first.splitlines()[0] == "n,bits,g0b_dB,variant,value,stderr"


def test_sweep_result_csv(tmp_path):
    """Test CSV rendering of values, missing errors and bit widths."""
    result = SweepResult(
        metric="sop",
        rows=[
            SweepRow(4, None, 0.0, "FR", 0.25),
            SweepRow(4, 2, 5.0, "MC", 0.125, 0.001, flagged=True),
        ],
    )
    assert result.to_csv().splitlines() == [
        "n,bits,g0b_dB,variant,value,stderr",
        "4,inf,0,FR,0.25,",
        "4,2,5,MC,0.125,0.001",
    ]
    assert result.flagged == [result.rows[1]]
    assert result.failed == []
    path = tmp_path / "sop.csv"
    result.save(path)
    assert path.read_text() == result.to_csv()
