"""Fixtures for testing."""

import pytest

from lrssecrecy.channel import (
    HopFading,
    PhaseErrorModel,
    SystemConfig,
    reference_scenario,
)
from lrssecrecy.config import SweepSpec
from lrssecrecy.montecarlo import simulate_batch


@pytest.fixture
def reference_cfg():
    """Rician source and receiver hops, 2-bit phase errors, n=16."""
    return reference_scenario(16, 2, 1.0, 10.0)


@pytest.fixture
def ideal_cfg():
    """Same scenario without phase errors."""
    return reference_scenario(16, None, 1.0, 10.0)


@pytest.fixture
def deterministic_source_cfg():
    """Unit-magnitude source hop: the eavesdropper channel is exactly Gaussian."""
    return SystemConfig(
        n=16,
        phase_model=PhaseErrorModel(2),
        hop_a_r=HopFading.deterministic(),
        hop_r_b=HopFading.rician(1.0),
        hop_r_e=HopFading.rayleigh(),
    )


@pytest.fixture(scope="session")
def reference_batch():
    """1e5 trials of the n=64, 2-bit scenario at unit reference SNRs."""
    return simulate_batch(reference_scenario(64, 2, 1.0, 1.0), seed=7, trials=100_000)


@pytest.fixture
def small_spec():
    """Closed-form only sweep over two bit widths and two SNR points."""
    return SweepSpec(
        metric="sop",
        variants=("NR",),
        n_list=(4,),
        bits_list=(2, None),
        g0b_db=(0.0, 10.0),
        trials=2_000,
    )
