"""Tests for the channel module."""
import math

from hypothesis import given, strategies as st
import pytest
from scipy import special

from lrssecrecy.channel import (
    Beckmann,
    FoldedNormal,
    HopFading,
    Nakagami,
    PhaseErrorModel,
    Scenario,
    SystemConfig,
    circular_moments,
    eavesdropper_params,
    gaussian_parameters,
    legitimate_params,
    mean_magnitude,
    moment_set,
    reference_scenario,
    snr_ratio_scaling,
)
from lrssecrecy.exceptions import ChannelError, DomainError


def test_circular_moments():
    """Test phi1 and phi2 for perfect, 1-bit and 2-bit phase compensation."""
    assert circular_moments(PhaseErrorModel.none()) == (1.0, 1.0)
    phi1, phi2 = circular_moments(PhaseErrorModel.quantized(1))
    assert phi1 == pytest.approx(2.0 / math.pi, rel=1e-12)
    assert phi2 == pytest.approx(0.0, abs=1e-15)
    phi1, phi2 = circular_moments(PhaseErrorModel.quantized(2))
    assert phi1 == pytest.approx(math.sin(math.pi / 4) / (math.pi / 4), rel=1e-12)
    assert phi2 == pytest.approx(2.0 / math.pi, rel=1e-12)


def test_phase_error_model():
    """Test the half-width and the bit count check."""
    assert PhaseErrorModel(3).half_width == pytest.approx(math.pi / 8)
    assert PhaseErrorModel().half_width == 0.0
    assert not PhaseErrorModel().has_errors
    with pytest.raises(DomainError):
        PhaseErrorModel(0)


@pytest.mark.parametrize("k", [0.0, 0.5, 1.0, 3.0, 10.0, 19.0])
def test_mean_magnitude_rician(k):
    """Test E|H| against the hypergeometric closed form."""
    expected = math.sqrt(math.pi / (4.0 * (k + 1.0))) * special.hyp1f1(-0.5, 1.0, -k)
    assert mean_magnitude(HopFading.rician(k)) == pytest.approx(expected, rel=1e-10)


def test_mean_magnitude_special_cases():
    """Test Rayleigh, deterministic and the series/Bessel switch."""
    assert mean_magnitude(HopFading.rayleigh()) == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-12)
    assert mean_magnitude(HopFading.deterministic()) == 1.0
    below = mean_magnitude(HopFading.rician(19.999))
    above = mean_magnitude(HopFading.rician(20.001))
    assert below == pytest.approx(above, rel=1e-5)
    assert 0.999 < mean_magnitude(HopFading.rician(1e4)) < 1.0


def test_fourth_moment():
    """Test E|H|^4 of the hop laws."""
    assert HopFading.rician(1.0).fourth_moment == pytest.approx(7.0 / 4.0)
    assert HopFading.rayleigh().fourth_moment == pytest.approx(2.0)
    assert HopFading.deterministic().fourth_moment == 1.0


def test_invalid_scenarios():
    """Test domain checks of the scenario types."""
    with pytest.raises(DomainError):
        HopFading.rician(-1.0)
    with pytest.raises(DomainError):
        SystemConfig(n=0)
    with pytest.raises(DomainError):
        SystemConfig(n=4, gamma0_b=0.0)
    with pytest.raises(DomainError):
        SystemConfig(n=4, rate_rs=-1.0)
    with pytest.raises(DomainError):
        Nakagami(m=0.0, mean_snr=1.0)
    with pytest.raises(DomainError):
        Beckmann(k=-1.0, q=1.0, mean_snr=1.0)


def test_zero_rician_factor_is_allowed():
    """Test that K = 0 laws can be built."""
    assert Beckmann(k=0.0, q=1.0, mean_snr=2.0).k == 0.0
    assert FoldedNormal(k=0.0, mean_snr=2.0).scenario is Scenario.FR


def test_legitimate_params_mean_snr(reference_cfg, ideal_cfg):
    """Test that FR, BR and NR use the documented mean SNRs."""
    n = reference_cfg.n
    mom = moment_set(reference_cfg)
    x = mom.coherent_fraction
    br = legitimate_params(reference_cfg, mom, "BR")
    assert isinstance(br, Beckmann)
    assert br.mean_snr == pytest.approx(n * n * reference_cfg.gamma0_b * (x + (1 - x) / n))
    assert br.k == pytest.approx(n * x / (1 - x))
    assert br.q == pytest.approx(math.sqrt((1 + mom.phi2 - 2 * x) / (1 - mom.phi2)))

    nr = legitimate_params(reference_cfg, mom, Scenario.NR)
    assert isinstance(nr, Nakagami)
    assert nr.mean_snr == pytest.approx(n * n * reference_cfg.gamma0_b * x)
    assert nr.m == pytest.approx(0.5 * n * x / (1 + mom.phi2 - 2 * x))

    fr = legitimate_params(ideal_cfg, moment_set(ideal_cfg), Scenario.FR)
    assert isinstance(fr, FoldedNormal)


def test_legitimate_params_rejects_mismatched_variants(reference_cfg, ideal_cfg):
    """Test FR with phase errors and BR without them."""
    with pytest.raises(ChannelError):
        legitimate_params(reference_cfg, moment_set(reference_cfg), Scenario.FR)
    with pytest.raises(ChannelError):
        legitimate_params(ideal_cfg, moment_set(ideal_cfg), Scenario.BR)


def test_deterministic_links_are_rejected():
    """Test that a_b = 1 has no finite K."""
    cfg = SystemConfig(
        n=4,
        hop_a_r=HopFading.deterministic(),
        hop_r_b=HopFading.deterministic(),
    )
    with pytest.raises(ChannelError):
        legitimate_params(cfg, moment_set(cfg), Scenario.FR)


def test_eavesdropper_and_ratio(reference_cfg):
    """Test the eavesdropper mean and the SNR ratio scaling."""
    eve = eavesdropper_params(reference_cfg)
    assert eve.mean_snr == pytest.approx(reference_cfg.n * reference_cfg.gamma0_e)
    leg = legitimate_params(reference_cfg, moment_set(reference_cfg), Scenario.BR)
    assert snr_ratio_scaling(reference_cfg, moment_set(reference_cfg)) == pytest.approx(leg.mean_snr / eve.mean_snr)


@given(
    n=st.integers(min_value=1, max_value=1024),
    bits=st.one_of(st.none(), st.integers(min_value=1, max_value=8)),
    k=st.floats(min_value=0.0, max_value=50.0, allow_nan=False),
)
def test_gaussian_parameters_reproduce_mean_gain(n, bits, k):
    """Test that mu^2 + var_U + var_V equals E|H_b|^2 = x + (1 - x) / n."""
    cfg = reference_scenario(n, bits, 1.0, 1.0, k_rice=k)
    mom = moment_set(cfg)
    mu, var_u, var_v = gaussian_parameters(cfg, mom)
    x = mom.coherent_fraction
    assert var_u >= 0.0
    assert var_v >= 0.0
    assert mu * mu + var_u + var_v == pytest.approx(x + (1 - x) / n, rel=1e-12)


def test_reference_scenario_with_snr():
    """Test that with_snr keeps everything but the reference SNRs."""
    cfg = reference_scenario(8, 2, 1.0, 10.0)
    other = cfg.with_snr(5.0)
    assert other.gamma0_b == 5.0
    assert other.gamma0_e == 10.0
    assert other.n == 8
    assert cfg.tau == pytest.approx(2.0)
