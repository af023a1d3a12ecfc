"""Tests for the special_fn module."""
import math

from hypothesis import given, strategies as st
import pytest
from scipy import special

from lrssecrecy.exceptions import DomainError
from lrssecrecy.special_fn import (
    exp_integral_e1,
    exp_integral_e1_scaled,
    gaussian_q,
    kummer_1f1,
    log_marcum_q_half,
    marcum_q_half,
    marcum_q_half_complement,
    reg_gamma_lower,
    reg_gamma_upper,
)

finite_args = st.floats(min_value=0.0, max_value=8.0, allow_nan=False)


def test_gaussian_q_values():
    """Test the Gaussian tail at a few known points."""
    assert gaussian_q(0.0) == 0.5
    assert gaussian_q(1.96) == pytest.approx(0.024997895148220435, rel=1e-9)
    assert gaussian_q(-1.96) == pytest.approx(1.0 - 0.024997895148220435, rel=1e-12)


def test_marcum_q_half_edges():
    """Test Q_0.5 with a zero argument."""
    # a = 0 reduces to a two-sided Gaussian tail
    assert marcum_q_half(0.0, 1.0) == pytest.approx(2.0 * gaussian_q(1.0), rel=1e-12)
    assert marcum_q_half(2.5, 0.0) == pytest.approx(1.0, abs=1e-15)


@given(a=finite_args, b=finite_args)
def test_marcum_q_half_and_complement_sum_to_one(a, b):
    """Test that the complement is consistent with the function."""
    assert marcum_q_half(a, b) + marcum_q_half_complement(a, b) == pytest.approx(1.0, abs=1e-12)


@given(
    a=st.floats(min_value=0.0, max_value=5.0, allow_nan=False),
    b=st.floats(min_value=0.0, max_value=5.0, allow_nan=False),
)
def test_log_marcum_q_half_matches_log(a, b):
    """Test the log-domain Marcum function where the plain one is representable."""
    assert log_marcum_q_half(a, b) == pytest.approx(math.log(marcum_q_half(a, b)), rel=1e-9, abs=1e-12)


def test_log_marcum_q_half_deep_tail():
    """Test that the log stays finite where Q_0.5 underflows."""
    assert marcum_q_half(1.0, 40.0) == 0.0
    value = log_marcum_q_half(1.0, 40.0)
    assert math.isfinite(value)
    assert value < -700.0


@pytest.mark.parametrize("func", [marcum_q_half, marcum_q_half_complement, log_marcum_q_half])
def test_marcum_domain_errors(func):
    """Test rejection of negative and non-finite arguments."""
    with pytest.raises(DomainError):
        func(-1.0, 1.0)
    with pytest.raises(DomainError):
        func(1.0, math.nan)


@given(
    s=st.floats(min_value=0.05, max_value=30.0, allow_nan=False),
    x=st.floats(min_value=0.0, max_value=60.0, allow_nan=False),
)
def test_regularized_gammas_are_complementary(s, x):
    """Test that lower and upper regularized gammas add to one."""
    assert reg_gamma_lower(s, x) + reg_gamma_upper(s, x) == pytest.approx(1.0, abs=1e-12)


def test_regularized_gamma_domain():
    """Test gamma shape and argument checks."""
    with pytest.raises(DomainError):
        reg_gamma_upper(0.0, 1.0)
    with pytest.raises(DomainError):
        reg_gamma_lower(1.0, -0.5)


def test_exp_integral():
    """Test E1 and its scaled form on both sides of the switch point."""
    assert exp_integral_e1(1.0) == pytest.approx(0.21938393439552029, rel=1e-12)
    assert exp_integral_e1_scaled(1.0) == pytest.approx(math.e * 0.21938393439552029, rel=1e-12)
    # asymptotic series 1/x (1 - 1/x + 2/x^2 - 6/x^3 + 24/x^4)
    assert exp_integral_e1_scaled(100.0) == pytest.approx(0.0099019424, rel=1e-6)
    below = exp_integral_e1_scaled(49.999)
    above = exp_integral_e1_scaled(50.001)
    assert below == pytest.approx(above, rel=1e-4)
    with pytest.raises(DomainError):
        exp_integral_e1(0.0)


@pytest.mark.parametrize("z", [0.0, -0.3, -1.0, -5.0, -20.0])
def test_kummer_matches_scipy(z):
    """Test the Taylor series against scipy's hyp1f1."""
    assert kummer_1f1(-0.5, 1.0, z) == pytest.approx(float(special.hyp1f1(-0.5, 1.0, z)), rel=1e-10)


def test_kummer_value_at_minus_one():
    """Test 1F1(-1/2; 1; -1) against its Bessel closed form."""
    expected = math.exp(-0.5) * (2.0 * special.i0(0.5) + special.i1(0.5))
    assert kummer_1f1(-0.5, 1.0, -1.0) == pytest.approx(expected, rel=1e-12)
    assert kummer_1f1(-0.5, 1.0, -1.0) == pytest.approx(1.44649, abs=1e-4)


def test_kummer_rejects_pole():
    """Test that nonpositive integer b is rejected."""
    with pytest.raises(DomainError):
        kummer_1f1(0.5, -2.0, 1.0)
