"""
Scalar special functions used by the closed-form secrecy metrics.

Every function validates its domain and raises DomainError instead of
returning NaN, so a bad argument is reported at the call that produced it.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy import special

from .exceptions import DomainError, NumericalError

_LOGGER = logging.getLogger(__name__)

_SQRT2 = math.sqrt(2.0)
_KUMMER_MAX_TERMS = 2000
_KUMMER_TOL = 1e-16
# exp(x) * E1(x) switches to the U(1, 1, x) representation above this point
_E1_SCALED_SWITCH = 50.0


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    return value


def _clamp_probability(value: float) -> float:
    return min(1.0, max(0.0, float(value)))


def gaussian_q(x: float) -> float:
    """Gaussian tail probability Q(x) = 1 - Phi(x)."""
    x = _require_finite("x", x)
    return _clamp_probability(0.5 * special.erfc(x / _SQRT2))


def marcum_q_half(a: float, b: float) -> float:
    """
    Marcum Q-function of order 0.5.

    Uses Q_0.5(a, b) = Q(b - a) + Q(b + a).
    """
    a = _require_finite("a", a)
    b = _require_finite("b", b)
    if a < 0 or b < 0:
        raise DomainError(f"Marcum Q arguments must be nonnegative, got a={a}, b={b}")
    return _clamp_probability(gaussian_q(b - a) + gaussian_q(b + a))


def marcum_q_half_complement(a: float, b: float) -> float:
    """
    Return 1 - Q_0.5(a, b) without cancellation.

    1 - Q(b - a) - Q(b + a) = Q(a - b) - Q(a + b), which keeps full relative
    accuracy when both tails are tiny.
    """
    a = _require_finite("a", a)
    b = _require_finite("b", b)
    if a < 0 or b < 0:
        raise DomainError(f"Marcum Q arguments must be nonnegative, got a={a}, b={b}")
    return _clamp_probability(gaussian_q(a - b) - gaussian_q(a + b))


def log_marcum_q_half(a: float, b: float) -> float:
    """Natural log of Q_0.5(a, b), finite where the function itself underflows."""
    a = _require_finite("a", a)
    b = _require_finite("b", b)
    if a < 0 or b < 0:
        raise DomainError(f"Marcum Q arguments must be nonnegative, got a={a}, b={b}")
    return float(np.logaddexp(special.log_ndtr(a - b), special.log_ndtr(-a - b)))


def _check_gamma_args(s: float, x: float) -> tuple[float, float]:
    s = _require_finite("s", s)
    x = _require_finite("x", x)
    if s <= 0:
        raise DomainError(f"gamma shape must be positive, got {s}")
    if x < 0:
        raise DomainError(f"gamma argument must be nonnegative, got {x}")
    return s, x


def reg_gamma_upper(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Gamma(s, x) / Gamma(s)."""
    s, x = _check_gamma_args(s, x)
    return _clamp_probability(special.gammaincc(s, x))


def reg_gamma_lower(s: float, x: float) -> float:
    """Regularized lower incomplete gamma gamma(s, x) / Gamma(s)."""
    s, x = _check_gamma_args(s, x)
    return _clamp_probability(special.gammainc(s, x))


def exp_integral_e1(x: float) -> float:
    """Exponential integral E1(x) = int_x^inf e^-t / t dt."""
    x = _require_finite("x", x)
    if x <= 0:
        raise DomainError(f"E1 requires a positive argument, got {x}")
    return float(special.exp1(x))


def exp_integral_e1_scaled(x: float) -> float:
    """
    Return exp(x) * E1(x).

    For large x the product is evaluated as Tricomi U(1, 1, x) so neither
    factor overflows or underflows on its own.
    """
    x = _require_finite("x", x)
    if x <= 0:
        raise DomainError(f"E1 requires a positive argument, got {x}")
    if x < _E1_SCALED_SWITCH:
        return float(math.exp(x) * special.exp1(x))
    return float(special.hyperu(1.0, 1.0, x))


def kummer_1f1(a: float, b: float, z: float) -> float:
    """
    Confluent hypergeometric function 1F1(a; b; z) by direct Taylor series.

    The sum stops once the term ratio falls below 1e-16 of the running sum.
    Intended for moderate |z|; here it only sees a = -1/2, b = 1, z <= 0.
    """
    a = _require_finite("a", a)
    b = _require_finite("b", b)
    z = _require_finite("z", z)
    if b <= 0 and float(b).is_integer():
        raise DomainError(f"1F1 is undefined for nonpositive integer b, got {b}")

    total = 1.0
    term = 1.0
    for k in range(_KUMMER_MAX_TERMS):
        term *= (a + k) * z / ((b + k) * (k + 1))
        total += term
        if term == 0.0 or abs(term) <= _KUMMER_TOL * abs(total):
            _LOGGER.debug(f"1F1({a}; {b}; {z}) converged after {k + 1} terms")
            return total
    raise NumericalError(
        f"1F1({a}; {b}; {z}) series did not converge in {_KUMMER_MAX_TERMS} terms"
    )
