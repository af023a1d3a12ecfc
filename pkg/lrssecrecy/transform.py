"""
Transform-domain machinery for the squared Beckmann legitimate SNR.

The SNR is gamma = (mu + X)^2 + Y^2 with X ~ N(0, var_x), Y ~ N(0, var_y).
Its MGF is known in closed form; the CDF and the upper-incomplete MGF are
recovered from it by numerical Laplace inversion with Euler summation.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy import special

from .const import (
    DEFAULT_INVERSION_A,
    DEFAULT_INVERSION_ATOL,
    DEFAULT_INVERSION_EULER_TERMS,
    DEFAULT_INVERSION_MAX_TERMS,
    DEFAULT_INVERSION_RTOL,
    DEFAULT_INVERSION_TERMS,
)
from .exceptions import DomainError, InversionError
from .special_fn import marcum_q_half_complement

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class InversionSettings:
    """
    Parameters of the Euler-summation inversion.

    a sets the discretization error to roughly exp(-a); terms is the number
    of plain partial-sum terms and euler_terms the length of the binomial
    average applied after them. A failed error check doubles terms up to
    max_terms before giving up.
    """

    a: float = DEFAULT_INVERSION_A
    terms: int = DEFAULT_INVERSION_TERMS
    euler_terms: int = DEFAULT_INVERSION_EULER_TERMS
    rtol: float = DEFAULT_INVERSION_RTOL
    atol: float = DEFAULT_INVERSION_ATOL
    max_terms: int = DEFAULT_INVERSION_MAX_TERMS

    def __post_init__(self) -> None:
        if self.a <= 0 or self.terms < 1 or self.euler_terms < 1 or self.max_terms < self.terms:
            raise DomainError(f"invalid inversion settings {self}")


DEFAULT_SETTINGS = InversionSettings()


@dataclass(frozen=True)
class BeckmannComponents:
    """In-phase mean and component variances, all in SNR units."""

    mu_x: float
    var_x: float
    var_y: float

    def __post_init__(self) -> None:
        if not (self.var_x > 0 and math.isfinite(self.var_x)):
            raise DomainError(f"var_x must be positive, got {self.var_x}")
        if not (self.var_y >= 0 and math.isfinite(self.var_y)):
            raise DomainError(f"var_y must be nonnegative, got {self.var_y}")
        if not math.isfinite(self.mu_x):
            raise DomainError(f"mu_x must be finite, got {self.mu_x}")

    @property
    def mean_snr(self) -> float:
        return self.mu_x**2 + self.var_x + self.var_y

    @property
    def k(self) -> float:
        return self.mu_x**2 / (self.var_x + self.var_y)

    @property
    def q(self) -> float:
        if self.var_y == 0:
            return math.inf
        return math.sqrt(self.var_x / self.var_y)

    @property
    def second_moment(self) -> float:
        """E[gamma^2] from Gaussian moment algebra."""
        mu2 = self.mu_x**2
        vx, vy = self.var_x, self.var_y
        return mu2 * mu2 + (vx + vy) ** 2 + 2 * vx * vx + 2 * vy * vy + 2 * mu2 * (3 * vx + vy)


def beckmann_from_kq(k: float, q: float, mean_snr: float) -> BeckmannComponents:
    """Components with mu^2 = mean K/(1+K), var_x + var_y = mean/(1+K), var_x/var_y = q^2."""
    if not (k >= 0 and q > 0 and mean_snr > 0):
        raise DomainError(f"need K >= 0, q > 0, mean > 0; got K={k}, q={q}, mean={mean_snr}")
    diffuse = mean_snr / (1.0 + k)
    q2 = q * q
    return BeckmannComponents(
        mu_x=math.sqrt(mean_snr * k / (1.0 + k)),
        var_x=diffuse * q2 / (1.0 + q2),
        var_y=diffuse / (1.0 + q2),
    )


def folded_normal_components(k: float, mean_snr: float) -> BeckmannComponents:
    """The q -> infinity limit: a real Gaussian with K = mu^2 / var."""
    if not (k >= 0 and mean_snr > 0):
        raise DomainError(f"need K >= 0, mean > 0; got K={k}, mean={mean_snr}")
    return BeckmannComponents(
        mu_x=math.sqrt(mean_snr * k / (1.0 + k)),
        var_x=mean_snr / (1.0 + k),
        var_y=0.0,
    )


def _mgf_values(c: BeckmannComponents, s: np.ndarray) -> np.ndarray:
    """MGF at real or complex points inside the convergence strip."""
    dx = 1.0 - 2.0 * s * c.var_x
    dy = 1.0 - 2.0 * s * c.var_y
    # product of principal roots keeps the branch analytic for Re(s) < strip
    return np.exp(s * c.mu_x**2 / dx) / (np.sqrt(dx) * np.sqrt(dy))


def mgf(c: BeckmannComponents, s: float) -> float:
    """E[exp(s gamma)] for real s below 1 / (2 max(var_x, var_y))."""
    s = float(s)
    strip = 1.0 / (2.0 * max(c.var_x, c.var_y))
    if not math.isfinite(s) or s >= strip:
        raise DomainError(f"s={s} lies outside the MGF strip s < {strip}")
    return float(_mgf_values(c, np.asarray(s, dtype=float)))


def _euler_estimate(
    fhat: Callable[[np.ndarray], np.ndarray], t: float, settings: InversionSettings, terms: int
) -> tuple[float, np.ndarray]:
    m = settings.euler_terms
    k = np.arange(terms + m + 1)
    p = (settings.a + 2j * math.pi * k) / (2.0 * t)
    values = np.real(fhat(p))
    values[0] *= 0.5
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    partial = np.cumsum(signs * values)
    weights = special.comb(m, np.arange(m + 1)) / 2.0**m
    averaged = float(np.dot(weights, partial[terms : terms + m + 1]))
    return math.exp(settings.a / 2.0) / t * averaged, values


def invert_laplace(
    fhat: Callable[[np.ndarray], np.ndarray],
    t: float,
    settings: InversionSettings = DEFAULT_SETTINGS,
) -> float:
    """
    Invert a Laplace transform at t > 0 with the Euler algorithm.

    The Bromwich integral is discretized with the trapezoidal rule on the
    line Re(p) = a / (2t) and the resulting alternating series is
    accelerated by binomial averaging of the last euler_terms partial sums.
    Estimates with terms and terms + 1 base terms must agree to
    rtol * |f| + atol. On failure the base term count is doubled until the
    check passes; past max_terms InversionError is raised.
    """
    if not (t > 0 and math.isfinite(t)):
        raise DomainError(f"inversion point must be positive, got {t}")
    terms = settings.terms
    while True:
        estimate, _ = _euler_estimate(fhat, t, settings, terms)
        check, _ = _euler_estimate(fhat, t, settings, terms + 1)
        error = abs(estimate - check)
        if math.isfinite(estimate) and error <= settings.rtol * abs(estimate) + settings.atol:
            _LOGGER.debug(
                f"Laplace inversion at t={t:g} with {terms} terms: {estimate:.16g} "
                f"(error estimate {error:.3g})"
            )
            return estimate
        if 2 * terms > settings.max_terms:
            break
        terms *= 2
    raise InversionError(
        "Laplace inversion did not meet tolerance",
        t=t,
        estimate=estimate,
        error_estimate=error,
        terms=terms,
        settings=settings,
    )


def cdf(
    c: BeckmannComponents, z: float, settings: InversionSettings = DEFAULT_SETTINGS
) -> float:
    """P(gamma <= z)."""
    z = float(z)
    if not (z >= 0 and math.isfinite(z)):
        raise DomainError(f"CDF argument must be nonnegative, got {z}")
    if z == 0:
        return 0.0
    if c.var_y == 0:
        a0 = abs(c.mu_x) / math.sqrt(c.var_x)
        b0 = math.sqrt(z / c.var_x)
        return marcum_q_half_complement(a0, b0)
    value = invert_laplace(lambda p: _mgf_values(c, -p) / p, z, settings)
    return min(1.0, max(0.0, value))


def incomplete_mgf_upper(
    c: BeckmannComponents,
    s: float,
    z: float,
    settings: InversionSettings = DEFAULT_SETTINGS,
) -> float:
    """
    Upper-incomplete MGF int_z^inf exp(s x) f(x) dx for s <= 0.

    Evaluated as M(s) minus the inverse transform of M(s - p) / p at z.
    """
    s, z = float(s), float(z)
    if not (s <= 0 and math.isfinite(s)):
        raise DomainError(f"incomplete MGF needs s <= 0, got {s}")
    if not (z >= 0 and math.isfinite(z)):
        raise DomainError(f"incomplete MGF needs z >= 0, got {z}")
    full = mgf(c, s)
    if z == 0:
        return full
    if s == 0:
        return 1.0 - cdf(c, z, settings)
    lower = invert_laplace(lambda p: _mgf_values(c, s - p) / p, z, settings)
    return min(full, max(0.0, full - lower))
