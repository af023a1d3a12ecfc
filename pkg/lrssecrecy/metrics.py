"""
Closed-form, approximate and asymptotic secrecy metrics.

The legitimate SNR follows one of the LegitimateDist laws and the
eavesdropper SNR is exponential. The three pairings are

    FR  FoldedNormal / Rayleigh  (no phase errors)
    BR  Beckmann / Rayleigh      (phase errors)
    NR  Nakagami / Rayleigh      (gamma approximation)

SOP is the probability that log2(1 + gamma_b) - log2(1 + gamma_e) falls
below the target rate; ASC is E[max{C_b - C_e, 0}] split into the
legitimate ergodic capacity, the eavesdropper ergodic capacity and the
gain term G_Z.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy import integrate, special

from .channel import Beckmann, EveDist, FoldedNormal, LegitimateDist, Nakagami, Scenario
from .exceptions import DomainError, NumericalError
from .special_fn import (
    exp_integral_e1,
    exp_integral_e1_scaled,
    log_marcum_q_half,
    marcum_q_half,
    marcum_q_half_complement,
    reg_gamma_lower,
    reg_gamma_upper,
)
from .transform import (
    DEFAULT_SETTINGS,
    BeckmannComponents,
    InversionSettings,
    beckmann_from_kq,
    cdf,
    folded_normal_components,
    incomplete_mgf_upper,
    mgf,
)
from .util import secrecy_threshold

_LOGGER = logging.getLogger(__name__)

_LN2 = math.log(2.0)
_QUAD_EPSABS = 1e-11
_QUAD_EPSREL = 1e-9
_QUAD_LIMIT = 200
# integrals over x = ln(1 + gamma) stop where the integrand is below e^-40
_TAIL_EXPONENT = 40.0
# survival integrals stop at this multiple of the mean legitimate SNR
_SURVIVAL_SPAN = 100.0


@dataclass(frozen=True)
class SecrecyPoint:
    """SOP and ASC of one variant at one operating point."""

    variant: Scenario
    asymptotic: bool = False
    sop: float | None = None
    asc: float | None = None

    def __post_init__(self) -> None:
        if self.sop is not None and not 0.0 <= self.sop <= 1.0:
            raise DomainError(f"SOP must lie in [0, 1], got {self.sop}")
        if self.asc is not None and self.asc < 0:
            raise DomainError(f"ASC must be nonnegative, got {self.asc}")


@dataclass(frozen=True)
class AscBreakdown:
    """Terms of the ASC decomposition, all in bits/s/Hz."""

    capacity_b: float
    capacity_e: float
    gain: float

    @property
    def raw(self) -> float:
        return self.capacity_b - self.capacity_e + self.gain

    @property
    def value(self) -> float:
        return max(self.raw, 0.0)

    @property
    def loss(self) -> float:
        """ASC loss C_E - G_Z."""
        return self.capacity_e - self.gain


def _thresholds(eve: EveDist, rate_rs: float) -> tuple[float, float, float]:
    """tau, z = tau - 1 and x = z / (tau mean_e)."""
    tau = secrecy_threshold(rate_rs)
    z = tau - 1.0
    return tau, z, z / (tau * eve.mean_snr)


def _probability(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise NumericalError(f"{what} evaluated to {value}")
    return min(1.0, max(0.0, value))


def _quad(func, lower: float, upper: float, what: str, **kwargs) -> float:
    try:
        value, error = integrate.quad(
            func,
            lower,
            upper,
            epsabs=_QUAD_EPSABS,
            epsrel=_QUAD_EPSREL,
            limit=_QUAD_LIMIT,
            full_output=False,
            **kwargs,
        )
    except (OverflowError, ZeroDivisionError) as err:
        raise NumericalError(f"{what} integrand failed: {err}") from err
    _LOGGER.debug(f"{what} quadrature: {value:.12g} (error estimate {error:.3g})")
    if not math.isfinite(value) or error > 1e-6 * max(1.0, abs(value)):
        raise NumericalError(f"{what} quadrature did not converge: {value} +- {error}")
    return float(value)


def components(leg: FoldedNormal | Beckmann) -> BeckmannComponents:
    """Gaussian components behind a FoldedNormal or Beckmann law."""
    if isinstance(leg, FoldedNormal):
        return folded_normal_components(leg.k, leg.mean_snr)
    return beckmann_from_kq(leg.k, leg.q, leg.mean_snr)


def legitimate_mgf(leg: LegitimateDist, s: float) -> float:
    """E[exp(s gamma_b)] for s <= 0."""
    if isinstance(leg, Nakagami):
        return math.exp(-leg.m * math.log1p(-s * leg.mean_snr / leg.m))
    return mgf(components(leg), s)


def legitimate_survival(
    leg: LegitimateDist, x: float, settings: InversionSettings = DEFAULT_SETTINGS
) -> float:
    """P(gamma_b > x)."""
    if x <= 0:
        return 1.0
    match leg:
        case FoldedNormal(k=k, mean_snr=mean):
            return marcum_q_half(math.sqrt(k), math.sqrt((k + 1.0) * x / mean))
        case Nakagami(m=m, mean_snr=mean):
            return reg_gamma_upper(m, m * x / mean)
        case _:
            return 1.0 - cdf(components(leg), x, settings)


# --- secrecy outage probability ---------------------------------------------


def sop_fr(leg: FoldedNormal, eve: EveDist, rate_rs: float) -> float:
    """SOP of the FoldedNormal/Rayleigh pairing."""
    tau, z, x = _thresholds(eve, rate_rs)
    k, mean_b = leg.k, leg.mean_snr
    s = -1.0 / (tau * eve.mean_snr)

    below = marcum_q_half_complement(math.sqrt(k), math.sqrt((k + 1.0) * z / mean_b))

    den = k + 1.0 - 2.0 * mean_b * s
    a_s = math.sqrt(k * (k + 1.0) / den)
    b_s = math.sqrt(2.0 * ((k + 1.0) / (2.0 * mean_b) - s) * z)
    c_s = k * mean_b * s / den
    # a_s / sqrt(K) written as sqrt((K + 1) / den) so K = 0 is allowed
    log_above = x + c_s + 0.5 * math.log((k + 1.0) / den) + log_marcum_q_half(a_s, b_s)
    return _probability(below + math.exp(log_above), "FR SOP")


def sop_fr_asymptotic(leg: FoldedNormal, eve: EveDist, rate_rs: float) -> float:
    tau, _, x = _thresholds(eve, rate_rs)
    k = leg.k
    scale = math.sqrt(tau * eve.mean_snr * (1.0 + k) / (2.0 * leg.mean_snr))
    return math.exp(-0.5 * k + x) * scale * reg_gamma_upper(1.5, x)


def sop_br(
    leg: Beckmann,
    eve: EveDist,
    rate_rs: float,
    settings: InversionSettings = DEFAULT_SETTINGS,
) -> float:
    """SOP of the Beckmann/Rayleigh pairing via the Laplace-inverted CDF."""
    tau, z, x = _thresholds(eve, rate_rs)
    comp = beckmann_from_kq(leg.k, leg.q, leg.mean_snr)
    s = -1.0 / (tau * eve.mean_snr)
    below = cdf(comp, z, settings) if z > 0 else 0.0
    above = incomplete_mgf_upper(comp, s, z, settings)
    return _probability(below + math.exp(x) * above, "BR SOP")


def sop_br_asymptotic(leg: Beckmann, eve: EveDist, rate_rs: float) -> float:
    tau, z, _ = _thresholds(eve, rate_rs)
    k, q = leg.k, leg.q
    q2 = q * q
    decay = math.exp(-k * (1.0 + q2) / (2.0 * q2))
    return decay * (1.0 + k) * (1.0 + q2) * (eve.mean_snr * tau + z) / (2.0 * q * leg.mean_snr)


def sop_nr(leg: Nakagami, eve: EveDist, rate_rs: float) -> float:
    """SOP of the Nakagami/Rayleigh pairing."""
    tau, z, x = _thresholds(eve, rate_rs)
    m, mean_b = leg.m, leg.mean_snr
    below = reg_gamma_lower(m, z * m / mean_b)
    tail = reg_gamma_upper(m, z * (m / mean_b + 1.0 / (tau * eve.mean_snr)))
    if tail == 0.0:
        return _probability(below, "NR SOP")
    log_above = x - m * math.log1p(mean_b / (m * tau * eve.mean_snr)) + math.log(tail)
    return _probability(below + math.exp(log_above), "NR SOP")


def sop_nr_asymptotic(leg: Nakagami, eve: EveDist, rate_rs: float) -> float:
    tau, _, x = _thresholds(eve, rate_rs)
    m = leg.m
    log_power = m * math.log(tau * m * eve.mean_snr / leg.mean_snr)
    return math.exp(x + log_power) * reg_gamma_upper(m + 1.0, x)


def sop(
    leg: LegitimateDist,
    eve: EveDist,
    rate_rs: float,
    asymptotic: bool = False,
    settings: InversionSettings = DEFAULT_SETTINGS,
) -> float:
    """Dispatch to the SOP expression matching the legitimate law."""
    match leg, asymptotic:
        case FoldedNormal(), False:
            return sop_fr(leg, eve, rate_rs)
        case FoldedNormal(), True:
            return sop_fr_asymptotic(leg, eve, rate_rs)
        case Beckmann(), False:
            return sop_br(leg, eve, rate_rs, settings)
        case Beckmann(), True:
            return sop_br_asymptotic(leg, eve, rate_rs)
        case Nakagami(), False:
            return sop_nr(leg, eve, rate_rs)
        case Nakagami(), True:
            return sop_nr_asymptotic(leg, eve, rate_rs)
    raise DomainError(f"no SOP expression for {leg!r}")


# --- average secrecy capacity -----------------------------------------------


def eavesdropper_capacity(eve: EveDist) -> float:
    """Ergodic capacity of the exponential eavesdropper link."""
    return exp_integral_e1_scaled(1.0 / eve.mean_snr) / _LN2


def legitimate_capacity(
    leg: LegitimateDist, settings: InversionSettings = DEFAULT_SETTINGS
) -> float:
    """Ergodic capacity (1/ln2) int_0^inf S(g) / (1 + g) dg over x = ln(1 + g)."""
    upper = math.log1p(_SURVIVAL_SPAN * leg.mean_snr)
    knee = math.log1p(leg.mean_snr)
    value = _quad(
        lambda v: legitimate_survival(leg, math.expm1(v), settings),
        0.0,
        upper,
        "legitimate capacity",
        points=[knee],
    )
    return value / _LN2


def secrecy_gain(leg: LegitimateDist, eve: EveDist) -> float:
    """G_Z = (1/ln2) int_1^inf exp(-(w - 1)/mean_e) M_b(-w/mean_e) dw/w, over v = ln w."""
    mean_e = eve.mean_snr
    upper = math.log1p(_TAIL_EXPONENT * mean_e)

    def integrand(v: float) -> float:
        w = math.exp(v)
        return math.exp(-(w - 1.0) / mean_e) * legitimate_mgf(leg, -w / mean_e)

    value = _quad(integrand, 0.0, upper, "G_Z")
    return max(0.0, value / _LN2)


def asc_breakdown(
    leg: LegitimateDist, eve: EveDist, settings: InversionSettings = DEFAULT_SETTINGS
) -> AscBreakdown:
    return AscBreakdown(
        capacity_b=legitimate_capacity(leg, settings),
        capacity_e=eavesdropper_capacity(eve),
        gain=secrecy_gain(leg, eve),
    )


def asc(
    leg: LegitimateDist, eve: EveDist, settings: InversionSettings = DEFAULT_SETTINGS
) -> float:
    """Average secrecy capacity, clamped at zero."""
    breakdown = asc_breakdown(leg, eve, settings)
    _LOGGER.debug(
        f"ASC of {leg.scenario}: C_B={breakdown.capacity_b:.8g} C_E={breakdown.capacity_e:.8g} "
        f"G_Z={breakdown.gain:.8g} raw={breakdown.raw:.8g}"
    )
    return breakdown.value


def asc_loss(
    leg: LegitimateDist, eve: EveDist, settings: InversionSettings = DEFAULT_SETTINGS
) -> float:
    """
    ASC loss (1/ln2) int_0^inf (1 - F_e(x)) (1 - F_b(x)) / (1 + x) dx.

    Computed directly, so C_B - asc_loss cross-checks C_B - C_E + G_Z.
    """
    mean_e = eve.mean_snr
    upper = math.log1p(_TAIL_EXPONENT * mean_e)

    def integrand(v: float) -> float:
        x = math.expm1(v)
        return math.exp(-x / mean_e) * legitimate_survival(leg, x, settings)

    return _quad(integrand, 0.0, upper, "ASC loss") / _LN2


def asc_high_snr(
    leg: LegitimateDist, eve: EveDist, settings: InversionSettings = DEFAULT_SETTINGS
) -> float:
    """C_B - C_E, the ASC with the vanishing G_Z term dropped."""
    return legitimate_capacity(leg, settings) - eavesdropper_capacity(eve)


def nakagami_severity_loss(m: float) -> float:
    """t_Z of a gamma-distributed SNR with shape m."""
    if not (m > 0 and math.isfinite(m)):
        raise DomainError(f"Nakagami shape must be positive, got {m}")
    return -(float(special.digamma(m)) - math.log(m)) / _LN2


def fading_severity_loss(leg: LegitimateDist) -> float:
    """
    t_Z = -(1/ln2) E[ln(gamma / mean)].

    Uses ln y = int_0^inf (e^-t - e^-yt) / t dt, so the expectation only needs
    the MGF. The range is split at t = 1; above it e^-t / t integrates to
    E1(1) and the MGF part M(-t/mean) / t decays at least like t^-3/2.
    """
    if isinstance(leg, Nakagami):
        return nakagami_severity_loss(leg.m)
    mean = leg.mean_snr

    def head(t: float) -> float:
        if t == 0.0:
            return 0.0
        return (math.exp(-t) - legitimate_mgf(leg, -t / mean)) / t

    near = _quad(head, 0.0, 1.0, "t_Z head")
    far = _quad(lambda t: legitimate_mgf(leg, -t / mean) / t, 1.0, np.inf, "t_Z tail")
    expected_log = near + exp_integral_e1(1.0) - far
    return -expected_log / _LN2


def asc_asymptotic(leg: LegitimateDist, eve: EveDist) -> float:
    """log2(mean_b) - t_Z - C_E."""
    return math.log2(leg.mean_snr) - fading_severity_loss(leg) - eavesdropper_capacity(eve)


def asc_asymptote(
    leg: LegitimateDist, eve: EveDist, settings: InversionSettings = DEFAULT_SETTINGS
) -> float:
    """High-SNR ASC curve: C_B - C_E for Beckmann, log2(mean_b) - t_Z - C_E otherwise."""
    if isinstance(leg, Beckmann):
        return asc_high_snr(leg, eve, settings)
    return asc_asymptotic(leg, eve)


def evaluate(
    leg: LegitimateDist,
    eve: EveDist,
    rate_rs: float,
    asymptotic: bool = False,
    settings: InversionSettings = DEFAULT_SETTINGS,
) -> SecrecyPoint:
    """SOP and ASC of one variant; asymptotic ASC values are clamped at zero."""
    if asymptotic:
        secrecy = asc_asymptote(leg, eve, settings)
    else:
        secrecy = asc(leg, eve, settings)
    return SecrecyPoint(
        variant=leg.scenario,
        asymptotic=asymptotic,
        sop=min(1.0, sop(leg, eve, rate_rs, asymptotic, settings)),
        asc=max(secrecy, 0.0),
    )
