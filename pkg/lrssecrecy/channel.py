"""
Equivalent scalar channel statistics of a reflecting-surface link.

Maps the physical scenario (element count, phase quantization and per-hop
fading) to the circular and magnitude moments of the per-element channels,
and from those to the parameters of the legitimate and eavesdropper SNR
laws.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
import enum
import logging
import math

import numpy as np
from scipy import special

from .const import DEFAULT_RATE_RS, DEFAULT_RICIAN_K
from .exceptions import ChannelError, DomainError
from .special_fn import kummer_1f1
from .util import secrecy_threshold

_LOGGER = logging.getLogger(__name__)

# above this Rician factor the mean magnitude uses the scaled Bessel form
_KUMMER_SERIES_MAX_K = 20.0


class Scenario(enum.StrEnum):
    """Legitimate/eavesdropper pairing of the equivalent scalar channels."""

    FR = "FR"
    BR = "BR"
    NR = "NR"


class HopKind(enum.StrEnum):
    RICIAN = "rician"
    RAYLEIGH = "rayleigh"
    DETERMINISTIC = "deterministic"


@dataclass(frozen=True)
class PhaseErrorModel:
    """Residual phase error; bits=None means perfect phase compensation."""

    bits: int | None = None

    def __post_init__(self) -> None:
        if self.bits is not None and self.bits < 1:
            raise DomainError(f"quantization bits must be >= 1, got {self.bits}")

    @classmethod
    def none(cls) -> PhaseErrorModel:
        return cls(None)

    @classmethod
    def quantized(cls, bits: int) -> PhaseErrorModel:
        return cls(bits)

    @property
    def has_errors(self) -> bool:
        return self.bits is not None

    @property
    def half_width(self) -> float:
        """Half-width u of the uniform error interval [-u, u]."""
        if self.bits is None:
            return 0.0
        return math.ldexp(math.pi, -self.bits)


@dataclass(frozen=True)
class HopFading:
    """Fading law of one hop, normalized to unit total power."""

    kind: HopKind = HopKind.RAYLEIGH
    k_rice: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.k_rice) or self.k_rice < 0:
            raise DomainError(f"Rician factor must be finite and >= 0, got {self.k_rice}")

    @classmethod
    def rician(cls, k_rice: float) -> HopFading:
        return cls(HopKind.RICIAN, float(k_rice))

    @classmethod
    def rayleigh(cls) -> HopFading:
        return cls(HopKind.RAYLEIGH, 0.0)

    @classmethod
    def deterministic(cls) -> HopFading:
        """Unit magnitude with uniform phase: the no-fading limit."""
        return cls(HopKind.DETERMINISTIC, 0.0)

    @property
    def rician_k(self) -> float:
        return self.k_rice if self.kind is HopKind.RICIAN else 0.0

    @property
    def fourth_moment(self) -> float:
        """E|H|^4 of the unit-power hop."""
        if self.kind is HopKind.DETERMINISTIC:
            return 1.0
        k = self.rician_k
        return (k * k + 4.0 * k + 2.0) / (k + 1.0) ** 2


@dataclass(frozen=True)
class SystemConfig:
    """Physical scenario. SNRs are linear, single-reflector reference values."""

    n: int
    phase_model: PhaseErrorModel = field(default_factory=PhaseErrorModel)
    hop_a_r: HopFading = field(default_factory=HopFading.rayleigh)
    hop_r_b: HopFading = field(default_factory=HopFading.rayleigh)
    hop_r_e: HopFading = field(default_factory=HopFading.rayleigh)
    gamma0_b: float = 1.0
    gamma0_e: float = 1.0
    rate_rs: float = DEFAULT_RATE_RS

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"reflector count must be a positive integer, got {self.n}")
        if not (self.gamma0_b > 0 and math.isfinite(self.gamma0_b)):
            raise DomainError(f"gamma0_b must be positive, got {self.gamma0_b}")
        if not (self.gamma0_e > 0 and math.isfinite(self.gamma0_e)):
            raise DomainError(f"gamma0_e must be positive, got {self.gamma0_e}")
        if not (self.rate_rs >= 0 and math.isfinite(self.rate_rs)):
            raise DomainError(f"rate_rs must be nonnegative, got {self.rate_rs}")

    @property
    def tau(self) -> float:
        return secrecy_threshold(self.rate_rs)

    def with_snr(self, gamma0_b: float, gamma0_e: float | None = None) -> SystemConfig:
        return replace(
            self,
            gamma0_b=gamma0_b,
            gamma0_e=self.gamma0_e if gamma0_e is None else gamma0_e,
        )


@dataclass(frozen=True)
class MomentSet:
    """Circular moments of the phase error and mean hop magnitudes."""

    phi1: float
    phi2: float
    a1: float
    a2b: float
    a2e: float

    @property
    def a_b(self) -> float:
        return math.sqrt(self.a1 * self.a2b)

    @property
    def a_e(self) -> float:
        return math.sqrt(self.a1 * self.a2e)

    @property
    def coherent_fraction(self) -> float:
        """phi1^2 a_b^4, the share of power in the coherent component."""
        return self.phi1**2 * self.a_b**4


@dataclass(frozen=True)
class FoldedNormal:
    k: float
    mean_snr: float

    def __post_init__(self) -> None:
        _check_nonnegative(k=self.k)
        _check_positive(mean_snr=self.mean_snr)

    @property
    def scenario(self) -> Scenario:
        return Scenario.FR


@dataclass(frozen=True)
class Beckmann:
    k: float
    q: float
    mean_snr: float

    def __post_init__(self) -> None:
        _check_nonnegative(k=self.k)
        _check_positive(q=self.q, mean_snr=self.mean_snr)

    @property
    def scenario(self) -> Scenario:
        return Scenario.BR


@dataclass(frozen=True)
class Nakagami:
    m: float
    mean_snr: float

    def __post_init__(self) -> None:
        _check_positive(m=self.m, mean_snr=self.mean_snr)

    @property
    def scenario(self) -> Scenario:
        return Scenario.NR


LegitimateDist = FoldedNormal | Beckmann | Nakagami


@dataclass(frozen=True)
class EveDist:
    """Exponential eavesdropper SNR law."""

    mean_snr: float

    def __post_init__(self) -> None:
        _check_positive(mean_snr=self.mean_snr)


def _check_positive(**values: float) -> None:
    for name, value in values.items():
        if not (value > 0 and math.isfinite(value)):
            raise DomainError(f"{name} must be positive and finite, got {value}")


def _check_nonnegative(**values: float) -> None:
    for name, value in values.items():
        if not (value >= 0 and math.isfinite(value)):
            raise DomainError(f"{name} must be nonnegative and finite, got {value}")


def reference_scenario(
    n: int,
    bits: int | None,
    gamma0_b: float,
    gamma0_e: float,
    rate_rs: float = DEFAULT_RATE_RS,
    k_rice: float = DEFAULT_RICIAN_K,
) -> SystemConfig:
    """Rician A-R and R-B hops, Rayleigh R-E hops, quantized phase errors."""
    return SystemConfig(
        n=n,
        phase_model=PhaseErrorModel(bits),
        hop_a_r=HopFading.rician(k_rice),
        hop_r_b=HopFading.rician(k_rice),
        hop_r_e=HopFading.rayleigh(),
        gamma0_b=gamma0_b,
        gamma0_e=gamma0_e,
        rate_rs=rate_rs,
    )


def circular_moments(model: PhaseErrorModel) -> tuple[float, float]:
    """
    First and second circular moments of a uniform phase error.

    For an error uniform on [-u, u], phi_j = sin(j u) / (j u). The half-width
    is taken as u = 2^-bits * pi; the moments are even in u so the sign
    convention of the interval does not matter.
    """
    if not model.has_errors:
        return 1.0, 1.0
    # np.sinc(x) = sin(pi x) / (pi x) and u / pi = 2^-bits
    ratio = math.ldexp(1.0, -model.bits)
    phi1 = float(np.sinc(ratio))
    phi2 = float(np.sinc(2.0 * ratio))
    return phi1, phi2


def mean_magnitude(hop: HopFading) -> float:
    """E|H| of a unit-power hop."""
    if hop.kind is HopKind.DETERMINISTIC:
        return 1.0
    k = hop.rician_k
    scale = math.sqrt(math.pi / (4.0 * (k + 1.0)))
    if k <= _KUMMER_SERIES_MAX_K:
        return scale * kummer_1f1(-0.5, 1.0, -k)
    # 1F1(-1/2; 1; -K) = e^{-K/2} [(1 + K) I0(K/2) + K I1(K/2)]
    half = 0.5 * k
    return scale * float((1.0 + k) * special.i0e(half) + k * special.i1e(half))


def moment_set(cfg: SystemConfig) -> MomentSet:
    phi1, phi2 = circular_moments(cfg.phase_model)
    return MomentSet(
        phi1=phi1,
        phi2=phi2,
        a1=mean_magnitude(cfg.hop_a_r),
        a2b=mean_magnitude(cfg.hop_r_b),
        a2e=mean_magnitude(cfg.hop_r_e),
    )


def _coherent_fraction(mom: MomentSet) -> float:
    x = mom.coherent_fraction
    if mom.a_b >= 1.0 or x >= 1.0:
        raise ChannelError(
            "a_b = 1 is the deterministic-channel limit; K and m diverge"
        )
    return x


def legitimate_params(
    cfg: SystemConfig, mom: MomentSet, variant: Scenario | str
) -> LegitimateDist:
    """Parameters of the requested legitimate SNR model."""
    variant = Scenario(variant)
    x = _coherent_fraction(mom)
    n = cfg.n
    mean_snr = n * n * cfg.gamma0_b * (x + (1.0 - x) / n)

    if variant is Scenario.FR:
        if cfg.phase_model.has_errors:
            raise ChannelError("FoldedNormal applies only without phase errors")
        return FoldedNormal(k=n * x / (1.0 - x), mean_snr=mean_snr)

    if variant is Scenario.BR:
        if not cfg.phase_model.has_errors or mom.phi2 >= 1.0:
            raise ChannelError(
                "Beckmann q diverges without phase errors; request FoldedNormal"
            )
        q = math.sqrt((1.0 + mom.phi2 - 2.0 * x) / (1.0 - mom.phi2))
        return Beckmann(k=n * x / (1.0 - x), q=q, mean_snr=mean_snr)

    spread = 1.0 + mom.phi2 - 2.0 * x
    if spread <= 0:
        raise ChannelError(f"Nakagami shape undefined, 1 + phi2 - 2 phi1^2 a_b^4 = {spread}")
    m = 0.5 * n * x / spread
    _LOGGER.debug(f"Nakagami approximation for n={n}: m={m:.6g}")
    return Nakagami(m=m, mean_snr=n * n * cfg.gamma0_b * x)


def eavesdropper_params(cfg: SystemConfig) -> EveDist:
    return EveDist(mean_snr=cfg.n * cfg.gamma0_e)


def snr_ratio_scaling(cfg: SystemConfig, mom: MomentSet) -> float:
    """Ratio of legitimate to eavesdropper mean SNR."""
    x = mom.coherent_fraction
    n = cfg.n
    return n * (cfg.gamma0_b / cfg.gamma0_e) * (x + (1.0 - x) / n)


def gaussian_parameters(cfg: SystemConfig, mom: MomentSet) -> tuple[float, float, float]:
    """Mean and variances (mu, var_U, var_V) of Re H_b and Im H_b."""
    x = mom.coherent_fraction
    mu = mom.phi1 * mom.a_b**2
    var_u = (1.0 + mom.phi2 - 2.0 * x) / (2.0 * cfg.n)
    var_v = (1.0 - mom.phi2) / (2.0 * cfg.n)
    return mu, var_u, var_v
