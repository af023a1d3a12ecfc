"""
Monte Carlo oracle over the raw per-element channels.

Every trial draws n independent (source-reflector, reflector-receiver,
reflector-eavesdropper) triples, applies the configured residual phase
error and forms the equivalent channels H_b and H_e. Trials are generated
in fixed-size chunks, each with its own PCG64 stream spawned from one
SeedSequence, so a batch is bit-identical for a given (cfg, seed, trials)
whatever the worker count.
"""

from __future__ import annotations

from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
import logging
import math
from pathlib import Path
from typing import IO, Literal

import numpy as np
from scipy import stats

from .channel import HopFading, HopKind, SystemConfig
from .const import (
    DEFAULT_CHUNK_ELEMENTS,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    INDEPENDENCE_SIGMAS,
    KS_CRITICAL_1PCT,
    MIN_EXPECTED_EVENTS,
    RAYLEIGH_DEVIATION_PEAK,
    SAMPLES_CSV_HEADER,
)
from .exceptions import DomainError
from .util import secrecy_threshold

_LOGGER = logging.getLogger(__name__)

_LN2 = math.log(2.0)

Link = Literal["legitimate", "eavesdropper"]


@dataclass(frozen=True)
class Estimate:
    """Sample estimate with its standard error."""

    value: float
    stderr: float
    trials: int


@dataclass(frozen=True)
class TestReport:
    """Outcome of one statistical check; passed iff statistic <= threshold."""

    __test__ = False

    statistic: float
    threshold: float
    passed: bool
    description: str

    @classmethod
    def check(cls, statistic: float, threshold: float, description: str) -> TestReport:
        # NaN statistics never pass
        return cls(
            statistic=float(statistic),
            threshold=float(threshold),
            passed=bool(statistic <= threshold),
            description=description,
        )


@dataclass(frozen=True, eq=False)
class TrialBatch:
    """Equivalent channels of every trial plus the scenario that produced them."""

    cfg: SystemConfig
    seed: int
    h_b: np.ndarray
    h_e: np.ndarray

    @property
    def trials(self) -> int:
        return int(self.h_b.shape[0])

    @property
    def gain_b(self) -> np.ndarray:
        """|H_b|^2 per trial."""
        return np.abs(self.h_b) ** 2

    @property
    def gain_e(self) -> np.ndarray:
        return np.abs(self.h_e) ** 2

    @property
    def gamma_b(self) -> np.ndarray:
        return self.cfg.n**2 * self.cfg.gamma0_b * self.gain_b

    @property
    def gamma_e(self) -> np.ndarray:
        return self.cfg.n**2 * self.cfg.gamma0_e * self.gain_e

    def with_snr(self, gamma0_b: float, gamma0_e: float | None = None) -> TrialBatch:
        """Same channel draws at other reference SNRs."""
        return replace(self, cfg=self.cfg.with_snr(gamma0_b, gamma0_e))

    def magnitudes(self, link: Link) -> np.ndarray:
        if link == "legitimate":
            return np.abs(self.h_b)
        if link == "eavesdropper":
            return np.abs(self.h_e)
        raise DomainError(f"unknown link {link!r}")


def _sample_hop(rng: np.random.Generator, hop: HopFading, shape: tuple[int, int]) -> np.ndarray:
    """Unit-power complex gains with a uniform line-of-sight phase."""
    los_phase = rng.uniform(0.0, 2.0 * np.pi, shape)
    if hop.kind is HopKind.DETERMINISTIC:
        return np.exp(1j * los_phase)
    k = hop.rician_k
    mu = math.sqrt(k / (k + 1.0))
    sigma = math.sqrt(1.0 / (2.0 * (k + 1.0)))
    scatter = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return mu * np.exp(1j * los_phase) + sigma * scatter


def _simulate_chunk(
    cfg: SystemConfig, seed_seq: np.random.SeedSequence, count: int
) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    shape = (count, cfg.n)
    h1 = _sample_hop(rng, cfg.hop_a_r, shape)
    hb = _sample_hop(rng, cfg.hop_r_b, shape)
    he = _sample_hop(rng, cfg.hop_r_e, shape)
    if cfg.phase_model.has_errors:
        u = cfg.phase_model.half_width
        theta = rng.uniform(-u, u, shape)
    else:
        theta = np.zeros(shape)

    amp = np.abs(h1)
    # the reflector phase cancels both hop phases towards the receiver up to theta
    h_b = np.mean(amp * np.abs(hb) * np.exp(1j * theta), axis=1)
    psi = np.angle(he) - np.angle(hb) + theta
    h_e = np.mean(amp * np.abs(he) * np.exp(1j * psi), axis=1)
    return h_b, h_e


def _chunk_sizes(trials: int, per_chunk: int) -> Iterator[int]:
    full, rest = divmod(trials, per_chunk)
    yield from (per_chunk for _ in range(full))
    if rest:
        yield rest


def simulate_batch(
    cfg: SystemConfig,
    seed: int = DEFAULT_SEED,
    trials: int = DEFAULT_TRIALS,
    workers: int = 1,
    chunk_elements: int = DEFAULT_CHUNK_ELEMENTS,
) -> TrialBatch:
    """Simulate trials of the full per-element channel."""
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if seed < 0:
        raise DomainError(f"seed must be a nonnegative integer, got {seed}")
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")

    per_chunk = max(1, chunk_elements // cfg.n)
    sizes = list(_chunk_sizes(trials, per_chunk))
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    _LOGGER.debug(
        f"Simulating {trials} trials for n={cfg.n} in {len(sizes)} chunks of up to {per_chunk}"
    )

    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda args: _simulate_chunk(cfg, *args), zip(streams, sizes)))

    h_b = np.concatenate([part[0] for part in parts])
    h_e = np.concatenate([part[1] for part in parts])
    _LOGGER.info(f"Simulated {trials} trials for n={cfg.n}, bits={cfg.phase_model.bits}")
    return TrialBatch(cfg=cfg, seed=seed, h_b=h_b, h_e=h_e)


def resolvable_floor(trials: int) -> float:
    """Smallest probability estimated with at least MIN_EXPECTED_EVENTS events."""
    return MIN_EXPECTED_EVENTS / trials


def empirical_sop(batch: TrialBatch, rate_rs: float) -> Estimate:
    """
    Fraction of trials whose secrecy capacity is below rate_rs.

    With rate_rs = 0 the event C_S < 0 cannot occur once the capacity is
    clamped at zero, so the estimate is exactly 0.
    """
    tau = secrecy_threshold(rate_rs)
    if rate_rs == 0:
        return Estimate(0.0, 0.0, batch.trials)
    outage = (1.0 + batch.gamma_b) < tau * (1.0 + batch.gamma_e)
    p = float(np.mean(outage))
    return Estimate(p, math.sqrt(p * (1.0 - p) / batch.trials), batch.trials)


def _mean_estimate(samples: np.ndarray) -> Estimate:
    count = samples.shape[0]
    stderr = float(np.std(samples, ddof=1)) / math.sqrt(count) if count > 1 else 0.0
    return Estimate(float(np.mean(samples)), stderr, count)


def secrecy_capacities(batch: TrialBatch) -> np.ndarray:
    """Unclamped C_b - C_e per trial, in bits/s/Hz."""
    return (np.log1p(batch.gamma_b) - np.log1p(batch.gamma_e)) / _LN2


def empirical_asc(batch: TrialBatch) -> Estimate:
    return _mean_estimate(np.maximum(secrecy_capacities(batch), 0.0))


def empirical_mean_snr(batch: TrialBatch, link: Link = "legitimate") -> Estimate:
    if link == "legitimate":
        return _mean_estimate(batch.gamma_b)
    if link == "eavesdropper":
        return _mean_estimate(batch.gamma_e)
    raise DomainError(f"unknown link {link!r}")


def independence_test(batch: TrialBatch) -> TestReport:
    """Pearson correlation of |H_b|^2 and |H_e|^2 against 3 / sqrt(trials)."""
    if batch.trials < 3:
        raise DomainError("independence test needs at least 3 trials")
    rho = float(np.corrcoef(batch.gain_b, batch.gain_e)[0, 1])
    threshold = INDEPENDENCE_SIGMAS / math.sqrt(batch.trials)
    return TestReport.check(
        abs(rho), threshold, f"|corr(|H_b|^2, |H_e|^2)| for n={batch.cfg.n}"
    )


def cross_moment_test(batch: TrialBatch) -> TestReport:
    """
    Largest of |E{H_b H_e}| and |E{H_b H_e*}| in units of its standard error.

    Both vanish when H_e is circular given H_b, which holds for any fading
    law once the eavesdropper hop phases are uniform.
    """
    scores = []
    for product in (batch.h_b * batch.h_e, batch.h_b * np.conj(batch.h_e)):
        mean = complex(np.mean(product))
        stderr = math.sqrt(float(np.mean(np.abs(product - mean) ** 2)) / batch.trials)
        scores.append(abs(mean) / stderr if stderr > 0 else math.inf)
    return TestReport.check(
        max(scores), INDEPENDENCE_SIGMAS, f"cross moments of H_b and H_e for n={batch.cfg.n}"
    )


def eavesdropper_cdf_deviation(cfg: SystemConfig) -> float:
    """
    Leading-order sup distance between the law of |H_e|^2 and the exponential.

    H_e is a mean of n terms |h_1||h_e| e^{j psi}; its excess kurtosis is
    (E|h_1|^4 E|h_e|^4 - 2) / n and vanishes only when that product is 2, as
    for a deterministic source hop with a Rayleigh eavesdropper hop.
    """
    excess = cfg.hop_a_r.fourth_moment * cfg.hop_r_e.fourth_moment - 2.0
    return RAYLEIGH_DEVIATION_PEAK * max(excess, 0.0) / cfg.n


def rayleigh_gof_test(
    batch: TrialBatch, link: Link = "eavesdropper", allowance: float = 0.0
) -> TestReport:
    """
    Kolmogorov-Smirnov distance of |H| to Rayleigh with E|H|^2 = 1/n, at 1%.

    allowance is added to the critical value; pass eavesdropper_cdf_deviation
    to test only for departures beyond the known finite-n bias.
    """
    samples = batch.magnitudes(link)
    reference = stats.rayleigh(scale=1.0 / math.sqrt(2.0 * batch.cfg.n))
    result = stats.kstest(samples, reference.cdf)
    threshold = KS_CRITICAL_1PCT / math.sqrt(batch.trials) + allowance
    _LOGGER.debug(f"KS test of {link} magnitudes: D={result.statistic:.6g}, p={result.pvalue:.3g}")
    return TestReport.check(
        result.statistic, threshold, f"KS distance of |H| ({link}) to Rayleigh, n={batch.cfg.n}"
    )


def write_samples(
    batch: TrialBatch,
    target: str | Path | IO,
    fmt: Literal["csv", "binary"] = "csv",
) -> None:
    """
    Dump (gamma_b, gamma_e) pairs.

    csv writes a "gamma_b,gamma_e" header and one pair per line; binary
    writes little-endian float64 pairs with no header.
    """
    pairs = np.column_stack([batch.gamma_b, batch.gamma_e]).astype("<f8")
    if fmt == "csv":
        np.savetxt(target, pairs, fmt="%.17g", delimiter=",", header=SAMPLES_CSV_HEADER, comments="")
    elif fmt == "binary":
        if hasattr(target, "write"):
            target.write(pairs.tobytes())
        else:
            pairs.tofile(target)
    else:
        raise DomainError(f"unknown sample format {fmt!r}")
    _LOGGER.info(f"Wrote {batch.trials} sample pairs as {fmt}")
