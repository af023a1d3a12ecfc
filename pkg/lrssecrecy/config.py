"""Configuration schemas, presets and the key=value config file loader."""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
from pathlib import Path
from typing import Any

import voluptuous as vol

from .channel import HopFading, HopKind
from .const import (
    CONF_BITS,
    CONF_CHUNK_ELEMENTS,
    CONF_G0B_DB,
    CONF_G0E_DB,
    CONF_HOP_A_R,
    CONF_HOP_R_B,
    CONF_HOP_R_E,
    CONF_INVERSION_A,
    CONF_INVERSION_EULER_TERMS,
    CONF_INVERSION_TERMS,
    CONF_METRIC,
    CONF_N,
    CONF_OUT,
    CONF_RS,
    CONF_SEED,
    CONF_TRIALS,
    CONF_VARIANTS,
    CONF_WORKERS,
    DEFAULT_CHUNK_ELEMENTS,
    DEFAULT_G0E_DB,
    DEFAULT_INVERSION_A,
    DEFAULT_INVERSION_EULER_TERMS,
    DEFAULT_INVERSION_MAX_TERMS,
    DEFAULT_INVERSION_TERMS,
    DEFAULT_RATE_RS,
    DEFAULT_RICIAN_K,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    DEFAULT_WORKERS,
    METRIC_ASC,
    METRIC_SOP,
    METRICS,
    PRESET_FIG1,
    PRESET_FIG2,
    VARIANT_BR,
    VARIANT_MC,
    VARIANT_NR,
    VARIANTS,
)
from .exceptions import ConfigValidationError, DomainError
from .transform import InversionSettings
from .util import inclusive_grid, parse_bits

_LOGGER = logging.getLogger(__name__)

CONF_FORMAT = "format"
SAMPLE_FORMATS = ("csv", "binary")


def _as_list(value: Any) -> list[Any]:
    """Accept a comma separated string, a scalar or a sequence."""
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def _bits(value: Any) -> int | None:
    try:
        return parse_bits(value)
    except DomainError as err:
        raise vol.Invalid(str(err)) from err


def _count(value: Any) -> int:
    """Positive integer; also accepts '1e6' style strings."""
    try:
        number = float(value)
    except (TypeError, ValueError) as err:
        raise vol.Invalid(f"expected a count, got {value!r}") from err
    if not number.is_integer() or number < 1:
        raise vol.Invalid(f"expected a positive integer, got {value!r}")
    return int(number)


def _grid(value: Any) -> list[float]:
    """'start:stop:step', a comma separated list or a single value, in dB."""
    if isinstance(value, str) and ":" in value:
        parts = value.split(":")
        if len(parts) != 3:
            raise vol.Invalid(f"grid must be start:stop:step, got {value!r}")
        try:
            start, stop, step = (float(p) for p in parts)
            return inclusive_grid(start, stop, step)
        except (ValueError, DomainError) as err:
            raise vol.Invalid(f"invalid grid {value!r}: {err}") from err
    try:
        points = [float(v) for v in _as_list(value)]
    except (TypeError, ValueError) as err:
        raise vol.Invalid(f"invalid grid {value!r}") from err
    if not points:
        raise vol.Invalid("grid must not be empty")
    return points


def _hop(value: Any) -> HopFading:
    """'rayleigh', 'deterministic', 'rician' or 'rician:K'."""
    if isinstance(value, HopFading):
        return value
    kind, _, k_text = str(value).strip().lower().partition(":")
    try:
        hop_kind = HopKind(kind)
        if hop_kind is HopKind.RICIAN:
            return HopFading.rician(float(k_text) if k_text else DEFAULT_RICIAN_K)
        if k_text:
            raise vol.Invalid(f"{kind} hops take no Rician factor")
        return HopFading(hop_kind)
    except (ValueError, DomainError) as err:
        raise vol.Invalid(f"invalid hop fading {value!r}: {err}") from err


POSITIVE_INT_LIST = vol.All(_as_list, [vol.All(vol.Coerce(int), vol.Range(min=1))], vol.Length(min=1))

COMMON_SCHEMA = {
    vol.Optional(CONF_TRIALS, default=DEFAULT_TRIALS): _count,
    vol.Optional(CONF_SEED, default=DEFAULT_SEED): vol.All(vol.Coerce(int), vol.Range(min=0)),
    vol.Optional(CONF_WORKERS, default=DEFAULT_WORKERS): _count,
    vol.Optional(CONF_CHUNK_ELEMENTS, default=DEFAULT_CHUNK_ELEMENTS): _count,
}

HOP_SCHEMA = {
    vol.Optional(CONF_HOP_A_R, default=f"rician:{DEFAULT_RICIAN_K:g}"): _hop,
    vol.Optional(CONF_HOP_R_B, default=f"rician:{DEFAULT_RICIAN_K:g}"): _hop,
    vol.Optional(CONF_HOP_R_E, default="rayleigh"): _hop,
}

SWEEP_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_METRIC, default=METRIC_SOP): vol.All(vol.Lower, vol.In(METRICS)),
        vol.Optional(CONF_VARIANTS, default=[VARIANT_BR]): vol.All(
            _as_list, [vol.In(VARIANTS)], vol.Length(min=1)
        ),
        vol.Optional(CONF_N, default=[64]): POSITIVE_INT_LIST,
        vol.Optional(CONF_BITS, default=["inf"]): vol.All(_as_list, [_bits], vol.Length(min=1)),
        vol.Optional(CONF_G0B_DB, default="-10:30:5"): _grid,
        vol.Optional(CONF_G0E_DB, default=DEFAULT_G0E_DB): vol.Coerce(float),
        vol.Optional(CONF_RS, default=DEFAULT_RATE_RS): vol.All(vol.Coerce(float), vol.Range(min=0)),
        vol.Optional(CONF_OUT, default=None): vol.Any(None, str),
        vol.Optional(CONF_INVERSION_A, default=DEFAULT_INVERSION_A): vol.All(
            vol.Coerce(float), vol.Range(min=1)
        ),
        vol.Optional(CONF_INVERSION_TERMS, default=DEFAULT_INVERSION_TERMS): _count,
        vol.Optional(CONF_INVERSION_EULER_TERMS, default=DEFAULT_INVERSION_EULER_TERMS): _count,
        **COMMON_SCHEMA,
        **HOP_SCHEMA,
    }
)

VALIDATE_SCHEMA = vol.Schema(COMMON_SCHEMA)

SIMULATE_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_N, default=64): vol.All(vol.Coerce(int), vol.Range(min=1)),
        vol.Optional(CONF_BITS, default="inf"): _bits,
        vol.Optional(CONF_G0B_DB, default=0.0): vol.Coerce(float),
        vol.Optional(CONF_G0E_DB, default=DEFAULT_G0E_DB): vol.Coerce(float),
        vol.Optional(CONF_OUT, default=None): vol.Any(None, str),
        vol.Optional(CONF_FORMAT, default="csv"): vol.In(SAMPLE_FORMATS),
        **COMMON_SCHEMA,
        **HOP_SCHEMA,
    }
)

PRESETS: dict[str, dict[str, Any]] = {
    # ASC against the legitimate reference SNR
    PRESET_FIG1: {
        CONF_METRIC: METRIC_ASC,
        CONF_VARIANTS: [VARIANT_BR, VARIANT_NR, VARIANT_MC, "asymptotic-BR"],
        CONF_N: [4, 16, 64, 256],
        CONF_BITS: [1, 2, "inf"],
        CONF_G0B_DB: "-20:30:5",
        CONF_G0E_DB: 10.0,
    },
    # SOP against the legitimate reference SNR
    PRESET_FIG2: {
        CONF_METRIC: METRIC_SOP,
        CONF_VARIANTS: [VARIANT_BR, VARIANT_NR, VARIANT_MC, "asymptotic-BR", "asymptotic-NR"],
        CONF_N: [4, 16, 64, 256],
        CONF_BITS: [2, "inf"],
        CONF_G0B_DB: "-20:20:2",
        CONF_G0E_DB: 10.0,
        CONF_RS: 1.0,
    },
}


@dataclass(frozen=True)
class SweepSpec:
    """A validated sweep request. SNRs stay in dB until the sweep converts them."""

    metric: str = METRIC_SOP
    variants: tuple[str, ...] = (VARIANT_BR,)
    n_list: tuple[int, ...] = (64,)
    bits_list: tuple[int | None, ...] = (None,)
    g0b_db: tuple[float, ...] = (0.0,)
    g0e_db: float = DEFAULT_G0E_DB
    rate_rs: float = DEFAULT_RATE_RS
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    out: str | None = None
    workers: int = DEFAULT_WORKERS
    chunk_elements: int = DEFAULT_CHUNK_ELEMENTS
    hop_a_r: HopFading = field(default_factory=lambda: HopFading.rician(DEFAULT_RICIAN_K))
    hop_r_b: HopFading = field(default_factory=lambda: HopFading.rician(DEFAULT_RICIAN_K))
    hop_r_e: HopFading = field(default_factory=HopFading.rayleigh)
    inversion: InversionSettings = field(default_factory=InversionSettings)

    def __post_init__(self) -> None:
        if not (self.variants and self.n_list and self.bits_list and self.g0b_db):
            raise ConfigValidationError("sweep grids must not be empty")
        if self.metric not in METRICS:
            raise ConfigValidationError(f"unknown metric {self.metric!r}")

    @property
    def needs_monte_carlo(self) -> bool:
        return VARIANT_MC in self.variants


def load_config_file(path: str | Path) -> dict[str, str]:
    """
    Read a plain-text key=value file.

    '#' starts a comment, blank lines are ignored and dashes in keys are
    read as underscores, so flag spellings work too.
    """
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for number, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise ConfigValidationError(f"{path}:{number}: expected key=value, got {raw.strip()!r}")
            values[key.strip().replace("-", "_")] = value.strip()
    _LOGGER.debug(f"Loaded {len(values)} settings from {path}")
    return values


def merge_sources(
    overrides: dict[str, Any] | None = None,
    config_file: str | Path | None = None,
    preset: str | None = None,
) -> dict[str, Any]:
    """Defaults < preset < config file < explicit overrides; None overrides are skipped."""
    merged: dict[str, Any] = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigValidationError(f"unknown preset {preset!r}")
        merged.update(PRESETS[preset])
    if config_file is not None:
        merged.update(load_config_file(config_file))
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return merged


def validate_config(schema: vol.Schema, data: dict[str, Any]) -> dict[str, Any]:
    try:
        return schema(data)
    except vol.Invalid as err:
        raise ConfigValidationError(str(err)) from err


def build_sweep_spec(
    overrides: dict[str, Any] | None = None,
    config_file: str | Path | None = None,
    preset: str | None = None,
) -> SweepSpec:
    data = validate_config(SWEEP_SCHEMA, merge_sources(overrides, config_file, preset))
    return SweepSpec(
        metric=data[CONF_METRIC],
        variants=tuple(data[CONF_VARIANTS]),
        n_list=tuple(data[CONF_N]),
        bits_list=tuple(data[CONF_BITS]),
        g0b_db=tuple(data[CONF_G0B_DB]),
        g0e_db=data[CONF_G0E_DB],
        rate_rs=data[CONF_RS],
        trials=data[CONF_TRIALS],
        seed=data[CONF_SEED],
        out=data[CONF_OUT],
        workers=data[CONF_WORKERS],
        chunk_elements=data[CONF_CHUNK_ELEMENTS],
        hop_a_r=data[CONF_HOP_A_R],
        hop_r_b=data[CONF_HOP_R_B],
        hop_r_e=data[CONF_HOP_R_E],
        inversion=InversionSettings(
            a=data[CONF_INVERSION_A],
            terms=data[CONF_INVERSION_TERMS],
            euler_terms=data[CONF_INVERSION_EULER_TERMS],
            max_terms=max(data[CONF_INVERSION_TERMS], DEFAULT_INVERSION_MAX_TERMS),
        ),
    )
