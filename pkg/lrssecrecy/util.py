"""Unit conversions and grid helpers shared by the CLI boundary."""

from __future__ import annotations

import logging
import math

import numpy as np

from .exceptions import DomainError

_LOGGER = logging.getLogger(__name__)


def db_to_linear(value_db: float) -> float:
    return float(10.0 ** (value_db / 10.0))


def linear_to_db(value: float) -> float:
    if value <= 0:
        raise DomainError(f"cannot express {value} in dB")
    return float(10.0 * math.log10(value))


def secrecy_threshold(rate_rs: float) -> float:
    """Return tau = 2**R_S for a target secrecy rate in bits/s/Hz."""
    if rate_rs < 0 or not math.isfinite(rate_rs):
        raise DomainError(f"secrecy rate must be finite and nonnegative, got {rate_rs}")
    return 2.0**rate_rs


def inclusive_grid(start: float, stop: float, step: float) -> list[float]:
    """
    Build start, start+step, ... up to and including stop.

    The stop value is included when it lies on the grid within 1e-9 steps,
    so "0:40:5" yields nine points.
    """
    if step <= 0:
        raise DomainError(f"grid step must be positive, got {step}")
    if stop < start:
        raise DomainError(f"grid stop {stop} lies below start {start}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    grid = start + step * np.arange(count)
    # round away accumulated binary noise so CSV output stays byte-stable
    values = [float(round(v, 10)) for v in grid]
    _LOGGER.debug(f"Grid {start}:{stop}:{step} has {len(values)} points")
    return values


def format_bits(bits: int | None) -> str:
    """Render a quantization bit count, None meaning no phase error."""
    return "inf" if bits is None else str(bits)


def parse_bits(token: str | int | None) -> int | None:
    if token is None:
        return None
    if isinstance(token, int):
        if token < 1:
            raise DomainError(f"bits must be >= 1, got {token}")
        return token
    text = str(token).strip().lower()
    if text in ("inf", "infinity", "none"):
        return None
    try:
        bits = int(text)
    except ValueError as err:
        raise DomainError(f"bits must be a positive integer or 'inf', got {token!r}") from err
    if bits < 1:
        raise DomainError(f"bits must be >= 1, got {bits}")
    return bits
