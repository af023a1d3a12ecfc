"""Sweep rows and their CSV rendering."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
import io
import logging
import math
from pathlib import Path
from typing import IO

from ..const import CSV_HEADER
from ..util import format_bits

_LOGGER = logging.getLogger(__name__)


def _format_float(value: float | None) -> str:
    if value is None:
        return ""
    return format(value, ".12g")


@dataclass(frozen=True)
class SweepRow:
    n: int
    bits: int | None
    g0b_db: float
    variant: str
    value: float
    stderr: float | None = None
    flagged: bool = False

    @property
    def failed(self) -> bool:
        """The point could not be computed at all."""
        return math.isnan(self.value)

    def as_csv_fields(self) -> list[str]:
        return [
            str(self.n),
            format_bits(self.bits),
            _format_float(self.g0b_db),
            self.variant,
            _format_float(self.value),
            _format_float(self.stderr),
        ]


@dataclass
class SweepResult:
    """Rows in grid order: n, then bits, then g0b, then variant."""

    metric: str
    rows: list[SweepRow] = field(default_factory=list)

    @property
    def flagged(self) -> list[SweepRow]:
        return [row for row in self.rows if row.flagged]

    @property
    def failed(self) -> list[SweepRow]:
        return [row for row in self.rows if row.failed]

    def write_csv(self, target: IO[str]) -> None:
        writer = csv.writer(target, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in self.rows:
            writer.writerow(row.as_csv_fields())

    def to_csv(self) -> str:
        buffer = io.StringIO()
        self.write_csv(buffer)
        return buffer.getvalue()

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            self.write_csv(handle)
        _LOGGER.info(f"Wrote {len(self.rows)} {self.metric} rows to {path}")
