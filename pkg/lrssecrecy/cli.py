"""Command line entry point: sweep, validate and simulate subcommands."""

from __future__ import annotations

import argparse
from collections.abc import Sequence
import logging
import sys
from typing import Any

from .channel import PhaseErrorModel, SystemConfig
from .config import (
    CONF_FORMAT,
    PRESETS,
    SAMPLE_FORMATS,
    SIMULATE_SCHEMA,
    VALIDATE_SCHEMA,
    build_sweep_spec,
    merge_sources,
    validate_config,
)
from .const import (
    CONF_BITS,
    CONF_CHUNK_ELEMENTS,
    CONF_G0B_DB,
    CONF_G0E_DB,
    CONF_HOP_A_R,
    CONF_HOP_R_B,
    CONF_HOP_R_E,
    CONF_METRIC,
    CONF_N,
    CONF_OUT,
    CONF_RS,
    CONF_SEED,
    CONF_TRIALS,
    CONF_VARIANTS,
    CONF_WORKERS,
    DOMAIN,
    EXIT_BAD_ARGUMENTS,
    EXIT_OK,
    EXIT_VALIDATION_FAILED,
    METRICS,
)
from .exceptions import ConfigValidationError, LrsSecrecyError
from .montecarlo import simulate_batch, write_samples
from .sweep import run_sweep
from .util import db_to_linear
from .validation import validate

_LOGGER = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)s] [%(name)s] %(message)s"
VERBOSITY_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--trials", help="Monte Carlo trials, e.g. 1e6")
    parser.add_argument("--seed", help="base seed of the random streams")
    parser.add_argument("--workers", help="thread pool size")
    parser.add_argument("--chunk-elements", dest="chunk_elements", help="array elements per chunk")
    parser.add_argument("--config", help="key=value file, overridden by flags")
    parser.add_argument(
        "--verbosity", type=str.upper, choices=VERBOSITY_LEVELS, default="WARNING", help="log level"
    )


def _add_hops(parser: argparse.ArgumentParser) -> None:
    for flag, dest in (("--hop-a-r", CONF_HOP_A_R), ("--hop-r-b", CONF_HOP_R_B), ("--hop-r-e", CONF_HOP_R_E)):
        parser.add_argument(flag, dest=dest, help="rayleigh, deterministic or rician[:K]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=DOMAIN,
        description="Secrecy outage and average secrecy capacity of reflecting-surface links.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    sweep = sub.add_parser("sweep", help="evaluate closed forms and MC over a grid, write CSV")
    sweep.add_argument("--preset", choices=sorted(PRESETS), help="figure preset")
    sweep.add_argument("--metric", type=str.lower, choices=METRICS)
    sweep.add_argument("--variants", help="comma separated, e.g. BR,NR,MC,asymptotic-BR")
    sweep.add_argument("--n", help="comma separated reflector counts")
    sweep.add_argument("--bits", help="comma separated bit widths; inf means no phase error")
    sweep.add_argument("--g0b-dB", dest=CONF_G0B_DB, help="start:stop:step or list, in dB")
    sweep.add_argument("--g0e-dB", dest=CONF_G0E_DB, help="eavesdropper reference SNR in dB")
    sweep.add_argument("--rs", help="target secrecy rate in bits/s/Hz")
    sweep.add_argument("--out", help="CSV path; standard output when omitted")
    _add_common(sweep)
    _add_hops(sweep)

    check = sub.add_parser("validate", help="run the self-check gates")
    _add_common(check)

    simulate = sub.add_parser("simulate", help="dump simulated (gamma_b, gamma_e) pairs")
    simulate.add_argument("--n", help="reflector count")
    simulate.add_argument("--bits", help="bit width or inf")
    simulate.add_argument("--g0b-dB", dest=CONF_G0B_DB, help="legitimate reference SNR in dB")
    simulate.add_argument("--g0e-dB", dest=CONF_G0E_DB, help="eavesdropper reference SNR in dB")
    simulate.add_argument("--format", dest=CONF_FORMAT, choices=SAMPLE_FORMATS)
    simulate.add_argument("--out", help="output path; standard output when omitted")
    _add_common(simulate)
    _add_hops(simulate)
    return parser


def _overrides(args: argparse.Namespace, keys: Sequence[str]) -> dict[str, Any]:
    return {key: getattr(args, key) for key in keys if getattr(args, key, None) is not None}


COMMON_KEYS = (CONF_TRIALS, CONF_SEED, CONF_WORKERS, CONF_CHUNK_ELEMENTS)
HOP_KEYS = (CONF_HOP_A_R, CONF_HOP_R_B, CONF_HOP_R_E)


def _run_sweep(args: argparse.Namespace) -> int:
    keys = (CONF_METRIC, CONF_VARIANTS, CONF_N, CONF_BITS, CONF_G0B_DB, CONF_G0E_DB, CONF_RS, CONF_OUT)
    spec = build_sweep_spec(
        _overrides(args, (*keys, *COMMON_KEYS, *HOP_KEYS)), config_file=args.config, preset=args.preset
    )
    result = run_sweep(spec)
    if spec.out:
        result.save(spec.out)
    else:
        result.write_csv(sys.stdout)
    if result.failed:
        _LOGGER.error(f"{len(result.failed)} grid points could not be evaluated")
        return EXIT_VALIDATION_FAILED
    return EXIT_OK


def _run_validate(args: argparse.Namespace) -> int:
    data = validate_config(VALIDATE_SCHEMA, merge_sources(_overrides(args, COMMON_KEYS), args.config))
    status, outcomes = validate(
        seed=data[CONF_SEED],
        trials=data[CONF_TRIALS],
        workers=data[CONF_WORKERS],
        chunk_elements=data[CONF_CHUNK_ELEMENTS],
    )
    for outcome in outcomes:
        print(outcome.describe())
    return status


def _run_simulate(args: argparse.Namespace) -> int:
    keys = (CONF_N, CONF_BITS, CONF_G0B_DB, CONF_G0E_DB, CONF_FORMAT, CONF_OUT)
    data = validate_config(
        SIMULATE_SCHEMA, merge_sources(_overrides(args, (*keys, *COMMON_KEYS, *HOP_KEYS)), args.config)
    )
    cfg = SystemConfig(
        n=data[CONF_N],
        phase_model=PhaseErrorModel(data[CONF_BITS]),
        hop_a_r=data[CONF_HOP_A_R],
        hop_r_b=data[CONF_HOP_R_B],
        hop_r_e=data[CONF_HOP_R_E],
        gamma0_b=db_to_linear(data[CONF_G0B_DB]),
        gamma0_e=db_to_linear(data[CONF_G0E_DB]),
    )
    batch = simulate_batch(
        cfg,
        seed=data[CONF_SEED],
        trials=data[CONF_TRIALS],
        workers=data[CONF_WORKERS],
        chunk_elements=data[CONF_CHUNK_ELEMENTS],
    )
    fmt = data[CONF_FORMAT]
    if data[CONF_OUT]:
        write_samples(batch, data[CONF_OUT], fmt)
    else:
        write_samples(batch, sys.stdout.buffer if fmt == "binary" else sys.stdout, fmt)
    return EXIT_OK


COMMANDS = {"sweep": _run_sweep, "validate": _run_validate, "simulate": _run_simulate}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.verbosity), format=LOG_FORMAT)
    try:
        return COMMANDS[args.cmd](args)
    except ConfigValidationError as err:
        _LOGGER.error(f"Invalid configuration: {err}")
        return EXIT_BAD_ARGUMENTS
    except LrsSecrecyError as err:
        _LOGGER.error(f"{args.cmd} failed: {err}", exc_info=True)
        return EXIT_VALIDATION_FAILED
