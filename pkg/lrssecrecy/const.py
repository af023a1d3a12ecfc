"""Constants for the lrssecrecy package."""

from __future__ import annotations

import logging

DOMAIN = "lrssecrecy"
LOGGER = logging.getLogger(__package__)

CONF_METRIC = "metric"
CONF_VARIANTS = "variants"
CONF_N = "n"
CONF_BITS = "bits"
CONF_G0B_DB = "g0b_dB"
CONF_G0E_DB = "g0e_dB"
CONF_RS = "rs"
CONF_TRIALS = "trials"
CONF_SEED = "seed"
CONF_OUT = "out"
CONF_WORKERS = "workers"
CONF_CHUNK_ELEMENTS = "chunk_elements"
CONF_HOP_A_R = "hop_a_r"
CONF_HOP_R_B = "hop_r_b"
CONF_HOP_R_E = "hop_r_e"
CONF_INVERSION_A = "inversion_a"
CONF_INVERSION_TERMS = "inversion_terms"
CONF_INVERSION_EULER_TERMS = "inversion_euler_terms"

METRIC_SOP = "sop"
METRIC_ASC = "asc"
METRIC_SNR = "snr"
METRICS = (METRIC_SOP, METRIC_ASC, METRIC_SNR)

VARIANT_FR = "FR"
VARIANT_BR = "BR"
VARIANT_NR = "NR"
VARIANT_MC = "MC"
ASYMPTOTIC_PREFIX = "asymptotic-"
CLOSED_FORM_VARIANTS = (VARIANT_FR, VARIANT_BR, VARIANT_NR)
VARIANTS = (
    *CLOSED_FORM_VARIANTS,
    VARIANT_MC,
    *(f"{ASYMPTOTIC_PREFIX}{v}" for v in CLOSED_FORM_VARIANTS),
)

PRESET_FIG1 = "fig1"
PRESET_FIG2 = "fig2"

DEFAULT_RATE_RS = 1.0
DEFAULT_G0E_DB = 10.0
DEFAULT_TRIALS = 1_000_000
DEFAULT_SEED = 2021
DEFAULT_WORKERS = 1
DEFAULT_CHUNK_ELEMENTS = 1 << 20
DEFAULT_RICIAN_K = 1.0

# Euler-summation Laplace inversion
DEFAULT_INVERSION_A = 30.0
DEFAULT_INVERSION_TERMS = 20
DEFAULT_INVERSION_EULER_TERMS = 15
DEFAULT_INVERSION_RTOL = 1e-5
DEFAULT_INVERSION_ATOL = 1e-12
DEFAULT_INVERSION_MAX_TERMS = 640

# Monte Carlo
MIN_EXPECTED_EVENTS = 100
KS_CRITICAL_1PCT = 1.63
INDEPENDENCE_SIGMAS = 3.0
# peak of |F - F_exp| per unit excess kurtosis of a finite sum of non-Gaussian terms
RAYLEIGH_DEVIATION_PEAK = 0.1153
SOP_CONFIDENCE_Z = 2.576

CSV_HEADER = ("n", "bits", "g0b_dB", "variant", "value", "stderr")
SAMPLES_CSV_HEADER = "gamma_b,gamma_e"

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_BAD_ARGUMENTS = 2
