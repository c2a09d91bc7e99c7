"""Certified numerics for the density thresholds of restricted divisor
sums: prime tables, bracketed zeta evaluation, the density criterion,
threshold solving, greedy range approximation, and an empirical gap
census, all behind a deterministic CLI."""

__version__ = "0.1.0"

from .brackets import Bracket, PRECISION_FLOOR
from .errors import (
    CapacityError,
    DomainError,
    IndeterminateError,
    PrecisionError,
    SigmaDensityError,
)
from .primes import PrimeTable, load_or_sieve, nth_prime, sieve, verify_gap_lemma
from .zeta import FactorSketch, g_k, local_factor, log_sigma_restricted, sigma_restricted

__all__ = [
    "Bracket",
    "PRECISION_FLOOR",
    "CapacityError",
    "DomainError",
    "IndeterminateError",
    "PrecisionError",
    "SigmaDensityError",
    "PrimeTable",
    "load_or_sieve",
    "nth_prime",
    "sieve",
    "verify_gap_lemma",
    "FactorSketch",
    "g_k",
    "local_factor",
    "log_sigma_restricted",
    "sigma_restricted",
    "__version__",
]
