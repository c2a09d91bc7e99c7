"""Certified evaluation of zeta(r), the ratio G_k(r) = zeta(r)/zeta((k+1)r),
Euler local factors, and restricted divisor sums on factored arguments.

Two evaluation routes are provided for zeta:

* :func:`zeta_partial_sum` -- the baseline: a plain partial sum with the
  integral enclosure ``(N+1)^{1-r}/(r-1) <= tail <= N^{1-r}/(r-1)``.  Slow
  near r = 1 but elementary.
* :func:`zeta` (default) -- Euler-Maclaurin with the classical remainder
  bound (for real r > 1 the remainder is no larger in magnitude than the
  first omitted correction term), evaluated entirely in mpmath interval
  arithmetic so rounding is accounted for.

Both return a :class:`~sigma_density.brackets.Bracket` whose width is
checked against the requested tolerance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import mpmath
import numpy as np
from mpmath import iv

from .brackets import Bracket, check_eps
from .errors import DomainError, PrecisionError
from .primes import PrimeTable

# Working precision for interval evaluations; ~60 decimal digits, far
# below the double-precision bracket floor, so interval rounding never
# dominates a returned bracket.
iv.prec = 200

# Partial-sum term cap for the baseline route near r = 1.
PARTIAL_SUM_MAX_TERMS = 2_000_000


def to_iv(x: float):
    """Exact interval image of a double (doubles are dyadic rationals)."""
    return iv.mpf(x)


def iv_pow(base, expo):
    """base**expo for interval base > 0 and arbitrary interval exponent."""
    return iv.exp(expo * iv.log(base))


def _check_r(r: float) -> None:
    if not r > 1:
        raise DomainError(f"zeta/G_k/local factors require r > 1, got {r}")


def zeta_iv(s, terms: int | None = None, corrections: int = 12):
    """Interval enclosure of zeta(s) for an interval s with s.a > 1.

    Euler-Maclaurin about N = ``terms``:

        zeta(s) = sum_{n<=N} n^-s + N^{1-s}/(s-1) - N^-s/2
                  + sum_{j<=M} B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{1-s-2j}
                  + R_M,   |R_M| <= |first omitted correction term|.

    The remainder bound holds for real s > 0 provided the correction terms
    are decreasing, which the choice of N relative to |s| guarantees.
    """
    s_hi = float(mpmath.mpf(s.b))
    if terms is None:
        # Keep (|s| / 2 pi N)^2 < 1 with margin so corrections decrease.
        terms = max(25, int(s_hi / 4) + 10)
    total = iv.mpf(0)
    for n in range(1, terms + 1):
        total += iv_pow(iv.mpf(n), -s)
    N = iv.mpf(terms)
    total += iv_pow(N, 1 - s) / (s - 1)
    total -= iv_pow(N, -s) / 2
    rising = s  # s(s+1)...(s+2j-2), starting value for j = 1
    factorial = iv.mpf(2)  # (2j)!
    for j in range(1, corrections + 1):
        p, q = mpmath.bernfrac(2 * j)
        term = (iv.mpf(int(p)) / iv.mpf(int(q))) / factorial * rising * iv_pow(N, 1 - s - 2 * j)
        total += term
        rising = rising * (s + 2 * j - 1) * (s + 2 * j)
        factorial = factorial * (2 * j + 1) * (2 * j + 2)
    p, q = mpmath.bernfrac(2 * corrections + 2)
    rem = abs(
        (iv.mpf(int(p)) / iv.mpf(int(q))) / factorial * rising
        * iv_pow(N, 1 - s - 2 * corrections - 2)
    )
    return total + iv.mpf([-mpmath.mpf(rem.b), mpmath.mpf(rem.b)])


def zeta(r: float, eps: float = 1e-13) -> Bracket:
    """Bracket of width <= eps containing zeta(r), r > 1."""
    _check_r(r)
    check_eps(eps)
    bracket = Bracket.from_iv(zeta_iv(to_iv(r)))
    if bracket.width > eps:
        raise PrecisionError(
            f"achieved bracket width {bracket.width} exceeds requested eps {eps}"
        )
    return bracket


def zeta_partial_sum(r: float, eps: float = 1e-6, max_terms: int = PARTIAL_SUM_MAX_TERMS) -> Bracket:
    """Baseline zeta enclosure: partial sum plus integral tail enclosure.

    The tail sum_{n>N} n^-r lies in [(N+1)^{1-r}/(r-1), N^{1-r}/(r-1)].
    N is chosen so the tail enclosure is narrower than eps/2; if that
    requires more than ``max_terms`` terms (r near 1), the term count is
    capped and the bracket widens with a warning rather than hanging.
    """
    _check_r(r)
    check_eps(eps)
    # Tail-enclosure width < N^{1-r}/(r-1) - (N+1)^{1-r}/(r-1) < N^{-r};
    # a sufficient N solves N^{-r} = eps/2.
    n_needed = int((2.0 / eps) ** (1.0 / r)) + 1
    if n_needed > max_terms:
        warnings.warn(
            f"partial-sum zeta capped at {max_terms} terms for r={r}; "
            "returned bracket is wider than requested",
            stacklevel=2,
        )
        n_needed = max_terms
    n = np.arange(1, n_needed + 1, dtype=np.float64)
    partial = float(np.sum(n ** (-r)))
    # Pairwise-summation rounding: ~(log2 N + 4) ulps relative to the sum.
    rounding = (math.log2(n_needed) + 4) * 2.3e-16 * partial
    tail_lo = (n_needed + 1) ** (1.0 - r) / (r - 1.0)
    tail_hi = n_needed ** (1.0 - r) / (r - 1.0)
    return Bracket(
        math.nextafter(partial - rounding + tail_lo * (1 - 1e-14), -math.inf),
        math.nextafter(partial + rounding + tail_hi * (1 + 1e-14), math.inf),
    )


def g_k_iv(k: int, r_iv):
    """Interval enclosure of G_k(r) = zeta(r)/zeta((k+1)r)."""
    return zeta_iv(r_iv) / zeta_iv((k + 1) * r_iv)


def log_g_iv(k: int, r_iv):
    """Interval enclosure of log G_k(r)."""
    return iv.log(zeta_iv(r_iv)) - iv.log(zeta_iv((k + 1) * r_iv))


def g_k(k: int, r: float, eps: float = 1e-10) -> Bracket:
    """Bracket for G_k(r), the supremum of the restricted divisor sum."""
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    _check_r(r)
    check_eps(eps)
    bracket = Bracket.from_iv(g_k_iv(k, to_iv(r)))
    if bracket.width > eps:
        raise PrecisionError(
            f"achieved bracket width {bracket.width} exceeds requested eps {eps}"
        )
    return bracket


def local_factor(p: int, k: int, r: float) -> float:
    """Euler local factor sum_{j=0}^k p^{-jr} in closed form."""
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    if p < 2:
        raise DomainError(f"p must be prime, got {p}")
    _check_r(r)
    x = float(p) ** (-r)
    return (1.0 - x ** (k + 1)) / (1.0 - x)


def log_local_factor_iv(p: int, k: int, r_iv):
    """Interval enclosure of log(sum_{j=0}^k p^{-jr})."""
    x = iv_pow(iv.mpf(p), -r_iv)
    return iv.log((1 - x ** (k + 1)) / (1 - x))


@dataclass(frozen=True)
class FactorSketch:
    """An element of the (k+1)-free integers in factored form.

    ``entries`` holds (prime_index, exponent) pairs with 1-based prime
    indices strictly increasing and every exponent in [1, k].  The empty
    list represents n = 1.  The integer itself is never materialized.
    """

    k: int
    entries: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"k must be a positive integer, got {self.k}")
        prev = 0
        for idx, exp in self.entries:
            if idx <= prev:
                raise DomainError("prime indices must be strictly increasing and >= 1")
            if not 1 <= exp <= self.k:
                raise DomainError(
                    f"exponent {exp} at prime index {idx} outside [1, {self.k}]"
                )
            prev = idx


def log_sigma_restricted(sketch: FactorSketch, r: float, table: PrimeTable) -> float:
    """log of the restricted divisor sum at the sketched integer.

    Multiplicativity turns the product of local factors into a sum of
    logs, which is the numerically stable form.
    """
    _check_r(r)
    return sum(
        math.log1p(_local_partial(table.nth(idx), exp, r))
        for idx, exp in sketch.entries
    )


def sigma_restricted(sketch: FactorSketch, r: float, table: PrimeTable) -> float:
    """The restricted divisor sum sum_{d | n} d^{-r} at the sketched n."""
    _check_r(r)
    value = 1.0
    for idx, exp in sketch.entries:
        value *= 1.0 + _local_partial(table.nth(idx), exp, r)
    return value


def _local_partial(p: int, exponent: int, r: float) -> float:
    """sum_{j=1}^{exponent} p^{-jr} (the local factor minus its leading 1)."""
    x = float(p) ** (-r)
    return x * (1.0 - x**exponent) / (1.0 - x)
