"""Constructive approximation and empirical gap mapping.

The greedy procedure walks the primes in order and, at each one, takes
the largest exponent alpha <= k whose local-factor log keeps the partial
sum at or below the target.  In the dense regime the partial sums
converge to the target; in the non-dense regime the residual can stall,
which is exactly the gap phenomenon the census maps empirically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .brackets import Bracket
from .density import t_func, tail
from .errors import CapacityError, DomainError, IndeterminateError
from .primes import PrimeTable
from .zeta import FactorSketch, log_g_iv, to_iv

CENSUS_MAX_BOUND = 50_000_000


@dataclass(frozen=True)
class GreedyTrace:
    """Full record of one greedy run.

    C are the partial log sums (nondecreasing, never exceeding the
    target), D the per-prime deficits against the full local factor, E
    the cumulative deficits; C_l + E_l converges to log G_k(r).
    """

    k: int
    r: float
    target: float
    alphas: list[int]
    C: list[float]
    D: list[float]
    E: list[float]
    achieved: float
    residual: float

    def witness(self) -> FactorSketch:
        """The factored integer realizing ``achieved``."""
        return FactorSketch(
            k=self.k,
            entries=tuple(
                (i + 1, a) for i, a in enumerate(self.alphas) if a > 0
            ),
        )


def greedy_approximate(
    table: PrimeTable, k: int, r: float, x: float, steps: int
) -> GreedyTrace:
    """Run the greedy construction over the first ``steps`` primes.

    The target must satisfy 0 <= x < log G_k(r), certified against the
    bracket for log G_k(r); a target inside the bracket's uncertainty
    band is rejected as indeterminate rather than guessed about.
    """
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    if not r > 1:
        raise DomainError(f"r must exceed 1, got {r}")
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps}")
    if steps > len(table):
        raise DomainError(f"steps={steps} exceeds the table of {len(table)} primes")
    if x < 0:
        raise DomainError(f"target must be >= 0, got {x}")
    log_g = Bracket.from_iv(log_g_iv(k, to_iv(r)))
    if x >= log_g.hi:
        raise DomainError(f"target {x} is not below log G_{k}({r}) = {log_g.hi}")
    if x >= log_g.lo:
        raise IndeterminateError(
            f"target {x} falls inside the log G bracket [{log_g.lo}, {log_g.hi}]"
        )

    p = table.slice(1, steps).astype(np.float64)
    # partial_logs[a][l] = log(sum_{j<=a} p_l^{-jr}); row 0 is zero.
    powers = p ** (-r)
    partials = np.cumsum(
        np.vstack([np.ones_like(p)] + [powers**a for a in range(1, k + 1)]), axis=0
    )
    partial_logs = np.log(partials)

    alphas: list[int] = []
    C: list[float] = []
    D: list[float] = []
    E: list[float] = []
    c = 0.0
    e = 0.0
    for l in range(steps):
        alpha = 0
        for a in range(k, 0, -1):
            if c + partial_logs[a, l] <= x:
                alpha = a
                break
        c += partial_logs[alpha, l]
        d = partial_logs[k, l] - partial_logs[alpha, l]
        e += d
        alphas.append(alpha)
        C.append(c)
        D.append(d)
        E.append(e)
    return GreedyTrace(
        k=k,
        r=r,
        target=x,
        alphas=alphas,
        C=C,
        D=D,
        E=E,
        achieved=c,
        residual=x - c,
    )


@dataclass(frozen=True)
class GapCensus:
    """Empirical map of the range up to an integer bound.

    ``values`` are the distinct restricted divisor sums of the admissible
    n <= bound, sorted ascending.  ``gaps`` are the adjacent spacings
    wider than the resolution; ``analytic_gaps`` overlays the certified
    first-level forbidden intervals (exponentiated to linear scale).
    """

    k: int
    r: float
    bound: int
    resolution: float
    values: np.ndarray = field(repr=False)
    gaps: tuple[tuple[float, float, float], ...]  # (left, right, width)
    analytic_gaps: tuple[tuple[int, float, float], ...]  # (m, left, right)
    estimated_intervals: int


def _sigma_values(table: PrimeTable, k: int, r: float, bound: int) -> np.ndarray:
    """Restricted divisor sums of every admissible n <= bound, by direct
    enumeration with a smallest-prime-factor sieve.  Oracle-grade on
    purpose: obviously correct beats fast here."""
    spf = np.zeros(bound + 1, dtype=np.int64)
    for p in range(2, int(bound**0.5) + 1):
        if spf[p] == 0:
            spf[p * p :: p][spf[p * p :: p] == 0] = p
    values = [1.0]
    for n in range(2, bound + 1):
        m = n
        value = 1.0
        admissible = True
        while m > 1:
            p = int(spf[m]) or m
            exponent = 0
            while m % p == 0:
                m //= p
                exponent += 1
            if exponent > k:
                admissible = False
                break
            x = float(p) ** (-r)
            value *= (1.0 - x ** (exponent + 1)) / (1.0 - x)
        if admissible:
            values.append(value)
    return np.unique(np.asarray(values))


def range_census(
    table: PrimeTable,
    k: int,
    r: float,
    bound: int,
    resolution: float | None = None,
    m_max: int = 10,
) -> GapCensus:
    """Enumerate the range up to ``bound`` and report its gap structure.

    Default resolution is 10/bound: adjacent admissible integers near the
    bound perturb the sum by O(1/bound), so spacings an order above that
    are structural rather than enumeration artifacts.  The census never
    reconciles empirical and analytic gaps; both are reported as found.
    """
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    if not r > 1:
        raise DomainError(f"r must exceed 1, got {r}")
    if bound < 1:
        raise DomainError(f"bound must be >= 1, got {bound}")
    if bound > CENSUS_MAX_BOUND:
        raise CapacityError(
            f"bound {bound} exceeds the census capacity; try {CENSUS_MAX_BOUND} or less",
            suggested_bound=CENSUS_MAX_BOUND,
        )
    if resolution is None:
        resolution = 10.0 / bound
    if not resolution > 0:
        raise DomainError(f"resolution must be positive, got {resolution}")

    values = _sigma_values(table, k, r, bound)
    diffs = np.diff(values)
    wide = np.nonzero(diffs > resolution)[0]
    gaps = tuple(
        (float(values[i]), float(values[i + 1]), float(diffs[i])) for i in wide
    )
    analytic = tuple(
        (entry.m, math.exp(entry.interval[0]), math.exp(entry.interval[1]))
        for entry in analytic_gap_scan(table, k, r, m_max)
        if entry.interval is not None
    )
    return GapCensus(
        k=k,
        r=r,
        bound=bound,
        resolution=resolution,
        values=values,
        gaps=gaps,
        analytic_gaps=analytic,
        estimated_intervals=len(gaps) + 1,
    )


@dataclass(frozen=True)
class ScanEntry:
    """One level of the analytic gap scan."""

    m: int
    t: Bracket
    status: str  # 'positive' | 'nonpositive' | 'indeterminate'
    interval: tuple[float, float] | None  # certified forbidden log-interval


def analytic_gap_scan(
    table: PrimeTable, k: int, r: float, m_max: int
) -> tuple[ScanEntry, ...]:
    """Certified first-level forbidden intervals for m = 1..m_max.

    Entries whose T bracket straddles zero are flagged indeterminate, not
    guessed.  Callers wanting only firing levels filter on status."""
    if m_max < 1:
        raise DomainError(f"m_max must be >= 1, got {m_max}")
    entries = []
    for m in range(1, m_max + 1):
        t = t_func(table, k, m, r)
        if t.strictly_positive():
            low = tail(table, k, m, r)
            pm = float(table.nth(m))
            high = math.log1p(pm ** (-r))
            # inner (certainly forbidden) interval; pad the upper endpoint
            # for the float rounding of log1p
            entries.append(
                ScanEntry(
                    m=m,
                    t=t,
                    status="positive",
                    interval=(low.hi, math.nextafter(high, -math.inf)),
                )
            )
        elif t.nonpositive():
            entries.append(ScanEntry(m=m, t=t, status="nonpositive", interval=None))
        else:
            entries.append(ScanEntry(m=m, t=t, status="indeterminate", interval=None))
    return tuple(entries)
