"""Prime generation, caching, and the exhaustive prime-gap ratio check.

The gap check establishes, by exact integer arithmetic, that consecutive
primes satisfy p_{j+1}/p_j < sqrt(2) for every index j outside {1, 2, 4}
with p_j below the search bound 396738.  Beyond that bound the bound on
prime gaps is a known analytic fact and is not re-proved here; the finite
search is the only computational content.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

# Exhaustive-search bound for the gap ratio check.
GAP_SEARCH_BOUND = 396738
# Indices excluded from the sqrt(2) gap bound (gaps 2->3, 3->5, 7->11).
GAP_EXCLUDED_INDICES = (1, 2, 4)

# Enough for the first 100000 primes (p_100000 = 1299709) with headroom.
DEFAULT_LIMIT = 2_000_000

CACHE_ENV_VAR = "SIGMA_DENSITY_CACHE"


@dataclass(frozen=True)
class PrimeTable:
    """Immutable ascending list of all primes up to ``limit``.

    Indexing is 1-based: ``nth(1) == 2``.
    """

    limit: int
    primes: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.primes)

    def nth(self, i: int) -> int:
        """The i-th prime, 1-based."""
        if i < 1:
            raise DomainError(f"prime index must be >= 1, got {i}")
        if i > len(self.primes):
            raise IndexError(
                f"table holds {len(self.primes)} primes (limit {self.limit}); "
                f"index {i} requires a larger sieve"
            )
        return int(self.primes[i - 1])

    def slice(self, start: int, stop: int) -> np.ndarray:
        """Primes p_start .. p_stop inclusive, 1-based, as int64 array."""
        if start < 1 or stop > len(self.primes):
            raise IndexError(f"prime slice [{start}, {stop}] outside table of size {len(self.primes)}")
        return self.primes[start - 1 : stop]


def sieve(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes up to ``limit`` inclusive."""
    if limit < 2:
        raise DomainError(f"sieve limit must be >= 2, got {limit}")
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    primes = np.nonzero(mask)[0].astype(np.int64)
    primes.setflags(write=False)
    return PrimeTable(limit=limit, primes=primes)


def nth_prime(table: PrimeTable, i: int) -> int:
    return table.nth(i)


def _cache_path(limit: int, cache_dir: str) -> str:
    return os.path.join(cache_dir, f"primes_{limit}.txt")


def load_or_sieve(limit: int = DEFAULT_LIMIT, cache_dir: str | None = None) -> PrimeTable:
    """Sieve, using an on-disk text cache when a cache directory is configured.

    Cache format: first line ``limit count``, then one prime per line in
    ascending order.  A corrupt cache (wrong count, wrong first/last entry)
    is discarded and rebuilt.
    """
    if cache_dir is None:
        cache_dir = os.environ.get(CACHE_ENV_VAR)
    if not cache_dir:
        return sieve(limit)
    path = _cache_path(limit, cache_dir)
    if os.path.exists(path):
        try:
            with open(path) as fh:
                header = fh.readline().split()
                cached_limit, count = int(header[0]), int(header[1])
                primes = np.loadtxt(fh, dtype=np.int64, ndmin=1)
            if (
                cached_limit == limit
                and len(primes) == count
                and count >= 1
                and primes[0] == 2
                and _is_prime(int(primes[-1]))
            ):
                primes.setflags(write=False)
                return PrimeTable(limit=limit, primes=primes)
        except (OSError, ValueError, IndexError):
            pass  # fall through to re-sieve
    table = sieve(limit)
    os.makedirs(cache_dir, exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(f"{table.limit} {len(table)}\n")
        np.savetxt(fh, table.primes, fmt="%d")
    os.replace(tmp, path)
    return table


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class GapLemmaReport:
    """Result of the exhaustive sqrt(2)-gap check below GAP_SEARCH_BOUND."""

    bound: int
    checked: int
    max_ratio: float
    argmax_index: int
    passed: bool
    excluded: tuple[tuple[int, float], ...]  # (index j, ratio p_{j+1}/p_j)


def verify_gap_lemma(table: PrimeTable) -> GapLemmaReport:
    """Check p_{j+1}^2 < 2 p_j^2 for all j not in {1,2,4} with p_j < 396738.

    The comparison is exact integer arithmetic; no floating point enters
    the pass/fail decision.  The excluded indices are reported with their
    (super-sqrt(2)) ratios for reference.
    """
    if table.limit < GAP_SEARCH_BOUND:
        raise DomainError(
            f"table limit {table.limit} < search bound {GAP_SEARCH_BOUND}"
        )
    primes = table.primes
    n_below = int(np.searchsorted(primes, GAP_SEARCH_BOUND))
    if n_below >= len(primes):
        raise DomainError("table must contain at least one prime beyond the search bound")

    max_ratio_sq = (0, 1)  # p_{j+1}^2 / p_j^2 as an exact pair
    argmax = 0
    checked = 0
    passed = True
    excluded = []
    for j in range(1, n_below + 1):
        p, q = int(primes[j - 1]), int(primes[j])
        if j in GAP_EXCLUDED_INDICES:
            excluded.append((j, q / p))
            continue
        checked += 1
        if q * q >= 2 * p * p:
            passed = False
        if q * q * max_ratio_sq[1] > max_ratio_sq[0] * p * p:
            max_ratio_sq = (q * q, p * p)
            argmax = j
    return GapLemmaReport(
        bound=GAP_SEARCH_BOUND,
        checked=checked,
        max_ratio=(max_ratio_sq[0] / max_ratio_sq[1]) ** 0.5,
        argmax_index=argmax,
        passed=passed,
        excluded=tuple(excluded),
    )
