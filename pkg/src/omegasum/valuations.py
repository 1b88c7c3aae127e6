"""Prime and composite-base valuations of factorials.

legendre_valuation counts how often a prime divides n!, upsilon totals
those counts over all primes up to n, and generalized_valuation extends
the idea to an arbitrary base m >= 2 as the largest e with m**e | n!.
All of it is exact integer arithmetic; the only float in this module is
the final ratio in f_ratio.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sieve import FactorSieve

DEFAULT_F_RATIO_CAP = 100_000


@dataclass(frozen=True)
class ValuationQuery:
    """A (n, base) pair for a factorial-valuation question, base <= n."""

    n: int
    base: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not 2 <= self.base <= self.n:
            raise ValueError(f"base must lie in [2, n]; got base={self.base}, n={self.n}")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for d in range(3, math.isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


def _prime_valuation(n: int, p: int) -> int:
    # repeated integer division; caller guarantees p prime
    total = 0
    q = n // p
    while q:
        total += q
        q //= p
    return total


def legendre_valuation(n: int, p: int) -> int:
    """Exponent of the prime p in n!, via floor(n/p) + floor(n/p^2) + ...

    Never touches floating point, so it is exact for any machine-size n.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if p > n:
        raise ValueError(f"prime {p} exceeds n={n}; the valuation would be 0 by convention, refuse instead")
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    return _prime_valuation(n, p)


def prime_valuations(n: int, primes) -> np.ndarray:
    """legendre_valuation(n, p) for every p in an ascending prime array, p <= n.

    Vectorized repeated division; exact int64 throughout (p * q stays
    below 2**63 for any n this library sieves).
    """
    ps = np.asarray(primes, dtype=np.int64)
    if ps.size and (ps[0] < 2 or ps[-1] > n):
        raise ValueError("primes must lie in [2, n]")
    acc = n // ps
    q = ps.copy()
    active = np.flatnonzero(q <= n // ps)
    while active.size:
        q[active] *= ps[active]
        acc[active] += n // q[active]
        active = active[q[active] <= n // ps[active]]
    return acc


def upsilon(n: int, sieve: FactorSieve) -> int:
    """Total number of prime factors of n! with multiplicity.

    Equals the sum of legendre_valuation(n, p) over primes p <= n, here
    folded into one pass over the prime powers q <= n since each power
    contributes floor(n/q) exactly once.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > sieve.limit:
        raise ValueError(f"n={n} exceeds sieve limit {sieve.limit}")
    pp = sieve.prime_powers()
    cut = int(np.searchsorted(pp, n, side="right"))
    return int((n // pp[:cut]).sum())


def _factorize(m: int, sieve: FactorSieve) -> list[tuple[int, int]]:
    out = []
    while m > 1:
        p = int(sieve.spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append((p, e))
    return out


def generalized_valuation(m: int, n: int, sieve: FactorSieve) -> int:
    """Largest e >= 1 with m**e dividing n!, for any base 2 <= m <= n.

    Computed as floor of the minimum of v_p(n!)/v_p(m) over primes p
    dividing m. The minimum is taken with exact cross-multiplied integer
    comparisons; the floor happens once at the end.
    """
    if m < 2:
        raise ValueError("base must be at least 2 (1 divides everything)")
    if m > n:
        raise ValueError(f"base {m} exceeds n={n}")
    if n > sieve.limit:
        raise ValueError(f"n={n} exceeds sieve limit {sieve.limit}")
    best_num = best_den = 0
    for p, e in _factorize(m, sieve):
        v = _prime_valuation(n, p)
        if best_den == 0 or v * best_den < best_num * e:
            best_num, best_den = v, e
    return best_num // best_den


def generalized_valuation_sum(n: int, sieve: FactorSieve) -> int:
    """Sum of generalized_valuation(m, n) over all bases 2 <= m <= n."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > sieve.limit:
        raise ValueError(f"n={n} exceeds sieve limit {sieve.limit}")
    spf = sieve.spf
    vp: dict[int, int] = {}
    for p in sieve.primes()[: int(np.searchsorted(sieve.primes(), n, side="right"))].tolist():
        vp[p] = _prime_valuation(n, p)
    total = 0
    for m in range(2, n + 1):
        k = m
        best_num = best_den = 0
        while k > 1:
            p = int(spf[k])
            e = 0
            while k % p == 0:
                k //= p
                e += 1
            v = vp[p]
            if best_den == 0 or v * best_den < best_num * e:
                best_num, best_den = v, e
        total += best_num // best_den
    return total


def f_ratio(n: int, sieve: FactorSieve, max_n: int = DEFAULT_F_RATIO_CAP) -> float:
    """Ratio of the all-bases valuation sum of n! to its prime-only total.

    The numerator runs over bases m = 2..n (base 1 is excluded: every
    power of 1 divides n!, so it has no finite valuation). Always >= 1
    since the bases include every prime <= n. Quadratic in n, hence the
    explicit cap.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > max_n:
        raise ValueError(f"n={n} over the configured cap {max_n}; raise max_n knowingly")
    return generalized_valuation_sum(n, sieve) / upsilon(n, sieve)
