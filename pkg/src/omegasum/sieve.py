"""Sieving primitives: smallest-prime-factor tables, segmented prime
enumeration, prime-factor counting and running prime sums.

Everything here is exact integer arithmetic except the four real
accumulators (theta, 1/(p-1), 1/log p), which use compensated binary64
summation in ascending prime order so that results do not depend on how
a range was cut into segments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

DEFAULT_SEGMENT_SIZE = 1 << 20
DEFAULT_MAX_SIEVE_ENTRIES = 1 << 31


class SieveBudgetError(MemoryError):
    """Raised when a dense factor table would exceed the entry budget."""


class KahanSum:
    """Compensated summation with explicit (total, carry) state.

    The state is exposed so long scans can be checkpointed and resumed
    without changing a single bit of the result.
    """

    __slots__ = ("total", "carry")

    def __init__(self, total: float = 0.0, carry: float = 0.0):
        self.total = total
        self.carry = carry

    def add(self, x: float) -> None:
        y = x - self.carry
        t = self.total + y
        self.carry = (t - self.total) - y
        self.total = t

    def extend(self, values) -> None:
        # tight local-variable loop; values may be a numpy array
        s = self.total
        c = self.carry
        for x in np.asarray(values, dtype=float).tolist():
            y = x - c
            t = s + y
            c = (t - s) - y
            s = t
        self.total = s
        self.carry = c

    def extend_recording(self, values) -> np.ndarray:
        """Add values in order, returning the running total after each add."""
        out = []
        append = out.append
        s = self.total
        c = self.carry
        for x in np.asarray(values, dtype=float).tolist():
            y = x - c
            t = s + y
            c = (t - s) - y
            s = t
            append(s)
        self.total = s
        self.carry = c
        return np.asarray(out, dtype=float)

    def copy(self) -> "KahanSum":
        return KahanSum(self.total, self.carry)

    def __repr__(self):
        return f"KahanSum(total={self.total!r}, carry={self.carry!r})"


@dataclass(frozen=True)
class FactorSieve:
    """Dense smallest-prime-factor table for 2..limit.

    spf[k] is the least prime dividing k; k is prime iff spf[k] == k.
    Entries 0 and 1 are zero sentinels. The table is never mutated after
    construction, so instances can be shared freely across threads.
    """

    limit: int
    spf: np.ndarray

    def spf_of(self, k: int) -> int:
        if not 2 <= k <= self.limit:
            raise ValueError(f"k={k} outside sieve range [2, {self.limit}]")
        return int(self.spf[k])

    def is_prime(self, k: int) -> bool:
        if not 2 <= k <= self.limit:
            raise ValueError(f"k={k} outside sieve range [2, {self.limit}]")
        return int(self.spf[k]) == k

    @cached_property
    def _primes(self) -> np.ndarray:
        ks = np.arange(2, self.limit + 1, dtype=np.int64)
        return ks[self.spf[2:].astype(np.int64) == ks]

    def primes(self) -> np.ndarray:
        """Ascending array of all primes <= limit."""
        return self._primes

    @cached_property
    def _prime_powers(self) -> np.ndarray:
        ps = self._primes
        chunks = [ps]
        q = ps.copy()
        base = ps
        while True:
            keep = q <= self.limit // base
            if not keep.any():
                break
            q = q[keep] * base[keep]
            base = base[keep]
            chunks.append(q)
        return np.sort(np.concatenate(chunks))

    def prime_powers(self) -> np.ndarray:
        """Ascending array of all prime powers p**k <= limit."""
        return self._prime_powers


def build_spf(limit: int, max_entries: int = DEFAULT_MAX_SIEVE_ENTRIES) -> FactorSieve:
    """Build a dense smallest-prime-factor table up to limit (>= 2).

    Raises SieveBudgetError when the table would exceed max_entries;
    callers that only need aggregate data should use the segmented
    routines (omega_prefix_sum, prime_sums) instead of a bigger table.
    """
    if limit < 2:
        raise ValueError("sieve limit must be at least 2")
    if limit + 1 > max_entries:
        raise SieveBudgetError(
            f"smallest-prime-factor table for limit={limit} needs {limit + 1} "
            f"entries, over the budget of {max_entries}; use the segmented "
            "routines or raise max_entries explicitly"
        )
    dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    untouched = np.flatnonzero(spf == 0)
    spf[untouched] = untouched  # remaining zeros at k >= 2 are primes
    spf[0:2] = 0
    return FactorSieve(limit=limit, spf=spf)


def big_omega(k: int, sieve: FactorSieve) -> int:
    """Number of prime factors of k counted with multiplicity; 1 -> 0."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if k > sieve.limit:
        raise ValueError(f"k={k} exceeds sieve limit {sieve.limit}")
    spf = sieve.spf
    count = 0
    while k > 1:
        k //= int(spf[k])
        count += 1
    return count


def _small_primes(limit: int) -> np.ndarray:
    """Primes <= limit by a dense boolean sieve (limit is always modest here)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def prime_mask_block(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Boolean primality mask for [lo, hi); base must hold primes <= sqrt(hi-1)."""
    if lo < 0 or hi < lo:
        raise ValueError("bad block bounds")
    mask = np.ones(hi - lo, dtype=bool)
    for i in range(min(2, hi) - lo):
        if lo + i < 2:
            mask[i] = False
    for p in base.tolist():
        if p * p >= hi:
            break
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start < hi:
            mask[start - lo :: p] = False
    return mask


def omega_block(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Prime-factor counts (with multiplicity) for every integer in [lo, hi).

    base must hold the primes <= sqrt(hi-1). Pure integer arithmetic:
    each prime power strides the block once, then whatever remains above 1
    after division is a single leftover prime factor.
    """
    if lo < 2 or hi < lo:
        raise ValueError("block must satisfy 2 <= lo <= hi")
    n = hi - lo
    omega = np.zeros(n, dtype=np.int64)
    rem = np.arange(lo, hi, dtype=np.int64)
    for p in base.tolist():
        if p * p >= hi:
            break
        pk = p
        while pk < hi:
            start = ((lo + pk - 1) // pk) * pk
            if start >= hi:
                break
            sl = slice(start - lo, n, pk)
            omega[sl] += 1
            rem[sl] //= p
            pk *= p
    omega[rem > 1] += 1
    return omega


def omega_prefix_sum(n: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> int:
    """Exact sum of big_omega(k) for k = 1..n, computed in segments.

    The result is an exact integer and therefore independent of
    segment_size by construction.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if segment_size < 1:
        raise ValueError("segment_size must be positive")
    if n == 1:
        return 0
    base = _small_primes(math.isqrt(n))
    total = 0
    for lo in range(2, n + 1, segment_size):
        hi = min(lo + segment_size, n + 1)
        total += int(omega_block(lo, hi, base).sum())
    return total


def omega_prefix_sums_at(points, segment_size: int = DEFAULT_SEGMENT_SIZE) -> np.ndarray:
    """Prefix sums of big_omega at each of the given sorted points, one pass.

    points must be ascending positive integers. Returns int64 values
    aligned with the input.
    """
    pts = np.asarray(points, dtype=np.int64)
    if pts.size == 0:
        return np.zeros(0, dtype=np.int64)
    if pts[0] < 1 or np.any(np.diff(pts) < 0):
        raise ValueError("points must be ascending positive integers")
    n = int(pts[-1])
    out = np.zeros(pts.size, dtype=np.int64)
    if n == 1:
        return out
    base = _small_primes(math.isqrt(n))
    carry = 0
    for lo in range(2, n + 1, segment_size):
        hi = min(lo + segment_size, n + 1)
        i = np.searchsorted(pts, lo, side="left")
        j = np.searchsorted(pts, hi - 1, side="right")
        csum = np.cumsum(omega_block(lo, hi, base))
        if j > i:
            out[i:j] = carry + csum[pts[i:j] - lo]
        carry += int(csum[-1])
    return out


def primes_upto(n: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> np.ndarray:
    """Ascending int64 array of all primes <= n, sieved in segments."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    base = _small_primes(math.isqrt(n))
    chunks = []
    for lo in range(2, n + 1, segment_size):
        hi = min(lo + segment_size, n + 1)
        chunks.append(np.flatnonzero(prime_mask_block(lo, hi, base)) + lo)
    return np.concatenate(chunks)


@dataclass(frozen=True)
class PrimeSums:
    """Snapshot of the running prime sums at n.

    pi counts primes <= n, theta is the sum of log p, sum_inv_pm1 the sum
    of 1/(p-1) and sum_inv_logp the sum of 1/log p, all over primes <= n.
    """

    n: int
    pi: int
    theta: float
    sum_inv_pm1: float
    sum_inv_logp: float


def prime_sums(n: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> PrimeSums:
    """Running prime sums at n >= 2 via segmented enumeration."""
    res = prime_sums_at([n], segment_size=segment_size)
    return res[0]


def prime_sums_at(points, segment_size: int = DEFAULT_SEGMENT_SIZE) -> list[PrimeSums]:
    """PrimeSums snapshots at each of the given ascending points (all >= 2).

    One segmented pass; the compensated accumulators advance over every
    prime exactly once, in ascending order.
    """
    pts = np.asarray(points, dtype=np.int64)
    if pts.size == 0:
        return []
    if pts[0] < 2 or np.any(np.diff(pts) < 0):
        raise ValueError("points must be ascending integers >= 2")
    n = int(pts[-1])
    base = _small_primes(math.isqrt(n))
    pi = 0
    theta = KahanSum()
    inv_pm1 = KahanSum()
    inv_logp = KahanSum()
    out: list[PrimeSums] = []
    next_idx = 0
    for lo in range(2, n + 1, segment_size):
        hi = min(lo + segment_size, n + 1)
        mask = prime_mask_block(lo, hi, base)
        ps = np.flatnonzero(mask) + lo
        logs = np.log(ps.astype(float))
        # snapshots inside this segment, cheapest served in prime order
        j = np.searchsorted(pts, hi - 1, side="right")
        block_pts = pts[next_idx:j]
        if block_pts.size:
            th = theta.copy()
            a = inv_pm1.copy()
            b = inv_logp.copy()
            cut = 0
            for q in block_pts.tolist():
                k = int(np.searchsorted(ps, q, side="right"))
                if k > cut:
                    th.extend(logs[cut:k])
                    a.extend(1.0 / (ps[cut:k].astype(float) - 1.0))
                    b.extend(1.0 / logs[cut:k])
                    cut = k
                out.append(
                    PrimeSums(
                        n=q,
                        pi=pi + k,
                        theta=th.total,
                        sum_inv_pm1=a.total,
                        sum_inv_logp=b.total,
                    )
                )
            next_idx = j
        pi += int(ps.size)
        theta.extend(logs)
        inv_pm1.extend(1.0 / (ps.astype(float) - 1.0))
        inv_logp.extend(1.0 / logs)
    return out
