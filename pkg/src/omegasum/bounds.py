"""Closed-form bound evaluators with their fixed numeric constants.

Each function evaluates a formula and returns raw values; none of them
classifies anything (that is the verifier's job). All accept a scalar or
an ndarray and give back the matching shape. Domain checks raise
ValueError so a bad n never turns into a silent NaN.

The decimal constants below are treated as exact inputs: they define
what gets verified and are never rederived at runtime.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np
from scipy.special import gammaln

from .valuations import _is_prime


@dataclass(frozen=True)
class Constants:
    """Fixed constants for the bound formulas, as printed decimals."""

    m_prime: float = 1.0346538818  # limit offset of sum 1/(p-1) against loglog
    prop1_lower_a: float = -11.86870152
    prop1_upper_b: float = 21.18095291
    prop2_lower_a: float = -16.42613005
    prop2_upper_b: float = 30.52238614
    prop2_envelope: float = 271382.0
    theta_c1: float = 793.0  # log^2 envelope numerator, over a factor 200
    theta_c1_denom: float = 200.0
    theta_c2: float = 1717433.0  # log^4 envelope numerator
    pi_c: float = 1.2762
    main_c: float = 23.0  # half-width multiplier of the main band
    prop1_lower_c: float = 14.0
    r_target: float = 9.0
    thresholds: Mapping[str, int] = field(
        default_factory=lambda: MappingProxyType(
            {
                "prop1-refined-lower": 3564183,
                "prop1-refined-upper": 7126157,
                "prop2-refined-lower": 564,
                "prop2-refined-upper": 569,
                "r-envelope-vs-9n": 563206,
                "appendix-limit": 8000000,
            }
        )
    )


CONSTANTS = Constants()


def _prep(x, minimum: float, name: str = "n", strict: bool = False):
    a = np.atleast_1d(np.asarray(x, dtype=float))
    bad = a <= minimum if strict else a < minimum
    if np.any(bad):
        op = ">" if strict else ">="
        raise ValueError(f"{name} must be {op} {minimum}")
    return a, np.ndim(x) == 0


def _ret(a: np.ndarray, scalar: bool):
    return float(a[0]) if scalar else a


def _ret2(lo: np.ndarray, hi: np.ndarray, scalar: bool):
    if scalar:
        return float(lo[0]), float(hi[0])
    return lo, hi


def vp_bounds(n, p):
    """Lower/upper estimates for the exponent of the prime p in n!.

    lower = (n-p)/(p-1) - log n/log p is a strict lower bound; upper =
    (n-1)/(p-1) is attained exactly when n is a power of p. p may be an
    array; primality is only checked for scalar p, array callers are
    expected to pass sieve-certified primes.
    """
    if np.ndim(p) == 0 and not _is_prime(int(p)):
        raise ValueError(f"{p} is not prime")
    nn = float(n)
    if nn < 2:
        raise ValueError("n must be at least 2")
    pa, scalar = _prep(p, 2.0, "p")
    if np.any(pa > nn):
        raise ValueError("p must not exceed n")
    lower = (nn - pa) / (pa - 1.0) - math.log(nn) / np.log(pa)
    upper = (nn - 1.0) / (pa - 1.0)
    return _ret2(lower, upper, scalar)


def pi_upper_bound(x):
    """Explicit upper estimate for the prime-counting function, x > 1."""
    a, scalar = _prep(x, 1.0, "x", strict=True)
    lx = np.log(a)
    return _ret(a / lx * (1.0 + CONSTANTS.pi_c / lx), scalar)


def theta_error_envelopes(x):
    """Envelopes for |theta(x) - x|: (c1/200) x/log^2 x and c2 x/log^4 x."""
    a, scalar = _prep(x, 1.0, "x", strict=True)
    lx = np.log(a)
    env1 = CONSTANTS.theta_c1 * a / (CONSTANTS.theta_c1_denom * lx**2)
    env2 = CONSTANTS.theta_c2 * a / lx**4
    return _ret2(env1, env2, scalar)


def prop1_band(n):
    """Crude band for sum 1/(p-1): loglog(n-1) - 14 and loglog(n-1) + 23."""
    a, scalar = _prep(n, 3.0, "n")
    ll = np.log(np.log(a - 1.0))
    return _ret2(ll - CONSTANTS.prop1_lower_c, ll + CONSTANTS.main_c, scalar)


def prop1_lower_tail(n):
    """Correction added to loglog n in the refined lower bound for sum 1/(p-1)."""
    a, scalar = _prep(n, 2.0, "n")
    ln = np.log(a)
    t = a / ((a - 1.0) * ln)
    return _ret(CONSTANTS.prop1_lower_a + t - CONSTANTS.theta_c2 * t / ln**4, scalar)


def prop1_upper_tail(n):
    """Correction added to loglog(n-1) in the refined upper bound; < 23 from 7126157 on."""
    a, scalar = _prep(n, 2.0, "n")
    ln = np.log(a)
    t = a / ((a - 1.0) * ln)
    return _ret(CONSTANTS.prop1_upper_b + t + CONSTANTS.theta_c2 * t / ln**4, scalar)


def prop1_refined(n):
    """Refined bounds for sum 1/(p-1) over primes p <= n.

    lower is defined for n >= 2; upper needs loglog(n-1), so it is NaN at
    n = 2 and real from n >= 3.
    """
    a, scalar = _prep(n, 2.0, "n")
    lower = np.log(np.log(a)) + prop1_lower_tail(a)
    upper = np.full_like(a, math.nan)
    ok = a >= 3.0
    if ok.any():
        upper[ok] = np.log(np.log(a[ok] - 1.0)) + prop1_upper_tail(a[ok])
    return _ret2(lower, upper, scalar)


def prop2_main(n):
    """Main term for sum 1/log p: n/log^2 n + 2n/log^3 n + 6n/log^4 n."""
    a, scalar = _prep(n, 2.0, "n")
    ln = np.log(a)
    return _ret(a / ln**2 + 2.0 * a / ln**3 + 6.0 * a / ln**4, scalar)


def prop2_main_and_envelope(n):
    """Main term for sum 1/log p plus the symmetric envelope 271382 n/log^5 n."""
    a, scalar = _prep(n, 2.0, "n")
    env = CONSTANTS.prop2_envelope * a / np.log(a) ** 5
    return _ret2(np.atleast_1d(prop2_main(a)), env, scalar)


def prop2_lower_tail(n):
    """Correction added to the main term in the refined lower bound for sum 1/log p."""
    a, scalar = _prep(n, 2.0, "n")
    ln5 = np.log(a) ** 5
    t = 1607.0 * a / (100.0 * ln5) - CONSTANTS.theta_c2 * a / (ln5 * np.log(a))
    return _ret(t + CONSTANTS.prop2_lower_a, scalar)


def prop2_upper_tail(n):
    """Correction added to the main term in the refined upper bound for sum 1/log p."""
    a, scalar = _prep(n, 2.0, "n")
    ln5 = np.log(a) ** 5
    t = 54281.0 * a / (800.0 * ln5) + CONSTANTS.theta_c2 * a / (ln5 * np.log(a))
    return _ret(t + CONSTANTS.prop2_upper_b, scalar)


def prop2_refined(n):
    """Refined bounds for sum 1/log p.

    The lower bound's validity starts at n = 564; below that it is NaN.
    The upper bound is defined for all n >= 2.
    """
    a, scalar = _prep(n, 2.0, "n")
    main = np.atleast_1d(prop2_main(a))
    lower = np.full_like(a, math.nan)
    ok = a >= 564.0
    if ok.any():
        lower[ok] = main[ok] + prop2_lower_tail(a[ok])
    upper = main + prop2_upper_tail(a)
    return _ret2(lower, upper, scalar)


def r_envelope(n):
    """Closed-form majorant of pi(n) + log n * sum 1/log p; < 9(n-1) from 563206 on."""
    a, scalar = _prep(n, 2.0, "n")
    ln = np.log(a)
    out = (
        2.0 * a / ln
        + 3.2762 * a / ln**2
        + 6.0 * a / ln**3
        + CONSTANTS.prop2_envelope * a / ln**4
    )
    return _ret(out, scalar)


def _main_center_width(n):
    a, scalar = _prep(n, 3.0, "n")
    nm1 = a - 1.0
    center = nm1 * np.log(np.log(nm1))
    width = CONSTANTS.main_c * nm1
    return center, width, scalar


def main_theorem_band(n):
    """Band that contains the prefix sum of big_omega: (n-1)loglog(n-1) +- 23(n-1)."""
    center, width, scalar = _main_center_width(n)
    return _ret2(center - width, center + width, scalar)


def hardy_ramanujan_main(n, allow_small: bool = False):
    """Leading term n loglog n + m_prime * n of the prefix sum of big_omega.

    Defined for n >= 3; n = 2 gives a negative loglog and is only served
    when allow_small is set.
    """
    a, scalar = _prep(n, 2.0 if allow_small else 3.0, "n")
    return _ret(a * np.log(np.log(a)) + CONSTANTS.m_prime * a, scalar)


def inverse_gamma(y):
    """The x >= 2 with gamma(x) = y, for y >= 2, by bisection on log gamma.

    log gamma is increasing on this branch; the bracket starts at [2, 4]
    and doubles until it contains the root, then bisects down to a few
    ulps. Relative accuracy of the round trip is well below 1e-10.
    """
    a, scalar = _prep(y, 2.0, "y")
    ly = np.log(a)
    lo = np.full_like(a, 2.0)
    hi = np.full_like(a, 4.0)
    while True:
        low = gammaln(hi) < ly
        if not low.any():
            break
        hi[low] *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        low = gammaln(mid) < ly
        lo = np.where(low, mid, lo)
        hi = np.where(low, hi, mid)
        if np.all(hi - lo <= 4e-16 * hi):
            break
    return _ret(0.5 * (lo + hi), scalar)


def _gamma_band_center_width(n):
    a, scalar = _prep(n, 2.0, "n", strict=True)
    g = np.atleast_1d(inverse_gamma(a))
    t = g - 2.0
    center = t * np.log(np.log(t))
    width = CONSTANTS.main_c * t
    return center, width, scalar


def omega_gamma_band(n):
    """Band for big_omega(n) in terms of g = inverse_gamma(n): (g-2)loglog(g-2) +- 23(g-2).

    Needs g - 2 > 1, i.e. n > 2.
    """
    center, width, scalar = _gamma_band_center_width(n)
    return _ret2(center - width, center + width, scalar)
