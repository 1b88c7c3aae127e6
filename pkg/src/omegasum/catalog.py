"""Catalog of the cataloged inequalities the verifier can scan.

Every entry pairs a measured quantity (lhs) with a closed-form bound
(rhs) over a declared integer domain. Entries are identified by stable
string ids; the id set is part of the public interface and is pinned by
tests. Evaluators work on whole segments at a time and never classify;
classification is a single shared function so the epsilon rules cannot
drift between specs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import bounds
from .bounds import CONSTANTS
from .valuations import prime_valuations

PASS, MARGINAL, FAIL = 0, 1, 2
CLASS_NAMES = ("pass", "marginal", "fail")


def classify_margins(margin, lhs, rhs, strict: bool, eps_rel: float) -> np.ndarray:
    """Three-way classification of oriented margins (positive = satisfied).

    eps_abs = eps_rel * max(|lhs|, |rhs|, 1) per point. A strict check is
    marginal whenever |margin| <= eps_abs. A non-strict check admits
    equality, so margin >= 0 is a clean pass and only the band [-eps, 0)
    is marginal.
    """
    margin = np.atleast_1d(np.asarray(margin, dtype=float))
    lhs = np.atleast_1d(np.asarray(lhs, dtype=float))
    rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
    eps = eps_rel * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    out = np.zeros(margin.shape, dtype=np.int8)
    fail = margin < -eps
    if strict:
        marginal = ~fail & (margin <= eps)
    else:
        marginal = ~fail & (margin < 0.0)
    out[marginal] = MARGINAL
    out[fail] = FAIL
    return out


@dataclass
class SegmentContext:
    """Arrays the scan engine prepared for one segment of evaluation points.

    ns holds the points; the optional arrays are aligned with ns and are
    only present when the spec declared the matching need. primes is the
    global ascending prime list up to the scan end (quantifier specs).
    """

    ns: np.ndarray
    eps_rel: float
    pi_at: Optional[np.ndarray] = None
    theta_at: Optional[np.ndarray] = None
    inv_pm1_at: Optional[np.ndarray] = None
    inv_logp_at: Optional[np.ndarray] = None
    omega_prefix_at: Optional[np.ndarray] = None
    omega_at: Optional[np.ndarray] = None
    primes: Optional[np.ndarray] = None


@dataclass(frozen=True)
class MarginBatch:
    """Raw evaluation results for one segment: quantity, bound, margin.

    cls is only set by evaluators that mix strict and non-strict sides
    internally; everything else leaves classification to the caller.
    """

    lhs: np.ndarray
    rhs: np.ndarray
    margin: np.ndarray
    cls: Optional[np.ndarray] = None


@dataclass(frozen=True)
class BoundSpec:
    """One scannable inequality.

    kind gives the margin orientation: "upper" means lhs < rhs (margin =
    rhs - lhs), "lower" means lhs > rhs (margin = lhs - rhs). check_at
    lists the permitted scan modes; "primes-only" appears only where the
    quantity moves at primes alone while the bound is nondecreasing
    between them, so skipping composites cannot hide a violation.
    """

    id: str
    domain_min: int
    strict: bool
    kind: str
    check_at: tuple[str, ...]
    needs: frozenset[str]
    description: str
    lhs: Optional[Callable[[SegmentContext], np.ndarray]] = None
    rhs: Optional[Callable[[SegmentContext], np.ndarray]] = None
    evaluate: Optional[Callable[[SegmentContext], MarginBatch]] = None


def _nsf(ctx: SegmentContext) -> np.ndarray:
    return ctx.ns.astype(float)


def _vp_sandwich_evaluate(ctx: SegmentContext) -> MarginBatch:
    # both sides of the factorial-exponent sandwich, quantified over all
    # primes p <= n; per n the worst-classified side (smallest margin on
    # ties) becomes the record
    primes = ctx.primes
    m = ctx.ns.size
    lhs = np.empty(m)
    rhs = np.empty(m)
    margin = np.empty(m)
    cls = np.empty(m, dtype=np.int8)
    for i, n in enumerate(ctx.ns.tolist()):
        cut = int(np.searchsorted(primes, n, side="right"))
        ps = primes[:cut]
        v = prime_valuations(n, ps).astype(float)
        lower, upper = bounds.vp_bounds(n, ps)
        m_lo = v - lower
        m_up = upper - v
        c_lo = classify_margins(m_lo, v, lower, True, ctx.eps_rel)
        c_up = classify_margins(m_up, v, upper, False, ctx.eps_rel)
        mm = np.concatenate([m_lo, m_up])
        cc = np.concatenate([c_lo, c_up])
        qq = np.concatenate([v, v])
        bb = np.concatenate([lower, upper])
        worst = int(cc.max())
        sel = np.flatnonzero(cc == worst)
        j = sel[int(np.argmin(mm[sel]))]
        lhs[i] = qq[j]
        rhs[i] = bb[j]
        margin[i] = mm[j]
        cls[i] = worst
    return MarginBatch(lhs=lhs, rhs=rhs, margin=margin, cls=cls)


def _abs_dev_theta(ctx):
    return np.abs(ctx.theta_at - _nsf(ctx))


def _main_theorem_lhs(ctx):
    center, _w, _ = bounds._main_center_width(_nsf(ctx))
    return np.abs(ctx.omega_prefix_at.astype(float) - center)


def _main_theorem_rhs(ctx):
    _c, width, _ = bounds._main_center_width(_nsf(ctx))
    return width


def _gamma_band_lhs(ctx):
    center, _w, _ = bounds._gamma_band_center_width(_nsf(ctx))
    return np.abs(ctx.omega_at.astype(float) - center)


def _gamma_band_rhs(ctx):
    _c, width, _ = bounds._gamma_band_center_width(_nsf(ctx))
    return width


def _prop2_dev(ctx):
    return np.abs(ctx.inv_logp_at - np.atleast_1d(bounds.prop2_main(_nsf(ctx))))


_ALL = ("all",)
_ALL_OR_PRIMES = ("all", "primes-only")

CATALOG: dict[str, BoundSpec] = {
    s.id: s
    for s in (
        BoundSpec(
            id="vp-sandwich",
            domain_min=2,
            strict=True,  # the lower side; the upper side admits equality
            kind="upper",
            check_at=_ALL,
            needs=frozenset({"primes"}),
            description="factorial prime exponents sit strictly above "
            "(n-p)/(p-1) - log n/log p and at most (n-1)/(p-1), all p <= n",
            evaluate=_vp_sandwich_evaluate,
        ),
        BoundSpec(
            id="pi-upper",
            domain_min=2,
            strict=False,
            kind="upper",
            check_at=_ALL,
            needs=frozenset({"pi"}),
            description="prime count at most (n/log n)(1 + 1.2762/log n)",
            lhs=lambda ctx: ctx.pi_at.astype(float),
            rhs=lambda ctx: bounds.pi_upper_bound(_nsf(ctx)),
        ),
        BoundSpec(
            id="theta-env1",
            domain_min=2,
            strict=True,
            kind="upper",
            check_at=_ALL,
            needs=frozenset({"theta"}),
            description="|theta(n) - n| under the 793/(200 log^2) envelope",
            lhs=_abs_dev_theta,
            rhs=lambda ctx: bounds.theta_error_envelopes(_nsf(ctx))[0],
        ),
        BoundSpec(
            id="theta-env2",
            domain_min=2,
            strict=True,
            kind="upper",
            check_at=_ALL,
            needs=frozenset({"theta"}),
            description="|theta(n) - n| under the 1717433/log^4 envelope",
            lhs=_abs_dev_theta,
            rhs=lambda ctx: bounds.theta_error_envelopes(_nsf(ctx))[1],
        ),
        BoundSpec(
            id="prop1-band-lower",
            domain_min=3,
            strict=True,
            kind="lower",
            check_at=_ALL,
            needs=frozenset({"inv_pm1"}),
            description="sum 1/(p-1) above loglog(n-1) - 14",
            lhs=lambda ctx: ctx.inv_pm1_at,
            rhs=lambda ctx: bounds.prop1_band(_nsf(ctx))[0],
        ),
        BoundSpec(
            id="prop1-band-upper",
            domain_min=3,
            strict=True,
            kind="upper",
            # the sum only moves at primes and the bound grows with n, so
            # checking at primes alone is sound
            check_at=_ALL_OR_PRIMES,
            needs=frozenset({"inv_pm1"}),
            description="sum 1/(p-1) below loglog(n-1) + 23",
            lhs=lambda ctx: ctx.inv_pm1_at,
            rhs=lambda ctx: bounds.prop1_band(_nsf(ctx))[1],
        ),
        BoundSpec(
            id="prop1-refined-lower",
            domain_min=2,
            strict=True,
            kind="lower",
            check_at=_ALL,
            needs=frozenset({"inv_pm1"}),
            description="sum 1/(p-1) above its refined lower bound",
            lhs=lambda ctx: ctx.inv_pm1_at,
            rhs=lambda ctx: np.atleast_1d(bounds.prop1_refined(_nsf(ctx))[0]),
        ),
        BoundSpec(
            id="prop1-refined-upper",
            domain_min=3,
            strict=True,
            kind="upper",
            check_at=_ALL,
            needs=frozenset({"inv_pm1"}),
            description="sum 1/(p-1) below its refined upper bound",
            lhs=lambda ctx: ctx.inv_pm1_at,
            rhs=lambda ctx: np.atleast_1d(bounds.prop1_refined(_nsf(ctx))[1]),
        ),
        BoundSpec(
            id="prop2-envelope",
            domain_min=2,
            strict=True,
            kind="upper",
            check_at=_ALL,
            needs=frozenset({"inv_logp"}),
            description="sum 1/log p within 271382 n/log^5 n of its main term",
            lhs=_prop2_dev,
            rhs=lambda ctx: np.atleast_1d(bounds.prop2_main_and_envelope(_nsf(ctx))[1]),
        ),
        BoundSpec(
            id="prop2-refined-lower",
            domain_min=564,
            strict=True,
            kind="lower",
            check_at=_ALL,
            needs=frozenset({"inv_logp"}),
            description="sum 1/log p above its refined lower bound",
            lhs=lambda ctx: ctx.inv_logp_at,
            rhs=lambda ctx: np.atleast_1d(bounds.prop2_refined(_nsf(ctx))[0]),
        ),
        BoundSpec(
            id="prop2-refined-upper",
            domain_min=2,
            strict=True,
            kind="upper",
            check_at=_ALL,
            needs=frozenset({"inv_logp"}),
            description="sum 1/log p below its refined upper bound",
            lhs=lambda ctx: ctx.inv_logp_at,
            rhs=lambda ctx: np.atleast_1d(bounds.prop2_refined(_nsf(ctx))[1]),
        ),
        BoundSpec(
            id="r-envelope-vs-9n",
            domain_min=563206,
            strict=True,
            kind="upper",
            check_at=_ALL,
            needs=frozenset(),
            description="closed-form remainder majorant below 9(n-1)",
            lhs=lambda ctx: np.atleast_1d(bounds.r_envelope(_nsf(ctx))),
            rhs=lambda ctx: CONSTANTS.r_target * (_nsf(ctx) - 1.0),
        ),
        BoundSpec(
            id="main-theorem",
            domain_min=3,
            strict=True,
            kind="upper",
            check_at=_ALL,
            needs=frozenset({"omega_prefix"}),
            description="prefix sum of big_omega within 23(n-1) of (n-1)loglog(n-1)",
            lhs=_main_theorem_lhs,
            rhs=_main_theorem_rhs,
        ),
        BoundSpec(
            id="omega-gamma-band",
            domain_min=3,
            strict=True,
            kind="upper",
            check_at=_ALL,
            needs=frozenset({"omega_point"}),
            description="big_omega(n) within 23(g-2) of (g-2)loglog(g-2), g = inverse_gamma(n)",
            lhs=_gamma_band_lhs,
            rhs=_gamma_band_rhs,
        ),
    )
}

PREFIX_NEEDS = frozenset({"pi", "theta", "inv_pm1", "inv_logp", "omega_prefix"})


@dataclass(frozen=True)
class ThresholdComparison:
    """Closed-form comparison that starts holding at a known threshold.

    Oriented like BoundSpec.kind. lhs/rhs map a float array of n values
    to arrays; no sieve data is involved, so these evaluate instantly at
    any size of n.
    """

    spec_id: str
    threshold: int
    kind: str
    description: str
    lhs: Callable[[np.ndarray], np.ndarray]
    rhs: Callable[[np.ndarray], np.ndarray]


def _env5(n):
    return CONSTANTS.prop2_envelope * n / np.log(n) ** 5


THRESHOLD_COMPARISONS: dict[str, ThresholdComparison] = {
    c.spec_id: c
    for c in (
        ThresholdComparison(
            spec_id="prop1-refined-lower",
            threshold=CONSTANTS.thresholds["prop1-refined-lower"],
            kind="lower",
            description="refined lower bound for sum 1/(p-1) beats loglog(n-1) - 14",
            lhs=lambda n: np.log(np.log(n)) + np.atleast_1d(bounds.prop1_lower_tail(n)),
            rhs=lambda n: np.log(np.log(n - 1.0)) - CONSTANTS.prop1_lower_c,
        ),
        ThresholdComparison(
            spec_id="prop1-refined-upper",
            threshold=CONSTANTS.thresholds["prop1-refined-upper"],
            kind="upper",
            description="refined upper correction for sum 1/(p-1) drops below 23",
            lhs=lambda n: np.atleast_1d(bounds.prop1_upper_tail(n)),
            rhs=lambda n: np.full_like(n, CONSTANTS.main_c),
        ),
        ThresholdComparison(
            spec_id="prop2-refined-lower",
            threshold=CONSTANTS.thresholds["prop2-refined-lower"],
            kind="lower",
            description="refined lower correction for sum 1/log p exceeds -envelope",
            lhs=lambda n: np.atleast_1d(bounds.prop2_lower_tail(n)),
            rhs=lambda n: -_env5(n),
        ),
        ThresholdComparison(
            spec_id="prop2-refined-upper",
            threshold=CONSTANTS.thresholds["prop2-refined-upper"],
            kind="upper",
            description="refined upper correction for sum 1/log p drops below envelope",
            lhs=lambda n: np.atleast_1d(bounds.prop2_upper_tail(n)),
            rhs=_env5,
        ),
        ThresholdComparison(
            spec_id="r-envelope-vs-9n",
            threshold=CONSTANTS.thresholds["r-envelope-vs-9n"],
            kind="upper",
            description="closed-form remainder majorant drops below 9(n-1)",
            lhs=lambda n: np.atleast_1d(bounds.r_envelope(n)),
            rhs=lambda n: CONSTANTS.r_target * (n - 1.0),
        ),
    )
}
