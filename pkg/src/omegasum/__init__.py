"""Exact prime-factor counting with explicit error bounds.

The package has four layers. ``sieve`` produces exact integer data
(least prime factors, factor counts, segmented prefix sums) and
deterministic compensated prime sums. ``valuations`` covers factorial
arithmetic: Legendre valuations, their sum, and the generalized
valuation for composite bases. ``bounds`` evaluates the closed-form
envelopes and bands that the cataloged inequalities compare against.
``verifier`` scans any cataloged inequality over a range, classifies
every point as pass, marginal or fail, and writes machine-readable
reports with resumable checkpoints. ``cli`` exposes all of it as the
``omegasum`` command.
"""

from .bounds import (
    CONSTANTS,
    Constants,
    hardy_ramanujan_main,
    inverse_gamma,
    main_theorem_band,
    omega_gamma_band,
    pi_upper_bound,
    prop1_band,
    prop1_refined,
    prop2_main,
    prop2_main_and_envelope,
    prop2_refined,
    r_envelope,
    theta_error_envelopes,
    vp_bounds,
)
from .catalog import (
    CATALOG,
    CLASS_NAMES,
    FAIL,
    MARGINAL,
    PASS,
    THRESHOLD_COMPARISONS,
    BoundSpec,
    ThresholdComparison,
    classify_margins,
)
from .sieve import (
    DEFAULT_MAX_SIEVE_ENTRIES,
    DEFAULT_SEGMENT_SIZE,
    FactorSieve,
    KahanSum,
    PrimeSums,
    SieveBudgetError,
    big_omega,
    build_spf,
    omega_prefix_sum,
    omega_prefix_sums_at,
    prime_sums,
    prime_sums_at,
    primes_upto,
)
from .valuations import (
    ValuationQuery,
    f_ratio,
    generalized_valuation,
    generalized_valuation_sum,
    legendre_valuation,
    prime_valuations,
    upsilon,
)
from .verifier import (
    CheckpointError,
    CheckRecord,
    ScanModeError,
    ScanPaused,
    UnknownSpecError,
    VerificationReport,
    eval_rows,
    scan,
    threshold_check,
)

__version__ = "0.1.0"

__all__ = [
    "CONSTANTS",
    "Constants",
    "hardy_ramanujan_main",
    "inverse_gamma",
    "main_theorem_band",
    "omega_gamma_band",
    "pi_upper_bound",
    "prop1_band",
    "prop1_refined",
    "prop2_main",
    "prop2_main_and_envelope",
    "prop2_refined",
    "r_envelope",
    "theta_error_envelopes",
    "vp_bounds",
    "CATALOG",
    "CLASS_NAMES",
    "FAIL",
    "MARGINAL",
    "PASS",
    "THRESHOLD_COMPARISONS",
    "BoundSpec",
    "ThresholdComparison",
    "classify_margins",
    "DEFAULT_MAX_SIEVE_ENTRIES",
    "DEFAULT_SEGMENT_SIZE",
    "FactorSieve",
    "KahanSum",
    "PrimeSums",
    "SieveBudgetError",
    "big_omega",
    "build_spf",
    "omega_prefix_sum",
    "omega_prefix_sums_at",
    "prime_sums",
    "prime_sums_at",
    "primes_upto",
    "ValuationQuery",
    "f_ratio",
    "generalized_valuation",
    "generalized_valuation_sum",
    "legendre_valuation",
    "prime_valuations",
    "upsilon",
    "CheckpointError",
    "CheckRecord",
    "ScanModeError",
    "ScanPaused",
    "UnknownSpecError",
    "VerificationReport",
    "eval_rows",
    "scan",
    "threshold_check",
    "__version__",
]
