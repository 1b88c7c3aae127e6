"""Command line front end.

Subcommands: verify (scan one cataloged inequality over a range), eval
(tabulate an inequality or named quantity), factorial-valuation (exponent
of a base in n!), threshold-check (closed-form threshold comparisons)
and sieve-info (table statistics and prime sums).

Exit codes: 0 when nothing failed (marginal records only produce a
warning on stderr), 1 when any check failed, 2 for usage or domain
errors. Reports go to --out when given, otherwise to stdout; human
summaries go to stderr so machine output stays clean.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bounds import CONSTANTS
from .catalog import CATALOG
from .sieve import (
    DEFAULT_MAX_SIEVE_ENTRIES,
    DEFAULT_SEGMENT_SIZE,
    SieveBudgetError,
    build_spf,
    prime_sums,
)
from .valuations import ValuationQuery, _is_prime, generalized_valuation, legendre_valuation
from .verifier import (
    CheckpointError,
    EVAL_FUNCTIONS,
    ScanModeError,
    ScanPaused,
    UnknownSpecError,
    VerificationReport,
    eval_rows,
    scan,
    threshold_check,
)


@dataclass(frozen=True)
class RunConfig:
    """Everything one verify run needs, as parsed from the command line."""

    spec_id: str
    from_n: int
    to_n: int
    mode: str
    eps_rel: float
    segment_size: int
    out: Optional[str]
    fmt: str
    checkpoint: Optional[str]
    resume: bool
    counterexample_cap: int


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="omegasum",
        description="scan explicit prime-sum and factor-count inequalities",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="scan one cataloged inequality over a range")
    v.add_argument("--spec", required=True, help="catalog id, e.g. main-theorem")
    v.add_argument("--from", dest="from_n", type=int, default=None,
                   help="first n (default: the selected spec's domain minimum)")
    v.add_argument("--to", dest="to_n", type=int, required=True, help="last n, inclusive")
    v.add_argument("--primes-only", action="store_true",
                   help="evaluate at primes only (sound only for eligible specs)")
    v.add_argument("--eps", type=float, default=1e-9, help="relative epsilon (default 1e-9)")
    v.add_argument("--segment-size", type=int, default=DEFAULT_SEGMENT_SIZE)
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    v.add_argument("--checkpoint", help="save resumable state here after each segment")
    v.add_argument("--resume", action="store_true",
                   help="continue from --checkpoint if it matches this config")
    v.add_argument("--counterexample-cap", type=int, default=1000)

    e = sub.add_parser("eval", help="tabulate an inequality or named quantity")
    e.add_argument("name", help="catalog id or one of: " + ", ".join(EVAL_FUNCTIONS))
    e.add_argument("--from", dest="from_n", type=int, default=None)
    e.add_argument("--to", dest="to_n", type=int, default=None)
    e.add_argument("--at", type=int, default=None, help="evaluate at a single n")
    e.add_argument("--stride", type=int, default=1)
    e.add_argument("--points", type=int, default=None,
                   help="use this many geometrically spaced points instead of a stride")
    e.add_argument("--eps", type=float, default=1e-9)
    e.add_argument("--segment-size", type=int, default=DEFAULT_SEGMENT_SIZE)
    e.add_argument("--out")
    e.add_argument("--format", dest="fmt", choices=("json", "csv"), default="csv")

    f = sub.add_parser("factorial-valuation", help="exponent of a base in n!")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--base", type=int, required=True)
    f.add_argument("--max-sieve-entries", type=int, default=DEFAULT_MAX_SIEVE_ENTRIES,
                   help="budget for the factor table a composite base needs")

    t = sub.add_parser("threshold-check", help="check a closed-form threshold comparison")
    t.add_argument("--spec", required=True)
    t.add_argument("--threshold", type=int, default=None,
                   help="override the cataloged threshold")
    t.add_argument("--samples", type=int, default=10,
                   help="doublings above the threshold to also check")
    t.add_argument("--eps", type=float, default=1e-9)
    t.add_argument("--out")
    t.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")

    s = sub.add_parser("sieve-info", help="factor-table statistics and prime sums")
    s.add_argument("--limit", type=int, required=True)
    s.add_argument("--max-sieve-entries", type=int, default=DEFAULT_MAX_SIEVE_ENTRIES)
    s.add_argument("--segment-size", type=int, default=DEFAULT_SEGMENT_SIZE)
    return p


def _report_csv(report: VerificationReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "n", "lhs", "rhs", "margin", "class"])
    for r in report.counterexamples:
        w.writerow(["counterexample", r.n, repr(r.lhs), repr(r.rhs), repr(r.margin), r.classification])
    if report.extremal is not None:
        r = report.extremal
        w.writerow(["extremal", r.n, repr(r.lhs), repr(r.rhs), repr(r.margin), r.classification])
    if report.below_threshold is not None:
        r = report.below_threshold
        w.writerow(["below-threshold", r.n, repr(r.lhs), repr(r.rhs), repr(r.margin), r.classification])
    return buf.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _report_exit(report: VerificationReport, out, fmt) -> int:
    text = report.to_json() + "\n" if fmt == "json" else _report_csv(report)
    _emit(text, out)
    summary = (
        f"{report.spec_id} [{report.from_n}, {report.to_n}] mode={report.mode}: "
        f"pass={report.counts['pass']} marginal={report.counts['marginal']} "
        f"fail={report.counts['fail']}"
    )
    if report.extremal is not None:
        summary += f" min-margin={report.extremal.margin!r} at n={report.extremal.n}"
    print(summary, file=sys.stderr)
    if report.below_threshold is not None:
        b = report.below_threshold
        print(
            f"info: at threshold-1 (n={b.n}) the comparison classifies as "
            f"{b.classification} with margin {b.margin!r} (minimality not asserted)",
            file=sys.stderr,
        )
    if report.counts["marginal"]:
        print(
            f"warning: {report.counts['marginal']} marginal record(s) within epsilon",
            file=sys.stderr,
        )
    if report.counts["fail"]:
        print(f"FAIL: {report.counts['fail']} failing record(s)", file=sys.stderr)
        return 1
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    report = scan(
        cfg.spec_id,
        cfg.from_n,
        cfg.to_n,
        cfg.mode,
        cfg.eps_rel,
        segment_size=cfg.segment_size,
        checkpoint_path=cfg.checkpoint,
        resume=cfg.resume,
        counterexample_cap=cfg.counterexample_cap,
    )
    return _report_exit(report, cfg.out, cfg.fmt)


def _geometric_points(from_n: int, to_n: int, count: int) -> np.ndarray:
    if count < 2 or from_n < 1 or to_n <= from_n:
        raise ValueError("geometric points need count >= 2 and 1 <= from < to")
    grid = np.exp(np.linspace(np.log(from_n), np.log(to_n), count))
    return np.unique(np.round(grid).astype(np.int64))


def cmd_eval(args) -> int:
    if args.at is not None:
        pts = np.array([args.at], dtype=np.int64)
    else:
        if args.from_n is None or args.to_n is None:
            raise ValueError("eval needs --from and --to (or --at)")
        if args.points is not None:
            pts = _geometric_points(args.from_n, args.to_n, args.points)
        else:
            pts = None
    if pts is not None:
        header, rows = eval_rows(
            args.name,
            int(pts[0]),
            int(pts[-1]),
            points=pts,
            eps_rel=args.eps,
            segment_size=args.segment_size,
        )
    else:
        header, rows = eval_rows(
            args.name,
            args.from_n,
            args.to_n,
            stride=args.stride,
            eps_rel=args.eps,
            segment_size=args.segment_size,
        )
    if args.fmt == "json":
        text = json.dumps([dict(zip(header, row)) for row in rows], indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([x if isinstance(x, (int, str)) else repr(x) for x in row])
        text = buf.getvalue()
    _emit(text, args.out)
    print(f"{args.name}: {len(rows)} row(s)", file=sys.stderr)
    return 0


def cmd_factorial(args) -> int:
    q = ValuationQuery(n=args.n, base=args.base)  # validates 2 <= base <= n
    if _is_prime(q.base):
        v = legendre_valuation(q.n, q.base)
    else:
        sieve = build_spf(q.n, max_entries=args.max_sieve_entries)
        v = generalized_valuation(q.base, q.n, sieve)
    print(v)
    return 0


def cmd_threshold(args) -> int:
    report = threshold_check(args.spec, args.threshold, args.samples, args.eps)
    return _report_exit(report, args.out, args.fmt)


def cmd_sieve_info(args) -> int:
    sieve = build_spf(args.limit, max_entries=args.max_sieve_entries)
    sums = prime_sums(args.limit, segment_size=args.segment_size)
    primes = sieve.primes()
    info = {
        "limit": sieve.limit,
        "entries": int(sieve.spf.size),
        "entry_dtype": str(sieve.spf.dtype),
        "table_bytes": int(sieve.spf.nbytes),
        "pi": sums.pi,
        "largest_prime": int(primes[-1]) if primes.size else None,
        "theta": sums.theta,
        "sum_inv_pm1": sums.sum_inv_pm1,
        "sum_inv_logp": sums.sum_inv_logp,
    }
    print(json.dumps(info, indent=2))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            cfg = RunConfig(
                spec_id=args.spec,
                from_n=args.from_n if args.from_n is not None else _default_from(args.spec),
                to_n=args.to_n,
                mode="primes-only" if args.primes_only else "all",
                eps_rel=args.eps,
                segment_size=args.segment_size,
                out=args.out,
                fmt=args.fmt,
                checkpoint=args.checkpoint,
                resume=args.resume,
                counterexample_cap=args.counterexample_cap,
            )
            return cmd_verify(cfg)
        if args.command == "eval":
            return cmd_eval(args)
        if args.command == "factorial-valuation":
            return cmd_factorial(args)
        if args.command == "threshold-check":
            return cmd_threshold(args)
        if args.command == "sieve-info":
            return cmd_sieve_info(args)
        parser.error(f"unknown command {args.command!r}")
    except (
        ValueError,
        UnknownSpecError,
        ScanModeError,
        CheckpointError,
        SieveBudgetError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ScanPaused as exc:
        print(f"paused: {exc}", file=sys.stderr)
        return 0
    except KeyboardInterrupt:
        print("interrupted; the last finished segment is in the checkpoint", file=sys.stderr)
        return 130
    return 2


def _default_from(spec_id: str) -> int:
    spec = CATALOG.get(spec_id)
    if spec is None:
        raise UnknownSpecError(f"unknown spec id {spec_id!r}; known: {sorted(CATALOG)}")
    return spec.domain_min


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
