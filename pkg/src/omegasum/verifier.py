"""Scan engine: runs cataloged inequalities over integer ranges and turns
the outcomes into machine-checkable reports.

A scan walks the range in fixed segments, keeps every accumulator
(prime counts, compensated real sums, factor-count prefix) strictly in
ascending order, and classifies each evaluation point as pass, marginal
or fail under the epsilon rules in catalog.classify_margins. Because the
accumulators are sequential and exact (or compensated with carried
state), the emitted records are bit-identical no matter how the range is
cut into segments, and a scan interrupted at a segment boundary resumes
without changing a single record.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import bounds
from .catalog import (
    CATALOG,
    CLASS_NAMES,
    FAIL,
    PREFIX_NEEDS,
    THRESHOLD_COMPARISONS,
    MarginBatch,
    SegmentContext,
    classify_margins,
)
from .sieve import (
    DEFAULT_SEGMENT_SIZE,
    KahanSum,
    _small_primes,
    build_spf,
    omega_block,
    omega_prefix_sums_at,
    prime_mask_block,
    primes_upto,
)
from .valuations import f_ratio, upsilon

CHECKPOINT_MAGIC = "omegasum-checkpoint"
CHECKPOINT_VERSION = 1
DEFAULT_COUNTEREXAMPLE_CAP = 1000


class UnknownSpecError(ValueError):
    """Requested id is not in the catalog (or has no threshold comparison)."""


class ScanModeError(ValueError):
    """Requested mode is not sound for this spec."""


class CheckpointError(RuntimeError):
    """Checkpoint missing fields, wrong version, or config mismatch."""


class ScanPaused(RuntimeError):
    """Scan stopped at a segment boundary with its checkpoint written."""


@dataclass(frozen=True)
class CheckRecord:
    """One classified evaluation: quantity, bound and oriented margin at n."""

    n: int
    lhs: float
    rhs: float
    margin: float
    classification: str

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "class": self.classification,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckRecord":
        return cls(
            n=int(d["n"]),
            lhs=float(d["lhs"]),
            rhs=float(d["rhs"]),
            margin=float(d["margin"]),
            classification=str(d["class"]),
        )


@dataclass
class VerificationReport:
    """Outcome of a scan or threshold check.

    counts covers every evaluation point; counterexamples lists the fails
    up to the configured cap (the count stays exact past the cap);
    extremal is the minimum-margin record over the whole run. runtime is
    informational and excluded from determinism comparisons.
    """

    spec_id: str
    from_n: int
    to_n: int
    mode: str
    counts: dict
    counterexamples: list
    extremal: Optional[CheckRecord]
    runtime_seconds: float
    eps_rel: float
    segment_size: Optional[int]
    counterexample_cap: int
    below_threshold: Optional[CheckRecord] = None

    @property
    def evaluated(self) -> int:
        return sum(self.counts.values())

    def to_dict(self, include_runtime: bool = True) -> dict:
        d = {
            "spec": self.spec_id,
            "range": {"from": self.from_n, "to": self.to_n},
            "mode": self.mode,
            "counts": {
                "pass": self.counts["pass"],
                "marginal": self.counts["marginal"],
                "fail": self.counts["fail"],
            },
            "counterexamples": [r.to_dict() for r in self.counterexamples],
            "extremal": self.extremal.to_dict() if self.extremal else None,
            "config": {
                "eps_rel": self.eps_rel,
                "segment_size": self.segment_size,
                "counterexample_cap": self.counterexample_cap,
            },
        }
        if self.below_threshold is not None:
            d["below_threshold"] = self.below_threshold.to_dict()
        if include_runtime:
            d["runtime_seconds"] = self.runtime_seconds
        return d

    def to_json(self, include_runtime: bool = True) -> str:
        return json.dumps(self.to_dict(include_runtime=include_runtime), indent=2)


@dataclass
class _ScanConfig:
    spec_id: str
    from_n: int
    to_n: int
    mode: str
    eps_rel: float
    segment_size: int
    counterexample_cap: int


@dataclass
class _ScanState:
    next_start: int
    counts: list = field(default_factory=lambda: [0, 0, 0])
    pi: int = 0
    theta: KahanSum = field(default_factory=KahanSum)
    inv_pm1: KahanSum = field(default_factory=KahanSum)
    inv_logp: KahanSum = field(default_factory=KahanSum)
    omega_prefix: int = 0
    counterexamples: list = field(default_factory=list)
    extremal: Optional[CheckRecord] = None


def _record_at(ns, batch: MarginBatch, j: int, cls_code: int) -> CheckRecord:
    return CheckRecord(
        n=int(ns[j]),
        lhs=float(batch.lhs[j]),
        rhs=float(batch.rhs[j]),
        margin=float(batch.margin[j]),
        classification=CLASS_NAMES[int(cls_code)],
    )


def save_checkpoint(path: str, config: _ScanConfig, state: _ScanState) -> None:
    """Write the scan state as versioned key-value lines, atomically."""
    lines = [
        f"{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION}",
        f"spec {config.spec_id}",
        f"from {config.from_n}",
        f"to {config.to_n}",
        f"mode {config.mode}",
        f"eps_rel {config.eps_rel!r}",
        f"segment_size {config.segment_size}",
        f"counterexample_cap {config.counterexample_cap}",
        f"next_start {state.next_start}",
        f"count_pass {state.counts[0]}",
        f"count_marginal {state.counts[1]}",
        f"count_fail {state.counts[2]}",
        f"pi {state.pi}",
        f"theta_total {state.theta.total!r}",
        f"theta_carry {state.theta.carry!r}",
        f"inv_pm1_total {state.inv_pm1.total!r}",
        f"inv_pm1_carry {state.inv_pm1.carry!r}",
        f"inv_logp_total {state.inv_logp.total!r}",
        f"inv_logp_carry {state.inv_logp.carry!r}",
        f"omega_prefix {state.omega_prefix}",
        "extremal "
        + (json.dumps(state.extremal.to_dict()) if state.extremal else "none"),
    ]
    lines.extend(
        "counterexample " + json.dumps(r.to_dict()) for r in state.counterexamples
    )
    lines.append("end")
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(prefix=".ckpt-", dir=d)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_checkpoint(path: str, config: _ScanConfig, origin: int) -> _ScanState:
    """Parse and validate a checkpoint against the requested scan config."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise CheckpointError(f"{path}: empty checkpoint")
    head = lines[0].split()
    if len(head) != 2 or head[0] != CHECKPOINT_MAGIC:
        raise CheckpointError(f"{path}: not a scan checkpoint")
    if head[1] != str(CHECKPOINT_VERSION):
        raise CheckpointError(
            f"{path}: checkpoint version {head[1]} unsupported (want {CHECKPOINT_VERSION})"
        )
    if lines[-1] != "end":
        raise CheckpointError(f"{path}: truncated checkpoint (missing end marker)")
    kv: dict[str, str] = {}
    counterexamples: list[CheckRecord] = []
    for line in lines[1:-1]:
        key, _, rest = line.partition(" ")
        if key == "counterexample":
            counterexamples.append(CheckRecord.from_dict(json.loads(rest)))
        else:
            kv[key] = rest
    required = [
        "spec", "from", "to", "mode", "eps_rel", "segment_size",
        "counterexample_cap", "next_start", "count_pass", "count_marginal",
        "count_fail", "pi", "theta_total", "theta_carry", "inv_pm1_total",
        "inv_pm1_carry", "inv_logp_total", "inv_logp_carry", "omega_prefix",
        "extremal",
    ]
    missing = [k for k in required if k not in kv]
    if missing:
        raise CheckpointError(f"{path}: missing fields {missing}")
    try:
        mismatches = []
        if kv["spec"] != config.spec_id:
            mismatches.append("spec")
        if int(kv["from"]) != config.from_n:
            mismatches.append("from")
        if int(kv["to"]) != config.to_n:
            mismatches.append("to")
        if kv["mode"] != config.mode:
            mismatches.append("mode")
        if float(kv["eps_rel"]) != config.eps_rel:
            mismatches.append("eps_rel")
        if int(kv["segment_size"]) != config.segment_size:
            mismatches.append("segment_size")
        if int(kv["counterexample_cap"]) != config.counterexample_cap:
            mismatches.append("counterexample_cap")
        if mismatches:
            raise CheckpointError(
                f"{path}: refusing to resume, config differs in {mismatches}"
            )
        next_start = int(kv["next_start"])
        done = next_start == config.to_n + 1
        if not done and (next_start - origin) % config.segment_size != 0:
            raise CheckpointError(
                f"{path}: next_start {next_start} not on a segment boundary"
            )
        state = _ScanState(next_start=next_start)
        state.counts = [
            int(kv["count_pass"]),
            int(kv["count_marginal"]),
            int(kv["count_fail"]),
        ]
        state.pi = int(kv["pi"])
        state.theta = KahanSum(float(kv["theta_total"]), float(kv["theta_carry"]))
        state.inv_pm1 = KahanSum(float(kv["inv_pm1_total"]), float(kv["inv_pm1_carry"]))
        state.inv_logp = KahanSum(float(kv["inv_logp_total"]), float(kv["inv_logp_carry"]))
        state.omega_prefix = int(kv["omega_prefix"])
        state.counterexamples = counterexamples
        state.extremal = (
            None if kv["extremal"] == "none" else CheckRecord.from_dict(json.loads(kv["extremal"]))
        )
        return state
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        if isinstance(exc, CheckpointError):
            raise
        raise CheckpointError(f"{path}: malformed checkpoint ({exc})") from exc


def _fold_batch(state: _ScanState, ns, batch: MarginBatch, cls, cap: int) -> None:
    counts = np.bincount(cls, minlength=3)
    state.counts[0] += int(counts[0])
    state.counts[1] += int(counts[1])
    state.counts[2] += int(counts[2])
    for j in np.flatnonzero(cls == FAIL).tolist():
        if len(state.counterexamples) >= cap:
            break
        state.counterexamples.append(_record_at(ns, batch, j, cls[j]))
    j = int(np.argmin(batch.margin))
    if state.extremal is None or float(batch.margin[j]) < state.extremal.margin:
        state.extremal = _record_at(ns, batch, j, cls[j])


def scan(
    spec_id: str,
    from_n: int,
    to_n: int,
    mode: str = "all",
    eps_rel: float = 1e-9,
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    checkpoint_path: Optional[str] = None,
    resume: bool = False,
    counterexample_cap: int = DEFAULT_COUNTEREXAMPLE_CAP,
    max_segments: Optional[int] = None,
    points=None,
    _collector: Optional[list] = None,
) -> VerificationReport:
    """Evaluate one cataloged inequality at every point of [from_n, to_n].

    mode "all" visits every integer, "primes-only" every prime (only for
    specs that declare it sound). points, when given, restricts the
    evaluation to an ascending subset of the range (mode must be "all");
    the accumulators still advance over everything below to_n.

    With checkpoint_path set, the state is saved after each segment;
    resume=True continues from a matching checkpoint and refuses any
    config drift. max_segments stops after that many segments by raising
    ScanPaused (checkpoint_path required), which is also how the resume
    path is exercised in tests.
    """
    t0 = time.perf_counter()
    spec = CATALOG.get(spec_id)
    if spec is None:
        raise UnknownSpecError(
            f"unknown spec id {spec_id!r}; known: {sorted(CATALOG)}"
        )
    from_n = int(from_n)
    to_n = int(to_n)
    if from_n < spec.domain_min:
        raise ValueError(
            f"{spec_id} is only defined from n = {spec.domain_min}, got from={from_n}"
        )
    if to_n < from_n:
        raise ValueError(f"empty range: from={from_n}, to={to_n}")
    if mode not in spec.check_at:
        raise ScanModeError(
            f"{spec_id} cannot run in mode {mode!r}; allowed: {spec.check_at}"
        )
    if not eps_rel >= 0.0:
        raise ValueError("eps_rel must be a nonnegative real")
    if segment_size < 1:
        raise ValueError("segment_size must be positive")
    if max_segments is not None and checkpoint_path is None:
        raise ValueError("max_segments needs a checkpoint_path to be useful")
    pts = None
    if points is not None:
        if mode != "all":
            raise ScanModeError("an explicit point set requires mode 'all'")
        pts = np.asarray(points, dtype=np.int64)
        if pts.size == 0:
            raise ValueError("points must be nonempty")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("points must be strictly ascending")
        if pts[0] < from_n or pts[-1] > to_n:
            raise ValueError("points must lie within [from, to]")

    needs = spec.needs
    prefix_needed = bool(needs & PREFIX_NEEDS)
    origin = 2 if prefix_needed else from_n
    config = _ScanConfig(
        spec_id, from_n, to_n, mode, float(eps_rel), int(segment_size), int(counterexample_cap)
    )
    state = None
    if resume and checkpoint_path and os.path.exists(checkpoint_path):
        state = load_checkpoint(checkpoint_path, config, origin)
    if state is None:
        state = _ScanState(next_start=origin)

    base = None
    if prefix_needed or mode == "primes-only" or "omega_point" in needs:
        base = _small_primes(math.isqrt(to_n))
    primes_all = primes_upto(to_n) if "primes" in needs else None

    real_accs = {
        "theta": state.theta,
        "inv_pm1": state.inv_pm1,
        "inv_logp": state.inv_logp,
    }
    segments_done = 0
    while state.next_start <= to_n:
        lo = state.next_start
        hi = min(lo + segment_size, to_n + 1)
        pvals = None
        if prefix_needed or mode == "primes-only":
            pvals = np.flatnonzero(prime_mask_block(lo, hi, base)) + lo
        a = max(lo, from_n)
        b = min(hi - 1, to_n)
        if pts is not None:
            i0 = int(np.searchsorted(pts, lo, side="left"))
            i1 = int(np.searchsorted(pts, hi - 1, side="right"))
            ns = pts[i0:i1]
        elif mode == "primes-only":
            ns = pvals[(pvals >= a) & (pvals <= b)] if a <= b else pvals[:0]
        else:
            ns = (
                np.arange(a, b + 1, dtype=np.int64)
                if a <= b
                else np.empty(0, dtype=np.int64)
            )
        ctx = SegmentContext(ns=ns, eps_rel=float(eps_rel), primes=primes_all)
        if "pi" in needs:
            if ns.size:
                ctx.pi_at = state.pi + np.searchsorted(pvals, ns, side="right")
            state.pi += int(pvals.size)
        wanted_reals = needs & {"theta", "inv_pm1", "inv_logp"}
        if wanted_reals:
            psf = pvals.astype(float)
            logs = np.log(psf)
            terms = {
                "theta": logs,
                "inv_pm1": 1.0 / (psf - 1.0),
                "inv_logp": 1.0 / logs,
            }
            idx = np.searchsorted(pvals, ns, side="right") if ns.size else None
            for name in ("theta", "inv_pm1", "inv_logp"):
                if name not in wanted_reals:
                    continue
                acc = real_accs[name]
                prev = acc.total
                running = acc.extend_recording(terms[name])
                if ns.size:
                    at = np.concatenate(([prev], running))[idx]
                    setattr(ctx, f"{name}_at", at)
        if "omega_prefix" in needs or "omega_point" in needs:
            om = omega_block(lo, hi, base)
            if "omega_prefix" in needs:
                csum = np.cumsum(om)
                if ns.size:
                    ctx.omega_prefix_at = state.omega_prefix + csum[ns - lo]
                state.omega_prefix += int(csum[-1])
            if "omega_point" in needs and ns.size:
                ctx.omega_at = om[ns - lo]
        if ns.size:
            if spec.evaluate is not None:
                batch = spec.evaluate(ctx)
            else:
                lhs = np.asarray(spec.lhs(ctx), dtype=float)
                rhs = np.asarray(spec.rhs(ctx), dtype=float)
                margin = rhs - lhs if spec.kind == "upper" else lhs - rhs
                batch = MarginBatch(lhs=lhs, rhs=rhs, margin=margin)
            cls = (
                batch.cls
                if batch.cls is not None
                else classify_margins(batch.margin, batch.lhs, batch.rhs, spec.strict, eps_rel)
            )
            _fold_batch(state, ns, batch, cls, counterexample_cap)
            if _collector is not None:
                _collector.append((ns.copy(), batch, cls.copy()))
        state.next_start = hi
        segments_done += 1
        if checkpoint_path:
            save_checkpoint(checkpoint_path, config, state)
        if (
            max_segments is not None
            and segments_done >= max_segments
            and state.next_start <= to_n
        ):
            raise ScanPaused(
                f"paused after {segments_done} segments at n={state.next_start}; "
                f"resume with resume=True and the same config"
            )
    return VerificationReport(
        spec_id=spec_id,
        from_n=from_n,
        to_n=to_n,
        mode=mode,
        counts={
            "pass": state.counts[0],
            "marginal": state.counts[1],
            "fail": state.counts[2],
        },
        counterexamples=list(state.counterexamples),
        extremal=state.extremal,
        runtime_seconds=time.perf_counter() - t0,
        eps_rel=float(eps_rel),
        segment_size=int(segment_size),
        counterexample_cap=int(counterexample_cap),
    )


def threshold_check(
    spec_id: str,
    threshold: Optional[int] = None,
    samples: int = 10,
    eps_rel: float = 1e-9,
) -> VerificationReport:
    """Evaluate a spec's defining closed-form comparison at its threshold.

    Checks the comparison at the threshold and at `samples` doublings
    above it, and additionally records the value at threshold - 1 purely
    for information: thresholds are sufficient, minimality is never
    asserted.
    """
    t0 = time.perf_counter()
    cmp = THRESHOLD_COMPARISONS.get(spec_id)
    if cmp is None:
        raise UnknownSpecError(
            f"{spec_id!r} has no threshold comparison; available: "
            f"{sorted(THRESHOLD_COMPARISONS)}"
        )
    if threshold is None:
        threshold = cmp.threshold
    threshold = int(threshold)
    if threshold < 3:
        raise ValueError("threshold must be at least 3")
    if samples < 0:
        raise ValueError("samples must be nonnegative")
    pts = np.array([threshold << i for i in range(samples + 1)], dtype=np.int64)
    nsf = pts.astype(float)
    lhs = np.asarray(cmp.lhs(nsf), dtype=float)
    rhs = np.asarray(cmp.rhs(nsf), dtype=float)
    margin = rhs - lhs if cmp.kind == "upper" else lhs - rhs
    batch = MarginBatch(lhs=lhs, rhs=rhs, margin=margin)
    cls = classify_margins(margin, lhs, rhs, True, eps_rel)
    state = _ScanState(next_start=0)
    _fold_batch(state, pts, batch, cls, DEFAULT_COUNTEREXAMPLE_CAP)
    below = None
    if threshold - 1 >= 3:
        bf = np.array([threshold - 1], dtype=float)
        bl = np.asarray(cmp.lhs(bf), dtype=float)
        br = np.asarray(cmp.rhs(bf), dtype=float)
        bm = br - bl if cmp.kind == "upper" else bl - br
        bcls = classify_margins(bm, bl, br, True, eps_rel)
        below = _record_at(
            np.array([threshold - 1]), MarginBatch(bl, br, bm), 0, bcls[0]
        )
    return VerificationReport(
        spec_id=spec_id,
        from_n=threshold,
        to_n=int(pts[-1]),
        mode="threshold",
        counts={
            "pass": state.counts[0],
            "marginal": state.counts[1],
            "fail": state.counts[2],
        },
        counterexamples=list(state.counterexamples),
        extremal=state.extremal,
        runtime_seconds=time.perf_counter() - t0,
        eps_rel=float(eps_rel),
        segment_size=None,
        counterexample_cap=DEFAULT_COUNTEREXAMPLE_CAP,
        below_threshold=below,
    )


EVAL_FUNCTIONS = ("f-ratio", "hardy-ramanujan-remainder", "upsilon")


def eval_rows(
    name: str,
    from_n: int,
    to_n: int,
    stride: int = 1,
    points=None,
    eps_rel: float = 1e-9,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
):
    """Tabulate a cataloged inequality or a named quantity over a range.

    Catalog ids yield rows (n, lhs, rhs, margin, class); the named
    quantities yield rows (n, value). Returns (header, rows) with rows
    ordered by n.
    """
    if points is not None:
        pts = np.asarray(points, dtype=np.int64)
    else:
        pts = np.arange(from_n, to_n + 1, max(1, int(stride)), dtype=np.int64)
    if pts.size == 0:
        raise ValueError("empty evaluation set")
    if name in CATALOG:
        collector: list = []
        scan(
            name,
            int(pts[0]),
            int(pts[-1]),
            "all",
            eps_rel,
            segment_size=segment_size,
            points=pts,
            _collector=collector,
        )
        rows = []
        for ns, batch, cls in collector:
            for j in range(ns.size):
                rows.append(
                    (
                        int(ns[j]),
                        float(batch.lhs[j]),
                        float(batch.rhs[j]),
                        float(batch.margin[j]),
                        CLASS_NAMES[int(cls[j])],
                    )
                )
        return ["n", "lhs", "rhs", "margin", "class"], rows
    if name == "f-ratio":
        sieve = build_spf(int(pts[-1]))
        rows = [(int(n), f_ratio(int(n), sieve)) for n in pts.tolist()]
        return ["n", "value"], rows
    if name == "hardy-ramanujan-remainder":
        if pts[0] < 3:
            raise ValueError("hardy-ramanujan-remainder needs n >= 3")
        s_vals = omega_prefix_sums_at(pts, segment_size=segment_size)
        nf = pts.astype(float)
        rem = (s_vals.astype(float) - bounds.hardy_ramanujan_main(nf)) * np.log(nf) / nf
        rows = [(int(n), float(v)) for n, v in zip(pts.tolist(), rem.tolist())]
        return ["n", "value"], rows
    if name == "upsilon":
        sieve = build_spf(int(pts[-1]))
        rows = [(int(n), upsilon(int(n), sieve)) for n in pts.tolist()]
        return ["n", "value"], rows
    raise UnknownSpecError(
        f"unknown eval target {name!r}; catalog ids or one of {EVAL_FUNCTIONS}"
    )
