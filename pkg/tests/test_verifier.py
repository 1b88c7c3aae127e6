"""Scan engine: classification rules, determinism, checkpoints, reports."""
import json
import math
import random

import numpy as np
import pytest

from omegasum import (
    CATALOG,
    CheckpointError,
    CheckRecord,
    ScanModeError,
    ScanPaused,
    UnknownSpecError,
    classify_margins,
    eval_rows,
    f_ratio,
    build_spf,
    primes_upto,
    scan,
    threshold_check,
    upsilon,
)
from omegasum.catalog import FAIL, MARGINAL, PASS, BoundSpec, MarginBatch


def test_single_point_worked_example():
    """n = 2 has one prime; the upper side is met with equality."""
    rep = scan("vp-sandwich", 2, 2)
    assert rep.counts == {"pass": 1, "marginal": 0, "fail": 0}
    assert rep.extremal == CheckRecord(n=2, lhs=1.0, rhs=1.0, margin=0.0, classification="pass")
    assert rep.counterexamples == []


def test_scan_deterministic_byte_for_byte():
    a = scan("prop2-envelope", 2, 20_000, segment_size=4096)
    b = scan("prop2-envelope", 2, 20_000, segment_size=4096)
    assert a.to_json(include_runtime=False) == b.to_json(include_runtime=False)
    assert a.runtime_seconds >= 0.0


def test_segment_size_never_changes_records():
    reports = [
        scan("theta-env2", 2, 30_000, segment_size=seg)
        for seg in (1024, 7777, 30_000, 1 << 20)
    ]
    dicts = []
    for r in reports:
        d = r.to_dict(include_runtime=False)
        d.pop("config")
        dicts.append(d)
    assert all(d == dicts[0] for d in dicts[1:])


def test_primes_only_agrees_with_full_scan():
    col_all: list = []
    scan("prop1-band-upper", 3, 3000, "all", _collector=col_all)
    col_pr: list = []
    scan("prop1-band-upper", 3, 3000, "primes-only", _collector=col_pr)
    full = {}
    for ns, batch, cls in col_all:
        for j in range(ns.size):
            full[int(ns[j])] = (
                float(batch.lhs[j]),
                float(batch.rhs[j]),
                float(batch.margin[j]),
                int(cls[j]),
            )
    prime_set = set(primes_upto(3000).tolist())
    seen = set()
    for ns, batch, cls in col_pr:
        for j in range(ns.size):
            n = int(ns[j])
            seen.add(n)
            assert full[n] == (
                float(batch.lhs[j]),
                float(batch.rhs[j]),
                float(batch.margin[j]),
                int(cls[j]),
            ), n
    assert seen == {n for n in full if n in prime_set}


def test_checkpoint_pause_resume_identical(tmp_path):
    ck = str(tmp_path / "scan.ck")
    with pytest.raises(ScanPaused):
        scan("main-theorem", 3, 40_000, segment_size=8192, checkpoint_path=ck, max_segments=2)
    resumed = scan("main-theorem", 3, 40_000, segment_size=8192, checkpoint_path=ck, resume=True)
    plain = scan("main-theorem", 3, 40_000, segment_size=8192)
    assert resumed.to_json(include_runtime=False) == plain.to_json(include_runtime=False)


def test_checkpoint_primes_only_resume(tmp_path):
    ck = str(tmp_path / "scan.ck")
    with pytest.raises(ScanPaused):
        scan(
            "prop1-band-upper", 3, 30_000, "primes-only",
            segment_size=4096, checkpoint_path=ck, max_segments=3,
        )
    resumed = scan(
        "prop1-band-upper", 3, 30_000, "primes-only",
        segment_size=4096, checkpoint_path=ck, resume=True,
    )
    plain = scan("prop1-band-upper", 3, 30_000, "primes-only", segment_size=4096)
    assert resumed.to_json(include_runtime=False) == plain.to_json(include_runtime=False)


def test_checkpoint_of_finished_scan_resumes_to_same_report(tmp_path):
    ck = str(tmp_path / "done.ck")
    first = scan("pi-upper", 2, 5000, segment_size=1024, checkpoint_path=ck)
    again = scan("pi-upper", 2, 5000, segment_size=1024, checkpoint_path=ck, resume=True)
    assert first.to_json(include_runtime=False) == again.to_json(include_runtime=False)


def test_resume_with_missing_file_starts_fresh(tmp_path):
    ck = str(tmp_path / "never-written.ck")
    rep = scan("pi-upper", 2, 1000, checkpoint_path=None, resume=True)
    plain = scan("pi-upper", 2, 1000)
    assert rep.to_json(include_runtime=False) == plain.to_json(include_runtime=False)
    rep2 = scan("pi-upper", 2, 1000, checkpoint_path=ck, resume=True)
    assert rep2.to_json(include_runtime=False) == plain.to_json(include_runtime=False)


def _paused_checkpoint(tmp_path, name="drift.ck"):
    ck = str(tmp_path / name)
    with pytest.raises(ScanPaused):
        scan("main-theorem", 3, 30_000, segment_size=4096, checkpoint_path=ck, max_segments=2)
    return ck


def test_checkpoint_refuses_config_drift(tmp_path):
    ck = _paused_checkpoint(tmp_path)
    with pytest.raises(CheckpointError, match="segment_size"):
        scan("main-theorem", 3, 30_000, segment_size=8192, checkpoint_path=ck, resume=True)
    with pytest.raises(CheckpointError, match="eps_rel"):
        scan("main-theorem", 3, 30_000, eps_rel=1e-6, segment_size=4096, checkpoint_path=ck, resume=True)
    with pytest.raises(CheckpointError, match="to"):
        scan("main-theorem", 3, 50_000, segment_size=4096, checkpoint_path=ck, resume=True)
    with pytest.raises(CheckpointError, match="spec"):
        scan("theta-env1", 3, 30_000, segment_size=4096, checkpoint_path=ck, resume=True)


def _rewrite(path, old, new):
    with open(path) as fh:
        text = fh.read()
    assert old in text
    with open(path, "w") as fh:
        fh.write(text.replace(old, new))


def test_checkpoint_refuses_tampering(tmp_path):
    ck = _paused_checkpoint(tmp_path)

    with open(ck) as fh:
        good = fh.read()

    _rewrite(ck, "omegasum-checkpoint 1", "omegasum-checkpoint 99")
    with pytest.raises(CheckpointError, match="version"):
        scan("main-theorem", 3, 30_000, segment_size=4096, checkpoint_path=ck, resume=True)

    with open(ck, "w") as fh:
        fh.write(good.replace("\nend\n", "\n"))
    with pytest.raises(CheckpointError, match="truncated"):
        scan("main-theorem", 3, 30_000, segment_size=4096, checkpoint_path=ck, resume=True)

    with open(ck, "w") as fh:
        fh.write(good)
    _rewrite(ck, "next_start 8194", "next_start 8200")
    with pytest.raises(CheckpointError, match="boundary"):
        scan("main-theorem", 3, 30_000, segment_size=4096, checkpoint_path=ck, resume=True)

    with open(ck, "w") as fh:
        fh.write(good)
    _rewrite(ck, "\npi ", "\nnot_pi ")
    with pytest.raises(CheckpointError, match="missing fields"):
        scan("main-theorem", 3, 30_000, segment_size=4096, checkpoint_path=ck, resume=True)

    with open(ck, "w") as fh:
        fh.write(good)
    _rewrite(ck, "omega_prefix ", "omega_prefix x")
    with pytest.raises(CheckpointError, match="malformed"):
        scan("main-theorem", 3, 30_000, segment_size=4096, checkpoint_path=ck, resume=True)

    with open(ck, "w") as fh:
        fh.write("not a checkpoint at all\nend\n")
    with pytest.raises(CheckpointError, match="not a scan checkpoint"):
        scan("main-theorem", 3, 30_000, segment_size=4096, checkpoint_path=ck, resume=True)


def test_classify_strict_truth_table():
    # margins straddling the epsilon band; lhs/rhs of size 1 keep eps_abs = eps
    eps = 1e-9
    margins = [-1e-3, -2e-9, -1e-9, -1e-10, 0.0, 1e-10, 1e-9, 2e-9, 1e-3]
    want = [FAIL, FAIL, MARGINAL, MARGINAL, MARGINAL, MARGINAL, MARGINAL, PASS, PASS]
    got = classify_margins(np.array(margins), np.zeros(9), np.zeros(9), True, eps)
    assert got.tolist() == want


def test_classify_nonstrict_truth_table():
    eps = 1e-9
    margins = [-1e-3, -2e-9, -1e-9, -1e-10, 0.0, 1e-10, 1e-3]
    want = [FAIL, FAIL, MARGINAL, MARGINAL, PASS, PASS, PASS]
    got = classify_margins(np.array(margins), np.zeros(7), np.zeros(7), False, eps)
    assert got.tolist() == want


def test_classify_eps_scales_with_magnitude():
    # |lhs| = 1e6 widens the absolute band by the same factor
    got = classify_margins(np.array([-0.5e-3, -2e-3]), np.array([1e6, 1e6]),
                           np.array([1e6, 1e6]), True, 1e-9)
    assert got.tolist() == [MARGINAL, FAIL]


def test_classify_eps_monotone():
    rng = random.Random(20260815)
    margins = np.array([rng.uniform(-1e-6, 1e-6) for _ in range(500)])
    zeros = np.zeros(500)
    for strict in (True, False):
        prev_fail = None
        prev_pass = None
        for eps in (0.0, 1e-12, 1e-9, 1e-7, 1e-5):
            cls = classify_margins(margins, zeros, zeros, strict, eps)
            n_fail = int((cls == FAIL).sum())
            n_pass = int((cls == PASS).sum())
            if prev_fail is not None:
                assert n_fail <= prev_fail  # wider band never adds fails
                assert n_pass <= prev_pass  # nor converts marginal to pass
            prev_fail, prev_pass = n_fail, n_pass


def _always_fail_spec():
    return BoundSpec(
        id="always-fail",
        domain_min=2,
        strict=True,
        kind="upper",
        check_at=("all",),
        needs=frozenset(),
        description="synthetic spec used to exercise counterexample handling",
        lhs=lambda ctx: ctx.ns.astype(float),
        rhs=lambda ctx: np.zeros(ctx.ns.size),
    )


def test_counterexample_cap_keeps_counts_exact(monkeypatch):
    monkeypatch.setitem(CATALOG, "always-fail", _always_fail_spec())
    rep = scan("always-fail", 2, 500, segment_size=64, counterexample_cap=7)
    assert rep.counts == {"pass": 0, "marginal": 0, "fail": 499}
    assert len(rep.counterexamples) == 7
    assert [r.n for r in rep.counterexamples] == list(range(2, 9))
    assert rep.extremal.n == 500 and rep.extremal.margin == -500.0
    assert rep.extremal.classification == "fail"


def test_extremal_tie_keeps_first(monkeypatch):
    spec = BoundSpec(
        id="flat-margin",
        domain_min=2,
        strict=True,
        kind="upper",
        check_at=("all",),
        needs=frozenset(),
        description="constant margin everywhere",
        lhs=lambda ctx: np.zeros(ctx.ns.size),
        rhs=lambda ctx: np.ones(ctx.ns.size),
    )
    monkeypatch.setitem(CATALOG, "flat-margin", spec)
    rep = scan("flat-margin", 2, 300, segment_size=16)
    assert rep.extremal.n == 2


def test_scan_validation():
    with pytest.raises(UnknownSpecError):
        scan("no-such-spec", 2, 10)
    with pytest.raises(ValueError, match="only defined from"):
        scan("main-theorem", 2, 10)
    with pytest.raises(ValueError, match="empty range"):
        scan("pi-upper", 10, 9)
    with pytest.raises(ScanModeError):
        scan("pi-upper", 2, 10, "primes-only")
    with pytest.raises(ValueError):
        scan("pi-upper", 2, 10, eps_rel=-1.0)
    with pytest.raises(ValueError):
        scan("pi-upper", 2, 10, segment_size=0)
    with pytest.raises(ValueError, match="checkpoint"):
        scan("pi-upper", 2, 10, max_segments=1)


def test_scan_points_validation():
    with pytest.raises(ValueError, match="ascending"):
        scan("pi-upper", 2, 100, points=[10, 10])
    with pytest.raises(ValueError, match="within"):
        scan("pi-upper", 2, 100, points=[2, 200])
    with pytest.raises(ValueError, match="nonempty"):
        scan("pi-upper", 2, 100, points=[])
    with pytest.raises(ScanModeError):
        scan("prop1-band-upper", 3, 100, "primes-only", points=[5])


def test_scan_points_match_full_scan():
    col: list = []
    scan("pi-upper", 2, 2000, _collector=col)
    full = {}
    for ns, batch, cls in col:
        for j in range(ns.size):
            full[int(ns[j])] = (float(batch.lhs[j]), float(batch.margin[j]))
    sub: list = []
    rep = scan("pi-upper", 2, 2000, points=[2, 17, 100, 1234, 2000], _collector=sub)
    assert rep.evaluated == 5
    for ns, batch, _cls in sub:
        for j in range(ns.size):
            n = int(ns[j])
            assert full[n] == (float(batch.lhs[j]), float(batch.margin[j])), n


def test_threshold_check_at_default_thresholds():
    rep = threshold_check("prop1-refined-lower")
    assert rep.mode == "threshold"
    assert rep.counts == {"pass": 11, "marginal": 0, "fail": 0}
    assert rep.from_n == 3564183
    assert rep.to_n == 3564183 << 10
    assert rep.below_threshold is not None
    assert rep.below_threshold.n == 3564182
    assert rep.below_threshold.classification == "fail"
    assert rep.segment_size is None


def test_threshold_check_r_envelope_not_minimal():
    # holds just below its threshold too; recorded, not asserted against
    rep = threshold_check("r-envelope-vs-9n")
    assert rep.counts["fail"] == 0
    assert rep.below_threshold.classification == "pass"


def test_threshold_check_override_finds_honest_fails():
    rep = threshold_check("prop2-refined-upper", threshold=10, samples=6)
    assert rep.counts["fail"] > 0
    assert rep.counts["pass"] > 0  # the largest doublings are past 569
    assert rep.extremal.classification == "fail"
    assert rep.counterexamples[0].n == 10


def test_threshold_check_validation():
    with pytest.raises(UnknownSpecError):
        threshold_check("main-theorem")
    with pytest.raises(ValueError):
        threshold_check("prop2-refined-lower", threshold=2)
    with pytest.raises(ValueError):
        threshold_check("prop2-refined-lower", samples=-1)


def test_report_shape_and_json():
    rep = scan("theta-env1", 2, 100)
    d = rep.to_dict()
    assert list(d) == [
        "spec", "range", "mode", "counts", "counterexamples",
        "extremal", "config", "runtime_seconds",
    ]
    assert d["range"] == {"from": 2, "to": 100}
    parsed = json.loads(rep.to_json())
    assert parsed["spec"] == "theta-env1"
    assert rep.evaluated == 99
    t = threshold_check("prop2-refined-lower")
    assert "below_threshold" in t.to_dict()


def test_check_record_roundtrip():
    rec = CheckRecord(n=17, lhs=1.5, rhs=2.5, margin=1.0, classification="pass")
    assert CheckRecord.from_dict(rec.to_dict()) == rec


def test_eval_rows_catalog_spec():
    header, rows = eval_rows("pi-upper", 2, 30)
    assert header == ["n", "lhs", "rhs", "margin", "class"]
    assert len(rows) == 29
    assert [r[0] for r in rows] == list(range(2, 31))
    assert all(r[4] == "pass" for r in rows)
    # stride subsamples the same values
    _h, strided = eval_rows("pi-upper", 2, 30, stride=7)
    assert [r[0] for r in strided] == [2, 9, 16, 23, 30]
    by_n = {r[0]: r for r in rows}
    for r in strided:
        assert by_n[r[0]] == r


def test_eval_rows_named_quantities():
    sieve = build_spf(100)
    h, rows = eval_rows("f-ratio", 2, 20)
    assert h == ["n", "value"]
    for n, v in rows:
        assert v == f_ratio(n, sieve), n
    _h, ups = eval_rows("upsilon", 2, 20)
    for n, v in ups:
        assert v == upsilon(n, sieve), n
    _h, rem = eval_rows("hardy-ramanujan-remainder", 10, 20)
    assert all(math.isfinite(v) for _n, v in rem)


def test_eval_rows_validation():
    with pytest.raises(UnknownSpecError):
        eval_rows("no-such-thing", 2, 10)
    with pytest.raises(ValueError, match="n >= 3"):
        eval_rows("hardy-ramanujan-remainder", 2, 10)
    with pytest.raises(ValueError, match="empty"):
        eval_rows("f-ratio", 10, 2)
