"""Anatomy of a verification scan.

A scan walks a range in segments, keeps its accumulators in ascending
order, classifies every point as pass, marginal or fail, and reports
the counts plus the minimum-margin record. This script runs a few and
shows what the reports look like, including a threshold comparison
probed below its validity point, where it honestly fails.

Run: python3 demos/scan_walkthrough.py
"""
from omegasum import scan, threshold_check

print("scan the factorial-exponent sandwich over [2, 2000]:")
rep = scan("vp-sandwich", 2, 2000)
print(f"  counts {rep.counts}")
print(f"  tightest point: n={rep.extremal.n}, margin {rep.extremal.margin}")
print("  (the upper bound is met with equality whenever n is prime)")

print("\nscan the theta envelope over [2, 50000] at two segment sizes:")
a = scan("theta-env1", 2, 50_000, segment_size=1024)
b = scan("theta-env1", 2, 50_000, segment_size=50_000)
same = a.to_dict(include_runtime=False)
other = b.to_dict(include_runtime=False)
same.pop("config")
other.pop("config")
print(f"  identical records: {same == other}")

print("\nprimes-only mode, sound here because the sum moves only at primes:")
rep = scan("prop1-band-upper", 3, 100_000, "primes-only")
print(f"  {rep.evaluated} primes checked, {rep.counts['fail']} fails")

print("\na threshold comparison at its validity point and below it:")
rep = threshold_check("prop2-refined-lower")
print(f"  at {rep.from_n}: margin {rep.extremal.margin:.6f} (holds)")
b = rep.below_threshold
print(f"  at {b.n}: margin {b.margin:.6f} ({b.classification}; "
      "the threshold is sufficient, minimality is not asserted)")

print("\nforcing the comparison far below its threshold shows honest fails:")
rep = threshold_check("prop2-refined-upper", threshold=10, samples=6)
print(f"  counts {rep.counts}")
for rec in rep.counterexamples[:3]:
    print(f"  n={rec.n}: margin {rec.margin:.1f}")
