"""Gallery of the closed-form bounds next to the measured prime sums.

Every inequality the verifier scans compares an exactly measured
quantity against a formula. This script prints both sides at a few
sizes so the shapes are visible: the crude bands are wide, the refined
tails only win at millions, and the theta envelopes hug the diagonal.

Run: python3 demos/bound_gallery.py
"""
import math

from omegasum import (
    main_theorem_band,
    omega_prefix_sum,
    pi_upper_bound,
    prime_sums,
    prop1_band,
    prop1_refined,
    prop2_main_and_envelope,
    theta_error_envelopes,
)

print("n, then measured value | bound(s)\n")

print("prime count vs its upper estimate:")
for n in (100, 10_000, 1_000_000):
    s = prime_sums(n)
    print(f"  n={n:8d}  pi={s.pi:7d}  <=  {pi_upper_bound(float(n)):12.2f}")

print("\ntheta deviation |theta(n) - n| vs both envelopes:")
for n in (100, 10_000, 1_000_000):
    s = prime_sums(n)
    dev = abs(s.theta - n)
    e1, e2 = theta_error_envelopes(float(n))
    print(f"  n={n:8d}  dev={dev:10.3f}  <  {e1:12.3f}  and  {e2:14.1f}")

print("\nsum of 1/(p-1) inside its band and refined bounds:")
for n in (10, 1000, 100_000):
    s = prime_sums(n)
    blo, bhi = prop1_band(float(n))
    rlo, rhi = prop1_refined(float(n))
    print(
        f"  n={n:7d}  band ({blo:8.4f}, {bhi:8.4f})"
        f"  refined ({rlo:9.4f}, {rhi:9.4f})  sum {s.sum_inv_pm1:.6f}"
    )

print("\nsum of 1/log p within the symmetric envelope around its main term:")
for n in (100, 10_000, 1_000_000):
    s = prime_sums(n)
    main, env = prop2_main_and_envelope(float(n))
    print(f"  n={n:8d}  |{s.sum_inv_logp:12.4f} - {main:12.4f}| = "
          f"{abs(s.sum_inv_logp - main):10.4f}  <  {env:14.1f}")

print("\nprefix sum of big_omega inside the main band:")
for n in (10, 1000, 100_000):
    lo, hi = main_theorem_band(float(n))
    s = omega_prefix_sum(n)
    width = 23.0 * (n - 1)
    print(f"  n={n:7d}  {lo:13.1f} < {s:9d} < {hi:13.1f}   (half width 23(n-1) = {width:.0f})")

print("\nthe band center is (n-1) loglog(n-1); at n = 10^5 that is")
n = 100_000.0
print(f"  {(n - 1) * math.log(math.log(n - 1)):.1f}, "
      f"against the measured prefix sum above.")
