"""A short tour of factorial valuations.

How often does a number divide n factorial? For a prime p the answer
is Legendre's sum of floor(n / p^k). For a composite base m it is the
bottleneck over the primes inside m: each prime p contributing
exponent a to m allows floor(v_p / a) copies, and the smallest
allowance wins. This script walks both, entirely in exact integers.

Run: python3 demos/valuation_tour.py
"""
from omegasum import (
    build_spf,
    f_ratio,
    generalized_valuation,
    legendre_valuation,
    upsilon,
)

N = 30
sieve = build_spf(N)

print(f"prime exponents inside {N}!:")
for p in (2, 3, 5, 7, 11, 29):
    print(f"  v_{p}({N}!) = {legendre_valuation(N, p)}")

print(f"\ncomposite bases dividing {N}!:")
for m in (4, 6, 8, 12, 30):
    v = generalized_valuation(m, N, sieve)
    print(f"  {m}^{v} divides {N}!, {m}^{v + 1} does not")

total = upsilon(N, sieve)
print(f"\nupsilon({N}) = {total} prime factors in {N}! with multiplicity,")
print("which equals the prefix sum of big_omega over 2..N.")

print("\nratio of the all-bases valuation sum to the prime-only total:")
for n in (2, 4, 10, 100, 1000):
    print(f"  n={n:5d}  ratio {f_ratio(n, build_spf(n)):.6f}")
print("the ratio never drops below 1 and keeps growing; no closed form")
print("is asserted for it anywhere in this package.")
