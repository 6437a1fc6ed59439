"""Censuses and densities: three independent routes to the same count,
idealizer fingerprints, and the asymptotic envelope tables.

Run:  python3 demos/07_census_and_density.py
The q=3 heavy census is shown commented out; it takes minutes.
"""

from fractions import Fraction

from rmlkit import asymptotic_report, count_mrd_exhaustive, count_one_weight
from rmlkit.census import (decimal_str, m4_density_limit_check, m4_density_printed,
                           mrd_count_m4, mrd_count_q2)
from rmlkit.linalg import gaussian_binomial

# the light tier: every 2-dimensional subspace of F_16^4, tested exactly
result = count_mrd_exhaustive(2, 4, fingerprint=True)
print("exhaustive MRD count at q=2, m=4:", result.exhaustive_count)
print("totient-family formula:", mrd_count_q2(4))
print("twisted-family formula M(2):", mrd_count_m4(2))
print("idealizer histogram:", result.extra["idealizer_histogram"],
      "(a single class: everything is Gabidulin-equivalent at q=2)")

dens = Fraction(result.exhaustive_count, gaussian_binomial(4, 2, 16))
print("\ndensity:", dens, "=", decimal_str(dens))
print("printed rational function at q=2:", m4_density_printed(2))
print("degree check for the q -> infinity limit:", m4_density_limit_check())

# one-weight codes: formula and exhaustive agree
ow = count_one_weight(2, 2, 2)
print("\none-weight [4,2] census:", ow.exhaustive_count, "=", ow.formula_value,
      "over", gaussian_binomial(4, 2, 4), "subspaces")

# density tables against the claimed envelopes
rep = asymptotic_report("q2_mrd")
print("\nq=2 family densities (m, density, ratio to m*2^(3m - m^2)):")
for row in rep["rows"]:
    print("   ", row["m"], row["density"], row["envelope_ratio"])
print("bounded by the envelope:", rep["bounded_by_envelope"])

rep4 = asymptotic_report("m4_mrd")
print("\nm=4 family densities marching to 1/2:")
for row in rep4["rows"]:
    print("   q =", row["q"], ":", row["density"])

# the heavy tier reproduces M(3) = 6368544 over ~4.4e7 subspaces and its
# fingerprint splits into idealizer classes of sizes 80 and 8:
#   count_mrd_exhaustive(3, 4, heavy=True, threads=8, fingerprint=True)
