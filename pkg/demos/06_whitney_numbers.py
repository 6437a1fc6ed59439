"""Rank-metric lattices and their Whitney numbers: brute force by the
Möbius definition, the support recursion, and the printed closed formula
that disagrees with both.

Run:  python3 demos/06_whitney_numbers.py   (about ten seconds)
"""

from rmlkit import (LatticeParams, build_lattice, closed_formula_i2m3,
                    mobius_and_whitney, subspace_lattice_whitney,
                    verify_whitney, whitney_recursion)
from rmlkit.lattice import recursion_base

# L_2(4,3;2): subspaces of F_8^4 spanned by their own rank <= 2 vectors
params = LatticeParams(i=2, n=4, m=3, q=2)
lattice = build_lattice(params)
print("layer sizes (Whitney numbers of the second kind):", lattice.layer_sizes())
wv = mobius_and_whitney(lattice)
print("Whitney numbers of the first kind:", wv.first_kind)
print("characteristic polynomial coefficients:", wv.characteristic_polynomial())
print("sum of w_j:", sum(wv.first_kind), " sanity problems:", wv.check_sanity())

# the recursion over support dimensions reproduces the brute force
base = recursion_base(2, 3, 2, 1, 2)
print("\nbase values w_1(2,t,3;2):", base)
print("recursion at n=4:", whitney_recursion(2, 4, 3, 2, 1, base),
      " brute force:", wv.first_kind[1])
print("recursion at n=5:", whitney_recursion(2, 5, 3, 2, 1, base),
      " (the -961 anchor)")

# the printed closed formula disagrees with the Möbius definition here;
# the verification record reports both numbers and flags the mismatch
record = verify_whitney(params, j=1)
print("\nverification record for j=1:")
print(record.to_json())

# control case: i = n gives the full subspace lattice and the classical formula
control = mobius_and_whitney(build_lattice(LatticeParams(3, 3, 2, 2)))
print("\nfull-lattice control:", control.first_kind,
      "==", subspace_lattice_whitney(3, 4))

print("\nclosed formula value at (n=4, j=1, q=2):", closed_formula_i2m3(4, 1, 2),
      " (brute force says", wv.first_kind[1], ")")
