"""Exact subspace machinery: canonical RREF bases, deterministic
enumeration, and the q-analog counting functions they are checked against.

Run:  python3 demos/02_subspaces_and_counting.py
"""

from rmlkit import Subspace, enumerate_subspaces, gaussian_binomial, gf, gl_order

f2 = gf(2, 1)

# every subspace is stored by its reduced-row-echelon basis, so equality
# and hashing are structural
A = Subspace.from_vectors(f2, 4, [(1, 1, 0, 0), (0, 1, 1, 0)])
B = Subspace.from_vectors(f2, 4, [(1, 0, 1, 0), (0, 1, 1, 0)])
print("canonical rows of A:", A.rows)
print("A == B:", A == B)

J, M = A.join(B), A.meet(B)
print("dim A, dim B, dim join, dim meet:", A.dim, B.dim, J.dim, M.dim)
print("dimension law holds:", J.dim + M.dim == A.dim + B.dim)

# enumeration is ordered by pivot profile, then lexicographic free entries
subs = list(enumerate_subspaces(f2, 4, 2))
print("\nfirst three 2-spaces of F_2^4:")
for s in subs[:3]:
    print("   ", s.rows)
print("count:", len(subs), "= [4 over 2]_2 =", gaussian_binomial(4, 2, 2))

f16 = gf(2, 4)
print("\n[4 over 2]_16 =", gaussian_binomial(4, 2, 16), "(the MRD census denominator)")
print("|GL_4(2)| =", gl_order(4, 2))

print("\nserialized form:")
print(A.serialize())
