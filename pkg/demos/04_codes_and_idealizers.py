"""Rank-metric codes end to end: the classical constructions, distance
invariants, and the right idealizer computed three ways.

Run:  python3 demos/04_codes_and_idealizers.py
"""

from rmlkit import field_tower, gabidulin, linear_automorphism_count, one_weight_code, twisted_gabidulin
from rmlkit.codes import right_idealizer_size
from rmlkit.errors import InvalidDelta

t = field_tower(2, 4)

# Gabidulin codes are the classical MRD family
G = gabidulin(t, 2, 1)
vec = G.to_vector_code()
print("Gabidulin(k=2, s=1) over F_16: n =", vec.n, " k =", vec.k)
print("minimum rank distance:", vec.min_distance(), " MRD:", vec.is_mrd())
print("weight distribution:", vec.weight_distribution())

# the twist needs a delta of non-trivial relative norm; at q=2 there is none
try:
    twisted_gabidulin(t, 2, 1, 7)
except InvalidDelta as err:
    print("\nq=2 twist rejected as expected:", err)

t3 = field_tower(3, 4)
delta = next(d for d in range(1, 81) if t3.rel_norm(d) != 1)
T = twisted_gabidulin(t3, 2, 1, delta)
print("\nq=3 twisted code with delta =", delta, "is MRD:", T.is_mrd())

# one-weight codes: every nonzero word has rank weight exactly m
t22 = field_tower(2, 2)
ow = one_weight_code(t22, 2, 2)
print("\none-weight [4,2] code over F_4, weights:", ow.weight_distribution())

# the right idealizer (linear automorphism group), three routes:
# brute force over invertible maps, the monomial subsweep, and the
# linear-system algebra used by the censuses
g3 = gabidulin(field_tower(2, 3), 2, 1)
print("\nidealizer of Gabidulin(2,1,3) at q=2")
print("  brute force over 168 invertible maps:", linear_automorphism_count(g3))
print("  monomial sweep:", linear_automorphism_count(g3, mode='monomial'))
print("  linear-system algebra:", right_idealizer_size(g3))

print("idealizer of the one-weight [4,2] code:",
      linear_automorphism_count(ow), "=", right_idealizer_size(ow))

print("\ncode file form:")
print(ow.to_json())
print(ow.weight_csv())
