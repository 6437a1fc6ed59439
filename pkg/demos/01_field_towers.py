"""Tour of the field arithmetic layer: GF(p^d) on integer codes and the
two-level tower F_q inside F_{q^m}.

Run:  python3 demos/01_field_towers.py
"""

from rmlkit import field_tower, gf

# ---------------------------------------------------------------------------
# Single fields: elements are ints, the modulus is the lowest-lex irreducible
# ---------------------------------------------------------------------------
f16 = gf(2, 4)
print("F_16 modulus code:", f16.modulus, "(x^4 + x + 1)")
w = 2  # the class of x
print("powers of x:", [f16.pow(w, e) for e in range(6)])
print("x * x^14 =", f16.mul(w, f16.pow(w, 14)), "(the group has order 15)")

f9 = gf(3, 2)
print("\nF_9 modulus code:", f9.modulus)
print("additive inverses:", [(a, f9.neg(a)) for a in range(5)])

# ---------------------------------------------------------------------------
# Towers: F_q inside F_{q^m} with explicit embedding and coordinates
# ---------------------------------------------------------------------------
t = field_tower(4, 2)  # F_4 inside F_16
print("\nTower F_4 in F_16")
print("embedding table:", list(t.embed_table))
a, b = 2, 3
print("embed(a*b) == embed(a)*embed(b):",
      t.embed(t.small.mul(a, b)) == t.big.mul(t.embed(a), t.embed(b)))

t34 = field_tower(3, 4)
d = 5
print("\nTower F_3 in F_81")
print("frobenius orbit of", d, ":", [t34.frobenius(d, i) for i in range(5)])
print("relative norm of", d, "is", t34.rel_norm(d),
      "(always lands in the embedded F_3:", t34.in_subfield(t34.rel_norm(d)), ")")

coords = t34.fq_coordinates(d)
print("F_3-coordinates of", d, "in the canonical basis:", coords)
print("recombined:", t34.from_fq_coordinates(coords))

print("\nserialized tower description:")
print(t34.to_json())
