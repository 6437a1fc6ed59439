"""The algebra of linearized polynomials: composition, the matrix picture,
semilinear twists, and the rank-preserving evaluation map.

Run:  python3 demos/03_linearized_polynomials.py
"""

from rmlkit import MultiQPolynomial, QPolynomial, evaluate_basis, field_tower, rank_distance

t = field_tower(2, 4)

f = QPolynomial(t, (3, 1, 0, 0))     # 3x + x^q
g = QPolynomial.monomial(t, 1, 2)    # x^{q^2}
h = f.compose(g)
print("f:", f.text())
print("g:", g.text())
print("f o g:", h.text())
print("pointwise agreement:", all(h(a) == f(g(a)) for a in range(16)))

print("\nmatrix of f over F_2 (columns are coordinates of f on the basis):")
for row in f.to_matrix():
    print("   ", row)
print("rank of f:", f.rank(), " invertible:", f.is_invertible())

trace = QPolynomial(t, (1, 1, 1, 1))
print("trace map rank:", trace.rank(), "(image is F_2)")

print("\nd_L(f, g) = rank of the difference:", rank_distance(f, g))

rho = f.twist(1)
print("coefficientwise p-Frobenius twist of f:", rho.text())

# the evaluation map sends a polynomial to its values on an F_q-basis and
# preserves rank; for several variables the basis runs through each slot
m2 = field_tower(2, 2)
poly = MultiQPolynomial(m2, ((1, 0), (2, 0)))  # x_1 + 2 x_2
values = evaluate_basis(poly)
print("\nell = 2 evaluation vector:", values)
print("rank through values:", poly.rank())
