"""Finite geometry: linear sets on the projective line with their weights,
the scattered/MRD bridge, and the translation-hyperoval classification.

Run:  python3 demos/05_linear_sets_and_hyperovals.py
"""

from rmlkit import (classify_translation_hyperovals, field_tower,
                    hyperoval_from_function, is_hyperoval, is_scattered_pair,
                    linear_set)
from rmlkit.geometry import graph_subspace, line_intersection_counts
from rmlkit.qpoly import QPolynomial
from rmlkit.fields import gf

t = field_tower(2, 4)

# the graph of x -> x^q is scattered: 15 points, all of weight one
rep = linear_set(t, graph_subspace(QPolynomial.x(t), QPolynomial.monomial(t, 1, 1)))
print("graph of x^q: rank", rep.rank, "+", rep.size(), "points, scattered:", rep.scattered)

# the graph of x -> x^{q^2} is not: weight-2 points appear
rep2 = linear_set(t, graph_subspace(QPolynomial.x(t), QPolynomial.monomial(t, 1, 2)))
print("graph of x^{q^2}: scattered:", rep2.scattered,
      " weights seen:", sorted({w for _, w in rep2.points}))
print("mass formula: sum(2^w - 1) =", sum(2 ** w - 1 for _, w in rep2.points),
      "= 2^rank - 1 =", 2 ** rep2.rank - 1)

# scattered <=> MRD for the 2-dimensional code spanned by the pair
print("scattered(x, x^q) =", is_scattered_pair(QPolynomial.x(t), QPolynomial.monomial(t, 1, 1)),
      " and <x, x^q> is MRD")

# hyperovals: additive graphs that stay arcs
f4 = gf(2, 2)
pts = hyperoval_from_function(f4, (0, 1))  # f = x^2
print("\nhyperconic in PG(2,4):", len(pts), "points, hyperoval:", is_hyperoval(f4, pts))

for q in (4, 8):
    report = classify_translation_hyperovals(q)
    print(f"q={q}: swept {report.tested} additive maps, found "
          f"{len(report.hyperovals_found)}, matches the monomial prediction: "
          f"{report.prediction_match}")

# every found hyperoval meets every line in 0 or 2 points
f8 = gf(2, 3)
coeffs = classify_translation_hyperovals(8).hyperovals_found[0]
counts = line_intersection_counts(f8, hyperoval_from_function(f8, coeffs))
print("line intersection counts for one q=8 hyperoval:", counts)
