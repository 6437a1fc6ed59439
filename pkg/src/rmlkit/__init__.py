"""rmlkit: exact-arithmetic toolkit for rank-metric lattices, rank-metric
codes, and exhaustive censuses over small finite fields.

The public surface, by module:

- fields: GF(p^d) arithmetic on integer codes and the tower F_q in F_{q^m}
  (Frobenius, relative norm, F_q-coordinates).
- linalg: exact RREF linear algebra, canonical subspaces, deterministic
  subspace enumeration, Gaussian binomials and GL orders.
- qpoly: linearized polynomials in one or several variables, composition,
  the matrix picture, and the rank-preserving evaluation map.
- codes: rank-metric codes in vector and polynomial form, Gabidulin /
  twisted Gabidulin / one-weight constructions, brute-force idealizers.
- geometry: linear sets, scatteredness, hyperovals, and the
  translation-hyperoval classification sweep.
- lattice: rank-metric lattices by exhaustive enumeration, Möbius and
  Whitney numbers, the support recursion, and printed closed formulas.
- census: MRD and one-weight censuses, exact densities, and asymptotic
  envelope reports.
"""

from .fields import GF, FieldTower, field_tower, gf
from .linalg import (Subspace, enumerate_subspaces, gaussian_binomial,
                     gl_order, euler_phi)
from .qpoly import (MultiQPolynomial, QPolynomial, evaluate_basis,
                    evaluation_map, rank_distance)
from .codes import (PolyCode, RankMetricCode, gabidulin, linear_automorphism_count,
                    one_weight_code, rank_weight, twisted_gabidulin)
from .geometry import (LinearSetReport, classify_translation_hyperovals,
                       hyperoval_from_function, is_hyperoval, is_scattered_pair,
                       linear_set)
from .lattice import (LatticeParams, RankMetricLattice, WhitneyVector,
                      build_lattice, closed_formula_i2m3, mobius_and_whitney,
                      subspace_lattice_whitney, verify_whitney, whitney_recursion)
from .census import (CensusResult, asymptotic_report, count_mrd_exhaustive,
                     count_one_weight, density, mrd_count_formula)

__version__ = "0.1.0"
