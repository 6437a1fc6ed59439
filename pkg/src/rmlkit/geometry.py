"""Linear sets on the projective line, hyperovals in PG(2,q), and the
scattered/MRD bridge.

Projective points are canonical coordinate tuples with the first nonzero
entry normalized to 1, so equality is tuple equality.  A linear set
report buckets the nonzero vectors of an F_q-subspace U of F_{q^m}^2 by
the projective point they span; the bucket sizes determine the point
weights, and the set is scattered exactly when every weight is 1.

Hyperoval checks are independent oracles: a point set passes iff every
3-subset has nonzero 3x3 determinant.  The translation-hyperoval sweep
runs over all additive maps on F_q (q^h of them for q = 2^h) and
cross-tabulates the hits against the monomial prediction
{a x^(2^j) : a != 0, gcd(j, h) = 1}.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations

from .errors import DegenerateSubspace
from .fields import GF, FieldTower, gf
from .linalg import SpanBuilder
from .qpoly import QPolynomial


def projective_point(field: GF, coords) -> tuple:
    """Canonical representative: first nonzero coordinate scaled to 1."""
    coords = tuple(coords)
    for i, c in enumerate(coords):
        if c:
            if c == 1:
                return coords
            inv = field.inv(c)
            return tuple(0 if j < i else field.mul(inv, v) for j, v in enumerate(coords))
    raise ValueError("the zero vector spans no projective point")


def collinear(field: GF, p1, p2, p3) -> bool:
    """3x3 determinant test over F_q."""
    a, b, c = p1, p2, p3
    mul, sub = field.mul, field.sub
    det = 0
    det = field.add(det, mul(a[0], sub(mul(b[1], c[2]), mul(b[2], c[1]))))
    det = sub(det, mul(a[1], sub(mul(b[0], c[2]), mul(b[2], c[0]))))
    det = field.add(det, mul(a[2], sub(mul(b[0], c[1]), mul(b[1], c[0]))))
    return det == 0


# ---------------------------------------------------------------------------
# linear sets in PG(1, q^m)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearSetReport:
    """Points of L_U with their weights; rank = dim_{F_q}(U)."""
    rank: int
    points: tuple  # ((point, weight), ...)
    scattered: bool

    def size(self) -> int:
        return len(self.points)

    def max_size(self, q: int) -> int:
        return (q ** self.rank - 1) // (q - 1)


def linear_set(tower: FieldTower, vectors) -> LinearSetReport:
    """The linear set of the F_q-span U of the given vectors in F_{q^m}^2.

    Enumerates U \\ {0}, buckets by projective point, and derives each
    weight w from its bucket size q^w - 1.  Scattered iff all weights 1.
    """
    big, small_q = tower.big, tower.q
    basis = [tuple(v) for v in vectors]
    # independence over F_q, not over F_{q^m}: reduce in coordinate form
    small_rows = []
    for v in basis:
        row = []
        for comp in v:
            row.extend(tower.fq_coordinates(comp))
        small_rows.append(row)
    if tower.p == 2 and tower.h == 1:
        packed = [sum(b << i for i, b in enumerate(r)) for r in small_rows]
        keep = []
        seen: list[int] = []
        for v, pv in zip(basis, packed):
            w = pv
            for b in seen:
                w = min(w, w ^ b)
            if w:
                seen.append(w)
                seen.sort(reverse=True)
                keep.append(v)
        independent = keep
    else:
        independent = []
        sb = SpanBuilder(tower.small, len(small_rows[0]) if small_rows else 0)
        for v, row in zip(basis, small_rows):
            if sb.add(row):
                independent.append(v)
    r = len(independent)
    q = small_q
    buckets: dict[tuple, int] = {}
    for idx in range(1, q ** r):
        coeffs = []
        rem = idx
        for _ in range(r):
            coeffs.append(rem % q)
            rem //= q
        x = y = 0
        for c, (vx, vy) in zip(coeffs, independent):
            if c:
                ce = tower.embed(c)
                x = big.add(x, big.mul(ce, vx))
                y = big.add(y, big.mul(ce, vy))
        pt = projective_point(big, (x, y))
        buckets[pt] = buckets.get(pt, 0) + 1
    points = []
    for pt, cnt in sorted(buckets.items()):
        w = round(math.log(cnt + 1, q))
        assert q ** w - 1 == cnt, "bucket size must be q^w - 1"
        points.append((pt, w))
    scattered = all(w == 1 for _, w in points)
    return LinearSetReport(rank=r, points=tuple(points), scattered=scattered)


def graph_subspace(f1: QPolynomial, f2: QPolynomial):
    """Spanning vectors of U = {(f1(x), f2(x)) : x in F_{q^m}}."""
    t = f1.tower
    return [(f1(b), f2(b)) for b in t.fq_basis]


def is_scattered_pair(f1: QPolynomial, f2: QPolynomial) -> bool:
    """Whether U_{f1,f2} is a scattered F_q-subspace of dimension m.

    Raises DegenerateSubspace when ker f1 and ker f2 intersect
    nontrivially (U then has dimension < m).
    """
    t = f1.tower
    report = linear_set(t, graph_subspace(f1, f2))
    if report.rank != t.m:
        raise DegenerateSubspace(
            f"common kernel is nontrivial: U has F_q-dimension {report.rank} < {t.m}")
    return report.scattered


# ---------------------------------------------------------------------------
# hyperovals
# ---------------------------------------------------------------------------

def is_hyperoval(field: GF, points) -> bool:
    """q+2 points of PG(2,q), q even, no three collinear."""
    pts = [projective_point(field, p) for p in points]
    if len(set(pts)) != field.order + 2:
        return False
    return not any(collinear(field, a, b, c) for a, b, c in combinations(pts, 3))


def additive_eval(field: GF, coeffs, x: int) -> int:
    """sum(a_i * x^(2^i)) for coefficients over GF(2^h)."""
    acc = 0
    power = x
    for a in coeffs:
        if a:
            acc = field.add(acc, field.mul(a, power))
        power = field.mul(power, power)
    return acc


def hyperoval_from_function(field: GF, coeffs):
    """The point set {(x, f(x), 1)} + {(1,0,0), (0,1,0)} for the additive
    map f given by its 2-power coefficient vector."""
    pts = [projective_point(field, (x, additive_eval(field, coeffs, x), 1))
           for x in field.elements()]
    pts.append((1, 0, 0))
    pts.append((0, 1, 0))
    return tuple(pts)


def predicted_translation_monomials(field: GF):
    """{a x^(2^j) : a != 0, gcd(j, h) = 1} as coefficient vectors."""
    h = field.d
    out = []
    for j in range(1, h):
        if math.gcd(j, h) != 1:
            continue
        for a in field.units():
            coeffs = [0] * h
            coeffs[j] = a
            out.append(tuple(coeffs))
    return sorted(out)


@dataclass
class HyperovalReport:
    q: int
    tested: int
    hyperovals_found: list
    predicted: list
    prediction_match: bool

    def to_json(self) -> str:
        return json.dumps({
            "q": self.q,
            "tested": self.tested,
            "hyperovals_found": [list(c) for c in self.hyperovals_found],
            "predicted": [list(c) for c in self.predicted],
            "prediction_match": self.prediction_match,
        })


def classify_translation_hyperovals(q: int) -> HyperovalReport:
    """Sweep all additive maps f on F_q (q = 2^h, h <= 5) and report those
    whose graph completes to a hyperoval, against the monomial prediction."""
    field = gf(*_even_prime_power(q))
    h = field.d
    if h > 5:
        raise ValueError("sweep budget is limited to q = 2^h with h <= 5")
    found = []
    total = q ** h
    for idx in range(total):
        coeffs = []
        rem = idx
        for _ in range(h):
            coeffs.append(rem % q)
            rem //= q
        if is_hyperoval(field, hyperoval_from_function(field, coeffs)):
            found.append(tuple(coeffs))
    predicted = predicted_translation_monomials(field)
    found.sort()
    return HyperovalReport(q=q, tested=total, hyperovals_found=found,
                           predicted=predicted, prediction_match=found == predicted)


def _even_prime_power(q: int):
    h = q.bit_length() - 1
    if q != 1 << h or q < 2:
        raise ValueError(f"q = {q} is not a power of 2")
    return 2, h


def line_intersection_counts(field: GF, points):
    """Multiset of |line ∩ points| over all lines of PG(2,q); a hyperoval
    meets every line in 0 or 2 points."""
    pts = [projective_point(field, p) for p in points]
    counts = {}
    for line in _all_projective_points(field):
        hits = sum(1 for p in pts if _incident(field, line, p))
        counts[hits] = counts.get(hits, 0) + 1
    return counts


def _all_projective_points(field: GF):
    Q = field.order
    out = [(1, y, z) for y in range(Q) for z in range(Q)]
    out += [(0, 1, z) for z in range(Q)]
    out.append((0, 0, 1))
    return out


def _incident(field: GF, line, point) -> bool:
    acc = 0
    for a, b in zip(line, point):
        acc = field.add(acc, field.mul(a, b))
    return acc == 0


# Known classifications from the literature, recorded as data rather than
# recomputed: rank-m linear sets on PG(1, q^m) for these shapes are simple
# and have GL-class one, which is what lets censuses count code orbits by
# idealizer size alone.
def gl_class_one(rank: int, m: int) -> bool | None:
    """True when linear sets of this rank on PG(1, q^m) are known to have
    GL-class one; None when unknown to this toolkit."""
    if rank == 4 and m == 4:
        return True
    return None
