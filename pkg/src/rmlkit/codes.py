"""Rank-metric codes over F_{q^m}: vector form, q-polynomial form, the
classical constructions, and brute-force automorphism counting.

A vector code is an F_{q^m}-subspace of F_{q^m}^n held in canonical RREF
form; distance invariants are computed by enumerating one representative
per projective codeword (rank weight is invariant under F_{q^m}-scaling,
which saves a factor q^m - 1 in every sweep).  A PolyCode is the same
object in (multivariate) linearized-polynomial coordinates; evaluate_basis
converts between the two pictures without changing rank weights.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .errors import (InvalidDelta, InvalidParameter, NotPrimitiveElement,
                     ResourceBudgetExceeded, RmlkitError, UnsupportedShape)
from .fields import FieldTower, field_tower
from .linalg import (Subspace, mat_mul, rank, rank_bits, reduce_vector, rref)
from .qpoly import MultiQPolynomial, QPolynomial, evaluate_basis


def rank_weight(tower: FieldTower, v) -> int:
    """dim over F_q of the span of the entries of v (a tuple of big codes)."""
    if tower.p == 2 and tower.h == 1:
        return rank_bits(v)
    return rank(tower.small, [tower.fq_coordinates(a) for a in v])


def support_of_vectors(tower: FieldTower, vectors, n: int) -> Subspace:
    """F_q-row space of the coordinate expansion of the given codewords:
    each word contributes m rows (one per basis coordinate slot)."""
    rows = []
    for v in vectors:
        coords = [tower.fq_coordinates(a) for a in v]
        for t in range(tower.m):
            rows.append(tuple(c[t] for c in coords))
    return Subspace.from_vectors(tower.small, n, rows)


class RankMetricCode:
    """An [n, k] F_{q^m}-linear code with cached rank-distance invariants."""

    __slots__ = ("tower", "n", "space", "k", "_min_distance", "_weights")

    def __init__(self, tower: FieldTower, space: Subspace):
        if space.field is not tower.big:
            raise ValueError("generator subspace must live over the big field")
        if space.dim == 0:
            raise InvalidParameter("a rank-metric code needs dimension k >= 1")
        self.tower = tower
        self.n = space.ambient
        self.space = space
        self.k = space.dim
        self._min_distance = None
        self._weights = None

    @classmethod
    def from_generators(cls, tower: FieldTower, rows) -> "RankMetricCode":
        rows = [tuple(r) for r in rows]
        n = len(rows[0])
        return cls(tower, Subspace.from_vectors(tower.big, n, rows))

    @property
    def generator_matrix(self):
        return self.space.rows

    def __eq__(self, other):
        return isinstance(other, RankMetricCode) and self.space == other.space

    def __hash__(self):
        return hash(self.space)

    def __repr__(self):
        return f"RankMetricCode(n={self.n}, k={self.k}, q={self.tower.q}, m={self.tower.m})"

    def projective_codewords(self):
        return self.space.projective_vectors()

    def _scan_weights(self):
        counts: dict[int, int] = {}
        for v in self.projective_codewords():
            w = rank_weight(self.tower, v)
            counts[w] = counts.get(w, 0) + 1
        scale = self.tower.big_order - 1
        self._weights = {w: c * scale for w, c in sorted(counts.items())}
        self._min_distance = min(self._weights)

    def min_distance(self) -> int:
        if self._min_distance is None:
            self._scan_weights()
        return self._min_distance

    def weight_distribution(self) -> dict[int, int]:
        """Count of nonzero codewords per rank weight."""
        if self._weights is None:
            self._scan_weights()
        return dict(self._weights)

    def is_mrd(self) -> bool:
        if self.n > self.tower.m:
            raise UnsupportedShape(
                f"MRD is defined for n <= m; got n={self.n}, m={self.tower.m}")
        return self.min_distance() == self.n - self.k + 1

    def support(self) -> Subspace:
        return support_of_vectors(self.tower, self.space.rows, self.n)

    def compose_matrix(self, A) -> "RankMetricCode":
        """The code G * A for an n x n matrix A over F_q (right composition
        with the F_q-linear substitution A defines)."""
        t = self.tower
        A_big = tuple(tuple(t.embed(a) for a in row) for row in A)
        return RankMetricCode.from_generators(t, mat_mul(t.big, self.space.rows, A_big))

    # -- files ------------------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({
            "tower": {"q": self.tower.q, "m": self.tower.m},
            "n": self.n,
            "k": self.k,
            "generator_rows": [list(r) for r in self.space.rows],
        })

    @classmethod
    def from_json(cls, text: str) -> "RankMetricCode":
        d = json.loads(text)
        tower = field_tower(d["tower"]["q"], d["tower"]["m"])
        return cls.from_generators(tower, d["generator_rows"])

    def weight_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["rank", "count"])
        for r, c in self.weight_distribution().items():
            w.writerow([r, c])
        return buf.getvalue()


class PolyCode:
    """An F_{q^m}-subspace of linearized polynomials in ell variables,
    canonicalized through the RREF of the flattened coefficient vectors."""

    __slots__ = ("tower", "ell", "space")

    def __init__(self, tower: FieldTower, ell: int, space: Subspace):
        self.tower = tower
        self.ell = ell
        self.space = space

    @classmethod
    def from_polys(cls, tower: FieldTower, polys) -> "PolyCode":
        flat = []
        ell = None
        for f in polys:
            if isinstance(f, QPolynomial):
                f = MultiQPolynomial(tower, (f.coeffs,))
            if ell is None:
                ell = f.ell
            elif f.ell != ell:
                raise ValueError("mixed variable counts")
            flat.append(f.flat())
        space = Subspace.from_vectors(tower.big, tower.m * ell, flat)
        return cls(tower, ell, space)

    @property
    def k(self) -> int:
        return self.space.dim

    def __eq__(self, other):
        return isinstance(other, PolyCode) and self.ell == other.ell and self.space == other.space

    def __hash__(self):
        return hash(self.space)

    def __repr__(self):
        return f"PolyCode(k={self.k}, ell={self.ell}, q={self.tower.q}, m={self.tower.m})"

    def basis_polys(self):
        if self.ell == 1:
            return tuple(QPolynomial(self.tower, r) for r in self.space.rows)
        return tuple(MultiQPolynomial.from_flat(self.tower, self.ell, r)
                     for r in self.space.rows)

    def contains(self, f) -> bool:
        flat = f.coeffs if isinstance(f, QPolynomial) else f.flat()
        return self.space.contains_vector(flat)

    def words_projective(self):
        for row in self.space.projective_vectors():
            if self.ell == 1:
                yield QPolynomial(self.tower, row)
            else:
                yield MultiQPolynomial.from_flat(self.tower, self.ell, row)

    def to_vector_code(self, points=None) -> RankMetricCode:
        rows = [evaluate_basis(f, points) for f in self.basis_polys()]
        return RankMetricCode.from_generators(self.tower, rows)

    def min_distance(self) -> int:
        return self.to_vector_code().min_distance()

    def is_mrd(self) -> bool:
        return self.to_vector_code().is_mrd()


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def gabidulin(tower: FieldTower, k: int, s: int = 1) -> PolyCode:
    """Generalized Gabidulin code: span of x, x^(q^s), ..., x^(q^(s(k-1)))."""
    m = tower.m
    if not 1 <= k <= m:
        raise InvalidParameter(f"need 1 <= k <= m; got k={k}, m={m}")
    if math.gcd(s, m) != 1:
        raise InvalidParameter(f"need gcd(s, m) = 1; got s={s}, m={m}")
    return PolyCode.from_polys(
        tower, [QPolynomial.monomial(tower, 1, (s * t) % m) for t in range(k)])


def _norm_forbidden_value(tower: FieldTower, mk: int) -> int:
    """(-1)^(mk) as a big-field code."""
    if mk % 2 == 0 or tower.p == 2:
        return 1
    return tower.embed(tower.small.neg(1))


def twisted_gabidulin(tower: FieldTower, k: int, s: int, delta: int,
                      variant: str = "definition") -> PolyCode:
    """Twisted Gabidulin code: span of x^(q^s), ..., x^(q^(s(k-1))) and
    x + delta x^(q^(sk)); delta must fail to have relative norm (-1)^(mk)
    (variant "cz": the span of x and x^q + delta x^(q^3), norm != 1, only
    for k=2, s=1, m=4 — the two variants are linearly equivalent).

    The constructed code is verified to be MRD and construction aborts
    loudly if the check fails.
    """
    m = tower.m
    if not 1 <= k <= m:
        raise InvalidParameter(f"need 1 <= k <= m; got k={k}, m={m}")
    if math.gcd(s, m) != 1:
        raise InvalidParameter(f"need gcd(s, m) = 1; got s={s}, m={m}")
    if variant == "definition":
        forbidden = _norm_forbidden_value(tower, m * k)
        if tower.rel_norm(delta) == forbidden:
            raise InvalidDelta(
                f"relative norm of delta={delta} equals (-1)^(mk); no twist possible")
        polys = [QPolynomial.monomial(tower, 1, (s * t) % m) for t in range(1, k)]
        twist = QPolynomial.x(tower)
        tail = QPolynomial.monomial(tower, delta, (s * k) % m)
        polys.append(twist.add(tail))
    elif variant == "cz":
        if (k, s, m) != (2, 1, 4):
            raise InvalidParameter("variant 'cz' is only defined for k=2, s=1, m=4")
        if tower.rel_norm(delta) == 1:
            raise InvalidDelta(f"relative norm of delta={delta} is 1")
        polys = [QPolynomial.x(tower),
                 QPolynomial.monomial(tower, 1, 1).add(QPolynomial.monomial(tower, delta, 3))]
    else:
        raise InvalidParameter(f"unknown variant {variant!r}")
    code = PolyCode.from_polys(tower, polys)
    if not code.is_mrd():
        raise RmlkitError(
            f"twisted construction (k={k}, s={s}, delta={delta}, {variant}) "
            "passed the norm condition but is not MRD")
    return code


def one_weight_code(tower: FieldTower, k: int, alpha: int) -> RankMetricCode:
    """The [mk, k] code with generator (I_k | alpha I_k | ... | alpha^(m-1) I_k);
    every nonzero codeword has rank weight exactly m.  Requires alpha to
    generate F_{q^m} over F_q."""
    t, m = tower, tower.m
    powers = [t.big.pow(alpha, j) for j in range(m)]
    if rank(t.small, [t.fq_coordinates(a) for a in powers]) != m:
        raise NotPrimitiveElement(
            f"alpha={alpha} does not generate the extension over F_q")
    n = m * k
    rows = []
    for r in range(k):
        row = [0] * n
        for j in range(m):
            row[j * k + r] = powers[j]
        rows.append(row)
    return RankMetricCode.from_generators(tower, rows)


# ---------------------------------------------------------------------------
# brute-force automorphism counting
# ---------------------------------------------------------------------------

def right_idealizer_size(code) -> int:
    """|{Z invertible : C Z = C}| through the idealizer algebra.

    The condition C Z <= C is F_q-linear in the n x n unknown Z, so the
    idealizer is the kernel of one small linear system (unknowns mix the
    columns of the expanded codeword matrices); its invertible elements
    are then counted by direct enumeration of the kernel algebra.  Agrees
    with linear_automorphism_count wherever the brute-force sweep is
    feasible, at a tiny fraction of the cost.
    """
    from itertools import product

    from .linalg import reduce_vector, right_kernel
    if isinstance(code, PolyCode):
        code = code.to_vector_code()
    t = code.tower
    small, m, n = t.small, t.m, code.n
    mats = []
    for row in code.space.rows:
        for lam in t.fq_basis:
            word = [t.big.mul(lam, e) for e in row]
            coords = [t.fq_coordinates(e) for e in word]
            mats.append(tuple(tuple(coords[j][a] for j in range(n)) for a in range(m)))
    vecs = [tuple(v for r in X for v in r) for X in mats]
    R, piv = rref(small, vecs)
    columns = []
    for u in range(n):
        for v in range(n):
            stacked = []
            for X in mats:
                Y = [[0] * n for _ in range(m)]
                for a in range(m):
                    Y[a][v] = X[a][u]
                stacked.extend(reduce_vector(small, R, piv, [x for r in Y for x in r]))
            columns.append(stacked)
    system = list(zip(*columns))
    kernel = right_kernel(small, system, n * n)
    count = 0
    for coeffs in product(range(small.order), repeat=len(kernel)):
        if not any(coeffs):
            continue
        z = [0] * (n * n)
        for c, kv in zip(coeffs, kernel):
            if c:
                z = [small.add(a, small.mul(c, b)) for a, b in zip(z, kv)]
        if rank(small, [z[a * n:(a + 1) * n] for a in range(n)]) == n:
            count += 1
    return count


def _invertible_matrices(field, n: int):
    """All invertible n x n matrices over the field, by digit enumeration."""
    Q = field.order
    total = Q ** (n * n)
    fast_gf2 = field.p == 2 and field.d == 1
    for idx in range(total):
        rows = []
        rem = idx
        for _ in range(n):
            row = []
            for _ in range(n):
                row.append(rem % Q)
                rem //= Q
            rows.append(tuple(row))
        if fast_gf2:
            packed = [sum(b << j for j, b in enumerate(r)) for r in rows]
            if rank_bits(packed) != n:
                continue
        elif rank(field, rows) != n:
            continue
        yield tuple(rows)


def linear_automorphism_count(code, mode: str = "exhaustive",
                              budget: int = 1 << 22) -> int:
    """Size of {g invertible : C o g = C}, the right idealizer of the code.

    PolyCode (one variable): g runs over invertible q-polynomials, by
    sweeping all q^(m^2) coefficient vectors.  RankMetricCode: g runs over
    GL_n(q) acting on generator-matrix columns.  mode="monomial" restricts
    to g = a x^(q^i), which stays feasible when the full group does not.
    """
    if isinstance(code, PolyCode):
        if code.ell != 1:
            raise UnsupportedShape("polynomial sweep implemented for one variable; "
                                   "use the vector-code form instead")
        t = code.tower
        basis = code.basis_polys()
        count = 0
        if mode == "monomial":
            for i in range(t.m):
                for a in t.big.units():
                    g = QPolynomial.monomial(t, a, i)
                    if all(code.contains(f.compose(g)) for f in basis):
                        count += 1
            return count
        total = t.big_order ** t.m
        if total > budget:
            raise ResourceBudgetExceeded(
                f"{total} candidate maps exceed the budget; use mode='monomial'",
                estimate=total)
        m = t.m
        for idx in range(total):
            coeffs = []
            rem = idx
            for _ in range(m):
                coeffs.append(rem % t.big_order)
                rem //= t.big_order
            g = QPolynomial(t, coeffs)
            if not g.is_invertible():
                continue
            if all(code.contains(f.compose(g)) for f in basis):
                count += 1
        return count

    if isinstance(code, RankMetricCode):
        t = code.tower
        if mode == "monomial":
            if code.n != t.m:
                raise UnsupportedShape("monomial maps act on length-m codes only")
            count = 0
            for i in range(t.m):
                for a in t.big.units():
                    A = QPolynomial.monomial(t, a, i).to_matrix()
                    if code.compose_matrix(A).space == code.space:
                        count += 1
            return count
        total = t.q ** (code.n * code.n)
        if total > budget:
            raise ResourceBudgetExceeded(
                f"{total} candidate matrices exceed the budget", estimate=total)
        count = 0
        for A in _invertible_matrices(t.small, code.n):
            if code.compose_matrix(A).space == code.space:
                count += 1
        return count

    raise TypeError(f"unsupported code type {type(code)!r}")
