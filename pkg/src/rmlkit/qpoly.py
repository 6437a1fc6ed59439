"""Linearized polynomial algebra over a field tower.

A q-polynomial sum(c_i * x^(q^i)) with coefficients in F_{q^m} is stored
as a fixed-length tuple of m big-field codes (reduction mod x^(q^m) - x
is implicit in the length).  Composition follows the monomial rule
(a x^(q^i)) o (b x^(q^j)) = a b^(q^i) x^(q^((i+j) mod m)), which matches
pointwise evaluation on F_{q^m}.

The multivariate variant stores an ell x m coefficient array and models
F_q-linear maps from F_{q^m}^ell to F_{q^m}; evaluate_basis realizes the
rank-preserving isomorphism onto vectors of length m*ell.
"""

from __future__ import annotations

from .errors import DependentBasis
from .fields import FieldTower
from .linalg import rank, rank_bits


class QPolynomial:
    """An F_q-linear endomorphism of F_{q^m} in coefficient form."""

    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: FieldTower, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != tower.m:
            raise ValueError(f"need exactly {tower.m} coefficients")
        self.tower = tower
        self.coeffs = coeffs

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, tower):
        return cls(tower, (0,) * tower.m)

    @classmethod
    def x(cls, tower):
        return cls.monomial(tower, 1, 0)

    @classmethod
    def monomial(cls, tower, c, i):
        """c * x^(q^i)"""
        coeffs = [0] * tower.m
        coeffs[i % tower.m] = c
        return cls(tower, coeffs)

    # -- basics ---------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, QPolynomial) and self.tower is other.tower
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.tower), self.coeffs))

    def __repr__(self):
        return f"QPolynomial({self.text()})"

    def is_zero(self):
        return not any(self.coeffs)

    def q_degree(self):
        for i in range(self.tower.m - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def add(self, other: "QPolynomial") -> "QPolynomial":
        big = self.tower.big
        return QPolynomial(self.tower, (big.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def sub(self, other: "QPolynomial") -> "QPolynomial":
        big = self.tower.big
        return QPolynomial(self.tower, (big.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c: int) -> "QPolynomial":
        big = self.tower.big
        return QPolynomial(self.tower, (big.mul(c, a) for a in self.coeffs))

    __add__ = add
    __sub__ = sub

    def __call__(self, a: int) -> int:
        t, big = self.tower, self.tower.big
        acc = 0
        for i, c in enumerate(self.coeffs):
            if c:
                acc = big.add(acc, big.mul(c, t.frobenius(a, i)))
        return acc

    def compose(self, g: "QPolynomial") -> "QPolynomial":
        """(self o g)(a) = self(g(a)) for all a in F_{q^m}."""
        if self.tower is not g.tower:
            raise ValueError("q-polynomials over different towers")
        t, big, m = self.tower, self.tower.big, self.tower.m
        out = [0] * m
        for i, fi in enumerate(self.coeffs):
            if not fi:
                continue
            for j, gj in enumerate(g.coeffs):
                if gj:
                    k = (i + j) % m
                    out[k] = big.add(out[k], big.mul(fi, t.frobenius(gj, i)))
        return QPolynomial(t, out)

    def twist(self, rho_exponent: int) -> "QPolynomial":
        """Apply the p-power field automorphism a -> a^(p^e) to every
        coefficient (restricts to an automorphism of F_q)."""
        big, p = self.tower.big, self.tower.p
        e = pow(p, rho_exponent, big.order - 1) if big.order > 2 else 1
        return QPolynomial(self.tower, (big.pow(c, e) if c else 0 for c in self.coeffs))

    # -- the matrix picture -----------------------------------------------------

    def to_matrix(self, basis=None):
        """m x m matrix over F_q of the map a -> self(a) in the given basis
        (default: the tower's canonical F_q-basis)."""
        t = self.tower
        basis = t.fq_basis if basis is None else tuple(basis)
        cols = [t.fq_coordinates(self(b), basis) for b in basis]
        return tuple(tuple(cols[j][i] for j in range(t.m)) for i in range(t.m))

    def rank(self) -> int:
        """dim over F_q of the image."""
        t = self.tower
        if t.p == 2 and t.h == 1:
            return rank_bits([self(b) for b in t.fq_basis])
        return rank(t.small, self.to_matrix())

    def is_invertible(self) -> bool:
        return self.rank() == self.tower.m

    # -- text and JSON forms ------------------------------------------------------

    def text(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            var = "x" if i == 0 else ("x^q" if i == 1 else f"x^q{i}")
            parts.append(f"{c}*{var}")
        return "f = " + (" + ".join(parts) if parts else "0")

    def to_json_array(self):
        return list(self.coeffs)


def rank_distance(f: QPolynomial, g: QPolynomial) -> int:
    """The metric dim_{F_q}(Im(f - g)) on q-polynomials."""
    return f.sub(g).rank()


class MultiQPolynomial:
    """Linearized polynomial in ell variables: coeffs[v][i] * x_v^(q^i)."""

    __slots__ = ("tower", "ell", "coeffs")

    def __init__(self, tower: FieldTower, coeffs):
        coeffs = tuple(tuple(row) for row in coeffs)
        if any(len(row) != tower.m for row in coeffs):
            raise ValueError(f"each variable needs exactly {tower.m} coefficients")
        self.tower = tower
        self.ell = len(coeffs)
        self.coeffs = coeffs

    @classmethod
    def zero(cls, tower, ell):
        return cls(tower, ((0,) * tower.m,) * ell)

    @classmethod
    def variable(cls, tower, ell, v):
        """The polynomial x_{v+1} (0-indexed v)."""
        coeffs = [[0] * tower.m for _ in range(ell)]
        coeffs[v][0] = 1
        return cls(tower, coeffs)

    @classmethod
    def from_flat(cls, tower, ell, flat):
        m = tower.m
        return cls(tower, (flat[v * m:(v + 1) * m] for v in range(ell)))

    def flat(self):
        return tuple(c for row in self.coeffs for c in row)

    def __eq__(self, other):
        return (isinstance(other, MultiQPolynomial) and self.tower is other.tower
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.tower), self.coeffs))

    def is_zero(self):
        return not any(any(row) for row in self.coeffs)

    def add(self, other):
        big = self.tower.big
        return MultiQPolynomial(self.tower, (tuple(big.add(a, b) for a, b in zip(r1, r2))
                                             for r1, r2 in zip(self.coeffs, other.coeffs)))

    def scale(self, c):
        big = self.tower.big
        return MultiQPolynomial(self.tower, (tuple(big.mul(c, a) for a in row)
                                             for row in self.coeffs))

    def __call__(self, point) -> int:
        t, big = self.tower, self.tower.big
        acc = 0
        for row, a in zip(self.coeffs, point):
            if a == 0:
                continue
            for i, c in enumerate(row):
                if c:
                    acc = big.add(acc, big.mul(c, t.frobenius(a, i)))
        return acc

    def to_matrix(self):
        """m x (m*ell) matrix over F_q of the map F_{q^m}^ell -> F_{q^m}."""
        t = self.tower
        cols = [t.fq_coordinates(self(pt)) for pt in default_eval_basis(t, self.ell)]
        return tuple(tuple(cols[j][i] for j in range(t.m * self.ell)) for i in range(t.m))

    def rank(self) -> int:
        t = self.tower
        if t.p == 2 and t.h == 1:
            return rank_bits([self(pt) for pt in default_eval_basis(t, self.ell)])
        return rank(t.small, self.to_matrix())


def default_eval_basis(tower: FieldTower, ell: int):
    """The canonical F_q-basis of F_{q^m}^ell: b_1 e_1, ..., b_m e_1,
    b_1 e_2, ... with (b_i) the tower's canonical basis."""
    points = []
    for v in range(ell):
        for b in tower.fq_basis:
            pt = [0] * ell
            pt[v] = b
            points.append(tuple(pt))
    return tuple(points)


def check_eval_basis(tower: FieldTower, points, ell: int):
    """Raise DependentBasis unless the m*ell points span F_{q^m}^ell over F_q."""
    rows = []
    for pt in points:
        row = []
        for component in pt:
            row.extend(tower.fq_coordinates(component))
        rows.append(row)
    n = tower.m * ell
    if len(rows) != n or rank(tower.small, rows) != n:
        raise DependentBasis("evaluation points are not an F_q-basis")


def evaluate_basis(f, points=None):
    """Evaluate f at an F_q-basis of its domain, giving a vector of length
    m*ell whose F_q-span has the same dimension as Im(f)."""
    if isinstance(f, QPolynomial):
        f = MultiQPolynomial(f.tower, (f.coeffs,))
    t = f.tower
    if points is None:
        points = default_eval_basis(t, f.ell)
    else:
        points = tuple(tuple(pt) for pt in points)
        check_eval_basis(t, points, f.ell)
    return tuple(f(pt) for pt in points)


# spec-facing alias: the rank-preserving isomorphism onto F_{q^m}^(m*ell)
evaluation_map = evaluate_basis
