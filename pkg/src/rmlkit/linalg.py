"""Exact linear algebra and subspace enumeration over a finite field.

Vectors are tuples of field codes, matrices are sequences of row tuples;
all routines take the GF instance as their first argument.  Subspace is
the canonical currency for everything downstream: it stores the reduced
row echelon basis, so two subspaces are equal iff their RREF matrices
are identical, and the class is hashable.

Counting helpers (Gaussian binomials, GL orders) return exact Python
ints.  enumerate_subspaces yields each k-dimensional subspace exactly
once, ordered by pivot profile and then lexicographically by the free
entries, which makes sharded consumption deterministic.
"""

from __future__ import annotations

from itertools import combinations

from .errors import DependentBasis
from .fields import GF, gf


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

def gaussian_binomial(n: int, k: int, Q: int) -> int:
    """Number of k-dimensional subspaces of an n-space over a field with Q
    elements; 0 outside the range 0 <= k <= n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= Q ** (n - i) - 1
        den *= Q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def gl_order(n: int, Q: int) -> int:
    """Order of the group of invertible n x n matrices over F_Q."""
    out = 1
    for j in range(n):
        out *= Q ** n - Q ** j
    return out


def euler_phi(n: int) -> int:
    out, d = n, 2
    m = n
    while d * d <= m:
        if m % d == 0:
            while m % d == 0:
                m //= d
            out -= out // d
        d += 1
    if m > 1:
        out -= out // m
    return out


def subspace_count_all(n: int, Q: int) -> int:
    return sum(gaussian_binomial(n, k, Q) for k in range(n + 1))


# ---------------------------------------------------------------------------
# matrix routines
# ---------------------------------------------------------------------------

def rref(field: GF, rows):
    """Reduced row echelon form.

    Returns (rows, pivots) where rows holds only the nonzero rows, each
    scaled to a leading 1 with zeros above and below, and pivots are the
    pivot column indices in increasing order.
    """
    work = [list(r) for r in rows]
    if not work:
        return (), ()
    ncols = len(work[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        s = field.inv(work[r][c])
        if s != 1:
            work[r] = [field.mul(s, v) for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return tuple(tuple(row) for row in work[:r]), tuple(pivots)


def rank(field: GF, rows) -> int:
    return len(rref(field, rows)[0])


def mat_mul(field: GF, A, B):
    nb = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [0] * nb
        for a, brow in zip(row, B):
            if a:
                for j, b in enumerate(brow):
                    if b:
                        acc[j] = field.add(acc[j], field.mul(a, b))
        out.append(tuple(acc))
    return tuple(out)


def transpose(rows):
    return tuple(zip(*rows)) if rows else ()

def reduce_vector(field: GF, rows, pivots, v):
    """Subtract the span of an RREF basis from v; zero iff v is in the span."""
    v = list(v)
    for row, c in zip(rows, pivots):
        f = v[c]
        if f:
            v = [field.sub(a, field.mul(f, b)) for a, b in zip(v, row)]
    return tuple(v)


def right_kernel(field: GF, rows, ncols: int):
    """Basis of {x : M x = 0} for the matrix M given by rows."""
    R, pivots = rref(field, rows)
    pivset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        x = [0] * ncols
        x[f] = 1
        for row, c in zip(R, pivots):
            if row[f]:
                x[c] = field.neg(row[f])
        out.append(tuple(x))
    return tuple(out)


def rank_bits(rows) -> int:
    """GF(2) rank of rows given as bitmask ints (fast path for p = 2)."""
    r = 0
    basis = []
    for v in rows:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
            r += 1
    return r


class SpanBuilder:
    """Incrementally grown RREF basis, used by membership filters.

    add() returns True when the vector enlarged the span.
    """

    def __init__(self, field: GF, ambient: int):
        self.field = field
        self.ambient = ambient
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def add(self, v) -> bool:
        field = self.field
        v = list(reduce_vector(field, self.rows, self.pivots, v))
        c = next((j for j, a in enumerate(v) if a), None)
        if c is None:
            return False
        s = field.inv(v[c])
        if s != 1:
            v = [field.mul(s, a) for a in v]
        for row in self.rows:
            f = row[c]
            if f:
                row[:] = [field.sub(a, field.mul(f, b)) for a, b in zip(row, v)]
        at = next((i for i, p in enumerate(self.pivots) if p > c), len(self.pivots))
        self.rows.insert(at, v)
        self.pivots.insert(at, c)
        return True

    def subspace(self) -> "Subspace":
        return Subspace(self.field, self.ambient,
                        tuple(tuple(r) for r in self.rows), tuple(self.pivots))


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

class Subspace:
    """A subspace of F^n in canonical (RREF) form; hashable and comparable."""

    __slots__ = ("field", "ambient", "rows", "pivots", "_hash")

    def __init__(self, field: GF, ambient: int, rows, pivots):
        self.field = field
        self.ambient = ambient
        self.rows = rows
        self.pivots = pivots
        self._hash = hash((field.p, field.d, ambient, rows))

    @classmethod
    def from_vectors(cls, field: GF, ambient: int, vectors) -> "Subspace":
        rows, pivots = rref(field, vectors)
        return cls(field, ambient, rows, pivots)

    @classmethod
    def zero(cls, field: GF, ambient: int) -> "Subspace":
        return cls(field, ambient, (), ())

    @classmethod
    def full(cls, field: GF, ambient: int) -> "Subspace":
        rows = tuple(tuple(1 if j == i else 0 for j in range(ambient)) for i in range(ambient))
        return cls(field, ambient, rows, tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field is other.field
                and self.ambient == other.ambient and self.rows == other.rows)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, field={self.field!r})"

    def contains_vector(self, v) -> bool:
        return not any(reduce_vector(self.field, self.rows, self.pivots, v))

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(r) for r in other.rows)

    def _check_compatible(self, other: "Subspace"):
        if self.field is not other.field or self.ambient != other.ambient:
            raise ValueError("subspaces live in different ambient spaces")

    def join(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        return Subspace.from_vectors(self.field, self.ambient, self.rows + other.rows)

    def meet(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        if not self.rows or not other.rows:
            return Subspace.zero(self.field, self.ambient)
        stacked = self.rows + other.rows
        coeffs = right_kernel(self.field, transpose(stacked), len(stacked))
        a = len(self.rows)
        vectors = [mat_mul(self.field, (y[:a],), self.rows)[0] for y in coeffs]
        return Subspace.from_vectors(self.field, self.ambient, vectors)

    def vectors(self):
        """All vectors of the subspace (q^dim of them), in coefficient order."""
        field, k = self.field, self.dim
        for idx in range(field.order ** k):
            coeffs = []
            rem = idx
            for _ in range(k):
                coeffs.append(rem % field.order)
                rem //= field.order
            v = [0] * self.ambient
            for c, row in zip(coeffs, self.rows):
                if c:
                    v = [field.add(a, field.mul(c, b)) for a, b in zip(v, row)]
            yield tuple(v)

    def projective_vectors(self):
        """One representative per 1-dimensional subspace: the coefficient
        vector of the leading basis row is normalized to 1."""
        field, k = self.field, self.dim
        Q = field.order
        for lead in range(k):
            for idx in range(Q ** (k - lead - 1)):
                coeffs = [0] * lead + [1]
                rem = idx
                for _ in range(k - lead - 1):
                    coeffs.append(rem % Q)
                    rem //= Q
                v = [0] * self.ambient
                for c, row in zip(coeffs, self.rows):
                    if c:
                        v = [field.add(a, field.mul(c, b)) for a, b in zip(v, row)]
                yield tuple(v)

    # -- serialization -------------------------------------------------------

    def serialize(self) -> str:
        head = f"({self.ambient}, {self.dim}, {self.field.field_id})"
        lines = [head] + [" ".join(str(v) for v in row) for row in self.rows]
        return "\n".join(lines)

    @classmethod
    def parse(cls, text: str) -> "Subspace":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = lines[0].strip().strip("()")
        ambient_s, k_s, fid = [part.strip() for part in head.split(",")]
        p, d = fid.split("^") if "^" in fid else (fid, "1")
        field = gf(int(p), int(d))
        rows = [tuple(int(v) for v in ln.split()) for ln in lines[1:]]
        if len(rows) != int(k_s):
            raise ValueError("row count does not match header")
        sub = cls.from_vectors(field, int(ambient_s), rows)
        if sub.rows != tuple(rows):
            raise ValueError("serialized basis was not in canonical form")
        return sub


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def pivot_profiles(n: int, k: int):
    return combinations(range(n), k)


def free_positions(profile, n: int):
    """Unconstrained (row, col) slots of an RREF matrix with these pivots,
    in row-major order."""
    pset = set(profile)
    return [(r, c) for r, p_r in enumerate(profile)
            for c in range(p_r + 1, n) if c not in pset]


def profile_block_size(profile, n: int, Q: int) -> int:
    return Q ** len(free_positions(profile, n))


def subspace_from_index(field: GF, n: int, profile, idx: int) -> Subspace:
    """The idx-th subspace (free entries read as a big-endian base-Q number)
    of the given pivot profile."""
    k = len(profile)
    rows = [[0] * n for _ in range(k)]
    for r, c in enumerate(profile):
        rows[r][c] = 1
    pos = free_positions(profile, n)
    for r, c in reversed(pos):
        rows[r][c] = idx % field.order
        idx //= field.order
    return Subspace(field, n, tuple(tuple(r) for r in rows), tuple(profile))


def enumerate_subspaces(field: GF, n: int, k: int):
    """Yield every k-dimensional subspace of F^n exactly once.

    Deterministic order: pivot profiles lexicographically, then the free
    entries lexicographically (earlier row-major positions most
    significant).  The total count is gaussian_binomial(n, k, field.order).
    """
    if k < 0 or k > n:
        return
    for profile in pivot_profiles(n, k):
        block = profile_block_size(profile, n, field.order)
        for idx in range(block):
            yield subspace_from_index(field, n, profile, idx)


def basis_or_raise(field: GF, vectors, ambient: int):
    """RREF basis of vectors, raising DependentBasis unless they are
    linearly independent."""
    rows, pivots = rref(field, vectors)
    if len(rows) != len(list(vectors)):
        raise DependentBasis("vectors are linearly dependent")
    return rows, pivots
