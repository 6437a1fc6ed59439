"""Exact arithmetic in GF(p^d) and in two-level towers F_q inside F_{q^m}.

Field elements are plain Python ints: the element sum(c_i * x^i) with prime
field digits c_i is stored as the integer sum(c_i * p^i).  Every field is
defined by the lexicographically smallest monic irreducible polynomial of
the right degree over F_p, so codes are reproducible across runs and
machines.  Multiplication uses log/antilog tables up to order 2^16 and
schoolbook reduction above that; towers are capped at order 2^20.

A FieldTower couples F_q = F_p[x]/(m_small) with F_{q^m} = F_p[x]/(m_big)
through an explicit embedding table (image of the small generator under a
root of m_small found inside the big field), plus the F_q-coordinate maps
that the linear algebra and rank computations are built on.
"""

from __future__ import annotations

import json

from .errors import DependentBasis

_TABLE_LIMIT = 1 << 16
_TOWER_LIMIT = 1 << 20


# ---------------------------------------------------------------------------
# polynomials over F_p, encoded as base-p integers
# ---------------------------------------------------------------------------

def poly_degree(code: int, p: int) -> int:
    """Degree of the encoded polynomial; -1 for the zero polynomial."""
    if code == 0:
        return -1
    if p == 2:
        return code.bit_length() - 1
    d = -1
    while code:
        code //= p
        d += 1
    return d


def poly_digits(code: int, p: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(code % p)
        code //= p
    return out


def digits_to_code(digits, p: int) -> int:
    code = 0
    for c in reversed(digits):
        code = code * p + c
    return code


def _poly_add(a: int, b: int, p: int) -> int:
    if p == 2:
        return a ^ b
    out, mult = 0, 1
    while a or b:
        out += ((a + b) % p) * mult
        a //= p
        b //= p
        mult *= p
    return out


def _poly_scale(a: int, c: int, p: int) -> int:
    out, mult = 0, 1
    while a:
        out += ((a % p) * c % p) * mult
        a //= p
        mult *= p
    return out


def _poly_mul(a: int, b: int, p: int) -> int:
    if p == 2:
        out = 0
        while b:
            if b & 1:
                out ^= a
            a <<= 1
            b >>= 1
        return out
    out = 0
    shift = 1
    while b:
        out = _poly_add(out, _poly_scale(a, b % p, p) * shift, p)
        b //= p
        shift *= p
    return out


def _poly_mod(a: int, modulus: int, p: int) -> int:
    dm = poly_degree(modulus, p)
    if p == 2:
        da = poly_degree(a, p)
        while da >= dm:
            a ^= modulus << (da - dm)
            da = poly_degree(a, p)
        return a
    lead_inv = pow(poly_digits(modulus, p, dm + 1)[dm], p - 2, p)
    da = poly_degree(a, p)
    while da >= dm:
        lead = poly_digits(a, p, da + 1)[da]
        factor = lead * lead_inv % p
        a = _poly_add(a, _poly_scale(modulus, (p - factor) % p, p) * p ** (da - dm), p)
        da = poly_degree(a, p)
    return a


def is_irreducible(code: int, p: int, d: int) -> bool:
    """Trial division by every monic polynomial of degree 1..d//2."""
    if poly_degree(code, p) != d:
        return False
    if d == 1:
        return True
    for deg in range(1, d // 2 + 1):
        lead = p ** deg
        for tail in range(lead):
            if _poly_mod(code, lead + tail, p) == 0:
                return False
    return True


def lowest_irreducible(p: int, d: int) -> int:
    """Lexicographically smallest monic irreducible of degree d over F_p."""
    lead = p ** d
    for tail in range(lead):
        if is_irreducible(lead + tail, p, d):
            return lead + tail
    raise AssertionError(f"no irreducible of degree {d} over F_{p}")


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def factor_prime_power(q: int) -> tuple[int, int]:
    """Write q = p^h with p prime; raises for non prime powers."""
    fs = _prime_factors(q)
    if len(fs) != 1:
        raise ValueError(f"{q} is not a prime power")
    p = fs[0]
    h = 0
    while q > 1:
        q //= p
        h += 1
    return p, h


# ---------------------------------------------------------------------------
# a single finite field
# ---------------------------------------------------------------------------

class GF:
    """The finite field F_{p^d} on integer codes 0 .. p^d - 1.

    Arithmetic methods take and return codes.  Tables are built eagerly for
    orders up to 2^16; beyond that mul/inv fall back to schoolbook
    polynomial arithmetic (still exact, just slower).
    """

    def __init__(self, p: int, d: int, modulus: int | None = None):
        self.p = p
        self.d = d
        self.order = p ** d
        self.modulus = lowest_irreducible(p, d) if modulus is None else modulus
        if poly_degree(self.modulus, p) != d or not is_irreducible(self.modulus, p, d):
            raise ValueError("modulus must be monic irreducible of matching degree")
        self._exp = None
        self._log = None
        self.generator = None
        if self.order <= _TABLE_LIMIT:
            self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.d})"

    @property
    def field_id(self) -> str:
        return f"{self.p}^{self.d}"

    def _mul_raw(self, a: int, b: int) -> int:
        return _poly_mod(_poly_mul(a, b, self.p), self.modulus, self.p)

    def _element_order_is(self, g: int, factors) -> bool:
        n = self.order - 1
        return all(self.pow_raw(g, n // r) != 1 for r in factors)

    def pow_raw(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self._mul_raw(out, a)
            a = self._mul_raw(a, a)
            e >>= 1
        return out

    def _build_tables(self):
        n = self.order - 1
        factors = _prime_factors(n) if n > 1 else []
        g = 1
        for cand in range(1, self.order):
            if self._element_order_is(cand, factors):
                g = cand
                break
        self.generator = g
        exp = [0] * (2 * n if n else 1)
        log = [0] * self.order
        v = 1
        for i in range(n):
            exp[i] = v
            log[v] = i
            v = self._mul_raw(v, g)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp, self._log = exp, log

    # -- ring operations ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return _poly_add(a, b, self.p)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return _poly_scale(a, self.p - 1, self.p)

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return _poly_add(a, self.neg(b), self.p)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of zero field element")
        if self._exp is not None:
            n = self.order - 1
            return self._exp[n - self._log[a]]
        return self.pow_raw(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("inversion of zero field element")
            return 1 if e == 0 else 0
        n = self.order - 1
        e %= n
        if self._exp is not None:
            return self._exp[self._log[a] * e % n] if n else 1
        return self.pow_raw(a, e)

    def elements(self):
        return range(self.order)

    def units(self):
        return range(1, self.order)

    # -- numpy views used by the fast kernels --------------------------------

    def mul_table(self):
        import numpy as np
        if self.order > 1 << 12:
            raise ValueError("mul_table only built for orders <= 2^12")
        t = np.zeros((self.order, self.order), dtype=np.uint16)
        for a in range(1, self.order):
            for b in range(a, self.order):
                v = self.mul(a, b)
                t[a, b] = v
                t[b, a] = v
        return t

    def add_table(self):
        import numpy as np
        if self.order > 1 << 12:
            raise ValueError("add_table only built for orders <= 2^12")
        t = np.zeros((self.order, self.order), dtype=np.uint16)
        for a in range(self.order):
            for b in range(a, self.order):
                v = self.add(a, b)
                t[a, b] = v
                t[b, a] = v
        return t

    def inv_table(self):
        import numpy as np
        t = np.zeros(self.order, dtype=np.uint16)
        for a in range(1, self.order):
            t[a] = self.inv(a)
        return t


_GF_CACHE: dict[tuple[int, int], GF] = {}


def gf(p: int, d: int) -> GF:
    """Cached field with the default (lowest-lex) modulus."""
    key = (p, d)
    if key not in _GF_CACHE:
        _GF_CACHE[key] = GF(p, d)
    return _GF_CACHE[key]


def gf_order(order: int) -> GF:
    p, d = factor_prime_power(order)
    return gf(p, d)


# ---------------------------------------------------------------------------
# the two-level tower
# ---------------------------------------------------------------------------

class FieldTower:
    """F_q = F_{p^h} sitting inside F_{q^m}, with the relative structure.

    Immutable after construction.  ``small`` and ``big`` are the two GF
    instances; ``embed_table[a]`` realizes a in F_q as an element of
    F_{q^m}.  The default F_q-basis of F_{q^m} is (1, X, ..., X^{m-1})
    where X is the class of x in the big field; its F_q-independence is
    guaranteed because X generates the big field over the prime field.
    """

    def __init__(self, q: int, m: int):
        p, h = factor_prime_power(q)
        if p ** (h * m) > _TOWER_LIMIT:
            raise ValueError(
                f"tower F_{q} in F_{q}^{m} has order {q}^{m} > 2^20; "
                "exhaustive modes are not supported at this size")
        self.p, self.h, self.q, self.m = p, h, q, m
        self.big_order = q ** m
        self.small = gf(p, h)
        self.big = gf(p, h * m)
        self.embed_table = self._build_embedding()
        self._embed_inv = {v: a for a, v in enumerate(self.embed_table)}
        self.fq_basis = tuple(p ** (h * i) for i in range(m))
        self._coord_solver_cache: dict[tuple[int, ...], list[list[int]]] = {}
        self._frob_tables: dict[int, list[int]] = {}
        self._np_coord = None

    def __repr__(self):
        return f"FieldTower(q={self.q}, m={self.m})"

    # -- embedding -----------------------------------------------------------

    def _subfield_elements(self) -> list[int]:
        big = self.big
        if big.order == self.q:
            return list(range(self.q))
        n = big.order - 1
        e = n // (self.q - 1)
        if big._exp is not None:
            g0 = big._exp[big._log[big.generator] * e % n]
        else:
            # find any generator by order test, then power down to the subfield
            factors = _prime_factors(n)
            g = next(c for c in range(2, big.order) if big._element_order_is(c, factors))
            g0 = big.pow_raw(g, e)
        out = {0, 1}
        v = g0
        while v != 1:
            out.add(v)
            v = big.mul(v, g0)
        return sorted(out)

    def _build_embedding(self) -> tuple[int, ...]:
        p, h = self.p, self.h
        if h == 1:
            return tuple(range(self.q))
        # root of the small modulus inside the big field, smallest code wins
        mod_digits = poly_digits(self.small.modulus, p, h + 1)
        root = None
        for cand in self._subfield_elements():
            acc = 0
            for c in reversed(mod_digits):
                acc = self.big.add(self.big.mul(acc, cand), c % p)
            if acc == 0:
                root = cand
                break
        if root is None:
            raise AssertionError("small modulus has no root in the big field")
        table = []
        for a in range(self.q):
            digits = poly_digits(a, p, h)
            acc = 0
            power = 1
            for c in digits:
                if c:
                    acc = self.big.add(acc, self.big.mul(c % p, power))
                power = self.big.mul(power, root)
            table.append(acc)
        return tuple(table)

    def embed(self, a: int) -> int:
        return self.embed_table[a]

    def in_subfield(self, a: int) -> bool:
        return a in self._embed_inv

    def retract(self, a: int) -> int:
        """Inverse of embed; raises for elements outside the F_q copy."""
        try:
            return self._embed_inv[a]
        except KeyError:
            raise ValueError(f"{a} is not in the embedded subfield") from None

    # -- relative operations ---------------------------------------------------

    def frobenius(self, a: int, i: int = 1) -> int:
        """a -> a^(q^i); i is reduced mod m."""
        i %= self.m
        if i == 0 or a == 0:
            return a
        if i not in self._frob_tables:
            if self.big._exp is not None:
                n = self.big_order - 1
                step = pow(self.q, i, n)
                exp, log = self.big._exp, self.big._log
                self._frob_tables[i] = [0] + [exp[log[v] * step % n] for v in range(1, self.big_order)]
            else:
                e = pow(self.q, i, self.big_order - 1)
                return self.big.pow(a, e)
        return self._frob_tables[i][a]

    def rel_norm(self, a: int) -> int:
        """Norm from F_{q^m} onto F_q: a -> a^((q^m-1)/(q-1)).

        Returned as a big-field code; it always lies in the embedded copy
        of F_q.  Use retract() for the small-field code.
        """
        if a == 0:
            return 0
        return self.big.pow(a, (self.big_order - 1) // (self.q - 1))

    # -- F_q-coordinates -------------------------------------------------------

    def _coord_solver(self, basis: tuple[int, ...]):
        """Inverse over F_p of the matrix taking F_q-coordinate digit vectors
        to big-field digit vectors for the given basis."""
        if basis in self._coord_solver_cache:
            return self._coord_solver_cache[basis]
        p, h, m = self.p, self.h, self.m
        hm = h * m
        if h == 1:
            cols = [poly_digits(basis[i], p, hm) for i in range(m)]
        else:
            cols = []
            for i in range(m):
                for t in range(h):
                    v = self.big.mul(self.embed_table[p ** t], basis[i])
                    cols.append(poly_digits(v, p, hm))
        mat = [[cols[j][r] for j in range(hm)] for r in range(hm)]
        inv = _modp_inverse(mat, p)
        if inv is None:
            raise DependentBasis("given elements are not an F_q-basis of the extension")
        self._coord_solver_cache[basis] = inv
        return inv

    def fq_coordinates(self, a: int, basis=None) -> tuple[int, ...]:
        """Coordinates of a over F_q in the given (default: canonical) basis.

        Returns small-field codes c_1..c_m with sum(embed(c_i) * basis_i) = a.
        """
        p, h, m = self.p, self.h, self.m
        if basis is None and h == 1:
            return tuple(poly_digits(a, p, m))
        basis = self.fq_basis if basis is None else tuple(basis)
        if len(basis) != m:
            raise DependentBasis(f"basis must have {m} elements")
        inv = self._coord_solver(basis)
        digits = poly_digits(a, p, h * m)
        z = [sum(inv[r][c] * digits[c] for c in range(h * m)) % p for r in range(h * m)]
        return tuple(digits_to_code(z[i * h:(i + 1) * h], p) for i in range(m))

    def from_fq_coordinates(self, coords, basis=None) -> int:
        basis = self.fq_basis if basis is None else tuple(basis)
        acc = 0
        for c, b in zip(coords, basis):
            acc = self.big.add(acc, self.big.mul(self.embed_table[c], b))
        return acc

    def coord_array(self):
        """numpy table of canonical-basis coordinates, shape (q^m, m), uint16."""
        if self._np_coord is None:
            import numpy as np
            t = np.zeros((self.big_order, self.m), dtype=np.uint16)
            for a in range(self.big_order):
                t[a] = self.fq_coordinates(a)
            self._np_coord = t
        return self._np_coord

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({
            "p": self.p,
            "h": self.h,
            "m": self.m,
            "modulus_small": poly_digits(self.small.modulus, self.p, self.h + 1),
            "modulus_big": poly_digits(self.big.modulus, self.p, self.h * self.m + 1),
        })

    @classmethod
    def from_json(cls, text: str) -> "FieldTower":
        d = json.loads(text)
        tower = field_tower(d["p"] ** d["h"], d["m"])
        if poly_digits(tower.small.modulus, tower.p, tower.h + 1) != d["modulus_small"]:
            raise ValueError("small modulus mismatch (only default moduli are supported)")
        if poly_digits(tower.big.modulus, tower.p, tower.h * tower.m + 1) != d["modulus_big"]:
            raise ValueError("big modulus mismatch (only default moduli are supported)")
        return tower


def _modp_inverse(mat, p):
    """Inverse of a square matrix over F_p, or None if singular."""
    n = len(mat)
    a = [row[:] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(mat)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if a[i][c] % p), None)
        if piv is None:
            return None
        a[r], a[piv] = a[piv], a[r]
        s = pow(a[r][c], p - 2, p)
        a[r] = [v * s % p for v in a[r]]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(v - f * w) % p for v, w in zip(a[i], a[r])]
        r += 1
    return [row[n:] for row in a]


_TOWER_CACHE: dict[tuple[int, int], FieldTower] = {}


def field_tower(q: int, m: int) -> FieldTower:
    key = (q, m)
    if key not in _TOWER_CACHE:
        _TOWER_CACHE[key] = FieldTower(q, m)
    return _TOWER_CACHE[key]
