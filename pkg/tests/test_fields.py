import random

import pytest

from rmlkit.errors import DependentBasis
from rmlkit.fields import (FieldTower, field_tower, gf, is_irreducible,
                           lowest_irreducible, poly_digits)


def test_f4_defining_relation():
    f4 = gf(2, 2)
    w = 2  # the class of x
    assert f4.modulus == 0b111
    assert f4.mul(w, w) == f4.add(w, 1)  # w^2 = w + 1


def test_inv_of_one_and_zero():
    for field in (gf(2, 4), gf(3, 2), gf(5, 1)):
        assert field.inv(1) == 1
        with pytest.raises(ZeroDivisionError):
            field.inv(0)


def test_f16_multiplicative_group_order():
    f16 = gf(2, 4)
    assert all(f16.pow(a, 15) == 1 for a in range(1, 16))


def test_moduli_are_lowest_lex_irreducible():
    # classic values for p = 2
    assert lowest_irreducible(2, 2) == 0b111
    assert lowest_irreducible(2, 3) == 0b1011
    assert lowest_irreducible(2, 4) == 0b10011
    for p, d in ((2, 6), (3, 4), (5, 2)):
        mod = lowest_irreducible(p, d)
        assert is_irreducible(mod, p, d)
        for cand in range(p ** d, mod):
            assert not is_irreducible(cand, p, d)


def test_field_axioms_exhaustive_small():
    # orders <= 64: every pair for commutativity/inverses, every triple for
    # associativity and distributivity
    for field in (gf(2, 2), gf(3, 1), gf(2, 3), gf(7, 1), gf(2, 4), gf(3, 2)):
        els = list(field.elements())
        for a in els:
            if a:
                assert field.mul(a, field.inv(a)) == 1
            assert field.add(a, field.neg(a)) == 0
            for b in els:
                assert field.mul(a, b) == field.mul(b, a)
                assert field.add(a, b) == field.add(b, a)
        for a in els:
            for b in els:
                for c in els:
                    assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
                    assert field.mul(a, field.add(b, c)) == field.add(
                        field.mul(a, b), field.mul(a, c))


def test_frobenius_basics():
    t = field_tower(2, 2)
    w = 2
    assert t.frobenius(w, 0) == w
    assert t.frobenius(w, 1) == t.big.mul(w, w) == t.big.add(w, 1)

    t34 = field_tower(3, 4)
    rng = random.Random(11)
    for _ in range(100):
        a = rng.randrange(81)
        assert t34.frobenius(a, t34.m) == a
    # frobenius is additive and multiplicative
    for _ in range(200):
        a, b = rng.randrange(81), rng.randrange(81)
        big = t34.big
        assert t34.frobenius(big.add(a, b)) == big.add(t34.frobenius(a), t34.frobenius(b))
        assert t34.frobenius(big.mul(a, b)) == big.mul(t34.frobenius(a), t34.frobenius(b))


def test_rel_norm():
    t = field_tower(2, 4)
    assert t.rel_norm(0) == 0
    assert all(t.rel_norm(d) == 1 for d in range(1, 16))  # q=2: delta^15

    t32 = field_tower(3, 2)
    big = t32.big
    for a in range(9):
        assert t32.rel_norm(a) == big.pow(a, 4)
        assert t32.in_subfield(t32.rel_norm(a))
        for b in range(9):
            assert t32.rel_norm(big.mul(a, b)) == big.mul(t32.rel_norm(a), t32.rel_norm(b))


def test_norm_multiplicative_exhaustive_f81():
    t = field_tower(3, 4)
    big = t.big
    norms = [t.rel_norm(a) for a in range(81)]
    for a in range(81):
        for b in range(81):
            assert norms[big.mul(a, b)] == big.mul(norms[a], norms[b])


def test_embedding_is_ring_hom_exhaustive():
    # non-trivial subfield levels, q <= 64
    for q, m in ((4, 2), (4, 3), (8, 2), (9, 2)):
        t = field_tower(q, m)
        emb = t.embed_table
        assert emb[0] == 0 and emb[1] == 1
        for a in range(q):
            for b in range(q):
                assert emb[t.small.add(a, b)] == t.big.add(emb[a], emb[b])
                assert emb[t.small.mul(a, b)] == t.big.mul(emb[a], emb[b])
        # embedded arithmetic commutes with small-field arithmetic
        assert len(set(emb)) == q


def test_fq_coordinates_roundtrip():
    for q, m in ((2, 4), (3, 3), (4, 2)):
        t = field_tower(q, m)
        assert t.fq_coordinates(t.fq_basis[0]) == (1,) + (0,) * (m - 1)
        assert t.fq_coordinates(0) == (0,) * m
        for a in range(t.big_order):
            coords = t.fq_coordinates(a)
            assert all(c < q for c in coords)
            assert t.from_fq_coordinates(coords) == a


def test_fq_coordinates_custom_basis_and_errors():
    t = field_tower(2, 4)
    basis = (3, 7, 9, 14)
    rows = [t.fq_coordinates(a) for a in basis]
    from rmlkit.linalg import rank
    if rank(t.small, rows) == 4:
        for a in range(16):
            coords = t.fq_coordinates(a, basis)
            assert t.from_fq_coordinates(coords, basis) == a
    with pytest.raises(DependentBasis):
        t.fq_coordinates(5, (1, 2, 3, 8))  # 3 = 1 + 2 over F_2


def test_tower_envelope_rejected():
    with pytest.raises(ValueError, match="2\\^20"):
        FieldTower(2, 21)


def test_tower_json_roundtrip():
    t = field_tower(4, 2)
    text = t.to_json()
    t2 = FieldTower.from_json(text)
    assert (t2.p, t2.h, t2.m) == (t.p, t.h, t.m)
    assert t2.big.modulus == t.big.modulus
    data = __import__("json").loads(text)
    assert poly_digits(t.small.modulus, t.p, t.h + 1) == data["modulus_small"]


def test_schoolbook_vs_table_multiplication():
    # the table path must agree with raw polynomial arithmetic
    for field in (gf(2, 8), gf(3, 4), gf(5, 3)):
        rng = random.Random(field.order)
        for _ in range(500):
            a, b = rng.randrange(field.order), rng.randrange(field.order)
            assert field.mul(a, b) == field._mul_raw(a, b)
