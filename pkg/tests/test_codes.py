import json
import random

import pytest

from rmlkit.codes import (PolyCode, RankMetricCode, gabidulin,
                          linear_automorphism_count, one_weight_code,
                          rank_weight, support_of_vectors, twisted_gabidulin)
from rmlkit.errors import (InvalidDelta, InvalidParameter, NotPrimitiveElement,
                           ResourceBudgetExceeded, UnsupportedShape)
from rmlkit.fields import field_tower
from rmlkit.qpoly import QPolynomial


def naive_rank_weight(tower, v):
    """Independent oracle: size of the F_q-span of the entries."""
    q = tower.q
    span = {0}
    for e in v:
        if e in span:
            continue
        add = set()
        for s in span:
            for c in range(1, q):
                add.add(tower.big.add(s, tower.big.mul(tower.embed(c), e)))
        span |= add
        # closure: repeat until stable (span is small)
        changed = True
        while changed:
            changed = False
            for a in list(span):
                for b in list(span):
                    s = tower.big.add(a, b)
                    if s not in span:
                        span.add(s)
                        changed = True
    r = 0
    while q ** r < len(span):
        r += 1
    assert q ** r == len(span)
    return r


def test_rank_weight_examples():
    t = field_tower(2, 3)
    assert rank_weight(t, (0, 0, 0, 0)) == 0
    assert rank_weight(t, (1, 0, 0, 0)) == 1
    alpha = 2
    assert rank_weight(t, (1, alpha, t.big.mul(alpha, alpha))) == 3


def test_rank_weight_matches_naive_oracle():
    t = field_tower(3, 2)
    rng = random.Random(3)
    for _ in range(50):
        v = tuple(rng.randrange(9) for _ in range(3))
        assert rank_weight(t, v) == naive_rank_weight(t, v)


def test_rank_weight_scalar_invariance_exhaustive():
    t = field_tower(2, 3)
    for code in range(8 ** 4):
        v = ((code >> 0) & 7, (code >> 3) & 7, (code >> 6) & 7, (code >> 9) & 7)
        w = rank_weight(t, v)
        for lam in range(1, 8):
            lv = tuple(t.big.mul(lam, e) for e in v)
            assert rank_weight(t, lv) == w


def test_min_distance_examples():
    t = field_tower(2, 4)
    # weight-1 codeword present
    c = RankMetricCode.from_generators(t, [(1, 0, 0, 0), (0, 1, 0, 0)])
    assert c.min_distance() == 1
    with pytest.raises(InvalidParameter):
        RankMetricCode.from_generators(t, [(0, 0, 0, 0)])


def test_gabidulin_2_1_4_distance_via_full_enumeration():
    t = field_tower(2, 4)
    code = gabidulin(t, 2, 1).to_vector_code()
    assert code.min_distance() == 3
    # independent oracle: all 255 nonzero codewords, naive span rank
    G = code.generator_matrix
    dmin = 99
    count = 0
    for a in range(16):
        for b in range(16):
            if a == 0 and b == 0:
                continue
            w = tuple(t.big.add(t.big.mul(a, x), t.big.mul(b, y)) for x, y in zip(*G))
            dmin = min(dmin, naive_rank_weight(t, w))
            count += 1
    assert count == 255 and dmin == 3
    assert code.is_mrd()


def test_is_mrd_cases():
    t = field_tower(2, 4)
    good = PolyCode.from_polys(t, [QPolynomial.x(t), QPolynomial.monomial(t, 1, 1)])
    assert good.is_mrd()
    bad = PolyCode.from_polys(t, [QPolynomial.x(t), QPolynomial.monomial(t, 1, 2)])
    assert not bad.is_mrd()
    vec = RankMetricCode.from_generators(t, [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0)])
    with pytest.raises(UnsupportedShape):
        vec.is_mrd()


def test_gabidulin_parameters():
    t = field_tower(2, 4)
    assert gabidulin(t, 1, 1).to_vector_code().min_distance() == 4
    assert gabidulin(t, 2, 3).k == 2  # gcd(3, 4) = 1 accepted
    with pytest.raises(InvalidParameter):
        gabidulin(t, 2, 2)
    with pytest.raises(InvalidParameter):
        gabidulin(t, 5, 1)


def test_twisted_gabidulin_norm_conditions():
    t2 = field_tower(2, 4)
    for d in range(1, 16):
        with pytest.raises(InvalidDelta):
            twisted_gabidulin(t2, 2, 1, d)
    # delta = 0 degenerates to a Gabidulin-equivalent code and is allowed
    assert twisted_gabidulin(t2, 2, 1, 0).is_mrd()

    t3 = field_tower(3, 4)
    accepted = rejected = 0
    for d in range(1, 81):
        try:
            code = twisted_gabidulin(t3, 2, 1, d)
            accepted += 1
            assert code.k == 2
        except InvalidDelta:
            rejected += 1
    assert accepted == 40 and rejected == 40

    # cz variant only at (k, s, m) = (2, 1, 4)
    cz_delta = next(d for d in range(1, 81) if t3.rel_norm(d) != 1)
    assert twisted_gabidulin(t3, 2, 1, cz_delta, variant="cz").is_mrd()
    with pytest.raises(InvalidParameter):
        twisted_gabidulin(field_tower(2, 3), 2, 1, 1, variant="cz")


def test_one_weight_code():
    t = field_tower(2, 2)
    code = one_weight_code(t, 2, 2)
    assert (code.n, code.k) == (4, 2)
    assert code.weight_distribution() == {2: 15}
    with pytest.raises(NotPrimitiveElement):
        one_weight_code(t, 2, 1)  # 1 does not generate F_4 over F_2
    # k = 1 row form
    c1 = one_weight_code(t, 1, 2)
    assert c1.generator_matrix == ((1, 2),)


def test_one_weight_generators_in_one_class():
    # the explicit block change-of-basis takes the alpha form to the beta form
    t = field_tower(2, 2)
    k = 2
    for beta in (3,):  # the other generator of F_4
        A = [[0] * (2 * k) for _ in range(2 * k)]
        for i in range(t.m):
            coords = t.fq_coordinates(t.big.pow(beta, i))
            for j in range(t.m):
                for r in range(k):
                    A[j * k + r][i * k + r] = coords[j]
        ca = one_weight_code(t, k, 2)
        cb = one_weight_code(t, k, beta)
        assert ca.compose_matrix(A).space == cb.space


def test_autlin_gabidulin_213():
    t = field_tower(2, 3)
    assert linear_automorphism_count(gabidulin(t, 2, 1)) == 7


def test_autlin_one_weight_222():
    t = field_tower(2, 2)
    assert linear_automorphism_count(one_weight_code(t, 2, 2)) == 180


def test_autlin_monomial_twisted_q3():
    t = field_tower(3, 4)
    delta = next(d for d in range(1, 81) if t.rel_norm(d) != 1)
    code = twisted_gabidulin(t, 2, 1, delta, variant="cz")
    assert linear_automorphism_count(code, mode="monomial") == 8


def test_autlin_budget_guard():
    t = field_tower(3, 4)
    code = gabidulin(t, 2, 1)
    with pytest.raises(ResourceBudgetExceeded):
        linear_automorphism_count(code, budget=10 ** 4)


def test_autlin_monomial_gabidulin_full_group():
    # the monomial sweep sees the whole idealizer {a x} of a Gabidulin code
    t = field_tower(2, 4)
    assert linear_automorphism_count(gabidulin(t, 2, 1), mode="monomial") == 15


def test_support():
    t = field_tower(2, 3)
    e1 = (1, 0, 0, 0)
    s = support_of_vectors(t, [e1], 4)
    assert s.rows == ((1, 0, 0, 0),)
    # supp of a single word has dimension = rank weight, exhaustively
    for code in range(8 ** 4):
        v = ((code >> 0) & 7, (code >> 3) & 7, (code >> 6) & 7, (code >> 9) & 7)
        assert support_of_vectors(t, [v], 4).dim == rank_weight(t, v)


def test_support_additive_on_joins():
    t = field_tower(2, 3)
    rng = random.Random(9)
    for _ in range(100):
        u = tuple(rng.randrange(8) for _ in range(4))
        v = tuple(rng.randrange(8) for _ in range(4))
        if not any(u) or not any(v):
            continue
        su = support_of_vectors(t, [u], 4)
        sv = support_of_vectors(t, [v], 4)
        both = support_of_vectors(t, [u, v], 4)
        assert both == su.join(sv)


def test_singleton_bound_sampled():
    t = field_tower(2, 4)
    rng = random.Random(15)
    for _ in range(100):
        k = rng.randrange(1, 4)
        rows = [[rng.randrange(16) for _ in range(4)] for _ in range(k)]
        try:
            code = RankMetricCode.from_generators(t, rows)
        except InvalidParameter:
            continue
        assert code.min_distance() <= code.n - code.k + 1


def test_distance_invariant_under_right_composition():
    t = field_tower(2, 4)
    rng = random.Random(21)
    code = gabidulin(t, 2, 1).to_vector_code()
    from rmlkit.linalg import rank_bits
    done = 0
    while done < 20:
        A = [[rng.randrange(2) for _ in range(4)] for _ in range(4)]
        if rank_bits([sum(b << j for j, b in enumerate(r)) for r in A]) != 4:
            continue
        moved = code.compose_matrix(A)
        assert moved.min_distance() == code.min_distance()
        assert moved.weight_distribution() == code.weight_distribution()
        done += 1


def test_conversion_fidelity_poly_vs_vector():
    # weights of the evaluated code match the polynomial ranks of its words
    for q, m in ((2, 2), (2, 3), (2, 4)):
        t = field_tower(q, m)
        codes = [gabidulin(t, 1, 1), gabidulin(t, 2, 1)] if m > 1 else []
        for code in codes:
            vec = code.to_vector_code()
            poly_ranks = sorted(f.rank() for f in code.words_projective())
            vec_ranks = sorted(rank_weight(t, w) for w in vec.projective_codewords())
            assert poly_ranks == vec_ranks


def test_code_json_and_csv():
    t = field_tower(2, 2)
    code = one_weight_code(t, 2, 2)
    back = RankMetricCode.from_json(code.to_json())
    assert back.space == code.space
    data = json.loads(code.to_json())
    assert data["n"] == 4 and data["k"] == 2
    csv_text = code.weight_csv()
    assert csv_text.splitlines()[0] == "rank,count"
    assert "2,15" in csv_text
