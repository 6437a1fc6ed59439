import random

import numpy as np
import pytest

from rmlkit.errors import InvalidParameter, ResourceBudgetExceeded
from rmlkit.lattice import (DEFAULT_BUDGET, LatticeParams, brute_force_whitney,
                            build_lattice, closed_formula_i2m3,
                            feasibility_estimate, interval_rank_counts,
                            load_lattice, mobius_and_whitney,
                            mobius_zero_sum_check, recursion_base, save_lattice,
                            subspace_lattice_whitney, support_reduced_counts,
                            verify_whitney, whitney_recursion)
from rmlkit.linalg import gaussian_binomial

# Whitney data of L_2(4,3;2), frozen from the Möbius-definition brute force
# (python and numba backends agree; w_1 = -(atom count) is hand-checkable:
# (105 rank-1 + 1470 rank-2 vectors) / 7 = 225 atoms).
W_2432_FIRST = (1, -225, 11680, -89280, 77824)
W_2432_SECOND = (1, 225, 4385, 585, 1)


def test_atom_count_2432():
    L = build_lattice(LatticeParams(2, 4, 3, 2), backend="python")
    assert L.num_atoms() == 225
    assert L.layer_sizes() == W_2432_SECOND


def test_whitney_2432_python():
    L = build_lattice(LatticeParams(2, 4, 3, 2), backend="python")
    wv = mobius_and_whitney(L, backend="python")
    assert wv.first_kind == W_2432_FIRST
    assert wv.second_kind == W_2432_SECOND
    assert wv.check_sanity() == []
    assert sum(wv.first_kind) == 0


def test_whitney_2432_numba_parity():
    Lp = build_lattice(LatticeParams(2, 4, 3, 2), backend="python")
    Ln = build_lattice(LatticeParams(2, 4, 3, 2), backend="numba")
    for d in range(5):
        assert np.array_equal(Lp.layers[d], Ln.layers[d])
    assert mobius_and_whitney(Ln, backend="numba").first_kind == W_2432_FIRST


def test_atoms_of_l2_2_3():
    for q in (2, 3):
        L = build_lattice(LatticeParams(2, 2, 3, q), backend="python")
        assert L.num_atoms() == q ** 3 + 1  # every projective point qualifies
        wv = mobius_and_whitney(L, backend="python")
        assert wv.first_kind == (1, -(q ** 3 + 1), q ** 3)


def test_full_lattice_control_case():
    # i = n: the whole subspace lattice; classical Whitney formula
    L = build_lattice(LatticeParams(3, 3, 2, 2), backend="python")
    wv = mobius_and_whitney(L, backend="python")
    assert wv.first_kind == subspace_lattice_whitney(3, 4)
    assert wv.second_kind == tuple(gaussian_binomial(3, k, 4) for k in range(4))


def test_budget_refusal():
    params = LatticeParams(2, 5, 3, 3)
    with pytest.raises(ResourceBudgetExceeded) as err:
        build_lattice(params)
    assert err.value.estimate == feasibility_estimate(params)
    assert err.value.estimate > DEFAULT_BUDGET


def test_lattice_rank_function_and_params():
    with pytest.raises(InvalidParameter):
        LatticeParams(0, 4, 3, 2)
    with pytest.raises(InvalidParameter):
        LatticeParams(5, 4, 3, 2)


def test_mobius_zero_sum_independent():
    L = build_lattice(LatticeParams(2, 3, 3, 2), backend="python")
    mobius_and_whitney(L, backend="python")
    for d in range(1, 4):
        for idx in range(min(10, L.layers[d].shape[0])):
            assert mobius_zero_sum_check(L, d, idx) == 0


def test_atomisticity_and_semimodularity_sampled():
    L = build_lattice(LatticeParams(2, 3, 3, 2), backend="python")
    rng = random.Random(3)
    atoms = [L.subspace(1, i) for i in range(L.layers[1].shape[0])]
    elements = [L.subspace(d, i) for d in range(4) for i in range(L.layers[d].shape[0])]
    for X in elements:
        below = [a for a in atoms if X.contains(a)]
        join = X.__class__.zero(X.field, X.ambient)
        for a in below:
            join = join.join(a)
        assert join == X or X.dim == 0
    for _ in range(200):
        X, Y = rng.choice(elements), rng.choice(elements)
        J, M = X.join(Y), X.meet(Y)
        in_lattice = L.contains(J)
        assert in_lattice  # joins stay inside (closure)
        jm = (J.dim + M.dim if L.contains(M) else None)
        assert J.dim + max(M.dim, 0) <= X.dim + Y.dim


def test_interval_self_similarity():
    # [0, X] matches the corresponding ideal of the lattice on supp(X) coords
    params = LatticeParams(2, 4, 3, 2)
    L = build_lattice(params, backend="python")
    rng = random.Random(9)
    picks = [(1, rng.randrange(L.layers[1].shape[0])) for _ in range(6)]
    picks += [(2, rng.randrange(L.layers[2].shape[0])) for _ in range(4)]
    for d, idx in picks:
        X = L.subspace(d, idx)
        counts = interval_rank_counts(L, X)
        reduced = support_reduced_counts(params, X)
        assert counts == reduced


def test_closed_formula_values():
    assert closed_formula_i2m3(4, 1, 2) == 15 * 1 * 6 * 4
    # sign of the n in {4,5} family is (-1)^(j-1)
    assert closed_formula_i2m3(4, 1, 3) > 0
    assert closed_formula_i2m3(4, 2, 2) < 0
    # n = 6 needs j-2 >= 0 for the second term to contribute
    lone = closed_formula_i2m3(6, 1, 2)
    assert lone == gaussian_binomial(6, 3, 2) * gaussian_binomial(5, 0, 8) * 6 * 4 == 33480
    assert isinstance(lone, int)
    # two-term value at (n=6, j=2, q=2), frozen from direct evaluation
    assert closed_formula_i2m3(6, 2, 2) == -151005960
    with pytest.raises(InvalidParameter):
        closed_formula_i2m3(7, 1, 2)
    with pytest.raises(InvalidParameter):
        closed_formula_i2m3(4, 0, 2)


def test_recursion_anchor_base_values():
    # the hand-checkable chain: w_1(2,1,3;2) = -1, w_1(2,2,3;2) = -9
    base = recursion_base(2, 3, 2, 1, 2, backend="python")
    assert base == {1: -1, 2: -9}
    assert whitney_recursion(2, 5, 3, 2, 1, base) == -961
    # and the n = 4 case agrees with the frozen brute force
    assert whitney_recursion(2, 4, 3, 2, 1, base) == -225


def test_recursion_extends_beyond_brute_budget():
    # L_2(6,3;2) itself is over the build budget, but the recursion reaches
    # n = 6 from brute-forced bases; the j = 1 value has an independent
    # atom-count oracle: rank-1 vectors 7*63 = 441, rank-2 vectors
    # 7*(4^6 - (3*63 + 1)) = 27342, so (441 + 27342)/7 = 3969 atoms.
    base = recursion_base(2, 3, 2, 1, 2, backend="python")
    assert whitney_recursion(2, 6, 3, 2, 1, base) == -3969
    # the whole chain w_1(2,n,3;2) = -(atom count)
    assert [whitney_recursion(2, n, 3, 2, 1, base) for n in (3, 4, 5, 6)] == \
        [-49, -225, -961, -3969]


def test_recursion_rejects_circular_cases():
    with pytest.raises(InvalidParameter):
        whitney_recursion(2, 4, 3, 2, 2, {1: -1, 2: -9, 3: 0, 4: 0})
    with pytest.raises(InvalidParameter):
        whitney_recursion(2, 5, 3, 2, 1, {1: -1})  # missing base value


def test_verify_whitney_record():
    record = verify_whitney(LatticeParams(2, 4, 3, 2), backend="python")
    assert record.whitney_first_kind == W_2432_FIRST
    assert record.per_j[1]["brute_force"] == -225
    assert record.per_j[1]["recursion"] == -225
    assert record.per_j[1]["closed_formula"] == 360
    assert record.mismatch
    assert any("closed_formula = 360" in d for d in record.discrepancies)
    assert any("recursion matches" in a for a in record.agreements)
    # j = 2 is circular at n = 4 (ij = 4), so no recursion entry
    assert "recursion" not in record.per_j[2]
    data = __import__("json").loads(record.to_json())
    assert data["mismatch"] is True


def test_brute_force_clamps_i():
    # w_j(2,1,3;q): i exceeds n, the lattice saturates at i = n
    wv = brute_force_whitney(2, 1, 3, 2, backend="python")
    assert wv.first_kind == (1, -1)


def test_cache_roundtrip(tmp_path):
    params = LatticeParams(2, 3, 3, 2)
    L = build_lattice(params, backend="python")
    mobius_and_whitney(L, backend="python")
    path = tmp_path / "lat.txt"
    save_lattice(L, str(path))
    back = load_lattice(str(path))
    assert back.layer_sizes() == L.layer_sizes()
    assert back.params == params
    for d in range(4):
        assert np.array_equal(back.layers[d], L.layers[d])
        for idx in range(L.layers[d].shape[0]):
            assert back.mu(d, idx) == L.mu(d, idx)
    wv = mobius_and_whitney(back)
    assert wv.first_kind == mobius_and_whitney(L).first_kind


def test_cache_without_mu(tmp_path):
    params = LatticeParams(2, 2, 3, 2)
    L = build_lattice(params, backend="python")
    path = tmp_path / "nomu.txt"
    save_lattice(L, str(path))
    back = load_lattice(str(path))
    assert back.mu_layers is None
    wv = mobius_and_whitney(back, backend="python")
    assert wv.first_kind == (1, -9, 8)
