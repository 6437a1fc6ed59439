import json
from fractions import Fraction

import pytest

from rmlkit.census import (asymptotic_report, count_mrd_exhaustive,
                           count_one_weight, decimal_str, density,
                           m4_density_limit_check, m4_density_printed,
                           mrd_count_formula, mrd_count_m4, mrd_count_m4_orbit_sum,
                           mrd_count_q2, one_weight_count_formula,
                           one_weight_density_limit_check, one_weight_density_printed)
from rmlkit.census import _mrd_count_python
from rmlkit.codes import rank_weight
from rmlkit.errors import InvalidParameter, ResourceBudgetExceeded
from rmlkit.fields import field_tower
from rmlkit.linalg import enumerate_subspaces, gaussian_binomial


def test_formula_values():
    assert mrd_count_q2(4) == 1344
    assert mrd_count_m4(2) == 1344
    assert mrd_count_m4_orbit_sum(2) == 1344
    assert mrd_count_q2(3) == 24
    assert mrd_count_m4(3) == 6368544
    assert mrd_count_m4_orbit_sum(3) == 6368544
    assert mrd_count_formula(2, 4) == 1344
    assert mrd_count_formula(3, 4) == 6368544
    with pytest.raises(InvalidParameter):
        mrd_count_formula(3, 5)


def test_one_weight_formula_values():
    assert one_weight_count_formula(2, 2, 2) == 20160 // (15 * 12) == 112
    assert one_weight_count_formula(3, 1, 2) == 168 // 7 == 24
    # k = 1 always specializes to |GL_m(q)| / (q^m - 1)
    from rmlkit.linalg import gl_order
    for m, q in ((2, 3), (3, 2), (4, 2)):
        assert one_weight_count_formula(m, 1, q) == gl_order(m, q) // (q ** m - 1)


def test_census_python_small():
    assert _mrd_count_python(2, 3) == 24


def test_census_numba_vs_python_vs_formula():
    r_nb = count_mrd_exhaustive(2, 4)
    r_py = count_mrd_exhaustive(2, 4, backend="python")
    assert r_nb.exhaustive_count == r_py.exhaustive_count == 1344
    assert r_nb.formula_value == 1344 and r_nb.match
    assert r_nb.density == Fraction(1344, 70161)


def test_census_thread_determinism():
    r1 = count_mrd_exhaustive(2, 4, threads=1)
    r2 = count_mrd_exhaustive(2, 4, threads=2)
    r3 = count_mrd_exhaustive(2, 4, threads=2, block=1 << 10)
    assert r1.exhaustive_count == r2.exhaustive_count == r3.exhaustive_count == 1344
    assert len(r3.shards) > len(r1.shards)


def test_census_checkpoint_resume(tmp_path):
    ck = str(tmp_path)
    r1 = count_mrd_exhaustive(2, 4, checkpoint_dir=ck, block=1 << 12)
    path = tmp_path / "census_mrd_q2_m4.json"
    assert path.exists()
    data = json.loads(path.read_text())
    # drop some finished shards and resume
    keys = sorted(data["shards"])
    for k in keys[::2]:
        del data["shards"][k]
    path.write_text(json.dumps(data))
    r2 = count_mrd_exhaustive(2, 4, checkpoint_dir=ck, block=1 << 12)
    assert r2.exhaustive_count == r1.exhaustive_count == 1344


def test_census_budget_guard():
    with pytest.raises(ResourceBudgetExceeded):
        count_mrd_exhaustive(3, 4)  # heavy tier needs the flag


def test_census_fingerprint_light():
    r = count_mrd_exhaustive(2, 4, fingerprint=True)
    assert r.extra["idealizer_histogram"] == {"15": 1344}
    r3 = count_mrd_exhaustive(2, 3, fingerprint=True)
    assert r3.extra["idealizer_histogram"] == {"7": 24}


def test_mrd_codes_share_weight_distribution_q2_m4():
    # every MRD code found in the census has the Gabidulin weight data
    tower = field_tower(2, 4)
    reference = None
    found = 0
    for sub in enumerate_subspaces(tower.big, 4, 2):
        dist = {}
        for v in sub.projective_vectors():
            w = rank_weight(tower, v)
            dist[w] = dist.get(w, 0) + 1
        if min(dist) >= 3:
            found += 1
            if reference is None:
                reference = dist
            else:
                assert dist == reference
    # 15 projective words of rank 3 and 2 of rank 4 (225 + 30 + 1 = 16^2)
    assert found == 1344 and reference == {3: 15, 4: 2}


def test_one_weight_census_modes():
    r = count_one_weight(2, 2, 2)
    assert r.exhaustive_count == r.formula_value == 112
    assert r.match and r.elapsed < 1.0
    assert r.density == Fraction(112, 357)
    r_f = count_one_weight(2, 2, 2, mode="formula")
    assert r_f.exhaustive_count is None and r_f.formula_value == 112
    r31 = count_one_weight(3, 1, 2)
    assert r31.exhaustive_count == r31.formula_value == 24


def test_one_weight_codes_all_share_distribution():
    # every censused [4, 2] one-weight code at q=2, m=2 has the same
    # rank-weight distribution (all 15 nonzero words of rank 2)
    tower = field_tower(2, 2)
    count = 0
    for sub in enumerate_subspaces(tower.big, 4, 2):
        dists = [rank_weight(tower, v) for v in sub.projective_vectors()]
        if all(w == 2 for w in dists):
            count += 1
    assert count == 112


def test_density_three_ways():
    d = density(4, 4, 2, 3, 2)
    target = Fraction(1344, 70161)
    assert d.density == target
    assert d.extra["printed_rational_function"]["matches"]
    assert m4_density_printed(2) == target
    assert Fraction(mrd_count_m4(2), gaussian_binomial(4, 2, 16)) == target
    # the printed numerator/denominator reduce to the same rational
    assert Fraction(5140800, 268365825) == target


def test_density_formula_only_path():
    d = density(4, 4, 2, 3, 3, mode="formula")
    assert d.formula_value == 6368544
    assert d.density == Fraction(6368544, gaussian_binomial(4, 2, 81))
    assert d.extra["printed_rational_function"]["matches"]


def test_density_one_weight_family():
    d = density(2, 4, 2, 2, 2)
    assert d.extra["printed_expression_matches"]
    assert d.density == Fraction(112, 357)
    with pytest.raises(InvalidParameter):
        density(3, 5, 2, 2, 2)


def test_limit_checks():
    chk = m4_density_limit_check()
    assert chk["degree_num"] == chk["degree_den"] == 28
    assert chk["limit"] == Fraction(1, 2) and chk["limit_is_half"]
    for m, k in ((2, 2), (2, 3), (3, 2), (4, 2)):
        res = one_weight_density_limit_check(m, k)
        assert res["limit"] == 1 and res["limit_is_one"]


def test_one_weight_density_values():
    assert one_weight_density_printed(2, 2, 2) == Fraction(112, 357)


def test_decimal_rendering():
    assert decimal_str(Fraction(1, 2)) == "0.500000000000"
    assert decimal_str(Fraction(0)) == "0"
    assert decimal_str(Fraction(1344, 70161)).startswith("0.0191559413")
    assert decimal_str(Fraction(-3, 7)).startswith("-0.4285714")
    assert decimal_str(Fraction(1, 10 ** 15)) == "1.00000000000e-15"


def test_asymptotic_reports():
    rep = asymptotic_report("q2_mrd")
    assert rep["bounded_by_envelope"]
    assert [r["m"] for r in rep["rows"]] == [3, 4, 5, 6, 7, 8]
    rep4 = asymptotic_report("m4_mrd")
    assert rep4["gap_monotone_decreasing"]
    assert rep4["limit_check"]["limit_is_half"]
    dens = [Fraction(*r["density_exact"]) for r in rep4["rows"]]
    assert all(a < b for a, b in zip(dens, dens[1:]))  # increasing toward 1/2
    assert all(d < Fraction(1, 2) for d in dens)
    ow = asymptotic_report("one_weight")
    assert all(ow["limit_checks"].values())
    with pytest.raises(InvalidParameter):
        asymptotic_report("unknown")


def test_census_result_json():
    r = count_one_weight(2, 2, 2)
    data = json.loads(r.to_json())
    assert data["match"] is True
    assert data["density"]["numerator"] == 16  # reduced form of 112/357
    assert data["params"] == {"q": 2, "m": 2, "n": 4, "k": 2, "d": 2}
