"""Exhaustive and formula-based censuses of MRD and one-weight codes,
exact densities, and asymptotic envelope reports.

Every count is an exact integer and every density an exact Fraction
(rendered to 12 significant decimal digits for reports).  The exhaustive
MRD census enumerates 2-dimensional subspaces of F_{q^m}^m in RREF order,
sharded by pivot profile and free-entry block; shards are independent,
checkpointable, and merge by plain integer addition, so results cannot
depend on thread count or completion order.

The formula evaluators transcribe the published closed forms (orbit sizes
from the idealizer orders, the totient count of Gabidulin classes, and
the twisted-family count for m = 4); the census and the formulas are kept
as separate routes and compared, never merged.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .codes import rank_weight
from .errors import InvalidParameter, ResourceBudgetExceeded
from .fields import field_tower
from .lattice import _tables  # shared table cache
from .linalg import (enumerate_subspaces, euler_phi, free_positions,
                     gaussian_binomial, gl_order, pivot_profiles,
                     profile_block_size)

LIGHT_LIMIT = 2 * 10 ** 6      # subspaces testable without the heavy flag
DEFAULT_BLOCK = 1 << 21        # candidates per checkpoint shard


def decimal_str(x: Fraction, digits: int = 12) -> str:
    """Exact rational rendered to the given number of significant digits."""
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    exp = 0
    while x >= 10:
        x /= 10
        exp += 1
    while x < 1:
        x *= 10
        exp -= 1
    scaled = int(x * 10 ** (digits - 1) + Fraction(1, 2))
    mant = str(scaled)
    if len(mant) > digits:  # rounding overflowed to the next power
        mant = mant[:digits]
        exp += 1
    out = mant[0] + "." + mant[1:]
    return f"{sign}{out}e{exp:+03d}" if not -4 < exp < digits else (
        sign + (mant[:exp + 1] + ("." + mant[exp + 1:] if exp + 1 < len(mant) else ""))
        if exp >= 0 else sign + "0." + "0" * (-exp - 1) + mant)


@dataclass
class CensusResult:
    kind: str
    q: int
    m: int
    n: int
    k: int
    d: int
    exhaustive_count: int | None = None
    formula_value: int | None = None
    density: Fraction | None = None
    method: str = ""
    elapsed: float = 0.0
    shards: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def match(self) -> bool | None:
        if self.exhaustive_count is None or self.formula_value is None:
            return None
        return self.exhaustive_count == self.formula_value

    @property
    def count(self) -> int:
        c = self.exhaustive_count if self.exhaustive_count is not None else self.formula_value
        if c is None:
            raise ValueError("no count available")
        return c

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": {"q": self.q, "m": self.m, "n": self.n, "k": self.k, "d": self.d},
            "exhaustive_count": self.exhaustive_count,
            "formula_value": self.formula_value,
            "match": self.match,
            "density": None if self.density is None else {
                "numerator": self.density.numerator,
                "denominator": self.density.denominator,
                "decimal": decimal_str(self.density),
            },
            "method": self.method,
            "elapsed_s": round(self.elapsed, 3),
            "shards": self.shards,
            "extra": self.extra,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


# ---------------------------------------------------------------------------
# closed-form counts
# ---------------------------------------------------------------------------

def mrd_count_q2(m: int) -> int:
    """Number of 2-dimensional MRD codes in F_{2^m}^m: (phi(m)/2) * |GL_m(2)| / (2^m - 1)."""
    if m < 2:
        raise InvalidParameter("need m >= 2")
    value = Fraction(euler_phi(m), 2) * gl_order(m, 2) / (2 ** m - 1)
    assert value.denominator == 1
    return int(value)


def mrd_count_m4(q: int) -> int:
    """Number of 2-dimensional MRD codes in F_{q^4}^4:
    (1/2) q^7 (q^3-1)(q^2-1)(q-1)(q^3-q^2-q-1)."""
    value = Fraction(q ** 7 * (q ** 3 - 1) * (q ** 2 - 1) * (q - 1)
                     * (q ** 3 - q ** 2 - q - 1), 2)
    assert value.denominator == 1
    return int(value)


def mrd_count_m4_orbit_sum(q: int) -> int:
    """The same count as the explicit orbit-stabilizer sum:
    |GL_4(q)|/(q^4-1) + (q(q-1)/2 - 1) |GL_4(q)|/(q^2-1)."""
    g = gl_order(4, q)
    classes_twisted = Fraction(q * (q - 1), 2) - 1
    value = Fraction(g, q ** 4 - 1) + classes_twisted * Fraction(g, q ** 2 - 1)
    assert value.denominator == 1
    return int(value)


def mrd_count_formula(q: int, m: int) -> int:
    """Dispatch to whichever closed form covers (q, m); both agree at (2, 4)."""
    if q == 2 and 2 <= m <= 8:
        return mrd_count_q2(m)
    if m == 4 and 2 <= q <= 16:
        return mrd_count_m4(q)
    raise InvalidParameter(f"no closed form for q={q}, m={m}")


def one_weight_count_formula(m: int, k: int, q: int) -> int:
    """Number of [mk, k] codes with every nonzero word of rank m:
    |GL_mk(q)| / prod_{i<k} (q^mk - q^mi)."""
    denom = 1
    for i in range(k):
        denom *= q ** (m * k) - q ** (m * i)
    value = Fraction(gl_order(m * k, q), denom)
    assert value.denominator == 1
    return int(value)


# ---------------------------------------------------------------------------
# exhaustive MRD census
# ---------------------------------------------------------------------------

def _mrd_count_python(q: int, m: int) -> int:
    tower = field_tower(q, m)
    target = m - 1
    found = 0
    for sub in enumerate_subspaces(tower.big, m, 2):
        ok = True
        for v in sub.projective_vectors():
            if rank_weight(tower, v) < target:
                ok = False
                break
        if ok:
            found += 1
    return found


def _census_shards(q: int, m: int, block: int):
    Q = q ** m
    shards = []
    for profile in pivot_profiles(m, 2):
        size = profile_block_size(profile, m, Q)
        start = 0
        while start < size:
            count = min(block, size - start)
            shards.append((profile, start, count))
            start += count
    return shards


def _checkpoint_file(checkpoint_dir: str, q: int, m: int) -> str:
    return os.path.join(checkpoint_dir, f"census_mrd_q{q}_m{m}.json")


def _load_checkpoint(path: str, q: int, m: int) -> dict:
    if not os.path.exists(path):
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if data.get("params") != {"q": q, "m": m, "k": 2}:
        raise ValueError(f"checkpoint {path} belongs to different parameters")
    return {k: int(v) for k, v in data["shards"].items()}


def _write_checkpoint(path: str, q: int, m: int, done: dict):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"params": {"q": q, "m": m, "k": 2}, "shards": done}, fh)
    os.replace(tmp, path)


def count_mrd_exhaustive(q: int, m: int, k: int = 2, heavy: bool = False,
                         threads: int = 1, checkpoint_dir: str | None = None,
                         backend: str = "auto", block: int = DEFAULT_BLOCK,
                         fingerprint: bool = False) -> CensusResult:
    """Exact count of k=2 MRD codes in F_{q^m}^m by sharded enumeration.

    Censuses beyond LIGHT_LIMIT subspaces require heavy=True.  Shards are
    (pivot profile, block) ranges; with a checkpoint directory, finished
    shards are persisted and skipped on resume.  fingerprint=True also
    tallies, per MRD code, how many monomial substitutions a x^(q^i) fix
    it (the idealizer-size histogram of the census).
    """
    if k != 2:
        raise InvalidParameter("the exhaustive census is implemented for k = 2")
    t0 = time.time()
    Q = q ** m
    total_subspaces = gaussian_binomial(m, 2, Q)
    if total_subspaces > LIGHT_LIMIT and not heavy:
        raise ResourceBudgetExceeded(
            f"{total_subspaces} subspaces exceed the light tier; pass heavy=True",
            estimate=total_subspaces)
    if backend == "auto":
        backend = "numba" if _census_kernels_usable(q, m) else "python"
    result = CensusResult(kind="mrd", q=q, m=m, n=m, k=2, d=m - 1,
                          method=f"exhaustive/{backend}")
    if backend == "python":
        if fingerprint:
            raise InvalidParameter("fingerprint needs the numba backend")
        result.exhaustive_count = _mrd_count_python(q, m)
        result.shards = [{"shard": "all", "count": total_subspaces}]
    else:
        found, shard_trace, hist = _mrd_count_numba(
            q, m, threads=threads, checkpoint_dir=checkpoint_dir, block=block,
            fingerprint=fingerprint)
        result.exhaustive_count = found
        result.shards = shard_trace
        if fingerprint:
            result.extra["idealizer_histogram"] = {str(k_): v for k_, v in hist.items()}
    try:
        result.formula_value = mrd_count_formula(q, m)
    except InvalidParameter:
        pass
    result.density = Fraction(result.exhaustive_count, total_subspaces)
    result.elapsed = time.time() - t0
    return result


def _census_kernels_usable(q: int, m: int) -> bool:
    if q ** m > 256 or q > 256:
        return False
    try:
        from . import _kernels  # noqa: F401
        return True
    except Exception:
        return False


def _mrd_count_numba(q: int, m: int, threads: int, checkpoint_dir, block: int,
                     fingerprint: bool):
    from . import _kernels
    tower = field_tower(q, m)
    t = _tables(tower)
    Q = q ** m
    target = m - 1
    shards = _census_shards(q, m, block)
    ck_path = None
    done: dict[str, int] = {}
    if checkpoint_dir:
        os.makedirs(checkpoint_dir, exist_ok=True)
        ck_path = _checkpoint_file(checkpoint_dir, q, m)
        done = _load_checkpoint(ck_path, q, m)
    hist_total = np.zeros(Q + 1, dtype=np.int64)
    fq_basis = np.array(tower.fq_basis, dtype=np.uint16)

    def shard_id(profile, start):
        return f"p{'_'.join(map(str, profile))}-s{start}"

    def run_shard(shard):
        profile, start, count = shard
        pivots = np.array(profile, dtype=np.int64)
        free_rc = np.array(free_positions(profile, m), dtype=np.int64).reshape(-1, 2)
        if fingerprint:
            hist = np.zeros(Q + 1, dtype=np.int64)
            found = _kernels.census_mrd_fingerprint_block(
                pivots, free_rc, start, count, m, m, Q, q, target,
                t["b_add"], t["b_sub"], t["b_mul"], t["b_inv"], t["coord"],
                t["s_sub"], t["s_mul"], t["s_inv"], fq_basis, hist)
            return int(found), hist
        found = _kernels.census_mrd_block(
            pivots, free_rc, start, count, m, m, Q, target,
            t["b_add"], t["b_sub"], t["b_mul"], t["b_inv"], t["coord"],
            t["s_sub"], t["s_mul"], t["s_inv"])
        return int(found), None

    pending = [s for s in shards if shard_id(s[0], s[1]) not in done]
    trace = []
    if threads <= 1:
        for shard in pending:
            found, hist = run_shard(shard)
            done[shard_id(shard[0], shard[1])] = found
            if hist is not None:
                hist_total += hist
            if ck_path:
                _write_checkpoint(ck_path, q, m, done)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {pool.submit(run_shard, s): s for s in pending}
            for fut, shard in futures.items():
                found, hist = fut.result()
                done[shard_id(shard[0], shard[1])] = found
                if hist is not None:
                    hist_total += hist
                if ck_path:
                    _write_checkpoint(ck_path, q, m, done)
    # deterministic merge in shard-list order
    total = 0
    for shard in shards:
        sid = shard_id(shard[0], shard[1])
        total += done[sid]
        trace.append({"shard": sid, "candidates": shard[2], "found": done[sid]})
    hist = {int(size): int(cnt) for size, cnt in enumerate(hist_total) if cnt}
    return total, trace, hist


# ---------------------------------------------------------------------------
# one-weight census
# ---------------------------------------------------------------------------

def count_one_weight(m: int, k: int, q: int, mode: str = "both",
                     budget: int = 10 ** 6) -> CensusResult:
    """Count of [mk, k] codes over F_{q^m} whose nonzero words all have
    rank weight exactly m, by formula and/or exhaustive enumeration."""
    t0 = time.time()
    n = m * k
    Q = q ** m
    result = CensusResult(kind="one_weight", q=q, m=m, n=n, k=k, d=m, method=mode)
    if mode in ("formula", "both"):
        result.formula_value = one_weight_count_formula(m, k, q)
    if mode in ("exhaustive", "both"):
        total = gaussian_binomial(n, k, Q)
        if total > budget:
            raise ResourceBudgetExceeded(
                f"{total} subspaces exceed the one-weight budget {budget}",
                estimate=total)
        tower = field_tower(q, m)
        found = 0
        for sub in enumerate_subspaces(tower.big, n, k):
            if all(rank_weight(tower, v) == m for v in sub.projective_vectors()):
                found += 1
        result.exhaustive_count = found
    result.density = Fraction(result.count, gaussian_binomial(n, k, Q))
    result.elapsed = time.time() - t0
    return result


# ---------------------------------------------------------------------------
# densities: printed rational functions and symbolic degree checks
# ---------------------------------------------------------------------------

def m4_density_printed(q: int) -> Fraction:
    """The printed density of 2-dimensional MRD codes in F_{q^4}^4."""
    num = (q ** 7 * (q ** 3 - 1) * (q ** 2 - 1) * (q - 1) * (q ** 3 - q ** 2 - q - 1)
           * (q ** 8 - 1) * (q ** 4 - 1))
    den = (q ** 16 - 1) * (q ** 12 - 1)
    return Fraction(num, 2 * den)


def one_weight_density_printed(m: int, k: int, q: int) -> Fraction:
    """|GL_mk(q)| / (prod_{i<k}(q^mk - q^mi) * [mk over k]_{q^m})."""
    denom = gaussian_binomial(m * k, k, q ** m)
    for i in range(k):
        denom *= q ** (m * k) - q ** (m * i)
    return Fraction(gl_order(m * k, q), denom)


def density(m: int, n: int, k: int, d: int, q: int, mode: str = "auto",
            heavy: bool = False, threads: int = 1) -> CensusResult:
    """Exact density of [n, k, >= d] codes for the covered families.

    Covered: the square MRD family (n = m, k = 2, d = m-1) by census and/or
    formula, and the one-weight family (n = mk, d = m).  The result's
    density is count / [n over k]_{q^m}, always an exact rational.
    """
    if n == m and k == 2 and d == m - 1:
        if mode in ("exhaustive", "auto"):
            try:
                result = count_mrd_exhaustive(q, m, heavy=heavy, threads=threads)
            except ResourceBudgetExceeded:
                if mode == "exhaustive":
                    raise
                result = None
        else:
            result = None
        if result is None:
            result = CensusResult(kind="mrd", q=q, m=m, n=n, k=k, d=d, method="formula")
            result.formula_value = mrd_count_formula(q, m)
            result.density = Fraction(result.count, gaussian_binomial(n, k, q ** m))
        if m == 4:
            result.extra["printed_rational_function"] = {
                "numerator": m4_density_printed(q).numerator,
                "denominator": m4_density_printed(q).denominator,
                "matches": m4_density_printed(q) == result.density,
            }
        return result
    if n == m * k and d == m:
        result = count_one_weight(m, k, q, mode="both" if mode in ("auto", "exhaustive")
                                  and gaussian_binomial(n, k, q ** m) <= 10 ** 6 else "formula")
        printed = one_weight_density_printed(m, k, q)
        result.extra["printed_expression_matches"] = printed == result.density
        return result
    raise InvalidParameter(f"no covered family for (m={m}, n={n}, k={k}, d={d})")


# -- integer polynomials in q, for the degree/leading-coefficient checks ------

def _pmul(a: dict, b: dict) -> dict:
    out: dict[int, int] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _pprod(factors) -> dict:
    out = {0: 1}
    for f in factors:
        out = _pmul(out, f)
    return out


def _binomial_term(e: int) -> dict:
    """q^e - 1 as a sparse polynomial."""
    return {e: 1, 0: -1}


def _deg_lead(p: dict):
    e = max(p)
    return e, p[e]


def m4_density_limit_check() -> dict:
    """Degrees and leading coefficients of the printed m=4 density: equal
    degree 28 on both sides and leading ratio 1/2, so the q -> infinity
    limit is 1/2."""
    num = _pprod([{7: 1}, _binomial_term(3), _binomial_term(2), _binomial_term(1),
                  {3: 1, 2: -1, 1: -1, 0: -1}, _binomial_term(8), _binomial_term(4)])
    den = _pprod([_binomial_term(16), _binomial_term(12)])
    dn, ln = _deg_lead(num)
    dd, ld = _deg_lead(den)
    return {"degree_num": dn, "degree_den": dd,
            "limit": Fraction(ln, 2 * ld),
            "limit_is_half": dn == dd and Fraction(ln, 2 * ld) == Fraction(1, 2)}


def one_weight_density_limit_check(m: int, k: int) -> dict:
    """Cross-multiplied degree/leading comparison showing the one-weight
    density tends to 1 as q -> infinity."""
    n = m * k
    gl = _pprod([{n: 1, j: -1} for j in range(n)])        # |GL_n(q)| = prod (q^n - q^j)
    stab = _pprod([{n: 1, m * i: -1} for i in range(k)])
    binom_num = _pprod([_binomial_term(m * (n - i)) for i in range(k)])
    binom_den = _pprod([_binomial_term(m * (i + 1)) for i in range(k)])
    lhs = _pmul(gl, binom_den)
    rhs = _pmul(stab, binom_num)
    dl, ll = _deg_lead(lhs)
    dr, lr = _deg_lead(rhs)
    return {"degree_lhs": dl, "degree_rhs": dr,
            "limit": Fraction(ll, lr),
            "limit_is_one": dl == dr and ll == lr}


# ---------------------------------------------------------------------------
# asymptotic envelope reports
# ---------------------------------------------------------------------------

PRIME_POWERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def asymptotic_report(family: str, limit: int | None = None) -> dict:
    """Exact density tables with the claimed asymptotic envelope.

    q2_mrd: densities for m = 3..8 with the ratio against m 2^(3m - m^2);
    m4_mrd: densities for prime powers q <= 16 with the gap to 1/2;
    one_weight: densities for small (m, k) grids with the gap to 1.
    """
    if family == "q2_mrd":
        rows = []
        prev_ratio = None
        monotone = True
        for m in range(3, (limit or 8) + 1):
            count = mrd_count_q2(m)
            dens = Fraction(count, gaussian_binomial(m, 2, 2 ** m))
            envelope = Fraction(m * 2 ** (3 * m), 2 ** (m * m))
            ratio = dens / envelope
            if prev_ratio is not None and ratio > prev_ratio:
                monotone = False
            prev_ratio = ratio
            rows.append({"m": m, "count": count,
                         "density": decimal_str(dens),
                         "density_exact": [dens.numerator, dens.denominator],
                         "envelope_ratio": decimal_str(ratio),
                         "envelope_ratio_exact": [ratio.numerator, ratio.denominator]})
        bounded = all(Fraction(*r["envelope_ratio_exact"]) <= 1 for r in rows)
        return {"family": "q2_mrd", "rows": rows,
                "envelope": "m * 2^(3m - m^2)",
                "ratio_monotone_nonincreasing": monotone,
                "bounded_by_envelope": bounded}
    if family == "m4_mrd":
        rows = []
        prev_gap = None
        monotone = True
        for q in [p for p in PRIME_POWERS if p <= (limit or 16)]:
            count = mrd_count_m4(q)
            dens = Fraction(count, gaussian_binomial(4, 2, q ** 4))
            gap = Fraction(1, 2) - dens
            if prev_gap is not None and abs(gap) > abs(prev_gap):
                monotone = False
            prev_gap = gap
            rows.append({"q": q, "count": count,
                         "density": decimal_str(dens),
                         "density_exact": [dens.numerator, dens.denominator],
                         "gap_to_half": decimal_str(gap)})
        return {"family": "m4_mrd", "rows": rows, "limit": "1/2",
                "gap_monotone_decreasing": monotone,
                "limit_check": {k: (str(v) if isinstance(v, Fraction) else v)
                                for k, v in m4_density_limit_check().items()}}
    if family == "one_weight":
        rows = []
        for m, k in ((2, 2), (2, 3), (3, 2)):
            for q in [p for p in PRIME_POWERS if p <= (limit or 5)]:
                dens = one_weight_density_printed(m, k, q)
                rows.append({"m": m, "k": k, "q": q,
                             "density": decimal_str(dens),
                             "density_exact": [dens.numerator, dens.denominator],
                             "gap_to_one": decimal_str(1 - dens)})
        checks = {f"m={m},k={k}": one_weight_density_limit_check(m, k)["limit_is_one"]
                  for m, k in ((2, 2), (2, 3), (3, 2), (4, 2))}
        return {"family": "one_weight", "rows": rows, "limit": "1",
                "limit_checks": checks,
                "trivial_full_code": "the [n, n] code is unique and has d >= 1, density 1"}
    raise InvalidParameter(f"unknown family {family!r}")
