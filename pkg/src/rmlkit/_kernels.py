"""numba kernels for the exhaustive inner loops.

Everything here operates on integer-coded field elements through
precomputed lookup tables (add/sub/mul/inv over the big field, the
F_q-coordinate expansion, and small-field tables for rank elimination).
Subspaces travel as uint16 row arrays; canonical RREF bases are packed
into int64 keys (bits_per_entry * n bits per row) for sorted-array
lookups, which keeps the Möbius layer scans thread safe.

The pure-Python implementations in lattice.py and census.py compute the
same quantities and are cross-checked against these kernels in the test
suite; the kernels exist because the censuses and the Möbius recursion
are the innermost loops of every verification run.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

NOGIL = dict(cache=True, nogil=True)


@njit(**NOGIL)
def _rank_capped(mat, nrows, ncols, cap, s_sub, s_mul, s_inv):
    """Rank of a small-field matrix, stopping early once it exceeds cap.

    Returns min(rank, cap + 1); mat is destroyed.
    """
    r = 0
    for c in range(ncols):
        piv = -1
        for i in range(r, nrows):
            if mat[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(ncols):
                t = mat[r, j]
                mat[r, j] = mat[piv, j]
                mat[piv, j] = t
        s = s_inv[mat[r, c]]
        if s != 1:
            for j in range(c, ncols):
                mat[r, j] = s_mul[mat[r, j], s]
        for i in range(r + 1, nrows):
            f = mat[i, c]
            if f != 0:
                for j in range(c, ncols):
                    mat[i, j] = s_sub[mat[i, j], s_mul[f, mat[r, j]]]
        r += 1
        if r > cap or r == nrows:
            return r
    return r


@njit(**NOGIL)
def _decode_rows(rows, idx, pivots, free_rc, Q):
    """Fill the RREF candidate matrix for a pivot profile: identity at the
    pivots, base-Q digits of idx at the free slots (last slot fastest)."""
    k = pivots.shape[0]
    n = rows.shape[1]
    for r in range(k):
        for j in range(n):
            rows[r, j] = 0
        rows[r, pivots[r]] = 1
    for t in range(free_rc.shape[0] - 1, -1, -1):
        rows[free_rc[t, 0], free_rc[t, 1]] = idx % Q
        idx //= Q


@njit(**NOGIL)
def _word_rank_leq(word, n, m, i_max, coord, s_sub, s_mul, s_inv, work):
    """Whether the rank weight of the word is <= i_max."""
    for j in range(n):
        cj = word[j]
        for t in range(m):
            work[j, t] = coord[cj, t]
    return _rank_capped(work, n, m, i_max, s_sub, s_mul, s_inv) <= i_max


@njit(**NOGIL)
def _span_add(acc, pivcol, span_dim, v, n, b_sub, b_mul, b_inv):
    """Reduce v against the accumulated RREF rows and insert if new.

    Returns the new span dimension; acc rows stay in echelon order by
    construction (insertion keeps reduced rows, pivots unsorted is fine
    for dimension tracking).
    """
    for r in range(span_dim):
        c = pivcol[r]
        f = v[c]
        if f != 0:
            for j in range(n):
                v[j] = b_sub[v[j], b_mul[f, acc[r, j]]]
    lead = -1
    for j in range(n):
        if v[j] != 0:
            lead = j
            break
    if lead < 0:
        return span_dim
    s = b_inv[v[lead]]
    if s != 1:
        for j in range(n):
            v[j] = b_mul[s, v[j]]
    for j in range(n):
        acc[span_dim, j] = v[j]
    pivcol[span_dim] = lead
    return span_dim + 1


@njit(parallel=True, **NOGIL)
def lattice_members_block(pivots, free_rc, start, flags, n, m, Q, i_max,
                          b_add, b_sub, b_mul, b_inv, coord, s_sub, s_mul, s_inv):
    """Membership scan over one pivot-profile block: flags[c] = 1 iff the
    candidate subspace is spanned by its own rank <= i_max vectors."""
    k = pivots.shape[0]
    count = flags.shape[0]
    for c in prange(count):
        rows = np.zeros((k, n), dtype=np.uint16)
        _decode_rows(rows, start + c, pivots, free_rc, Q)
        acc = np.zeros((k, n), dtype=np.uint16)
        pivcol = np.zeros(k, dtype=np.int64)
        word = np.zeros(n, dtype=np.uint16)
        work = np.zeros((n, m), dtype=np.uint16)
        span_dim = 0
        done = False
        for lead in range(k):
            if done:
                break
            reps = Q ** (k - lead - 1)
            for e in range(reps):
                for j in range(n):
                    word[j] = rows[lead, j]
                rem = e
                for t in range(lead + 1, k):
                    ct = rem % Q
                    rem //= Q
                    if ct != 0:
                        for j in range(n):
                            word[j] = b_add[word[j], b_mul[ct, rows[t, j]]]
                if _word_rank_leq(word, n, m, i_max, coord, s_sub, s_mul, s_inv, work):
                    span_dim = _span_add(acc, pivcol, span_dim, word, n, b_sub, b_mul, b_inv)
                    if span_dim == k:
                        done = True
                        break
        flags[c] = 1 if (done or span_dim == k) else 0


@njit(**NOGIL)
def _pack_rows(rows, nrows, n, be):
    key = np.int64(0)
    rowbits = n * be
    for r in range(nrows):
        packed = np.int64(0)
        for j in range(n):
            packed |= np.int64(rows[r, j]) << (j * be)
        key |= packed << (r * rowbits)
    return key


@njit(**NOGIL)
def _bisect_lookup(keys, vals, key):
    lo, hi = 0, keys.shape[0]
    while lo < hi:
        mid = (lo + hi) >> 1
        if keys[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    if lo < keys.shape[0] and keys[lo] == key:
        return vals[lo]
    return np.int64(0)


@njit(**NOGIL)
def _rref_inplace(mat, nrows, ncols, b_sub, b_mul, b_inv):
    """Full RREF over the big field; returns the number of nonzero rows."""
    r = 0
    for c in range(ncols):
        piv = -1
        for i in range(r, nrows):
            if mat[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(ncols):
                t = mat[r, j]
                mat[r, j] = mat[piv, j]
                mat[piv, j] = t
        s = b_inv[mat[r, c]]
        if s != 1:
            for j in range(ncols):
                mat[r, j] = b_mul[s, mat[r, j]]
        for i in range(nrows):
            if i != r and mat[i, c] != 0:
                f = mat[i, c]
                for j in range(ncols):
                    mat[i, j] = b_sub[mat[i, j], b_mul[f, mat[r, j]]]
        r += 1
        if r == nrows:
            break
    return r


@njit(parallel=True, **NOGIL)
def mobius_layer_accumulate(x_rows, t_rows, keys, mu_vals, sums, n, be,
                            b_add, b_sub, b_mul, b_inv):
    """Add sum of mu over the tk-dimensional subspaces of each X to sums.

    x_rows: (cnt, d, n) member bases of the current layer; t_rows:
    (tcnt, tk, d) coordinate templates; keys/mu_vals: sorted packed keys
    and Möbius values of all lower layers.
    """
    cnt = x_rows.shape[0]
    d = x_rows.shape[1]
    tcnt = t_rows.shape[0]
    tk = t_rows.shape[1]
    for ci in prange(cnt):
        X = x_rows[ci]
        work = np.zeros((tk, n), dtype=np.uint16)
        total = np.int64(0)
        for ti in range(tcnt):
            T = t_rows[ti]
            for r in range(tk):
                for j in range(n):
                    acc = 0
                    for s in range(d):
                        c = T[r, s]
                        if c != 0:
                            acc = b_add[acc, b_mul[c, X[s, j]]]
                    work[r, j] = acc
            _rref_inplace(work, tk, n, b_sub, b_mul, b_inv)
            key = _pack_rows(work, tk, n, be)
            total += _bisect_lookup(keys, mu_vals, key)
        sums[ci] += total


@njit(**NOGIL)
def census_mrd_block(pivots, free_rc, start, count, n, m, Q, target,
                     b_add, b_sub, b_mul, b_inv, coord, s_sub, s_mul, s_inv):
    """Count MRD codes among a block of 2-dimensional RREF candidates:
    accept iff no projective codeword has rank weight < target."""
    word = np.zeros(n, dtype=np.uint16)
    rows = np.zeros((2, n), dtype=np.uint16)
    work = np.zeros((n, m), dtype=np.uint16)
    found = np.int64(0)
    for c in range(count):
        _decode_rows(rows, start + c, pivots, free_rc, Q)
        ok = True
        # word = second row alone
        for j in range(n):
            word[j] = rows[1, j]
        if _rank_capped_word(word, n, m, target, coord, s_sub, s_mul, s_inv, work) < target:
            ok = False
        if ok:
            for e in range(Q):
                for j in range(n):
                    word[j] = b_add[rows[0, j], b_mul[e, rows[1, j]]]
                if _rank_capped_word(word, n, m, target, coord, s_sub, s_mul, s_inv, work) < target:
                    ok = False
                    break
        if ok:
            found += 1
    return found


@njit(**NOGIL)
def _rank_capped_word(word, n, m, cap, coord, s_sub, s_mul, s_inv, work):
    for j in range(n):
        cj = word[j]
        for t in range(m):
            work[j, t] = coord[cj, t]
    return _rank_capped(work, n, m, cap, s_sub, s_mul, s_inv)


@njit(**NOGIL)
def _rref_track(mat, nrows, ncols, pivcols, s_sub, s_mul, s_inv):
    """Small-field RREF recording pivot columns; returns the rank."""
    r = 0
    for c in range(ncols):
        piv = -1
        for i in range(r, nrows):
            if mat[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(ncols):
                t = mat[r, j]
                mat[r, j] = mat[piv, j]
                mat[piv, j] = t
        s = s_inv[mat[r, c]]
        if s != 1:
            for j in range(ncols):
                mat[r, j] = s_mul[s, mat[r, j]]
        for i in range(nrows):
            if i != r and mat[i, c] != 0:
                f = mat[i, c]
                for j in range(ncols):
                    mat[i, j] = s_sub[mat[i, j], s_mul[f, mat[r, j]]]
        pivcols[r] = c
        r += 1
        if r == nrows:
            break
    return r


@njit(**NOGIL)
def _idealizer_units(rows, n, m, q, fq_basis, b_mul, coord,
                     s_sub, s_mul, s_inv,
                     mats, vecs, pivcols, system, syspiv, kern, zmat, work):
    """Number of invertible elements of {Z : C Z <= C} for the code with
    the given 2 x n generator rows (a linear system in the n^2 unknowns of
    Z, followed by unit counting in the kernel algebra)."""
    nm = m * n
    kdim = 2 * m
    for r in range(2):
        for li in range(m):
            lam = fq_basis[li]
            for j in range(n):
                w = b_mul[lam, rows[r, j]]
                for a in range(m):
                    mats[r * m + li, a, j] = coord[w, a]
                    vecs[r * m + li, a * n + j] = coord[w, a]
    rr = _rref_track(vecs, kdim, nm, pivcols, s_sub, s_mul, s_inv)
    # equations: for every basis matrix X, X Z must reduce to zero mod C
    for u in range(n):
        for v in range(n):
            colidx = u * n + v
            for i in range(kdim):
                for a in range(nm):
                    work[a] = 0
                for a in range(m):
                    work[a * n + v] = mats[i, a, u]
                for t in range(rr):
                    f = work[pivcols[t]]
                    if f != 0:
                        for a in range(nm):
                            work[a] = s_sub[work[a], s_mul[f, vecs[t, a]]]
                for a in range(nm):
                    system[i * nm + a, colidx] = work[a]
    npiv = _rref_track(system, kdim * nm, n * n, syspiv, s_sub, s_mul, s_inv)
    r_free = n * n - npiv
    if r_free > 8:
        return 0  # cannot happen for MRD codes; guard against blowup
    # kernel basis: one vector per free column
    free_count = 0
    for fcol in range(n * n):
        is_piv = False
        for t in range(npiv):
            if syspiv[t] == fcol:
                is_piv = True
                break
        if is_piv:
            continue
        for a in range(n * n):
            kern[free_count, a] = 0
        kern[free_count, fcol] = 1
        for t in range(npiv):
            val = system[t, fcol]
            if val != 0:
                kern[free_count, syspiv[t]] = s_sub[0, val]
        free_count += 1
    units = 0
    total = 1
    for _ in range(r_free):
        total *= q
    for e in range(1, total):
        rem = e
        for a in range(n * n):
            zmat[a // n, a % n] = 0
        for t in range(r_free):
            ct = rem % q
            rem //= q
            if ct != 0:
                for a in range(n * n):
                    zmat[a // n, a % n] = s_sub[zmat[a // n, a % n],
                                                s_sub[0, s_mul[ct, kern[t, a]]]]
        zwork = zmat.copy()
        if _rank_capped(zwork, n, n, n, s_sub, s_mul, s_inv) == n:
            units += 1
    return units


@njit(**NOGIL)
def census_mrd_fingerprint_block(pivots, free_rc, start, count, n, m, Q, q, target,
                                 b_add, b_sub, b_mul, b_inv, coord,
                                 s_sub, s_mul, s_inv, fq_basis, hist):
    """census_mrd_block plus, per MRD code, the size of its right-idealizer
    unit group, tallied into hist (index = unit count)."""
    word = np.zeros(n, dtype=np.uint16)
    rows = np.zeros((2, n), dtype=np.uint16)
    work = np.zeros((n, m), dtype=np.uint16)
    nm = m * n
    kdim = 2 * m
    mats = np.zeros((kdim, m, n), dtype=np.uint16)
    vecs = np.zeros((kdim, nm), dtype=np.uint16)
    pivcols = np.zeros(kdim, dtype=np.int64)
    system = np.zeros((kdim * nm, n * n), dtype=np.uint16)
    syspiv = np.zeros(n * n, dtype=np.int64)
    kern = np.zeros((n * n, n * n), dtype=np.uint16)
    zmat = np.zeros((n, n), dtype=np.uint16)
    rwork = np.zeros(nm, dtype=np.uint16)
    found = np.int64(0)
    for c in range(count):
        _decode_rows(rows, start + c, pivots, free_rc, Q)
        ok = True
        for j in range(n):
            word[j] = rows[1, j]
        if _rank_capped_word(word, n, m, target, coord, s_sub, s_mul, s_inv, work) < target:
            ok = False
        if ok:
            for e in range(Q):
                for j in range(n):
                    word[j] = b_add[rows[0, j], b_mul[e, rows[1, j]]]
                if _rank_capped_word(word, n, m, target, coord, s_sub, s_mul, s_inv, work) < target:
                    ok = False
                    break
        if not ok:
            continue
        found += 1
        units = _idealizer_units(rows, n, m, q, fq_basis, b_mul, coord,
                                 s_sub, s_mul, s_inv,
                                 mats, vecs, pivcols, system, syspiv, kern, zmat, rwork)
        if units < hist.shape[0]:
            hist[units] += 1
        else:
            hist[0] += 1
    return found
