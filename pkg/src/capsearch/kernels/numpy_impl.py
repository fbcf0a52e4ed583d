"""Pure-numpy fallback kernels.

Same contracts and exact same integer results as the numba backend, with
the inner loops replaced by chunked vectorized passes.  Slower (roughly
3-10x on the search hot paths) but dependency-light; selected with
CAPSEARCH_BACKEND=numpy or automatically when numba is unavailable.
"""

import numpy as np

_CHUNK = 1 << 17


def _qpow(q, r):
    return q ** np.arange(r - 1, -1, -1, dtype=np.int64)


def _rank_vec(M, q, inv, starts):
    """0-based ranks of the rows of M (nonzero raw coordinate vectors)."""
    r = M.shape[1]
    lead = np.argmax(M != 0, axis=1)
    rows = np.arange(M.shape[0])
    s = inv[M[rows, lead]]
    scaled = (M * s[:, None]) % q
    qp = _qpow(q, r)
    total = (scaled * qp[None, :]).sum(axis=1)
    return starts[lead] + total - qp[lead]


def _decode_block(lo, hi, q, starts):
    """Coordinates of points with 0-based ranks lo..hi-1; returns (C, lead)."""
    r = starts.shape[0]
    i0 = np.arange(lo, hi, dtype=np.int64)
    rev = starts[::-1].copy()
    pos = np.searchsorted(rev, i0, side="right") - 1
    lead = (r - 1) - pos
    v = i0 - starts[lead]
    C = np.zeros((hi - lo, r), dtype=np.int64)
    C[np.arange(hi - lo), lead] = 1
    vv = v.copy()
    for k in range(r - 1, 0, -1):
        digit = vv % q
        vv //= q
        C[:, k] = np.where(k > lead, digit, C[:, k])
    return C, lead


def mark_lines(a, cap_coords, cap_idx0, m, covered, q, inv, starts, newly_out):
    if m == 0:
        return 0
    r = a.shape[0]
    cnt = 0
    sel = cap_idx0[:m]
    fresh = np.unique(sel[covered[sel] == 0])
    covered[fresh] = 1
    newly_out[cnt : cnt + fresh.shape[0]] = fresh
    cnt += fresh.shape[0]
    t = np.arange(q, dtype=np.int64)
    rows_per_chunk = max(1, _CHUNK // q)
    for lo in range(0, m, rows_per_chunk):
        hi = min(m, lo + rows_per_chunk)
        cur = (a[None, None, :] + t[None, :, None] * cap_coords[lo:hi, None, :]) % q
        idx = _rank_vec(cur.reshape(-1, r), q, inv, starts)
        uniq = np.unique(idx)
        fresh = uniq[covered[uniq] == 0]
        covered[fresh] = 1
        newly_out[cnt : cnt + fresh.shape[0]] = fresh
        cnt += fresh.shape[0]
    return cnt


def scan_uncovered(covered, start0):
    P = covered.shape[0]
    i = start0
    while i < P:
        sub = covered[i : i + _CHUNK]
        j = int(np.argmin(sub))
        if sub[j] == 0:
            return i + j
        i += _CHUNK
    return -1


def scan_uncovered_perm(covered, perm0, pos0):
    P = perm0.shape[0]
    i = pos0
    while i < P:
        sub = covered[perm0[i : i + _CHUNK]]
        j = int(np.argmin(sub))
        if sub[j] == 0:
            return i + j
        i += _CHUNK
    return -1


def build_line_table(b, jb, covered, q, inv, starts, lstarts, lid_out, u_out):
    r = b.shape[0]
    P = covered.shape[0]
    sentinel = u_out.shape[0] - 1
    u_out[:] = 0
    keep = np.array([k for k in range(r) if k != jb], dtype=np.int64)
    bk = b[keep]
    for lo in range(0, P, _CHUNK):
        hi = min(P, lo + _CHUNK)
        C, _ = _decode_block(lo, hi, q, starts)
        Z = (C[:, keep] - np.outer(C[:, jb], bk)) % q
        own = ~Z.any(axis=1)
        # give the all-zero row (b itself) a valid dummy so _rank_vec is safe
        if own.any():
            Z[own, 0] = 1
        lid = _rank_vec(Z, q, inv, lstarts)
        lid[own] = sentinel
        lid_out[lo:hi] = lid
        mask = (covered[lo:hi] == 0) & ~own
        u_out[: sentinel + 1] += np.bincount(
            lid[mask], minlength=sentinel + 1
        ).astype(u_out.dtype)


def u_decrement_one(newly, lid, u):
    np.subtract.at(u, lid[newly], 1)


def score_table_one(idx, lid, u, out):
    out += u[lid[idx]]


def score_naive_some(idx, cap_coords, cap_idx0, m, covered, q, inv, starts, out):
    r = cap_coords.shape[1]
    t = np.arange(q, dtype=np.int64)
    cap_uncov = int(np.count_nonzero(covered[cap_idx0[:m]] == 0))
    for x in range(idx.shape[0]):
        C, _ = _decode_block(idx[x], idx[x] + 1, q, starts)
        a = C[0]
        cur = (a[None, None, :] + t[None, :, None] * cap_coords[:m, None, :]) % q
        ids = _rank_vec(cur.reshape(-1, r), q, inv, starts)
        out[x] = cap_uncov + int(np.count_nonzero(covered[ids] == 0))


def oracle_cover(cap_coords, q, codes, out):
    n, r = cap_coords.shape
    if n < 2:
        return
    # Fermat inverses: independent of the extended-Euclid table used elsewhere
    invf = np.array(
        [0] + [pow(int(a), q - 2, q) for a in range(1, q)], dtype=np.int64
    )
    alphas = np.arange(q, dtype=np.int64)
    qp = _qpow(q, r)
    for i in range(n - 1):
        rest = cap_coords[i + 1 :]
        W = (alphas[None, :, None] * cap_coords[i][None, None, :] + rest[:, None, :]) % q
        flat = np.vstack([cap_coords[i : i + 1], W.reshape(-1, r)])
        lead = np.argmax(flat != 0, axis=1)
        rows = np.arange(flat.shape[0])
        s = invf[flat[rows, lead]]
        scaled = (flat * s[:, None]) % q
        code = (scaled * qp[None, :]).sum(axis=1)
        pos = np.searchsorted(codes, code)
        out[pos] = 1


def first_collinear_triple(coords, q, inv):
    n, r = coords.shape
    for i in range(n):
        for j in range(i + 1, n):
            r1 = coords[i].astype(np.int64).copy()
            r2 = coords[j].astype(np.int64).copy()
            p1 = int(np.argmax(r1 != 0))
            f = int(r2[p1])
            if f:
                r2 = (r2 - f * r1) % q
            p2 = int(np.argmax(r2 != 0))
            s = int(inv[r2[p2]])
            if s != 1:
                r2 = (r2 * s) % q
            f = int(r1[p2])
            if f:
                r1 = (r1 - f * r2) % q
            rest = coords[j + 1 :]
            if rest.shape[0] == 0:
                continue
            vals = (rest - np.outer(rest[:, p1], r1) - np.outer(rest[:, p2], r2)) % q
            hits = np.flatnonzero(~vals.any(axis=1))
            if hits.shape[0]:
                k2 = j + 1 + int(hits[0])
                return (i * n + j) * n + k2
    return -1


def syndrome_mark_upto2(cols, q, marks):
    n, r = cols.shape
    qp = _qpow(q, r)
    marks[0] = 1
    ab = np.arange(1, q, dtype=np.int64)
    codes = (((ab[:, None, None] * cols[None, :, :]) % q) * qp).sum(-1)
    marks[codes.ravel()] = 1
    if n < 2:
        return
    chj = max(1, 4_000_000 // max(1, (q - 1) * (q - 1) * r))
    for i in range(n):
        ai = (ab[:, None] * cols[i][None, :]) % q
        for jlo in range(i + 1, n, chj):
            jhi = min(n, jlo + chj)
            bj = (ab[:, None, None] * cols[jlo:jhi][None, :, :]) % q
            W = (ai[:, None, None, :] + bj[None, :, :, :]) % q
            marks[(W * qp).sum(-1).ravel()] = 1


def syndrome_mark_3(cols, q, marks):
    n, r = cols.shape
    qp = _qpow(q, r)
    ab = np.arange(1, q, dtype=np.int64)
    for i in range(n):
        ai = (ab[:, None] * cols[i][None, :]) % q
        for j in range(i + 1, n):
            bj = (ab[:, None] * cols[j][None, :]) % q
            ij = (ai[:, None, :] + bj[None, :, :]) % q
            for k2 in range(j + 1, n):
                ck = (ab[:, None] * cols[k2][None, :]) % q
                W = (ij[:, :, None, :] + ck[None, None, :, :]) % q
                marks[(W * qp).sum(-1).ravel()] = 1
