"""Numba-compiled kernels for the coverage engine and searches.

All indices here are 0-based. Coordinates travel as int64 arrays; with q
capped at 2**31 - 1 every intermediate product fits int64.  Functions are
compiled nogil so greedy attempts can run on a thread pool.
"""

import numpy as np
from numba import njit

JIT_OPTS = dict(cache=True, nogil=True)


@njit(**JIT_OPTS)
def _norm_rank(c, r, q, inv, starts):
    """0-based lex rank of the projective point with raw coordinates c[:r].

    c must be nonzero mod q with entries in [0, q).  Normalizes in place of
    reading: scales by the inverse of the leading entry while accumulating
    the base-q suffix value.
    """
    lead = 0
    while c[lead] == 0:
        lead += 1
    s = inv[c[lead]]
    v = 0
    if s == 1:
        for k in range(lead + 1, r):
            v = v * q + c[k]
    else:
        for k in range(lead + 1, r):
            v = v * q + (c[k] * s) % q
    return starts[lead] + v


@njit(**JIT_OPTS)
def _decode(i0, out, r, q, starts):
    """Coordinates of the point with 0-based rank i0; returns lead position."""
    lead = r - 1
    for j in range(r):
        if i0 >= starts[j]:
            lead = j
            break
    v = i0 - starts[lead]
    for k in range(r):
        out[k] = 0
    out[lead] = 1
    for k in range(r - 1, lead, -1):
        out[k] = v % q
        v //= q
    return lead


@njit(**JIT_OPTS)
def mark_lines(a, cap_coords, cap_idx0, m, covered, q, inv, starts, newly_out):
    """Mark every point on the m lines through new point `a` and the cap.

    Line through a and cap point B is {B} union {a + t*B : t in F_q}.
    Newly covered 0-based indices are appended to newly_out; returns count.
    """
    r = a.shape[0]
    cnt = 0
    cur = np.empty(r, np.int64)
    for bi in range(m):
        bidx = cap_idx0[bi]
        if covered[bidx] == 0:
            covered[bidx] = 1
            newly_out[cnt] = bidx
            cnt += 1
        for k in range(r):
            cur[k] = a[k]
        for t in range(q):
            idx = _norm_rank(cur, r, q, inv, starts)
            if covered[idx] == 0:
                covered[idx] = 1
                newly_out[cnt] = idx
                cnt += 1
            for k in range(r):
                cur[k] += cap_coords[bi, k]
                if cur[k] >= q:
                    cur[k] -= q
    return cnt


@njit(**JIT_OPTS)
def scan_uncovered(covered, start0):
    for i in range(start0, covered.shape[0]):
        if covered[i] == 0:
            return i
    return np.int64(-1)


@njit(**JIT_OPTS)
def scan_uncovered_perm(covered, perm0, pos0):
    for p in range(pos0, perm0.shape[0]):
        if covered[perm0[p]] == 0:
            return p
    return np.int64(-1)


@njit(**JIT_OPTS)
def build_line_table(b, jb, covered, q, inv, starts, lstarts, lid_out, u_out):
    """Per-point id of the line joining it to cap point b, plus uncovered
    counts per line.

    Lines through b biject with the points of a PG(N-1,q): map x to
    x - x[jb]*b (which zeroes coordinate jb, b's leading 1), drop that
    coordinate and rank the result.  b itself maps to the sentinel bucket
    len(u_out)-1, which scoring never reads.
    """
    r = b.shape[0]
    P = covered.shape[0]
    sentinel = u_out.shape[0] - 1
    for x in range(u_out.shape[0]):
        u_out[x] = 0
    c = np.empty(r, np.int64)
    z = np.empty(r - 1, np.int64)
    i = 0
    # Walk blocks of constant leading position with a mixed-radix counter
    # instead of decoding every index from scratch.
    for lead in range(r - 1, -1, -1):
        for k in range(r):
            c[k] = 0
        c[lead] = 1
        block = 1
        for _ in range(r - 1 - lead):
            block *= q
        for _ in range(block):
            f = c[jb]
            w = 0
            nz = False
            for k in range(r):
                if k == jb:
                    continue
                zz = c[k] - (f * b[k]) % q
                if zz < 0:
                    zz += q
                z[w] = zz
                if zz != 0:
                    nz = True
                w += 1
            if nz:
                lid = _norm_rank(z, r - 1, q, inv, lstarts)
                lid_out[i] = lid
                if covered[i] == 0:
                    u_out[lid] += 1
            else:
                lid_out[i] = sentinel
            # advance the trailing digits
            k = r - 1
            while k > lead:
                c[k] += 1
                if c[k] < q:
                    break
                c[k] = 0
                k -= 1
            i += 1
    assert i == P


@njit(**JIT_OPTS)
def u_decrement_one(newly, lid, u):
    for x in range(newly.shape[0]):
        u[lid[newly[x]]] -= 1


@njit(**JIT_OPTS)
def score_table_one(idx, lid, u, out):
    for x in range(idx.shape[0]):
        out[x] += u[lid[idx[x]]]


@njit(**JIT_OPTS)
def score_naive_some(idx, cap_coords, cap_idx0, m, covered, q, inv, starts, out):
    """Reference scorer: walk the m candidate lines and count uncovered points.

    out[x] = sum over cap points B of #uncovered on line(candidate, B),
    candidate included.  Identical values to the table scorer, no state.
    """
    r = cap_coords.shape[1]
    a = np.empty(r, np.int64)
    cur = np.empty(r, np.int64)
    for x in range(idx.shape[0]):
        _decode(idx[x], a, r, q, starts)
        s = 0
        for bi in range(m):
            if covered[cap_idx0[bi]] == 0:
                s += 1
            for k in range(r):
                cur[k] = a[k]
            for t in range(q):
                p = _norm_rank(cur, r, q, inv, starts)
                if covered[p] == 0:
                    s += 1
                for k in range(r):
                    cur[k] += cap_coords[bi, k]
                    if cur[k] >= q:
                        cur[k] -= q
        out[x] = s


@njit(**JIT_OPTS)
def _modpow(b, e, q):
    r = 1
    b = b % q
    while e > 0:
        if e & 1:
            r = r * b % q
        b = b * b % q
        e >>= 1
    return r


@njit(**JIT_OPTS)
def oracle_cover(cap_coords, q, codes, out):
    """From-scratch bisecant coverage, independent of the tracker path.

    Enumerates each pair line as {P} union {alpha*P + Q : alpha in F_q},
    normalizes with Fermat inverses and resolves indices by binary search
    in the lex code table rather than the closed-form rank.
    """
    n, r = cap_coords.shape
    P = codes.shape[0]
    w = np.empty(r, np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            for alpha in range(-1, q):
                if alpha < 0:
                    # the pair point P_i itself
                    for k in range(r):
                        w[k] = cap_coords[i, k]
                else:
                    for k in range(r):
                        w[k] = (alpha * cap_coords[i, k] + cap_coords[j, k]) % q
                lead = 0
                while w[lead] == 0:
                    lead += 1
                s = _modpow(w[lead], q - 2, q)
                code = np.int64(0)
                for k in range(lead, r):
                    code = code * q + (w[k] * s) % q
                lo = 0
                hi = P
                while lo < hi:
                    mid = (lo + hi) // 2
                    if codes[mid] < code:
                        lo = mid + 1
                    else:
                        hi = mid
                out[lo] = 1


@njit(**JIT_OPTS)
def first_collinear_triple(coords, q, inv):
    """First (lex order) collinear triple among cap points, or -1.

    Encodes the hit as (i*n + j)*n + k.  Membership test: reduce each later
    point against the echelon basis of the pair's row space.
    """
    n, r = coords.shape
    r1 = np.empty(r, np.int64)
    r2 = np.empty(r, np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(r):
                r1[k] = coords[i, k]
                r2[k] = coords[j, k]
            p1 = 0
            while r1[p1] == 0:
                p1 += 1
            f = r2[p1]
            if f != 0:
                for k in range(r):
                    r2[k] = (r2[k] - f * r1[k]) % q
            p2 = 0
            while r2[p2] == 0:
                p2 += 1
            s = inv[r2[p2]]
            if s != 1:
                for k in range(r):
                    r2[k] = (r2[k] * s) % q
            f = r1[p2]
            if f != 0:
                for k in range(r):
                    r1[k] = (r1[k] - f * r2[k]) % q
            for k2 in range(j + 1, n):
                f1 = coords[k2, p1]
                f2 = coords[k2, p2]
                hit = True
                for k in range(r):
                    if (coords[k2, k] - f1 * r1[k] - f2 * r2[k]) % q != 0:
                        hit = False
                        break
                if hit:
                    return (np.int64(i) * n + j) * n + k2
    return np.int64(-1)


@njit(**JIT_OPTS)
def syndrome_mark_upto2(cols, q, marks):
    """Mark syndromes reachable as combinations of at most 2 columns."""
    n, r = cols.shape
    marks[0] = 1
    ai = np.empty(r, np.int64)
    for i in range(n):
        for a in range(1, q):
            code = np.int64(0)
            for k in range(r):
                code = code * q + (a * cols[i, k]) % q
            marks[code] = 1
    for i in range(n):
        for j in range(i + 1, n):
            for a in range(1, q):
                for k in range(r):
                    ai[k] = (a * cols[i, k]) % q
                for b in range(1, q):
                    code = np.int64(0)
                    for k in range(r):
                        code = code * q + (ai[k] + b * cols[j, k]) % q
                    marks[code] = 1


@njit(**JIT_OPTS)
def syndrome_mark_3(cols, q, marks):
    """Add combinations of exactly 3 columns (used only at small scale)."""
    n, r = cols.shape
    ai = np.empty(r, np.int64)
    ab = np.empty(r, np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            for k2 in range(j + 1, n):
                for a in range(1, q):
                    for k in range(r):
                        ai[k] = (a * cols[i, k]) % q
                    for b in range(1, q):
                        for k in range(r):
                            ab[k] = (ai[k] + b * cols[j, k]) % q
                        for c in range(1, q):
                            code = np.int64(0)
                            for k in range(r):
                                code = code * q + (ab[k] + c * cols[k2, k]) % q
                            marks[code] = 1
