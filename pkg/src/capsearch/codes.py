"""Caps as parity-check matrices of linear codes.

The columns of the parity check are the homogeneous coordinates of the cap
points, so column dependencies mirror geometry: no zero column, no two
proportional, no dependent triple (no three collinear points), hence
minimum distance at least 4.  A dependent 4-set exists exactly when two
bisecants on disjoint point pairs meet in a non-cap point, which a single
collision scan over all bisecant interiors finds in
O(n^2 * q * log) instead of brute-forcing 4-subsets.

Covering radius is syndrome enumeration: mark everything reachable from 0,
1, then 2 columns; go deeper only while something is unmarked.  Complete
caps stop at 2.  Covering density is exact rational arithmetic so the
perfect-code checks (density exactly 1) need no tolerances.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .engine import Cap
from .space import ProjSpace


class CodeError(Exception):
    pass


class EmptyCap(CodeError):
    pass


class TooLarge(CodeError):
    pass


class NotFullRank(CodeError):
    pass


SYNDROME_LIMIT = 10**8
PAIR_OP_LIMIT = 4 * 10**8
FIVE_SET_LIMIT = 2 * 10**6


@dataclass(frozen=True)
class AtLeast:
    """Lower bound returned when the distance search exhausts its limit."""

    bound: int


@dataclass
class ParityCheck:
    q: int
    matrix: np.ndarray  # shape (N+1, n), columns = cap point coordinates

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def column_points(self) -> np.ndarray:
        return self.matrix.T.astype(np.int64).copy()


def parity_check(cap: Cap) -> ParityCheck:
    if not cap.points:
        raise EmptyCap("cannot build a parity check from an empty cap")
    cols = np.array([p.coords for p in cap.points], dtype=np.int64).T
    return ParityCheck(q=cap.q, matrix=cols)


def matrix_rank_mod(M: np.ndarray, q: int) -> int:
    """Rank of an integer matrix over F_q by Gaussian elimination."""
    A = (M.astype(np.int64) % q).copy()
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        pivot = None
        for r in range(rank, rows):
            if A[r, c] % q:
                pivot = r
                break
        if pivot is None:
            continue
        A[[rank, pivot]] = A[[pivot, rank]]
        inv = pow(int(A[rank, c]), q - 2, q)
        A[rank] = A[rank] * inv % q
        for r in range(rows):
            if r != rank and A[r, c]:
                A[r] = (A[r] - A[r, c] * A[rank]) % q
        rank += 1
        if rank == rows:
            break
    return rank


def export_matrix(H: ParityCheck) -> str:
    """Plain-text rendering: one row per line, space-separated entries."""
    return "\n".join(" ".join(str(int(x)) for x in row) for row in H.matrix)


# -- minimum distance ------------------------------------------------------------


def _normalized_points(H: ParityCheck) -> tuple[ProjSpace, np.ndarray]:
    space = ProjSpace(H.rows - 1, H.q)
    pts = []
    for col in H.matrix.T:
        pts.append(space.normalize(tuple(int(x) % H.q for x in col)).coords)
    return space, np.array(pts, dtype=np.int64)


def _find_dependent_four(space: ProjSpace, pts: np.ndarray) -> tuple[int, ...] | None:
    """First two disjoint column pairs whose bisecant interiors meet.

    Interior points of line(P_i, P_j) are P_i + t*P_j, t = 1..q-1; a shared
    interior point between pairs {i,j} and {k,l} with {i,j} ∩ {k,l} empty is
    exactly a linear dependency with four nonzero coefficients.
    """
    n = pts.shape[0]
    q = space.q
    if n < 4:
        return None
    if n * (n - 1) // 2 * (q - 1) > PAIR_OP_LIMIT:
        raise TooLarge(f"4-subset search budget exceeded for n={n}, q={q}")
    t = np.arange(1, q, dtype=np.int64)
    seen: dict[int, tuple[int, int]] = {}
    inv = space._inv
    starts = space._starts
    from .kernels import numpy_impl  # rank vectorization shared by both backends

    for i in range(n):
        for j in range(i + 1, n):
            raw = (pts[i][None, :] + t[:, None] * pts[j][None, :]) % q
            ranks = numpy_impl._rank_vec(raw, q, inv, starts)
            for r in ranks:
                r = int(r)
                prev = seen.get(r)
                if prev is None:
                    seen[r] = (i, j)
                elif prev[0] != i and prev[1] != i and prev[0] != j and prev[1] != j:
                    return (*prev, i, j)
                # pairs sharing one point meet only at that cap point, never
                # in an interior, so a clash here means a duplicate interior
                # entry of the same pair family; keep the first.
    return None


def min_distance(H: ParityCheck, limit: int = 5) -> int | AtLeast:
    """Smallest w <= limit with w linearly dependent columns."""
    q = H.q
    n = H.cols
    cols = H.matrix.T % q
    if n == 0:
        raise EmptyCap("no columns")
    if not cols.any(axis=1).all():
        return 1
    space, pts = _normalized_points(H)
    if limit < 2:
        return AtLeast(limit + 1)
    # proportional columns normalize identically
    if len({tuple(int(x) for x in p) for p in pts}) < n:
        return 2
    if limit < 3:
        return AtLeast(limit + 1)
    if n >= 3:
        enc = int(kernels.active().first_collinear_triple(pts, q, space._inv))
        if enc >= 0:
            return 3
    if limit < 4:
        return AtLeast(limit + 1)
    if _find_dependent_four(space, pts) is not None:
        return 4
    if limit < 5:
        return AtLeast(limit + 1)
    if n >= 5:
        if math.comb(n, 5) > FIVE_SET_LIMIT:
            raise TooLarge(f"5-subset search budget exceeded for n={n}")
        for sub in itertools.combinations(range(n), 5):
            if matrix_rank_mod(pts[list(sub)].T, q) < 5:
                return 5
    return AtLeast(limit + 1)


# -- covering radius ---------------------------------------------------------------


def covering_radius(H: ParityCheck) -> int:
    """Smallest r with every syndrome a combination of <= r columns.

    Requires full row rank (otherwise part of the syndrome space is
    unreachable and the radius is undefined).
    """
    q = H.q
    R = H.rows
    n = H.cols
    if matrix_rank_mod(H.matrix, q) < R:
        raise NotFullRank(
            "covering radius needs a full-row-rank parity check "
            f"(rank < {R}); the column set does not span the space"
        )
    total = q**R
    if total > SYNDROME_LIMIT:
        raise TooLarge(f"{total} syndromes exceed the enumeration budget")
    K = kernels.active()
    cols = H.matrix.T.astype(np.int64) % q
    marks = np.zeros(total, dtype=np.uint8)
    K.syndrome_mark_upto2(cols, q, marks)
    if int(K.scan_uncovered(marks, 0)) < 0:
        # distinguish radius <= 1: multiples of single columns only
        m1 = np.zeros(total, dtype=np.uint8)
        m1[0] = 1
        qp = q ** np.arange(R - 1, -1, -1, dtype=np.int64)
        lam = np.arange(1, q, dtype=np.int64)
        codes = (((lam[:, None, None] * cols[None, :, :]) % q) * qp).sum(-1)
        m1[codes.ravel()] = 1
        return 1 if int(K.scan_uncovered(m1, 0)) < 0 else 2
    if n * (n - 1) * (n - 2) // 6 * (q - 1) ** 3 > PAIR_OP_LIMIT:
        raise TooLarge(f"weight-3 syndrome pass too expensive for n={n}, q={q}")
    K.syndrome_mark_3(cols, q, marks)
    if int(K.scan_uncovered(marks, 0)) < 0:
        return 3
    # beyond 3: tiny inputs only; add exact-weight-w combinations until done
    vecs = [tuple(int(x) for x in c) for c in cols]
    for w in range(4, R + 1):
        if math.comb(n, w) * (q - 1) ** w > FIVE_SET_LIMIT:
            raise TooLarge("covering radius exceeds 3 and input too large to continue")
        for sub in itertools.combinations(range(n), w):
            for coeffs in itertools.product(range(1, q), repeat=w):
                s = [0] * R
                for c, idx in zip(coeffs, sub):
                    for k in range(R):
                        s[k] = (s[k] + c * vecs[idx][k]) % q
                code = 0
                for k in range(R):
                    code = code * q + s[k]
                marks[code] = 1
        if int(K.scan_uncovered(marks, 0)) < 0:
            return w
    raise CodeError("unreachable: full-rank columns reach every syndrome by weight R")


# -- covering density / profile ------------------------------------------------------


def covering_density(n: int, k: int, r: int, q: int) -> tuple[Fraction, float]:
    """(1/q**(n-k)) * sum_{i<=r} (q-1)**i * C(n,i), exact and as a double."""
    if not 0 <= k <= n or r < 0 or r > n:
        raise CodeError(f"bad parameters n={n}, k={k}, r={r}")
    total = sum(Fraction((q - 1) ** i * math.comb(n, i)) for i in range(r + 1))
    mu = total / Fraction(q ** (n - k))
    return mu, float(mu)


@dataclass
class CodeProfile:
    n: int
    k: int
    d: int | None
    d_at_least: int | None
    r: int
    mu_exact: Fraction
    mu: float
    quasi_perfect: bool
    perfect: bool


def profile(cap: Cap, distance_limit: int = 5) -> CodeProfile:
    """Assemble the code parameters of a cap's parity-check code.

    quasi_perfect reports the property complete caps confer: covering
    radius 2 with minimum distance >= 4 (the two perfect exceptional codes
    included; incomplete caps have radius >= 3 and report False).
    """
    H = parity_check(cap)
    rank = matrix_rank_mod(H.matrix, H.q)
    n = H.cols
    k = n - rank
    d_res = min_distance(H, limit=distance_limit)
    if isinstance(d_res, AtLeast):
        d, d_at_least = None, d_res.bound
    else:
        d, d_at_least = d_res, None
    r = covering_radius(H)
    mu_exact, mu = covering_density(n, k, r, H.q)
    qp = r == 2 and d is not None and d >= 4
    return CodeProfile(
        n=n, k=k, d=d, d_at_least=d_at_least, r=r,
        mu_exact=mu_exact, mu=mu, quasi_perfect=qp,
        perfect=mu_exact == 1,
    )
