"""Points and lines of the projective space PG(N,q).

Points are homogeneous coordinate (N+1)-tuples, normalized so the leftmost
nonzero entry is 1, and enumerated in lexicographic order of the tuples.
Indices are 1-based at the API boundary (and in file formats); internal
arrays are 0-based.

The coordinate <-> index bijection is closed-form: a normalized point with
leading 1 at position j (0-based) and trailing coordinates forming the
base-q value v has 0-based rank (q**(N-j) - 1)//(q - 1) + v.  This costs
O(N) per point and no lookup tables, which is what keeps the search engines
usable when the point count reaches the tens of millions.
"""

from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np

from .field import Field, NotPrime  # noqa: F401  (NotPrime re-exported for callers)

DEFAULT_MEM_GIB = 4.0
ENV_MEM_GIB = "CAPSEARCH_MEM_GIB"


class SpaceError(Exception):
    pass


class DimensionTooSmall(SpaceError):
    pass


class SpaceTooLarge(SpaceError):
    pass


class ZeroVector(SpaceError):
    pass


class IndexOutOfRange(SpaceError):
    pass


class NotNormalized(SpaceError):
    pass


class SamePoint(SpaceError):
    pass


class DuplicatePoints(SpaceError):
    pass


class ProjPoint(NamedTuple):
    coords: tuple[int, ...]
    index: int  # 1-based lexicographic rank

    def __repr__(self):
        return f"ProjPoint({self.coords}, #{self.index})"


def default_mem_gib() -> float:
    raw = os.environ.get(ENV_MEM_GIB)
    if raw is None:
        return DEFAULT_MEM_GIB
    return float(raw)


class ProjSpace:
    """Immutable handle for PG(N,q); all operations are pure."""

    def __init__(self, N: int, q: int, mem_gib: float | None = None):
        if N < 2:
            raise DimensionTooSmall(f"need N >= 2, got N={N}")
        self.field = Field(q)
        self.N = N
        self.q = q
        self.point_count = (q ** (N + 1) - 1) // (q - 1)
        self.lines_per_point = (q**N - 1) // (q - 1)
        self.mem_gib = default_mem_gib() if mem_gib is None else float(mem_gib)
        # The coverage bitmap (one byte per point) is the dominant allocation
        # of any search on this space; refuse spaces it cannot fit.
        budget_bytes = int(self.mem_gib * 2**30)
        if self.point_count > budget_bytes:
            raise SpaceTooLarge(
                f"PG({N},{q}) has {self.point_count} points; coverage bitmap "
                f"exceeds the {self.mem_gib} GiB memory budget"
            )
        # starts[j] = 0-based rank of the first point whose leading 1 sits at
        # coordinate j; block j holds q**(N-j) points.
        self._starts = np.array(
            [(q ** (N - j) - 1) // (q - 1) for j in range(N + 1)], dtype=np.int64
        )
        # Same table one dimension down, for ranking lines through a point
        # (the quotient by a point is a PG(N-1,q)).
        self._line_starts = np.array(
            [(q ** (N - 1 - j) - 1) // (q - 1) for j in range(N)], dtype=np.int64
        )
        self._inv = np.array(self._inverse_table(), dtype=np.int64)

    def _inverse_table(self) -> list[int]:
        q = self.q
        inv = [0] * q
        if q > 1:
            inv[1] = 1
        for a in range(2, q):
            inv[a] = (q - (q // a) * inv[q % a] % q) % q
        return inv

    def __repr__(self):
        return f"ProjSpace(N={self.N}, q={self.q}, points={self.point_count})"

    def __eq__(self, other):
        return (
            isinstance(other, ProjSpace)
            and other.N == self.N
            and other.q == self.q
        )

    def __hash__(self):
        return hash(("ProjSpace", self.N, self.q))

    # -- coordinate plumbing ------------------------------------------------

    def _check_coords(self, coords) -> tuple[int, ...]:
        c = tuple(int(x) for x in coords)
        if len(c) != self.N + 1:
            raise SpaceError(
                f"expected {self.N + 1} coordinates, got {len(c)}"
            )
        for x in c:
            if not 0 <= x < self.q:
                raise SpaceError(f"coordinate {x} outside [0, {self.q})")
        return c

    def normalize(self, coords) -> ProjPoint:
        """Scale so the leftmost nonzero coordinate is 1; idempotent."""
        c = self._check_coords(coords)
        lead = next((j for j, x in enumerate(c) if x != 0), None)
        if lead is None:
            raise ZeroVector("the zero vector is not a projective point")
        if c[lead] != 1:
            s = int(self._inv[c[lead]])
            c = tuple((x * s) % self.q for x in c)
        return ProjPoint(c, self._rank0(c, lead) + 1)

    def _rank0(self, c: tuple[int, ...], lead: int) -> int:
        v = 0
        for k in range(lead + 1, self.N + 1):
            v = v * self.q + c[k]
        return int(self._starts[lead]) + v

    def index_of(self, coords) -> int:
        """1-based lexicographic rank of a normalized point."""
        c = self._check_coords(coords)
        lead = next((j for j, x in enumerate(c) if x != 0), None)
        if lead is None:
            raise ZeroVector("the zero vector is not a projective point")
        if c[lead] != 1:
            raise NotNormalized(f"{c} has leading coordinate {c[lead]} != 1")
        return self._rank0(c, lead) + 1

    def point_at(self, index: int) -> ProjPoint:
        """Inverse of index_of; point_at(1) is the lex-smallest point."""
        if not 1 <= index <= self.point_count:
            raise IndexOutOfRange(
                f"index {index} outside [1, {self.point_count}]"
            )
        i0 = index - 1
        for j in range(self.N + 1):
            if i0 >= self._starts[j]:
                lead = j
                break
        v = i0 - int(self._starts[lead])
        c = [0] * (self.N + 1)
        c[lead] = 1
        for k in range(self.N, lead, -1):
            c[k] = v % self.q
            v //= self.q
        return ProjPoint(tuple(c), index)

    # -- lines and collinearity ----------------------------------------------

    def line_points(self, p: ProjPoint, r: ProjPoint) -> set[ProjPoint]:
        """All q+1 points of the unique line through two distinct points."""
        if p.index == r.index:
            raise SamePoint(f"need two distinct points, got {p} twice")
        q = self.q
        pts = {self.normalize(r.coords)}
        for t in range(q):
            cur = tuple((p.coords[k] + t * r.coords[k]) % q for k in range(self.N + 1))
            pts.add(self.normalize(cur))
        assert len(pts) == q + 1
        return pts

    def collinear(self, p: ProjPoint, r: ProjPoint, s: ProjPoint) -> bool:
        """True iff the three (distinct) points lie on one line.

        Decided by the rank of the 3 x (N+1) coordinate matrix, not by line
        enumeration, so it can serve as a cross-check for line_points.
        """
        if len({p.index, r.index, s.index}) != 3:
            raise DuplicatePoints("collinearity needs three distinct points")
        rows = [list(p.coords), list(r.coords), list(s.coords)]
        return self._matrix_rank(rows) <= 2

    def _matrix_rank(self, rows: list[list[int]]) -> int:
        q = self.q
        rank = 0
        cols = self.N + 1
        pivot_col = 0
        while rank < len(rows) and pivot_col < cols:
            pivot = next(
                (r for r in range(rank, len(rows)) if rows[r][pivot_col] % q != 0),
                None,
            )
            if pivot is None:
                pivot_col += 1
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            s = int(self._inv[rows[rank][pivot_col] % q])
            rows[rank] = [(x * s) % q for x in rows[rank]]
            for r in range(len(rows)):
                if r != rank and rows[r][pivot_col] % q != 0:
                    f = rows[r][pivot_col] % q
                    rows[r] = [
                        (rows[r][k] - f * rows[rank][k]) % q for k in range(cols)
                    ]
            rank += 1
            pivot_col += 1
        return rank

    # -- enumeration helpers for verification ---------------------------------

    def lex_codes(self) -> np.ndarray:
        """Base-q integer codes of all normalized points, in index order.

        Built block-by-block from the enumeration itself (not from the rank
        formula), so the completeness oracle can map coordinates to indices
        through binary search instead of sharing the engine's arithmetic.
        """
        q, N = self.q, self.N
        parts = []
        for j in range(N, -1, -1):
            size = q ** (N - j)
            parts.append(q ** (N - j) + np.arange(size, dtype=np.int64))
        codes = np.concatenate(parts)
        assert codes.shape[0] == self.point_count
        return codes
