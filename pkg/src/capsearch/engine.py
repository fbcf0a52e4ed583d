"""Growing caps with incremental bisecant coverage.

A CoverageTracker owns the bitmap of points lying on some bisecant of the
current cap (cap points included once the cap has two points: they lie on
their own bisecants).  Legality of an addition, the completeness test and
the fixed-order scan are all single bitmap lookups.

verify_complete_cap is the independent oracle: it re-derives collinearity
from matrix rank and recomputes coverage from scratch through a different
line parameterization, different inverses (Fermat) and an index lookup by
binary search instead of the closed-form rank.  Trackers and the oracle
deliberately share no arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .space import IndexOutOfRange, ProjPoint, ProjSpace

ORACLE_POINT_LIMIT = 10**6


class EngineError(Exception):
    pass


class AllocationFailure(EngineError):
    pass


class DuplicatePoint(EngineError):
    pass


class PointCovered(EngineError):
    pass


class ParseError(EngineError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class InconsistentHeader(EngineError):
    pass


class VerificationFailed(EngineError):
    pass


@dataclass
class Cap:
    N: int
    q: int
    points: list[ProjPoint]
    complete: bool
    provenance: str = "external"

    @property
    def size(self) -> int:
        return len(self.points)


class CoverageTracker:
    """Single-writer incremental coverage over one growing cap."""

    def __init__(self, space: ProjSpace, mem_gib: float | None = None):
        budget = space.mem_gib if mem_gib is None else float(mem_gib)
        need = space.point_count  # one byte per point
        if need > budget * 2**30:
            raise AllocationFailure(
                f"coverage bitmap for PG({space.N},{space.q}) needs "
                f"{need / 2**30:.2f} GiB, budget is {budget} GiB"
            )
        self.space = space
        self.covered = np.zeros(space.point_count, dtype=np.uint8)
        self.covered_count = 0
        self._K = kernels.active()
        cap0 = 64
        self._coords = np.zeros((cap0, space.N + 1), dtype=np.int64)
        self._idx0 = np.zeros(cap0, dtype=np.int64)
        self._size = 0
        self._index_set: set[int] = set()
        self._newly = np.zeros(1, dtype=np.int64)

    def __len__(self) -> int:
        return self._size

    @property
    def cap_indices(self) -> list[int]:
        return [int(i) + 1 for i in self._idx0[: self._size]]

    def cap_points(self) -> list[ProjPoint]:
        return [
            ProjPoint(tuple(int(c) for c in self._coords[i]), int(self._idx0[i]) + 1)
            for i in range(self._size)
        ]

    def cap_coords(self) -> np.ndarray:
        return self._coords[: self._size]

    def is_complete(self) -> bool:
        return self.covered_count == self.space.point_count

    def uncovered_count(self) -> int:
        return self.space.point_count - self.covered_count

    def uncovered_indices0(self) -> np.ndarray:
        return np.flatnonzero(self.covered == 0).astype(np.int64)

    def _grow(self):
        m = self._size
        if m == self._coords.shape[0]:
            self._coords = np.concatenate([self._coords, np.zeros_like(self._coords)])
            self._idx0 = np.concatenate([self._idx0, np.zeros_like(self._idx0)])
        need = (m + 1) * (self.space.q + 1)
        if self._newly.shape[0] < need:
            self._newly = np.zeros(need, dtype=np.int64)

    def add_point(self, p: ProjPoint) -> np.ndarray:
        """Append p, mark the new bisecants; returns newly covered 0-based
        indices (order unspecified, view valid until the next add)."""
        if p.index in self._index_set:
            raise DuplicatePoint(f"point #{p.index} already in cap")
        i0 = p.index - 1
        if self._size >= 2 and self.covered[i0]:
            raise PointCovered(
                f"point #{p.index} lies on a bisecant; adding it would make "
                "three collinear points"
            )
        self._grow()
        sp = self.space
        a = np.array(p.coords, dtype=np.int64)
        cnt = self._K.mark_lines(
            a,
            self._coords[: self._size],
            self._idx0[: self._size],
            self._size,
            self.covered,
            sp.q,
            sp._inv,
            sp._starts,
            self._newly,
        )
        self._coords[self._size] = a
        self._idx0[self._size] = i0
        self._size += 1
        self._index_set.add(p.index)
        self.covered_count += int(cnt)
        return self._newly[:cnt]

    def first_uncovered_from(self, start: int) -> int | None:
        """Smallest 1-based index >= start of an uncovered point, or None."""
        if not 1 <= start <= self.space.point_count + 1:
            raise IndexOutOfRange(
                f"start {start} outside [1, {self.space.point_count + 1}]"
            )
        i = self._K.scan_uncovered(self.covered, start - 1)
        return None if i < 0 else int(i) + 1

    def clone(self) -> "CoverageTracker":
        other = object.__new__(CoverageTracker)
        other.space = self.space
        other.covered = self.covered.copy()
        other.covered_count = self.covered_count
        other._K = self._K
        other._coords = self._coords.copy()
        other._idx0 = self._idx0.copy()
        other._size = self._size
        other._index_set = set(self._index_set)
        other._newly = np.zeros_like(self._newly)
        return other


# -- independent completeness oracle ----------------------------------------

COMPLETE = "complete"
INCOMPLETE = "incomplete"
NOT_A_CAP = "not_a_cap"


@dataclass
class CapVerdict:
    kind: str
    witness: int | None = None  # 1-based uncovered point when incomplete
    triple: tuple[int, int, int] | None = None  # 1-based positions into the input
    coverage: np.ndarray | None = field(default=None, repr=False)

    @property
    def is_complete(self) -> bool:
        return self.kind == COMPLETE


def verify_complete_cap(space: ProjSpace, points: list[ProjPoint]) -> CapVerdict:
    """Brute-force verdict: triple check, then from-scratch coverage.

    Shares no code with CoverageTracker: collinearity comes from rank
    reduction and coverage from line re-enumeration plus binary search in
    the explicit lex code table.
    """
    K = kernels.active()
    n = len(points)
    coords = np.array([p.coords for p in points], dtype=np.int64).reshape(n, space.N + 1)
    if n >= 3:
        enc = int(K.first_collinear_triple(coords, space.q, space._inv))
        if enc >= 0:
            k2 = enc % n
            j = (enc // n) % n
            i = enc // (n * n)
            return CapVerdict(NOT_A_CAP, triple=(i + 1, j + 1, k2 + 1))
    cov = np.zeros(space.point_count, dtype=np.uint8)
    if n >= 2:
        codes = space.lex_codes()
        K.oracle_cover(coords, space.q, codes, cov)
    miss = K.scan_uncovered(cov, 0)
    if miss < 0:
        return CapVerdict(COMPLETE, coverage=cov)
    return CapVerdict(INCOMPLETE, witness=int(miss) + 1, coverage=cov)


# -- cap construction helpers -------------------------------------------------


def tracker_from_points(
    space: ProjSpace, points: list[ProjPoint], mem_gib: float | None = None
) -> CoverageTracker:
    tracker = CoverageTracker(space, mem_gib)
    for p in points:
        tracker.add_point(p)
    return tracker


# -- cap file format ----------------------------------------------------------
#
# line 1 : PG <N> <q> <size>
# line 2+: optional comment lines starting with '#'; the writer always emits
#          '# provenance: <text>'
# then   : exactly <size> rows of N+1 space-separated coordinates, one
#          normalized point per row, in insertion order.


def cap_write(cap: Cap, sink) -> None:
    own = isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__")
    fh = open(sink, "w", encoding="utf-8", newline="\n") if own else sink
    try:
        fh.write(f"PG {cap.N} {cap.q} {cap.size}\n")
        fh.write(f"# provenance: {cap.provenance}\n")
        for p in cap.points:
            fh.write(" ".join(str(c) for c in p.coords) + "\n")
    finally:
        if own:
            fh.close()


def cap_read(source, mem_gib: float | None = None, verify: bool = True) -> Cap:
    """Parse a cap file; with verify=True re-establish the cap property.

    Verification runs through tracker reconstruction (which also decides
    completeness); spaces up to ORACLE_POINT_LIMIT points are additionally
    checked with the brute-force oracle.
    """
    own = isinstance(source, (str, bytes)) or hasattr(source, "__fspath__")
    fh = open(source, "r", encoding="utf-8") if own else source
    try:
        lines = fh.read().splitlines()
    finally:
        if own:
            fh.close()
    if not lines:
        raise ParseError(1, "empty cap file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "PG":
        raise ParseError(1, f"bad header {lines[0]!r}, expected 'PG <N> <q> <size>'")
    try:
        N, q, size = int(head[1]), int(head[2]), int(head[3])
    except ValueError:
        raise ParseError(1, f"non-integer header fields in {lines[0]!r}") from None
    space = ProjSpace(N, q, mem_gib)
    provenance = "external"
    rows: list[tuple[int, tuple[int, ...]]] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text:
            continue
        if text.startswith("#"):
            body = text[1:].strip()
            if body.startswith("provenance:"):
                provenance = body[len("provenance:") :].strip()
            continue
        parts = text.split()
        if len(parts) != N + 1:
            raise ParseError(lineno, f"expected {N + 1} coordinates, got {len(parts)}")
        try:
            vals = tuple(int(x) for x in parts)
        except ValueError:
            raise ParseError(lineno, f"non-integer coordinate in {text!r}") from None
        for v in vals:
            if not 0 <= v < q:
                raise ParseError(lineno, f"coordinate {v} outside [0, {q})")
        rows.append((lineno, vals))
    if len(rows) != size:
        raise InconsistentHeader(
            f"header announces {size} points but file has {len(rows)} rows"
        )
    points = []
    for lineno, vals in rows:
        norm = space.normalize(vals)
        if norm.coords != vals:
            raise ParseError(lineno, f"point {vals} is not in normalized form")
        points.append(norm)
    complete = False
    if verify:
        try:
            tracker = tracker_from_points(space, points, mem_gib)
        except (DuplicatePoint, PointCovered) as exc:
            raise VerificationFailed(f"file points are not a cap: {exc}") from exc
        complete = tracker.is_complete()
        if space.point_count <= ORACLE_POINT_LIMIT:
            verdict = verify_complete_cap(space, points)
            if verdict.kind == NOT_A_CAP:
                raise VerificationFailed(
                    f"oracle found collinear triple at positions {verdict.triple}"
                )
            if verdict.is_complete != complete:
                raise VerificationFailed(
                    "tracker and oracle disagree on completeness"
                )
    return Cap(N=N, q=q, points=points, complete=complete, provenance=provenance)
