"""Deterministic fixed-order-of-points search.

Scan the points of PG(N,q) in a fixed order; whenever the current point
lies on no bisecant of the cap built so far, add it.  The first two points
of the order are added unconditionally (any two distinct points are a cap).
Since covered bits never clear, the scan cursor is monotone: one pass over
the order terminates with a complete cap.

Under the lexicographic order the result depends on (N, q) only; its size
and point set are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import Cap, CoverageTracker, VerificationFailed, verify_complete_cap
from .engine import ORACLE_POINT_LIMIT
from .space import ProjSpace

PROGRESS_STRIDE = 1 << 20


class OrderError(Exception):
    pass


@dataclass(frozen=True)
class PointOrder:
    kind: str  # "lex" or "explicit"
    perm: np.ndarray | None = None  # 1-based permutation for "explicit"

    @staticmethod
    def lex() -> "PointOrder":
        return PointOrder("lex")

    @staticmethod
    def explicit(perm) -> "PointOrder":
        arr = np.asarray(perm, dtype=np.int64)
        return PointOrder("explicit", arr)

    def validate(self, space: ProjSpace) -> None:
        if self.kind == "lex":
            return
        if self.perm is None or self.perm.shape[0] != space.point_count:
            raise OrderError(
                f"explicit order must list all {space.point_count} indices"
            )
        if not np.array_equal(
            np.sort(self.perm), np.arange(1, space.point_count + 1, dtype=np.int64)
        ):
            raise OrderError("explicit order is not a permutation of [1..point_count]")


LEX = PointOrder.lex()


def fop_run(
    space: ProjSpace,
    order: PointOrder = LEX,
    progress_sink=None,
    mem_gib: float | None = None,
) -> Cap:
    """Run the fixed-order scan to completion and return the complete cap."""
    order.validate(space)
    tracker = CoverageTracker(space, mem_gib)
    K = tracker._K
    covered = tracker.covered

    if order.kind == "lex":
        tracker.add_point(space.point_at(1))
        tracker.add_point(space.point_at(2))
        cursor0 = 2  # 0-based; scanning resumes at index 3
        next_report = PROGRESS_STRIDE
        while True:
            i0 = int(K.scan_uncovered(covered, cursor0))
            if i0 < 0:
                break
            tracker.add_point(space.point_at(i0 + 1))
            cursor0 = i0 + 1
            if progress_sink is not None and cursor0 >= next_report:
                progress_sink(cursor0, len(tracker), tracker.covered_count / space.point_count)
                next_report += PROGRESS_STRIDE
    else:
        perm0 = (order.perm - 1).astype(np.int64)
        tracker.add_point(space.point_at(int(order.perm[0])))
        tracker.add_point(space.point_at(int(order.perm[1])))
        pos = 2
        next_report = PROGRESS_STRIDE
        while True:
            p = int(K.scan_uncovered_perm(covered, perm0, pos))
            if p < 0:
                break
            tracker.add_point(space.point_at(int(perm0[p]) + 1))
            pos = p + 1
            if progress_sink is not None and pos >= next_report:
                progress_sink(pos, len(tracker), tracker.covered_count / space.point_count)
                next_report += PROGRESS_STRIDE

    if not tracker.is_complete():
        raise VerificationFailed("fop scan ended with uncovered points")
    points = tracker.cap_points()
    if space.point_count <= ORACLE_POINT_LIMIT:
        verdict = verify_complete_cap(space, points)
        if not verdict.is_complete:
            raise VerificationFailed(f"oracle rejects fop output: {verdict.kind}")
        if not np.array_equal(verdict.coverage, tracker.covered):
            raise VerificationFailed("tracker bitmap differs from oracle coverage")
    return Cap(N=space.N, q=space.q, points=points, complete=True, provenance="FOP")


def lexicap_size(N: int, q: int, mem_gib: float | None = None) -> int:
    """Size of the complete cap the lexicographic scan produces in PG(N,q)."""
    return fop_run(ProjSpace(N, q, mem_gib)).size
