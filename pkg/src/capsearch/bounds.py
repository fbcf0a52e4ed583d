"""Normalized cap sizes and the two upper-bound families.

The normalized size of a cap of n points in PG(N,q) is
beta = n / (q**((N-1)/2) * sqrt(ln q)).  Two bounds are evaluated per
record: the constant sqrt(N+2), and the decreasing sqrt(N+1) + 1.3/ln(2q).
Comparisons are exact double comparisons; the small-q violations (q in
{2,3} for N=3, q=2 for N=4) are expected and reported as exceptions by the
callers, never silently absorbed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class BoundsError(Exception):
    pass


class DomainError(BoundsError):
    pass


class MismatchedRecords(BoundsError):
    pass


def beta(N: int, q: int, size: int) -> float:
    """size / (q**((N-1)/2) * sqrt(ln q))."""
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    if N < 2 or size < 1:
        raise DomainError(f"need N >= 2 and size >= 1, got N={N}, size={size}")
    return size / (q ** ((N - 1) / 2) * math.sqrt(math.log(q)))


def bound_values(N: int, q: int) -> tuple[float, float]:
    """(constant bound sqrt(N+2), decreasing bound sqrt(N+1) + 1.3/ln(2q))."""
    return math.sqrt(N + 2), math.sqrt(N + 1) + 1.3 / math.log(2 * q)


@dataclass(frozen=True)
class BoundRecord:
    N: int
    q: int
    size: int
    tag: str  # "L", "G" or "min"
    beta: float
    bound_const: float
    bound_dec: float
    holds_const: bool
    holds_dec: bool


def make_record(N: int, q: int, size: int, tag: str) -> BoundRecord:
    b = beta(N, q, size)
    const, dec = bound_values(N, q)
    return BoundRecord(
        N=N, q=q, size=size, tag=tag, beta=b,
        bound_const=const, bound_dec=dec,
        holds_const=b < const, holds_dec=b < dec,
    )


@dataclass(frozen=True)
class PercentReport:
    pct_LG: float | None  # (size_L - size_G)/size_L * 100, when G present
    pct_bound: float  # (const - beta_L)/const * 100
    pct_bound_alt: float  # same quantity from raw sizes; equal to 1e-9 rel


def percent_diffs(record_L: BoundRecord, record_G: BoundRecord | None = None) -> PercentReport:
    if record_G is not None and (record_L.N, record_L.q) != (record_G.N, record_G.q):
        raise MismatchedRecords(
            f"records disagree: ({record_L.N},{record_L.q}) vs ({record_G.N},{record_G.q})"
        )
    pct_lg = None
    if record_G is not None:
        pct_lg = (record_L.size - record_G.size) / record_L.size * 100.0
    const = record_L.bound_const
    pct_bound = (const - record_L.beta) / const * 100.0
    denom = const * record_L.q ** ((record_L.N - 1) / 2) * math.sqrt(math.log(record_L.q))
    pct_alt = (denom - record_L.size) / denom * 100.0
    return PercentReport(pct_LG=pct_lg, pct_bound=pct_bound, pct_bound_alt=pct_alt)


# -- CSV emission -------------------------------------------------------------
#
# One file per (N, tag) series.  Columns: q, size, beta, bound_const,
# bound_dec, pct_LG (empty when no greedy size exists at that q), pct_bound.
# Floats carry 15 significant digits so a re-parse reproduces beta well
# below the 1e-12 check used in tests.

CSV_HEADER = "q,size,beta,bound_const,bound_dec,pct_LG,pct_bound"


def _fmt(x: float) -> str:
    return format(x, ".15g")


def curve_rows(
    records: list[BoundRecord], lg_sizes: dict[int, tuple[int, int]] | None = None
) -> list[str]:
    """Render records (sorted by q) as CSV lines, header included.

    lg_sizes maps q -> (size_L, size_G) for the cross-series percentage.
    """
    rows = [CSV_HEADER]
    for rec in records:
        pct_lg = ""
        if lg_sizes and rec.q in lg_sizes:
            sL, sG = lg_sizes[rec.q]
            pct_lg = _fmt((sL - sG) / sL * 100.0)
        pct_bound = _fmt((rec.bound_const - rec.beta) / rec.bound_const * 100.0)
        rows.append(
            f"{rec.q},{rec.size},{_fmt(rec.beta)},{_fmt(rec.bound_const)},"
            f"{_fmt(rec.bound_dec)},{pct_lg},{pct_bound}"
        )
    return rows


def emit_curves(
    records: list[BoundRecord],
    sink,
    lg_sizes: dict[int, tuple[int, int]] | None = None,
) -> None:
    own = isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__")
    fh = open(sink, "w", encoding="utf-8", newline="\n") if own else sink
    try:
        for line in curve_rows(records, lg_sizes):
            fh.write(line + "\n")
    finally:
        if own:
            fh.close()
