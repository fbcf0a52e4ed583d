"""Bundled reference tables of the smallest known complete-cap sizes.

Four series ship as CSV package data, keyed by (N, tag): tag L is the
deterministic lexicographic-order search (exact-match by contract), tag G
the randomized greedy search (informational deltas only).  A manifest pins
row counts and content hashes; loading re-checks those plus the prime-set
composition, so a corrupted or hand-edited data file cannot pass silently.

Known gaps: the (4, L) series omits primes 1069 and 1327 inside its stated
range; they are absent from the source data.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .field import is_prime


class TableError(Exception):
    pass


class DataCorrupt(TableError):
    pass


class UnknownQ(TableError):
    pass


@dataclass(frozen=True)
class SeriesSpec:
    N: int
    tag: str
    prime_limit: int
    extras: tuple[int, ...]
    gaps: tuple[int, ...]
    filename: str


SERIES = {
    (3, "L"): SeriesSpec(3, "L", 4673, (5003, 6007, 7001, 8009), (), "t2L_pg3.csv"),
    (3, "G"): SeriesSpec(3, "G", 3701, (3803, 3907, 4001, 4289), (), "t2G_pg3.csv"),
    (4, "L"): SeriesSpec(4, "L", 1361, (1409,), (1069, 1327), "t2L_pg4.csv"),
    (4, "G"): SeriesSpec(4, "G", 463, (), (), "t2G_pg4.csv"),
}


@dataclass(frozen=True)
class ReferenceTable:
    N: int
    tag: str
    entries: tuple[tuple[int, int], ...]  # (q, size), q strictly increasing

    def sizes(self) -> dict[int, int]:
        return dict(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def _data_bytes(filename: str) -> bytes:
    return resources.files("capsearch").joinpath("data", filename).read_bytes()


@lru_cache(maxsize=None)
def _manifest() -> dict[tuple[int, str], tuple[int, str]]:
    out = {}
    text = _data_bytes("manifest.txt").decode()
    for line in text.splitlines():
        if not line.strip():
            continue
        n, tag, rows, sha = line.split(",")
        out[(int(n), tag)] = (int(rows), sha)
    return out


def _sieve(limit: int) -> set[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = b"\x00" * len(range(i * i, limit + 1, i))
    return {i for i in range(limit + 1) if flags[i]}


@lru_cache(maxsize=None)
def load_table(N: int, tag: str) -> ReferenceTable:
    """Load and invariant-check one bundled series."""
    key = (N, tag)
    if key not in SERIES:
        raise TableError(f"no reference series for (N={N}, tag={tag!r})")
    spec = SERIES[key]
    raw = _data_bytes(spec.filename)
    rows, sha = _manifest().get(key, (None, None))
    if sha is None or hashlib.sha256(raw).hexdigest() != sha:
        raise DataCorrupt(f"{spec.filename}: content hash mismatch")
    reader = csv.reader(raw.decode().splitlines())
    header = next(reader)
    if header != ["q", "size"]:
        raise DataCorrupt(f"{spec.filename}: bad header {header}")
    entries = []
    for row in reader:
        q, size = int(row[0]), int(row[1])
        if size < 1:
            raise DataCorrupt(f"{spec.filename}: nonpositive size at q={q}")
        entries.append((q, size))
    if len(entries) != rows:
        raise DataCorrupt(
            f"{spec.filename}: {len(entries)} rows, manifest says {rows}"
        )
    qs = [q for q, _ in entries]
    if qs != sorted(set(qs)):
        raise DataCorrupt(f"{spec.filename}: q column not strictly increasing")
    for q in qs:
        if not is_prime(q):
            raise DataCorrupt(f"{spec.filename}: composite q={q}")
    want = (_sieve(spec.prime_limit) | set(spec.extras)) - set(spec.gaps)
    if set(qs) != want:
        missing = sorted(want - set(qs))[:5]
        extra = sorted(set(qs) - want)[:5]
        raise DataCorrupt(
            f"{spec.filename}: prime set mismatch (missing {missing}, extra {extra})"
        )
    return ReferenceTable(N=N, tag=tag, entries=tuple(entries))


def min_series(N: int) -> ReferenceTable:
    """Pointwise min of the G and L sizes where both exist, L otherwise."""
    L = load_table(N, "L")
    G = load_table(N, "G").sizes()
    entries = tuple(
        (q, min(size, G[q]) if q in G else size) for q, size in L.entries
    )
    return ReferenceTable(N=N, tag="min", entries=entries)


# -- comparison harness -----------------------------------------------------------


@dataclass
class ComparisonEntry:
    q: int
    computed: int
    reference: int

    @property
    def delta(self) -> int:
        return self.computed - self.reference


@dataclass
class ComparisonReport:
    N: int
    tag: str
    entries: list[ComparisonEntry]

    @property
    def mismatches(self) -> list[ComparisonEntry]:
        return [e for e in self.entries if e.delta != 0]

    @property
    def exact(self) -> bool:
        return not self.mismatches


def compare(computed: list[tuple[int, int]], N: int, tag: str) -> ComparisonReport:
    """Per-q deltas against the reference series.

    For tag L the deterministic contract makes any delta a defect; for tag G
    deltas are informational (the reference used unrecorded schedules).
    """
    ref = load_table(N, tag).sizes()
    entries = []
    for q, size in computed:
        if q not in ref:
            raise UnknownQ(f"q={q} is not in the (N={N}, {tag}) reference series")
        entries.append(ComparisonEntry(q=q, computed=size, reference=ref[q]))
    return ComparisonReport(N=N, tag=tag, entries=entries)
