import itertools
import random

import pytest

from capsearch.field import NotPrime
from capsearch.space import (
    DimensionTooSmall,
    DuplicatePoints,
    IndexOutOfRange,
    NotNormalized,
    ProjSpace,
    SamePoint,
    SpaceTooLarge,
    ZeroVector,
)


def lex_enumerate(N, q):
    """Ground-truth enumeration: all normalized tuples in lex order."""
    pts = []
    for tup in itertools.product(range(q), repeat=N + 1):
        if not any(tup):
            continue
        lead = next(x for x in tup if x)
        if lead == 1:
            pts.append(tup)
    assert pts == sorted(pts)
    return pts


def test_point_counts():
    assert ProjSpace(3, 2).point_count == 15
    assert ProjSpace(4, 3).point_count == 121
    assert ProjSpace(3, 5).point_count == 156


def test_huge_space_budget():
    # exact closed form evaluates fine in big ints, but the coverage bitmap
    # cannot fit the default budget
    with pytest.raises(SpaceTooLarge):
        ProjSpace(3, 7001)
    exact = (7001**4 - 1) // 7000
    sp = ProjSpace(3, 7001, mem_gib=1024.0)
    assert sp.point_count == exact


def test_construction_gates():
    with pytest.raises(DimensionTooSmall):
        ProjSpace(1, 5)
    with pytest.raises(NotPrime):
        ProjSpace(3, 9)


def test_normalize_examples():
    sp5 = ProjSpace(3, 5)
    assert sp5.normalize((0, 2, 3, 1)).coords == (0, 1, 4, 3)
    sp7 = ProjSpace(3, 7)
    p = sp7.normalize((1, 4, 0, 6))
    assert p.coords == (1, 4, 0, 6)
    assert sp7.normalize(p.coords) == p  # idempotent
    with pytest.raises(ZeroVector):
        sp5.normalize((0, 0, 0, 0))


def test_index_examples():
    sp = ProjSpace(3, 2)
    assert sp.point_at(1).coords == (0, 0, 0, 1)
    assert sp.index_of((1, 0, 0, 0)) == 8
    assert sp.index_of((0, 0, 1, 1)) == 3
    with pytest.raises(NotNormalized):
        ProjSpace(3, 5).index_of((0, 2, 3, 1))
    with pytest.raises(IndexOutOfRange):
        sp.point_at(16)
    with pytest.raises(IndexOutOfRange):
        sp.point_at(0)


@pytest.mark.parametrize("N,q", [(2, 2), (2, 5), (3, 2), (3, 3), (3, 5), (4, 2), (4, 3)])
def test_enumeration_matches_oracle(N, q):
    sp = ProjSpace(N, q)
    truth = lex_enumerate(N, q)
    assert sp.point_count == len(truth)
    for i, coords in enumerate(truth, start=1):
        assert sp.point_at(i).coords == coords
        assert sp.index_of(coords) == i


@pytest.mark.parametrize("N,q", [(3, 13), (4, 5)])
def test_round_trip_and_monotone(N, q):
    sp = ProjSpace(N, q)
    prev = None
    for i in range(1, sp.point_count + 1):
        c = sp.point_at(i).coords
        assert sp.index_of(c) == i
        if prev is not None:
            assert prev < c  # lex monotone
        prev = c


@pytest.mark.parametrize("q", [3, 5, 13])
def test_scale_invariance(q):
    sp = ProjSpace(3, q)
    rnd = random.Random(q)
    for _ in range(100):
        c = tuple(rnd.randrange(q) for _ in range(4))
        if not any(c):
            continue
        base = sp.normalize(c)
        for lam in range(1, q):
            scaled = tuple((lam * x) % q for x in c)
            assert sp.normalize(scaled) == base


def test_line_points_pg32():
    sp = ProjSpace(3, 2)
    p, r = sp.normalize((0, 0, 0, 1)), sp.normalize((0, 0, 1, 0))
    line = {pt.coords for pt in sp.line_points(p, r)}
    assert line == {(0, 0, 0, 1), (0, 0, 1, 0), (0, 0, 1, 1)}
    with pytest.raises(SamePoint):
        sp.line_points(p, p)


@pytest.mark.parametrize("q", [3, 5])
def test_line_size_and_symmetry(q):
    sp = ProjSpace(3, q)
    rnd = random.Random(17 * q)
    for _ in range(100):
        i, j = rnd.sample(range(1, sp.point_count + 1), 2)
        p, r = sp.point_at(i), sp.point_at(j)
        line = sp.line_points(p, r)
        assert len(line) == q + 1
        assert p in line and r in line
        assert line == sp.line_points(r, p)


def test_collinear_examples():
    sp = ProjSpace(3, 2)
    a, b = sp.normalize((0, 0, 0, 1)), sp.normalize((0, 0, 1, 0))
    assert sp.collinear(a, b, sp.normalize((0, 0, 1, 1)))
    assert not sp.collinear(a, b, sp.normalize((0, 1, 0, 0)))
    with pytest.raises(DuplicatePoints):
        sp.collinear(a, b, a)


def test_collinear_vs_line_points():
    # rank-based collinearity agrees with line enumeration both on and off
    sp = ProjSpace(3, 7)
    rnd = random.Random(7)
    for _ in range(30):
        i, j = rnd.sample(range(1, sp.point_count + 1), 2)
        p, r = sp.point_at(i), sp.point_at(j)
        line = sp.line_points(p, r)
        for s in line:
            if s.index not in (p.index, r.index):
                assert sp.collinear(p, r, s)
        for _ in range(50):
            s = sp.point_at(rnd.randrange(1, sp.point_count + 1))
            if s in line or s.index in (p.index, r.index):
                continue
            assert not sp.collinear(p, r, s)


def test_two_points_one_line():
    # any two points lie on exactly one common line
    sp = ProjSpace(3, 3)
    rnd = random.Random(3)
    for _ in range(25):
        i, j = rnd.sample(range(1, sp.point_count + 1), 2)
        p, r = sp.point_at(i), sp.point_at(j)
        line = sp.line_points(p, r)
        for s in line:
            for t in line:
                if s.index < t.index:
                    assert sp.line_points(s, t) == line
