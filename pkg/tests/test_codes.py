import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from capsearch.codes import (
    AtLeast,
    EmptyCap,
    NotFullRank,
    TooLarge,
    covering_density,
    covering_radius,
    export_matrix,
    matrix_rank_mod,
    min_distance,
    parity_check,
    profile,
)
from capsearch.engine import Cap
from capsearch.fop import fop_run
from capsearch.greedy import GreedyParams, frame, greedy_attempts
from capsearch.space import ProjSpace


def cap_of(space, points, complete=False):
    return Cap(space.N, space.q, points, complete=complete)


def brute_min_distance(cols, q, limit=5):
    """Oracle: smallest w <= limit with a dependent w-subset (rank check)."""
    n = len(cols)
    for w in range(1, min(limit, n) + 1):
        for sub in itertools.combinations(range(n), w):
            M = np.array([cols[i] for i in sub], dtype=np.int64).T
            if matrix_rank_mod(M, q) < w:
                return w
    return None


def brute_covering_radius(cols, q, R):
    """Oracle: max over syndromes of the fewest columns reaching it."""
    best = {0: 0}
    n = len(cols)
    for w in range(1, n + 1):
        for sub in itertools.combinations(range(n), w):
            for coeffs in itertools.product(range(1, q), repeat=w):
                s = [0] * R
                for c, i in zip(coeffs, sub):
                    for k in range(R):
                        s[k] = (s[k] + c * cols[i][k]) % q
                code = 0
                for k in range(R):
                    code = code * q + s[k]
                best.setdefault(code, w)
        if len(best) == q**R:
            return max(best.values())
    return None


def test_parity_check_frame():
    sp = ProjSpace(3, 2)
    H = parity_check(cap_of(sp, frame(sp), complete=True))
    assert H.matrix.shape == (4, 5)
    want = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1]]).T
    assert np.array_equal(H.matrix, want)
    assert export_matrix(H).splitlines()[0] == "1 0 0 0 1"
    with pytest.raises(EmptyCap):
        parity_check(cap_of(sp, []))


def test_degenerate_small_matrix():
    sp = ProjSpace(3, 5)
    H = parity_check(cap_of(sp, [sp.point_at(1), sp.point_at(2)]))
    assert H.matrix.shape == (4, 2)
    assert matrix_rank_mod(H.matrix, 5) == 2  # rank below N+1, flagged by rank check


def test_min_distance_exceptional_five_cap():
    sp = ProjSpace(3, 2)
    assert min_distance(parity_check(cap_of(sp, frame(sp)))) == 5


def test_min_distance_generic_and_oracle():
    for N, q in ((3, 3), (3, 5)):
        sp = ProjSpace(N, q)
        cap = fop_run(sp)
        H = parity_check(cap)
        got = min_distance(H)
        cols = [p.coords for p in cap.points]
        assert got == brute_min_distance(cols, q) == 4


def test_min_distance_dependent_triple_negative_control():
    # a deliberately collinear column set has a dependent 3-set
    sp = ProjSpace(3, 5)
    pts = [sp.point_at(1), sp.point_at(2)]
    third = next(iter(sp.line_points(pts[0], pts[1]) - set(pts)))
    H = parity_check(cap_of(sp, pts + [third, sp.point_at(40)]))
    assert min_distance(H) == 3


def test_min_distance_limits():
    sp = ProjSpace(3, 2)
    H = parity_check(cap_of(sp, frame(sp)))
    assert min_distance(H, limit=4) == AtLeast(5)
    # four points in general position: no dependency at all up to 5
    H4 = parity_check(cap_of(sp, frame(sp)[:4]))
    assert min_distance(H4) == AtLeast(6)


def test_covering_radius_complete_caps():
    for N, q in ((3, 2), (3, 3), (3, 5), (4, 3)):
        cap = fop_run(ProjSpace(N, q))
        assert covering_radius(parity_check(cap)) == 2


def test_covering_radius_incomplete_frame_pg35():
    # an uncovered point's syndrome needs at least 3 columns, but 3 is not
    # the maximum: a syndrome with four distinct nonzero entries needs four
    # frame columns, so the radius is 4
    sp = ProjSpace(3, 5)
    H = parity_check(cap_of(sp, frame(sp)))
    cols = [p.coords for p in frame(sp)]
    assert brute_covering_radius(cols, 5, 4) == 4
    assert covering_radius(H) == 4


def test_covering_radius_requires_full_rank():
    sp = ProjSpace(3, 2)
    with pytest.raises(NotFullRank):
        covering_radius(parity_check(cap_of(sp, [sp.point_at(1)])))


def test_covering_radius_one():
    # all of PG(N,q) as columns: every syndrome is a multiple of one column
    sp = ProjSpace(2, 2)
    pts = [sp.point_at(i) for i in range(1, sp.point_count + 1)]
    H = parity_check(Cap(2, 2, pts, complete=False))
    assert covering_radius(H) == 1


def test_covering_density_exact():
    assert covering_density(5, 1, 2, 2)[0] == 1
    assert covering_density(11, 6, 2, 3)[0] == 1
    mu, mu_f = covering_density(8, 4, 2, 3)
    assert mu == Fraction(129, 81)
    assert mu_f == pytest.approx(1.5926, abs=1e-4)
    assert covering_density(10, 3, 10, 7)[0] >= 1  # r = n covers everything


def test_profile_perfect_five_cap():
    sp = ProjSpace(3, 2)
    prof = profile(cap_of(sp, frame(sp), complete=True))
    assert (prof.n, prof.k, prof.d, prof.r) == (5, 1, 5, 2)
    assert prof.mu_exact == 1 and prof.quasi_perfect and prof.perfect


def test_profile_golay_parameters():
    sp = ProjSpace(4, 3)
    run = greedy_attempts(sp, GreedyParams(master_seed=2024, n_q=200), frame(sp), stop_at_size=11)
    assert run.best.cap.size == 11
    prof = profile(run.best.cap)
    assert (prof.n, prof.k, prof.d, prof.r) == (11, 6, 5, 2)
    assert prof.mu_exact == 1 and prof.quasi_perfect


def test_profile_generic_complete():
    cap = fop_run(ProjSpace(3, 5))
    prof = profile(cap)
    assert prof.n == 16 and prof.k == 12
    assert prof.d == 4 and prof.r == 2
    assert prof.quasi_perfect and not prof.perfect


def test_profile_incomplete_not_quasi_perfect():
    sp = ProjSpace(3, 5)
    prof = profile(cap_of(sp, frame(sp)))
    assert prof.r >= 3 and not prof.quasi_perfect


def test_five_set_budget():
    sp = ProjSpace(3, 3)
    cap = fop_run(ProjSpace(3, 13))
    H = parity_check(cap)
    # 4-sets exist so the 5-level budget never triggers here
    assert min_distance(H) == 4
    del sp


def test_random_code_sanity():
    # caps never have dependent triples; random projective multisets often do
    sp = ProjSpace(3, 3)
    rnd = random.Random(11)
    found3 = 0
    for _ in range(20):
        pts = [sp.point_at(rnd.randrange(1, sp.point_count + 1)) for _ in range(8)]
        pts = list({p.index: p for p in pts}.values())
        if len(pts) < 4:
            continue
        H = parity_check(cap_of(sp, pts))
        d = min_distance(H)
        b = brute_min_distance([p.coords for p in pts], 3)
        want = b if b is not None else AtLeast(6)
        assert d == want
        if d == 3:
            found3 += 1
    assert found3 > 0
