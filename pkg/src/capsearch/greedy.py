"""Two-stage randomized greedy search for small complete caps.

Every step adds the point maximizing the objective f = number of covered
points after the addition.  Designated random steps restrict the argmax to
a small uniformly sampled pool of uncovered candidates; all other steps
consider every uncovered point.  Stage 1 starts from the frame (unit points
plus the all-ones point) with delta_q leading random steps and produces a
baseline complete cap.  Stage 2 reruns from the same start n_q times with
per-attempt seeds, randomizing two or three of the first five steps, and
keeps the smallest result.

Scoring: for candidate P, f(S+P) - f(S) depends only on the number of
uncovered points on the |S| lines joining P to the cap, so the argmax of f
equals the argmax of score(P) = sum over cap points B of u(line(B,P)),
where u counts uncovered points on the line (P itself included).  The fast
scorer keeps, per cap point B, a table of line ids (quotient ranks) for all
points plus per-line uncovered counts, making each candidate O(|S|) lookups;
when those tables would exceed the memory budget it falls back to walking
the candidate lines directly.  Both paths produce identical integer scores.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .engine import Cap, CoverageTracker, tracker_from_points
from .engine import DuplicatePoint, PointCovered
from .space import ProjPoint, ProjSpace
from .rng import SplitMix64, child_seed


class GreedyError(Exception):
    pass


class NoCandidates(GreedyError):
    pass


class S0NotACap(GreedyError):
    pass


class ConfigError(GreedyError):
    pass


@dataclass(frozen=True)
class GreedyParams:
    """Schedule of the randomized search; defaults are config-overridable.

    pool sizes: d(step) = max(10, ceil(q / 2**step)), overridable per step
    through pool_overrides (config keys ``pool.<step>``).
    """

    delta_q: int = 3
    n_q: int = 50
    stage2_random_positions: tuple[int, ...] = (1, 3, 5)
    master_seed: int = 0
    pool_overrides: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.delta_q < 0:
            raise ConfigError("delta_q must be >= 0")
        if self.n_q < 0:
            raise ConfigError("n_q must be >= 0")
        pos = tuple(sorted(set(self.stage2_random_positions)))
        if not set(pos) <= {1, 2, 3, 4, 5}:
            raise ConfigError("random positions must lie in 1..5")
        if not 2 <= len(pos) <= 3:
            raise ConfigError("need two or three random positions among the first five steps")
        object.__setattr__(self, "stage2_random_positions", pos)
        for step, d in self.pool_overrides.items():
            if step < 1 or d < 1:
                raise ConfigError(f"bad pool override pool.{step} = {d}")

    def pool_size(self, q: int, step: int) -> int:
        if step in self.pool_overrides:
            return self.pool_overrides[step]
        return max(10, math.ceil(q / 2**step))

    def digest(self) -> str:
        text = (
            f"delta_q={self.delta_q};n_q={self.n_q};"
            f"pos={self.stage2_random_positions};"
            f"pools={sorted(self.pool_overrides.items())}"
        )
        return hashlib.sha256(text.encode()).hexdigest()[:12]


def frame(space: ProjSpace) -> list[ProjPoint]:
    """The N+2 points in general position: unit points plus all-ones."""
    pts = []
    for j in range(space.N + 1):
        coords = tuple(1 if k == j else 0 for k in range(space.N + 1))
        pts.append(space.normalize(coords))
    pts.append(space.normalize(tuple(1 for _ in range(space.N + 1))))
    return pts


# -- scoring -------------------------------------------------------------------


class ExactScorer:
    """Exact candidate scores; table-backed while memory allows.

    Tables: per cap point B, lid[i] = id of the line through B and point i
    (ranked in the quotient PG(N-1,q)) and u[lid] = uncovered points per
    line.  If the next table would blow the byte budget the scorer drops
    all tables and answers from direct line walks instead.
    """

    def __init__(self, tracker: CoverageTracker, table_budget_bytes: int | None = None):
        self.tracker = tracker
        self.space = tracker.space
        self._K = tracker._K
        P = self.space.point_count
        L = self.space.lines_per_point
        self._lid_dtype = np.uint16 if L + 1 <= 0xFFFF else np.uint32
        self._row_bytes = P * self._lid_dtype().itemsize + (L + 1) * 4
        if table_budget_bytes is None:
            budget = int(self.space.mem_gib * 2**30 - P)
            table_budget_bytes = max(0, budget // 2)
        self._budget = table_budget_bytes
        self._bytes = 0
        self._tables: list[tuple[np.ndarray, np.ndarray]] = []
        self._naive = False
        for bi in range(len(tracker)):
            self._append_table(tracker._coords[bi])

    @property
    def uses_tables(self) -> bool:
        return not self._naive

    def _append_table(self, bcoords: np.ndarray) -> None:
        if self._naive:
            return
        if self._bytes + self._row_bytes > self._budget:
            self._tables = []
            self._naive = True
            return
        sp = self.space
        P = sp.point_count
        L = sp.lines_per_point
        lid = np.empty(P, dtype=self._lid_dtype)
        u = np.zeros(L + 1, dtype=np.int32)
        jb = int(np.argmax(bcoords != 0))
        self._K.build_line_table(
            bcoords, jb, self.tracker.covered, sp.q, sp._inv, sp._starts,
            sp._line_starts, lid, u,
        )
        self._tables.append((lid, u))
        self._bytes += self._row_bytes

    def on_added(self, p: ProjPoint, newly: np.ndarray) -> None:
        """Keep tables in sync after tracker.add_point(p) returned newly."""
        if not self._naive:
            for lid, u in self._tables:
                self._K.u_decrement_one(newly, lid, u)
        self._append_table(np.array(p.coords, dtype=np.int64))

    def scores_for(self, idx0: np.ndarray) -> np.ndarray:
        """score[i] = sum over cap points B of #uncovered on line(B, idx[i])."""
        out = np.zeros(idx0.shape[0], dtype=np.int64)
        if self._naive:
            tr = self.tracker
            sp = self.space
            self._K.score_naive_some(
                idx0, tr._coords[: len(tr)], tr._idx0[: len(tr)], len(tr),
                tr.covered, sp.q, sp._inv, sp._starts, out,
            )
        else:
            for lid, u in self._tables:
                self._K.score_table_one(idx0, lid, u, out)
        return out


def _naive_scorer(tracker: CoverageTracker) -> ExactScorer:
    return ExactScorer(tracker, table_budget_bytes=0)


# -- single steps ---------------------------------------------------------------


def _pick_argmax(idx0: np.ndarray, scores: np.ndarray, rng: SplitMix64) -> int:
    mx = scores.max()
    ties = idx0[scores == mx]
    return int(ties[rng.below(ties.shape[0])])


def sample_uncovered(tracker: CoverageTracker, k: int, rng: SplitMix64) -> np.ndarray:
    """k distinct uncovered 0-based indices, uniform, returned sorted.

    Rejection sampling against the bitmap while uncovered points are
    plentiful; otherwise sample from the explicit uncovered list.
    """
    uncovered = tracker.uncovered_count()
    k = min(k, uncovered)
    if k <= 0:
        return np.empty(0, dtype=np.int64)
    P = tracker.space.point_count
    covered = tracker.covered
    if uncovered >= 2 * k:
        chosen: set[int] = set()
        while len(chosen) < k:
            r = rng.below(P)
            if covered[r] == 0 and r not in chosen:
                chosen.add(r)
        return np.array(sorted(chosen), dtype=np.int64)
    pool = tracker.uncovered_indices0()
    n = pool.shape[0]
    for x in range(k):  # partial Fisher-Yates
        j = x + rng.below(n - x)
        pool[x], pool[j] = pool[j], pool[x]
    return np.sort(pool[:k])


def step_nonrandom(
    tracker: CoverageTracker, rng: SplitMix64, scorer: ExactScorer | None = None
) -> ProjPoint:
    """Argmax of f over every uncovered point; ties broken uniformly."""
    if tracker.is_complete():
        raise NoCandidates("no uncovered points remain")
    scorer = scorer or _naive_scorer(tracker)
    idx0 = tracker.uncovered_indices0()
    scores = scorer.scores_for(idx0)
    return tracker.space.point_at(_pick_argmax(idx0, scores, rng) + 1)


def step_random(
    tracker: CoverageTracker,
    pool_size: int,
    rng: SplitMix64,
    scorer: ExactScorer | None = None,
) -> ProjPoint:
    """Argmax of f over a sampled pool of uncovered points."""
    if tracker.is_complete():
        raise NoCandidates("no uncovered points remain")
    if pool_size < 1:
        raise GreedyError("pool size must be >= 1")
    scorer = scorer or _naive_scorer(tracker)
    pool = sample_uncovered(tracker, pool_size, rng)
    scores = scorer.scores_for(pool)
    return tracker.space.point_at(_pick_argmax(pool, scores, rng) + 1)


def _run_to_complete(
    tracker: CoverageTracker,
    scorer: ExactScorer,
    rng: SplitMix64,
    params: GreedyParams,
    random_steps: set[int],
    f_trace: list[int] | None = None,
) -> None:
    q = tracker.space.q
    step = 1
    while not tracker.is_complete():
        if step in random_steps:
            p = step_random(tracker, params.pool_size(q, step), rng, scorer)
        else:
            p = step_nonrandom(tracker, rng, scorer)
        newly = tracker.add_point(p)
        scorer.on_added(p, newly)
        if f_trace is not None:
            f_trace.append(tracker.covered_count)
        step += 1


# -- stages ----------------------------------------------------------------------


@dataclass
class AttemptResult:
    cap: Cap
    attempt_index: int
    seed_used: int
    f_trace: list[int] | None = None


@dataclass
class GreedyRun:
    best: AttemptResult | None
    sizes: list[int]

    @property
    def empty(self) -> bool:
        return self.best is None


def greedy_stage1(
    space: ProjSpace,
    params: GreedyParams,
    rng: SplitMix64 | None = None,
    mem_gib: float | None = None,
    table_budget_bytes: int | None = None,
) -> Cap:
    """Frame start, delta_q leading random steps, then exhaustive steps."""
    if rng is None:
        rng = SplitMix64(child_seed(params.master_seed, 0))
    tracker = tracker_from_points(space, frame(space), mem_gib)
    scorer = ExactScorer(tracker, table_budget_bytes)
    random_steps = set(range(1, params.delta_q + 1))
    _run_to_complete(tracker, scorer, rng, params, random_steps)
    return Cap(
        N=space.N,
        q=space.q,
        points=tracker.cap_points(),
        complete=True,
        provenance=f"greedy seed={params.master_seed} stage=1 params={params.digest()}",
    )


def _one_attempt(
    space: ProjSpace,
    params: GreedyParams,
    base: CoverageTracker,
    k: int,
    table_budget_bytes: int | None,
    collect_trace: bool,
) -> AttemptResult:
    seed = child_seed(params.master_seed, k)
    rng = SplitMix64(seed)
    tracker = base.clone()
    scorer = ExactScorer(tracker, table_budget_bytes)
    trace: list[int] | None = [tracker.covered_count] if collect_trace else None
    _run_to_complete(tracker, scorer, rng, params, set(params.stage2_random_positions), trace)
    cap = Cap(
        N=space.N,
        q=space.q,
        points=tracker.cap_points(),
        complete=True,
        provenance=f"greedy seed={params.master_seed} attempt={k} params={params.digest()}",
    )
    return AttemptResult(cap=cap, attempt_index=k, seed_used=seed, f_trace=trace)


def greedy_attempts(
    space: ProjSpace,
    params: GreedyParams,
    s0: list[ProjPoint],
    jobs: int = 1,
    stop_at_size: int | None = None,
    mem_gib: float | None = None,
    table_budget_bytes: int | None = None,
    collect_trace: bool = False,
) -> GreedyRun:
    """n_q attempts from the same s0, each with its own derived seed.

    Attempt k runs with seed child_seed(master_seed, k); the step ordinals
    listed in stage2_random_positions (counted from |s0|+1) are random, the
    rest exhaustive.  Returns the smallest cap (ties: lowest attempt index)
    plus all sizes.  Results are identical for any jobs value because the
    seeds are attempt-indexed.  stop_at_size halts after the first attempt
    reaching that size (attempts are then evaluated strictly in order).
    """
    try:
        base = tracker_from_points(space, s0, mem_gib)
    except (DuplicatePoint, PointCovered) as exc:
        raise S0NotACap(f"starting set is not a cap: {exc}") from exc
    if params.n_q == 0:
        return GreedyRun(best=None, sizes=[])
    if table_budget_bytes is None and jobs > 1:
        P = space.point_count
        whole = max(0, int(space.mem_gib * 2**30 - P) // 2)
        table_budget_bytes = whole // jobs

    results: list[AttemptResult] = []
    if stop_at_size is not None or jobs <= 1:
        for k in range(1, params.n_q + 1):
            res = _one_attempt(space, params, base, k, table_budget_bytes, collect_trace)
            results.append(res)
            if stop_at_size is not None and res.cap.size <= stop_at_size:
                break
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futs = [
                pool.submit(
                    _one_attempt, space, params, base, k, table_budget_bytes, collect_trace
                )
                for k in range(1, params.n_q + 1)
            ]
            results = [f.result() for f in futs]

    best = min(results, key=lambda r: (r.cap.size, r.attempt_index))
    return GreedyRun(best=best, sizes=[r.cap.size for r in results])


# -- config file -------------------------------------------------------------------
#
# key = value per line; '#' starts a comment.  Keys: delta_q, n_q,
# random_positions (comma list), master_seed, warm_start (path), pool.<step>.


def load_config(path: str) -> tuple[dict, str | None]:
    """Parse a greedy config file into GreedyParams kwargs + warm-start path."""
    kwargs: dict = {}
    pools: dict[int, int] = {}
    warm: str | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = text.partition("=")
            key = key.strip()
            value = value.strip()
            try:
                if key == "delta_q":
                    kwargs["delta_q"] = int(value)
                elif key == "n_q":
                    kwargs["n_q"] = int(value)
                elif key == "master_seed":
                    kwargs["master_seed"] = int(value)
                elif key == "random_positions":
                    kwargs["stage2_random_positions"] = tuple(
                        int(x) for x in value.split(",") if x.strip()
                    )
                elif key == "warm_start":
                    warm = value
                elif key.startswith("pool."):
                    pools[int(key[5:])] = int(value)
                else:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    if pools:
        kwargs["pool_overrides"] = pools
    return kwargs, warm
