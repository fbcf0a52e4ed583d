"""Command-line surface.

Subcommands: fop, greedy, verify, bounds, code, compare.  Results go to
stdout (machine-parseable, deterministic for the deterministic commands);
diagnostics and optional progress go to stderr.  Exit codes: 0 success,
1 verification failure, 2 usage error, 3 resource/budget error.
"""

from __future__ import annotations

import argparse
import os
import secrets
import sys

import numpy as np

from . import bounds as bounds_mod
from . import codes as codes_mod
from . import tables as tables_mod
from .engine import (
    AllocationFailure,
    EngineError,
    InconsistentHeader,
    ORACLE_POINT_LIMIT,
    ParseError,
    VerificationFailed,
    cap_read,
    cap_write,
    tracker_from_points,
    verify_complete_cap,
)
from .field import FieldError, NotPrime
from .fop import LEX, OrderError, PointOrder, fop_run
from .greedy import ConfigError, GreedyError, GreedyParams, frame, greedy_attempts, greedy_stage1, load_config
from .space import DimensionTooSmall, ProjSpace, SpaceError, SpaceTooLarge
from .tables import DataCorrupt, TableError, UnknownQ

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _eprint(*args):
    print(*args, file=sys.stderr)


def _out_stream(path: str | None):
    return open(path, "w", encoding="utf-8", newline="\n") if path else sys.stdout


# -- subcommands -----------------------------------------------------------------


def _cmd_fop(args) -> int:
    space = ProjSpace(args.n, args.q, args.mem_gib)
    if args.order == "lex":
        order = LEX
    elif args.order.startswith("file:"):
        perm = np.loadtxt(args.order[5:], dtype=np.int64).ravel()
        order = PointOrder.explicit(perm)
    else:
        raise OrderError(f"--order must be 'lex' or 'file:<path>', got {args.order!r}")
    sink = None
    if args.progress:
        def sink(scanned, size, frac):
            _eprint(f"progress scanned={scanned} cap={size} covered={frac:.4f}")
    cap = fop_run(space, order, progress_sink=sink, mem_gib=args.mem_gib)
    if args.out:
        cap_write(cap, args.out)
    print(f"fop N={args.n} q={args.q} size={cap.size}")
    return EXIT_OK


def _cmd_greedy(args) -> int:
    kwargs, warm = {}, None
    if args.config:
        kwargs, warm = load_config(args.config)
    if args.seed is not None:
        kwargs["master_seed"] = args.seed
    elif "master_seed" not in kwargs:
        kwargs["master_seed"] = secrets.randbits(64)
    if args.attempts is not None:
        kwargs["n_q"] = args.attempts
    if args.warm_start:
        warm = args.warm_start
    params = GreedyParams(**kwargs)
    space = ProjSpace(args.n, args.q, args.mem_gib)
    print(f"seed={params.master_seed}")
    if warm:
        s0 = cap_read(warm, mem_gib=args.mem_gib).points
        _eprint(f"warm start: {len(s0)} points from {warm}")
    else:
        s0 = frame(space)
    k0 = greedy_stage1(space, params, mem_gib=args.mem_gib)
    print(f"stage1 size={k0.size}")
    run = greedy_attempts(space, params, s0, jobs=args.jobs, mem_gib=args.mem_gib)
    for i, size in enumerate(run.sizes, start=1):
        print(f"attempt={i} size={size}")
    if run.best is not None and run.best.cap.size < k0.size:
        best_cap, source = run.best.cap, f"attempt={run.best.attempt_index}"
    else:
        best_cap, source = k0, "stage1"
    print(f"best size={best_cap.size} source={source}")
    if args.out:
        cap_write(best_cap, args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    cap = cap_read(args.cap, mem_gib=args.mem_gib, verify=False)
    space = ProjSpace(cap.N, cap.q, args.mem_gib)
    if args.oracle or space.point_count <= ORACLE_POINT_LIMIT:
        verdict = verify_complete_cap(space, cap.points)
        if verdict.kind == "not_a_cap":
            print(f"NOT A CAP size={cap.size} triple={verdict.triple}")
            return EXIT_VERIFICATION
        if verdict.kind == "incomplete":
            print(f"INCOMPLETE CAP size={cap.size} witness={verdict.witness}")
            return EXIT_VERIFICATION
        print(f"COMPLETE CAP size={cap.size}")
        return EXIT_OK
    try:
        tracker = tracker_from_points(space, cap.points, args.mem_gib)
    except EngineError as exc:
        print(f"NOT A CAP size={cap.size} ({exc})")
        return EXIT_VERIFICATION
    if tracker.is_complete():
        print(f"COMPLETE CAP size={cap.size}")
        return EXIT_OK
    print(f"INCOMPLETE CAP size={cap.size} witness={tracker.first_uncovered_from(1)}")
    return EXIT_VERIFICATION


def _load_series(args) -> list[tuple[int, int]]:
    if args.source == "reference":
        if args.tag == "min":
            return list(tables_mod.min_series(args.n).entries)
        return list(tables_mod.load_table(args.n, args.tag).entries)
    if args.source.startswith("file:"):
        entries = []
        with open(args.source[5:], "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                text = line.strip()
                if not text or text.startswith("#") or text == "q,size":
                    continue
                parts = text.split(",")
                if len(parts) != 2:
                    raise ParseError(lineno, f"expected 'q,size', got {text!r}")
                entries.append((int(parts[0]), int(parts[1])))
        return sorted(entries)
    raise TableError(f"--source must be 'reference' or 'file:<csv>', got {args.source!r}")


def _cmd_bounds(args) -> int:
    entries = _load_series(args)
    records = [bounds_mod.make_record(args.n, q, size, args.tag) for q, size in entries]
    lg = None
    if args.source == "reference":
        try:
            L = tables_mod.load_table(args.n, "L").sizes()
            G = tables_mod.load_table(args.n, "G").sizes()
            lg = {q: (L[q], G[q]) for q in L.keys() & G.keys()}
        except TableError:
            lg = None
    out = _out_stream(args.out)
    try:
        bounds_mod.emit_curves(records, out, lg)
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def _cmd_code(args) -> int:
    cap = cap_read(args.cap, mem_gib=args.mem_gib)
    selected = args.density or args.min_distance or args.covering_radius
    if not selected:
        prof = codes_mod.profile(cap)
        d = prof.d if prof.d is not None else f">={prof.d_at_least}"
        print(
            f"n={prof.n} k={prof.k} d={d} r={prof.r} mu={prof.mu_exact} "
            f"quasi_perfect={str(prof.quasi_perfect).lower()} "
            f"perfect={str(prof.perfect).lower()}"
        )
        return EXIT_OK
    H = codes_mod.parity_check(cap)
    r = None
    if args.min_distance:
        d = codes_mod.min_distance(H)
        print(f"min_distance={d.bound if isinstance(d, codes_mod.AtLeast) else d}"
              + ("+" if isinstance(d, codes_mod.AtLeast) else ""))
    if args.covering_radius or args.density:
        r = codes_mod.covering_radius(H)
        if args.covering_radius:
            print(f"covering_radius={r}")
    if args.density:
        k = H.cols - codes_mod.matrix_rank_mod(H.matrix, H.q)
        mu_exact, mu = codes_mod.covering_density(H.cols, k, r, H.q)
        print(f"density={mu_exact} ({mu:.6g})")
    return EXIT_OK


def _cmd_compare(args) -> int:
    computed = []
    with open(args.computed, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#") or text == "q,size":
                continue
            parts = text.split(",")
            if len(parts) != 2:
                raise ParseError(lineno, f"expected 'q,size', got {text!r}")
            computed.append((int(parts[0]), int(parts[1])))
    report = tables_mod.compare(computed, args.n, args.tag)
    for e in report.entries:
        print(f"q={e.q} computed={e.computed} reference={e.reference} delta={e.delta:+d}")
    if args.tag == "L":
        if report.exact:
            print(f"EXACT MATCH rows={len(report.entries)}")
            return EXIT_OK
        print(f"MISMATCH rows={len(report.entries)} differing={len(report.mismatches)}")
        return EXIT_VERIFICATION
    deltas = [e.delta for e in report.entries]
    print(
        f"SUMMARY rows={len(deltas)} min={min(deltas):+d} max={max(deltas):+d} "
        f"mean={sum(deltas) / len(deltas):+.2f}"
    )
    return EXIT_OK


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capsearch",
        description="Small complete caps in PG(N,q): search, verify, analyze.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, jobs=False):
        p.add_argument("--mem-gib", type=float, default=None,
                       help="memory budget in GiB (default 4, env CAPSEARCH_MEM_GIB)")
        p.add_argument("--progress", action="store_true",
                       help="throttled progress lines on stderr")
        if jobs:
            p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                           help="worker threads for greedy attempts")

    p = sub.add_parser("fop", help="deterministic fixed-order search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--out", help="write the cap file here")
    p.add_argument("--order", default="lex", help="'lex' or 'file:<permutation>'")
    common(p)
    p.set_defaults(func=_cmd_fop)

    p = sub.add_parser("greedy", help="two-stage randomized greedy search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--config", help="greedy config file (key = value lines)")
    p.add_argument("--seed", type=int, default=None, help="64-bit master seed")
    p.add_argument("--attempts", type=int, default=None, help="stage-2 attempt count")
    p.add_argument("--warm-start", help="cap file whose points seed the attempts")
    p.add_argument("--out", help="write the best cap file here")
    common(p, jobs=True)
    p.set_defaults(func=_cmd_greedy)

    p = sub.add_parser("verify", help="verify a cap file")
    p.add_argument("--cap", required=True)
    p.add_argument("--oracle", action="store_true",
                   help="force the brute-force verifier regardless of size")
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bounds", help="normalized sizes and bound checks as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tag", required=True, choices=["L", "G", "min"])
    p.add_argument("--source", default="reference", help="'reference' or 'file:<csv>'")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("code", help="code profile of a cap file")
    p.add_argument("--cap", required=True)
    p.add_argument("--density", action="store_true")
    p.add_argument("--min-distance", action="store_true")
    p.add_argument("--covering-radius", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_code)

    p = sub.add_parser("compare", help="compare computed sizes to the reference")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tag", required=True, choices=["L", "G"])
    p.add_argument("--computed", required=True, help="CSV of q,size rows")
    common(p)
    p.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (SpaceTooLarge, AllocationFailure, codes_mod.TooLarge, DataCorrupt) as exc:
        _eprint(f"resource error: {exc}")
        return EXIT_RESOURCE
    except VerificationFailed as exc:
        _eprint(f"verification failed: {exc}")
        return EXIT_VERIFICATION
    except (
        ParseError,
        InconsistentHeader,
        ConfigError,
        OrderError,
        UnknownQ,
        TableError,
        NotPrime,
        DimensionTooSmall,
        FieldError,
        SpaceError,
        GreedyError,
        codes_mod.CodeError,
        bounds_mod.BoundsError,
        EngineError,
        OSError,
        ValueError,
    ) as exc:
        _eprint(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
