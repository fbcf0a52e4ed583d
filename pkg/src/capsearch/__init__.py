"""Small complete caps in projective spaces PG(N,q).

Construct complete caps with a deterministic fixed-order scan or a
two-stage randomized greedy search, verify them against an independent
brute-force oracle, bridge them to quasi-perfect linear codes, and check
normalized-size upper bounds against bundled reference tables.
"""

from .bounds import BoundRecord, beta, bound_values, make_record, percent_diffs
from .codes import CodeProfile, covering_density, covering_radius, min_distance, parity_check, profile
from .engine import Cap, CapVerdict, CoverageTracker, cap_read, cap_write, verify_complete_cap
from .field import Field, is_prime
from .fop import LEX, PointOrder, fop_run, lexicap_size
from .greedy import AttemptResult, GreedyParams, GreedyRun, frame, greedy_attempts, greedy_stage1
from .space import ProjPoint, ProjSpace
from .tables import ReferenceTable, compare, load_table, min_series

__version__ = "0.1.0"

__all__ = [
    "AttemptResult",
    "BoundRecord",
    "Cap",
    "CapVerdict",
    "CodeProfile",
    "CoverageTracker",
    "Field",
    "GreedyParams",
    "GreedyRun",
    "LEX",
    "PointOrder",
    "ProjPoint",
    "ProjSpace",
    "ReferenceTable",
    "beta",
    "bound_values",
    "cap_read",
    "cap_write",
    "compare",
    "covering_density",
    "covering_radius",
    "fop_run",
    "frame",
    "greedy_attempts",
    "greedy_stage1",
    "is_prime",
    "lexicap_size",
    "load_table",
    "make_record",
    "min_distance",
    "min_series",
    "parity_check",
    "percent_diffs",
    "profile",
    "verify_complete_cap",
]
