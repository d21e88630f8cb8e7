"""Fair top-k selection toolkit.

Audits whether a linear scoring weight vector produces a proportionally fair
top-k selection, and searches a constrained weight region for a fair vector
with three interchangeable solvers: a 2-D kinetic sweep, a high-dimensional
implicit k-level traversal, and mixed-integer feasibility, all
cross-validated against brute-force oracles.
"""

from .backend import active_backend
from .errors import (
    ConstructionError,
    FairselectError,
    IngestError,
    ParameterError,
    StateError,
    UnsupportedDimensionError,
)
from .geometry import DualHyperplane, DualLine, dominates, dual_transform, k_skyband
from .ingest import IngestionSpec, IngestResult, ingest_csv
from .klevel import HdOutcome, find_fair_hd
from .lp import LinearProgram, LpResult, feasible_point_in_box, solve
from .milp import (
    MilpModel,
    MilpOutcome,
    build_model,
    check_indicator_semantics,
    export_lp_file,
    parse_lp_file,
    solve_feasibility,
)
from .model import (
    Candidate,
    Dataset,
    FairnessSpec,
    TopKResult,
    WeightBox,
    WeightVector,
    fairness_interval,
    is_fair,
    score_of,
    top_k,
)
from .oracle import (
    brute_force_2d,
    brute_force_hd,
    gen_random_instance,
    pad_dominated,
    pad_dominating,
)
from .runner import BenchConfig, run_audit, run_bench, run_repair
from .sweep2d import SweepOutcome, find_fair_2d

__version__ = "0.1.0"

__all__ = [
    "active_backend",
    "brute_force_2d",
    "brute_force_hd",
    "build_model",
    "BenchConfig",
    "Candidate",
    "check_indicator_semantics",
    "ConstructionError",
    "Dataset",
    "dominates",
    "DualHyperplane",
    "DualLine",
    "dual_transform",
    "export_lp_file",
    "FairselectError",
    "fairness_interval",
    "FairnessSpec",
    "feasible_point_in_box",
    "find_fair_2d",
    "find_fair_hd",
    "gen_random_instance",
    "HdOutcome",
    "IngestError",
    "IngestionSpec",
    "IngestResult",
    "ingest_csv",
    "is_fair",
    "k_skyband",
    "LinearProgram",
    "LpResult",
    "MilpModel",
    "MilpOutcome",
    "pad_dominated",
    "pad_dominating",
    "ParameterError",
    "parse_lp_file",
    "run_audit",
    "run_bench",
    "run_repair",
    "score_of",
    "solve",
    "solve_feasibility",
    "StateError",
    "SweepOutcome",
    "top_k",
    "TopKResult",
    "UnsupportedDimensionError",
    "WeightBox",
    "WeightVector",
]
