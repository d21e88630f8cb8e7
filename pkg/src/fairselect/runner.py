"""Shared audit / repair / bench drivers behind the CLI and the HTTP service.

Every Found answer is independently re-verified through the core model
before it is reported: the witness must lie in the search box, and its
tie-aware fairness interval must meet the bounds. Reports carry the
verification transcript.
"""

import math
import random
import time as _time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import milp as milpmod
from . import oracle as oraclemod
from .errors import ParameterError, UnsupportedDimensionError
from .exact import to_fraction
from .klevel import find_fair_hd
from .model import (
    Dataset,
    FairnessSpec,
    WeightBox,
    WeightVector,
    exact_scores,
    fairness_interval,
    is_fair,
    top_k,
)
from .sweep2d import find_fair_2d

ALGORITHMS = ("sweep2d", "klevel-hd", "milp", "oracle")

VERDICT_FOUND = "found"
VERDICT_INFEASIBLE = "infeasible"
VERDICT_BUDGET = "budget-exhausted"
VERDICT_TIMEOUT = "timeout"
VERDICT_CANCELLED = "cancelled"

_STATUS_MAP = {
    "found": VERDICT_FOUND,
    "infeasible": VERDICT_INFEASIBLE,
    "budget": VERDICT_BUDGET,
    "timeout": VERDICT_TIMEOUT,
    "cancelled": VERDICT_CANCELLED,
}


@dataclass
class AuditReport:
    fair: bool
    interval: tuple[int, int]
    k: int
    lower: int
    upper: int
    weight: tuple[float, ...]
    topk_preview: list[dict]
    wall_millis: float

    def to_json(self) -> dict:
        return {
            "fair": self.fair,
            "intervalMin": self.interval[0],
            "intervalMax": self.interval[1],
            "k": self.k,
            "lower": self.lower,
            "upper": self.upper,
            "weight": list(self.weight),
            "topkPreview": self.topk_preview,
            "wallMillis": self.wall_millis,
        }


@dataclass
class RepairReport:
    verdict: str
    algorithm: str
    weight: Optional[tuple[float, ...]] = None
    weight_exact: Optional[tuple[str, ...]] = None
    subset_ids: Optional[tuple[int, ...]] = None
    counters: dict = field(default_factory=dict)
    wall_millis: float = 0.0
    verified: bool = False
    transcript: list[str] = field(default_factory=list)
    backend: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "counters": {
                "events": self.counters.get("events", 0),
                "lps": self.counters.get("lps", 0),
                "nodes": self.counters.get("nodes", 0),
            },
            "wallMillis": self.wall_millis,
            "verified": self.verified,
            "transcript": self.transcript,
            "algorithm": self.algorithm,
        }
        for key, value in self.counters.items():
            if key not in ("events", "lps", "nodes"):
                out["counters"][key] = value
        if self.weight is not None:
            out["weight"] = list(self.weight)
            out["weightExact"] = list(self.weight_exact)
        if self.subset_ids is not None:
            out["subsetIds"] = list(self.subset_ids)
        if self.backend is not None:
            out["backend"] = self.backend
        return out


def preview_top_k(ds: Dataset, w: WeightVector, k: int, limit: int = 20) -> list[dict]:
    vals = exact_scores(ds, w)
    order = sorted(range(ds.n), key=lambda i: (-vals[i], i))
    out = []
    for i in order[:limit]:
        c = ds.candidates[i]
        score = float(sum(a * b for a, b in zip(w.as_floats(), c.scores)))
        out.append({"id": c.cid, "score": score, "group": c.group})
    return out


def run_audit(ds: Dataset, w: WeightVector, spec: FairnessSpec) -> AuditReport:
    """Tie-aware audit: protected-count interval of the top-k under w."""
    t0 = _time.monotonic()
    spec.validate_against(ds)
    r = top_k(ds, w, spec.k)
    interval = fairness_interval(ds, r)
    return AuditReport(
        fair=is_fair(spec, interval),
        interval=interval,
        k=spec.k,
        lower=spec.lower,
        upper=spec.upper,
        weight=w.as_floats(),
        topk_preview=preview_top_k(ds, w, spec.k),
        wall_millis=(_time.monotonic() - t0) * 1000.0,
    )


def _verify_found(ds, spec, box, w, subset_ids, transcript) -> bool:
    ok = True
    if box.contains(w):
        transcript.append("witness lies in the weight box and on the simplex")
    else:
        transcript.append("FAIL: witness violates the weight box")
        ok = False
    r = top_k(ds, w, spec.k)
    interval = fairness_interval(ds, r)
    if is_fair(spec, interval):
        transcript.append(
            f"fairness interval {list(interval)} meets [{spec.lower}, {spec.upper}]"
        )
    else:
        transcript.append(f"FAIL: fairness interval {list(interval)} misses bounds")
        ok = False
    if subset_ids is not None:
        if r.is_valid_completion(subset_ids):
            transcript.append("reported subset is a valid top-k completion")
        else:
            transcript.append("FAIL: reported subset is not a valid completion")
            ok = False
        prot = sum(1 for i in subset_ids if ds.protected_flags[i])
        if spec.lower <= prot <= spec.upper:
            transcript.append(f"subset protected count {prot} within bounds")
        else:
            transcript.append(f"FAIL: subset protected count {prot} out of bounds")
            ok = False
    return ok


def run_repair(
    ds: Dataset,
    w0: WeightVector,
    eps,
    spec: FairnessSpec,
    algorithm: str = "klevel-hd",
    workers: int = 1,
    seed: int = 0,
    budget: Optional[int] = None,
    time_limit: Optional[float] = None,
    cancel_event=None,
    backend: str = "auto",
) -> RepairReport:
    """Search the eps-box around w0 for a fair weight vector."""
    if algorithm not in ALGORITHMS:
        raise ParameterError(f"algorithm must be one of {ALGORITHMS}")
    if w0.d != ds.d:
        raise ParameterError("w0 dimension does not match dataset")
    spec.validate_against(ds)
    eps = to_fraction(eps)
    box = WeightBox.from_epsilon_box(w0, eps)
    t0 = _time.monotonic()
    weight = None
    subset_ids = None
    counters: dict = {}
    used_backend = None

    if algorithm == "sweep2d":
        if ds.d != 2:
            raise UnsupportedDimensionError("sweep2d requires a 2-D dataset")
        lb = max(Fraction(0), to_fraction(w0[0]) - eps)
        ub = min(Fraction(1), to_fraction(w0[0]) + eps)
        out = find_fair_2d(ds, spec, lb, ub, backend=backend, time_limit=time_limit)
        verdict = _STATUS_MAP[out.status]
        weight = out.weight
        counters = out.counters
        used_backend = out.backend
    elif algorithm == "klevel-hd":
        out = find_fair_hd(
            ds, spec, box, workers=workers, seed=seed, budget=budget,
            time_limit=time_limit, cancel_event=cancel_event,
        )
        verdict = _STATUS_MAP[out.status]
        weight = out.weight
        subset_ids = out.subset_ids
        counters = out.counters
    elif algorithm == "milp":
        model = milpmod.build_model(ds, spec, box)
        out = milpmod.solve_feasibility(
            model, seed=seed, budget=budget or milpmod.DEFAULT_NODE_BUDGET,
            time_limit=time_limit,
        )
        verdict = _STATUS_MAP[out.status]
        if out.status == milpmod.FOUND:
            weight = WeightVector(out.w)
            subset_ids = out.chosen_ids
        counters = out.counters
    else:  # oracle
        if ds.d == 2:
            lb = max(Fraction(0), to_fraction(w0[0]) - eps)
            ub = min(Fraction(1), to_fraction(w0[0]) + eps)
            status, _, w = oraclemod.brute_force_2d(ds, spec, lb, ub)
            weight = w
        else:
            status, w, ids = oraclemod.brute_force_hd(ds, spec, box, seed=seed)
            weight = w
            subset_ids = ids
        verdict = _STATUS_MAP[status]

    wall = (_time.monotonic() - t0) * 1000.0
    transcript: list[str] = [
        f"algorithm={algorithm} eps={eps} k={spec.k} bounds=[{spec.lower},{spec.upper}]"
    ]
    verified = False
    if verdict == VERDICT_FOUND:
        verified = _verify_found(ds, spec, box, weight, subset_ids, transcript)
        if not verified:
            raise AssertionError(
                "solver reported a fair vector that failed re-verification: "
                + "; ".join(transcript)
            )
    else:
        transcript.append(f"no witness to verify (verdict {verdict})")
    return RepairReport(
        verdict=verdict,
        algorithm=algorithm,
        weight=None if weight is None else weight.as_floats(),
        weight_exact=None
        if weight is None
        else tuple(str(f) for f in weight.as_fractions()),
        subset_ids=subset_ids,
        counters=counters,
        wall_millis=wall,
        verified=verified,
        transcript=transcript,
        backend=used_backend,
    )


# -- bench ------------------------------------------------------------------


@dataclass(frozen=True)
class BenchConfig:
    """The 20-unfair-samples protocol: sample weight vectors uniformly at
    random (on the simplex, grid-snapped) until `samples` unfair ones are
    found, then run every algorithm configuration on that same sample set."""

    k_values: tuple[int, ...]
    eps_values: tuple[str, ...]
    algorithms: tuple[str, ...]
    workers_values: tuple[int, ...] = (1,)
    samples: int = 20
    time_limit: Optional[float] = 10.0
    seed: int = 0
    budget: Optional[int] = None
    lower_share: float = 0.4
    upper_share: float = 0.6
    dataset_label: str = "dataset"


def sample_simplex_grid(rng: random.Random, d: int, decimals: int) -> WeightVector:
    """Uniform direction on the simplex, snapped to the grid, exact sum 1."""
    xs = [rng.expovariate(1.0) for _ in range(d)]
    total = sum(xs)
    scale = 10**decimals
    ints = [round(x / total * scale) for x in xs]
    ints[ints.index(max(ints))] += scale - sum(ints)
    return WeightVector(tuple(Fraction(v, scale) for v in ints))


def spec_for_k(cfg: BenchConfig, k: int) -> FairnessSpec:
    lower = min(k, math.ceil(cfg.lower_share * k))
    upper = min(k, math.floor(cfg.upper_share * k))
    return FairnessSpec(k, min(lower, upper), max(lower, upper))


def sample_unfair(ds: Dataset, spec: FairnessSpec, cfg: BenchConfig) -> list[WeightVector]:
    rng = random.Random(cfg.seed)
    found: list[WeightVector] = []
    attempts = 0
    while len(found) < cfg.samples:
        attempts += 1
        if attempts > 1000 * cfg.samples:
            raise ParameterError(
                f"could not find {cfg.samples} unfair samples for k={spec.k}; "
                "the fairness bounds may be too loose"
            )
        w = sample_simplex_grid(rng, ds.d, ds.grid_decimals)
        r = top_k(ds, w, spec.k)
        if not is_fair(spec, fairness_interval(ds, r)):
            found.append(w)
    return found


def run_bench(ds: Dataset, cfg: BenchConfig, out_path: Optional[str] = None) -> dict:
    """Run the sampled-repairs protocol; returns (and optionally writes)
    structured metrics with per-run counters and per-config means."""
    runs = []
    aggregates = []
    samples_by_k: dict[int, list[WeightVector]] = {}
    for k in cfg.k_values:
        spec = spec_for_k(cfg, k)
        samples_by_k[k] = sample_unfair(ds, spec, cfg)
    for algorithm in cfg.algorithms:
        for k in cfg.k_values:
            spec = spec_for_k(cfg, k)
            for eps in cfg.eps_values:
                for workers in cfg.workers_values:
                    wall = []
                    verdicts: dict[str, int] = {}
                    for idx, w0 in enumerate(samples_by_k[k]):
                        rep = run_repair(
                            ds, w0, eps, spec,
                            algorithm=algorithm, workers=workers,
                            seed=cfg.seed + idx, budget=cfg.budget,
                            time_limit=cfg.time_limit,
                        )
                        runs.append(
                            {
                                "algorithm": algorithm,
                                "k": k,
                                "eps": str(eps),
                                "workers": workers,
                                "sample": idx,
                                "verdict": rep.verdict,
                                "wallMillis": rep.wall_millis,
                                "counters": rep.to_json()["counters"],
                                "verified": rep.verified,
                            }
                        )
                        wall.append(rep.wall_millis)
                        verdicts[rep.verdict] = verdicts.get(rep.verdict, 0) + 1
                    aggregates.append(
                        {
                            "algorithm": algorithm,
                            "k": k,
                            "eps": str(eps),
                            "workers": workers,
                            "meanWallMillis": sum(wall) / len(wall),
                            "maxWallMillis": max(wall),
                            "verdicts": verdicts,
                            "timeouts": verdicts.get(VERDICT_TIMEOUT, 0),
                        }
                    )
    metrics = {
        "dataset": cfg.dataset_label,
        "protocol": {
            "samples": cfg.samples,
            "timeLimitSeconds": cfg.time_limit,
            "seed": cfg.seed,
            "lowerShare": cfg.lower_share,
            "upperShare": cfg.upper_share,
        },
        "samplesByK": {
            str(k): [w.as_floats() for w in ws] for k, ws in samples_by_k.items()
        },
        "runs": runs,
        "aggregates": aggregates,
    }
    if out_path is not None:
        import json

        with open(out_path, "w", encoding="utf-8") as fh:
            json.dump(metrics, fh, indent=2)
    return metrics
