"""2-D fair-weight search: kinetic sweep over the dual-line arrangement.

Finds the first coordinate t in [lb, ub] whose weight vector (t, 1-t) admits
a fair top-k subset. Fairness is checked tie-aware at lb first, then only at
event coordinates of the sweep; between events the top-k set cannot change,
and any subset valid on an open interval is also valid at its endpoints, so
those checks are complete.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _sweep_py
from .backend import HAVE_COMPILED, _sweepcore
from .errors import ParameterError, UnsupportedDimensionError
from .exact import to_fraction
from .geometry import dual_lines
from .model import Dataset, FairnessSpec, WeightVector, fairness_interval, is_fair, top_k

FOUND = "found"
INFEASIBLE = "infeasible"
TIMEOUT = "timeout"

_I64_LIMIT = 2**62


@dataclass(frozen=True)
class SweepOutcome:
    status: str
    t: Optional[Fraction] = None
    weight: Optional[WeightVector] = None
    counters: dict = field(default_factory=dict)
    backend: str = "pure"

    @property
    def t_float(self) -> Optional[float]:
        return None if self.t is None else float(self.t)


def _int64_safe(scale: int, den: int) -> bool:
    value_bound = 4 * scale * max(den, 2 * scale)
    cross_bound = max(scale, den) * max(2 * scale, den)
    return value_bound < _I64_LIMIT and cross_bound < _I64_LIMIT


def find_fair_2d(
    ds: Dataset,
    spec: FairnessSpec,
    lb,
    ub,
    backend: str = "auto",
    time_limit: Optional[float] = None,
) -> SweepOutcome:
    """Sweep t over [lb, ub] for a fair weight vector (t, 1-t)."""
    if ds.d != 2:
        raise UnsupportedDimensionError("the 2-D sweep requires d == 2")
    spec.validate_against(ds)
    lb = to_fraction(lb)
    ub = to_fraction(ub)
    if not 0 <= lb <= ub <= 1:
        raise ParameterError("need 0 <= lb <= ub <= 1")
    if backend not in ("auto", "compiled", "pure"):
        raise ParameterError(f"unknown backend {backend!r}")

    # Tie-aware initial check at lb (Infeasible iff *no* t admits a fair
    # subset, so lb itself must be checked over every tie completion).
    w_lb = WeightVector((lb, 1 - lb))
    if is_fair(spec, fairness_interval(ds, top_k(ds, w_lb, spec.k))):
        return SweepOutcome(FOUND, lb, w_lb, {"events": 0, "exchanges": 0, "simultaneous": 0}, "initial")
    if lb == ub or spec.k == ds.n:
        # Zero-width window, or the single possible subset is unfair.
        return SweepOutcome(INFEASIBLE, counters={"events": 0, "exchanges": 0, "simultaneous": 0})

    den = math.lcm(lb.denominator, ub.denominator)
    use_compiled = backend == "compiled" or (
        backend == "auto" and HAVE_COMPILED and _int64_safe(ds.scale, den)
    )
    if backend == "compiled" and not HAVE_COMPILED:
        raise ParameterError("compiled backend requested but not built")
    if backend == "compiled" and not _int64_safe(ds.scale, den):
        raise ParameterError("inputs exceed the compiled backend's int64 range")

    if use_compiled:
        res = _run_compiled(ds, spec, lb, ub, den, time_limit)
        used = "compiled"
    else:
        res = _run_pure(ds, spec, lb, ub, time_limit)
        used = "pure"

    counters = res["counters"]
    if res["status"] == FOUND:
        t = res["t"]
        w = WeightVector((t, 1 - t))
        out = SweepOutcome(FOUND, t, w, counters, used)
        _check_found(ds, spec, out)
        return out
    return SweepOutcome(res["status"], counters=counters, backend=used)


def _run_compiled(ds, spec, lb: Fraction, ub: Fraction, den, time_limit):
    m = ds.int_matrix()
    ms = m[:, 0] - m[:, 1]
    cs = m[:, 1].copy()
    prot = np.asarray(ds.protected_flags, dtype=np.uint8)
    lbn, lbd = lb.numerator * (den // lb.denominator), den
    ubn, ubd = ub.numerator * (den // ub.denominator), den
    vals = ms * lbn + cs * lbd
    order = np.lexsort((np.arange(ds.n), -ms, -vals)).astype(np.int64)
    raw = _sweepcore.run_sweep(
        ms, cs, prot, order,
        spec.k, spec.lower, spec.upper,
        lbn, lbd, ubn, ubd,
        -1.0 if time_limit is None else float(time_limit),
    )
    counters = {
        "events": int(raw["events"]),
        "exchanges": int(raw["exchanges"]),
        "simultaneous": int(raw["simultaneous"]),
    }
    t = Fraction(int(raw["t_num"]), int(raw["t_den"])) if raw["status"] == "found" else None
    return {"status": raw["status"], "t": t, "counters": counters}


def _run_pure(ds, spec, lb: Fraction, ub: Fraction, time_limit):
    lines = dual_lines(ds)
    res = _sweep_py.run_sweep(lines, spec.k, spec.lower, spec.upper, lb, ub, time_limit)
    counters = {k: v for k, v in res["counters"].items() if k != "max_op_updates"}
    return {"status": res["status"], "t": res["t"], "counters": counters}


def _check_found(ds, spec, out: SweepOutcome) -> None:
    interval = fairness_interval(ds, top_k(ds, out.weight, spec.k))
    if not is_fair(spec, interval):
        raise AssertionError(
            f"sweep reported t={out.t} but the fairness interval {interval} "
            f"misses [{spec.lower}, {spec.upper}]"
        )
