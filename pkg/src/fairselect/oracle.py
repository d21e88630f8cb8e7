"""Brute-force reference solvers and adversarial instance generators.

These are the ground truth for equivalence testing. They deliberately share
nothing with the production solvers beyond the core model and the LP
certificate path: the 2-D oracle enumerates pairwise crossing coordinates and
re-scores the dataset at each (no kinetic structures), and the
high-dimensional oracle enumerates candidate subsets outright.
"""

import itertools
import random
from fractions import Fraction
from typing import Optional

from . import lp as lpmod
from .errors import ConstructionError, ParameterError, UnsupportedDimensionError
from .exact import to_fraction
from .model import (
    Candidate,
    Dataset,
    FairnessSpec,
    WeightBox,
    WeightVector,
    fairness_interval,
    is_fair,
    top_k,
)

FOUND = "found"
INFEASIBLE = "infeasible"


def _fair_at(ds: Dataset, spec: FairnessSpec, t: Fraction) -> bool:
    w = WeightVector((t, 1 - t))
    return is_fair(spec, fairness_interval(ds, top_k(ds, w, spec.k)))


def brute_force_2d(ds: Dataset, spec: FairnessSpec, lb, ub):
    """Scan every crossing coordinate and interval midpoint in [lb, ub].

    Returns (status, t, weight). O(n^3 log n); ground truth for the sweep.
    """
    if ds.d != 2:
        raise UnsupportedDimensionError("brute_force_2d requires d == 2")
    spec.validate_against(ds)
    lb = to_fraction(lb)
    ub = to_fraction(ub)
    if not 0 <= lb <= ub <= 1:
        raise ParameterError("need 0 <= lb <= ub <= 1")
    slopes = [Fraction(p1 - p2, ds.scale) for p1, p2 in ds.int_scores]
    icepts = [Fraction(p2, ds.scale) for _, p2 in ds.int_scores]
    events = {lb, ub}
    for i, j in itertools.combinations(range(ds.n), 2):
        if slopes[i] == slopes[j]:
            continue
        x = (icepts[j] - icepts[i]) / (slopes[i] - slopes[j])
        if lb <= x <= ub:
            events.add(x)
    ordered = sorted(events)
    checkpoints = []
    for a, b in zip(ordered, ordered[1:]):
        checkpoints.append(a)
        checkpoints.append((a + b) / 2)  # interval interiors are tie-free
    checkpoints.append(ordered[-1])
    for t in checkpoints:
        if _fair_at(ds, spec, t):
            return FOUND, t, WeightVector((t, 1 - t))
    return INFEASIBLE, None, None


def separation_lp_for_subset(
    ds: Dataset, subset, box: WeightBox, seed: int = 0
) -> Optional[WeightVector]:
    """Non-strict separating-hyperplane feasibility for one subset over V."""
    inside = sorted(subset)
    outside = [i for i in range(ds.n) if i not in subset]
    rows = list(box.inequalities) + lpmod.simplex_rows(ds.d)
    for a in inside:
        pa = ds.frac_scores(a)
        for b in outside:
            pb = ds.frac_scores(b)
            rows.append((tuple(x - y for x, y in zip(pb, pa)), Fraction(0)))
    prog = lpmod.LinearProgram(dim=ds.d, constraints=tuple(rows))
    res = lpmod.solve(
        prog, seed=seed, max_dim=max(12, ds.d),
        bounds=[(Fraction(0), Fraction(1))] * ds.d,
    )
    return WeightVector(res.x) if res.status == lpmod.FEASIBLE else None


def brute_force_hd(ds: Dataset, spec: FairnessSpec, box: WeightBox, seed: int = 0):
    """Enumerate all C(n, k) subsets; LP-test the fair-by-count ones.

    Returns (status, weight, subset_ids). Guarded to n <= 15, k <= 4.
    """
    if ds.n > 15 or spec.k > 4:
        raise ParameterError("brute_force_hd guard: n <= 15 and k <= 4")
    spec.validate_against(ds)
    for subset in itertools.combinations(range(ds.n), spec.k):
        prot = sum(1 for i in subset if ds.protected_flags[i])
        if not spec.lower <= prot <= spec.upper:
            continue
        w = separation_lp_for_subset(ds, subset, box, seed=seed)
        if w is not None:
            return FOUND, w, tuple(subset)
    return INFEASIBLE, None, None


def pad_dominated(ds: Dataset, count: int, group: str) -> Dataset:
    """Append candidates strictly dominated by every existing one.

    Never changes any top-k for k <= n. Fails with a margin report when a
    coordinate minimum sits too close to 0 for `count` strictly lower grid
    values to exist.
    """
    return _pad(ds, count, group, side=-1)


def pad_dominating(ds: Dataset, count: int, group: str) -> Dataset:
    """Append candidates strictly dominating every existing one (stacked, so
    they occupy the top of every top-k for every non-negative weight)."""
    return _pad(ds, count, group, side=+1)


def _pad(ds: Dataset, count: int, group: str, side: int) -> Dataset:
    if count < 0:
        raise ParameterError("count must be >= 0")
    if count == 0:
        return ds
    cols = list(zip(*ds.int_scores))
    margins = []
    for col in cols:
        room = min(col) if side < 0 else ds.scale - max(col)
        margins.append(room)
    if min(margins) < count:
        raise ConstructionError(
            f"cannot pad {count} strictly {'dominated' if side < 0 else 'dominating'} "
            f"candidates: per-coordinate grid margins are {margins}",
            margins=margins,
        )
    cands = list(ds.candidates)
    for j in range(1, count + 1):
        vals = []
        for col in cols:
            base = min(col) if side < 0 else max(col)
            vals.append((base + side * j) / ds.scale)
        cands.append(Candidate(cid=len(cands), scores=tuple(vals), group=group))
    return Dataset(cands, protected=ds.protected, grid_decimals=ds.grid_decimals)


def gen_random_instance(
    seed: int, n: int, d: int, grid, p_g1: float
) -> Dataset:
    """Reproducible instance with scores on the given decimal grid.

    Coarse grids force frequent exact ties, which is the point: degenerate
    configurations are first-class test inputs here.
    """
    step = to_fraction(grid)
    if step <= 0 or (1 / step).denominator != 1:
        raise ParameterError("grid step must divide 1")
    levels = int(1 / step)
    decimals = 0
    den = step.denominator
    while 10**decimals % den != 0:
        decimals += 1
        if decimals > 12:
            raise ParameterError("grid step must be a decimal (e.g. 0.05)")
    rng = random.Random(seed)
    cands = []
    for i in range(n):
        scores = tuple(
            float(Fraction(rng.randint(0, levels), levels)) for _ in range(d)
        )
        group = "G1" if rng.random() < p_g1 else "G2"
        cands.append(Candidate(cid=i, scores=scores, group=group))
    return Dataset(cands, protected="G1", grid_decimals=max(decimals, 1))
