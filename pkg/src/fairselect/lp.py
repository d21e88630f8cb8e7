"""Fixed-dimension linear programming: Seidel-style randomized incremental.

All arithmetic is exact. The solver maintains the optimum of a growing
constraint prefix; when a new constraint is violated, the optimum moves onto
its hyperplane and the problem recurses in one dimension less. Expected
linear time in the number of constraints for fixed dimension.

Internally rows are integer vectors with cleared denominators and points are
(numerators, denominator) pairs, so the inner loops run on plain ints with
one gcd reduction per derived row instead of one per arithmetic op.

Variables without caller-supplied bounds get the artificial box [-M, M] with
M = 10**60; a feasible region lying entirely outside that box is reported
infeasible (irrelevant for this package's [0, 1]-scale data, where every
internal caller passes natural bounds).
"""

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ParameterError, UnsupportedDimensionError
from .exact import to_fraction
from .model import WeightBox, WeightVector

BIG_M = Fraction(10**60)

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

Row = tuple[tuple[Fraction, ...], Fraction]
IntRow = tuple[tuple[int, ...], int]


@dataclass(frozen=True)
class LinearProgram:
    """max objective . x subject to a . x <= b rows (objective optional).

    Equality constraints are expressed as paired <= inequalities, see
    :func:`equality_rows`.
    """

    dim: int
    constraints: tuple[Row, ...]
    objective: Optional[tuple[Fraction, ...]] = None

    def __post_init__(self):
        if self.dim < 1:
            raise ParameterError("LP dimension must be >= 1")
        for a, _ in self.constraints:
            if len(a) != self.dim:
                raise ParameterError("constraint dimension mismatch")
        if self.objective is not None and len(self.objective) != self.dim:
            raise ParameterError("objective dimension mismatch")


@dataclass(frozen=True)
class LpResult:
    status: str
    x: Optional[tuple[Fraction, ...]] = None


def make_rows(rows: Sequence[tuple[Sequence, object]]) -> tuple[Row, ...]:
    return tuple(
        (tuple(to_fraction(c) for c in a), to_fraction(b)) for a, b in rows
    )


def equality_rows(a: Sequence, b) -> list[Row]:
    """a . x == b as the pair a.x <= b, -a.x <= -b."""
    av = tuple(to_fraction(c) for c in a)
    bv = to_fraction(b)
    return [(av, bv), (tuple(-c for c in av), -bv)]


# -- integer core -----------------------------------------------------------


def _reduce_row(a: list[int], b: int) -> IntRow:
    g = 0
    for v in a:
        g = math.gcd(g, v)
    g = math.gcd(g, b)
    if g > 1:
        return tuple(v // g for v in a), b // g
    return tuple(a), b


def _int_row(a: Sequence[Fraction], b: Fraction) -> IntRow:
    den = b.denominator
    for c in a:
        den = math.lcm(den, c.denominator)
    return _reduce_row([int(c * den) for c in a], int(b * den))


def _reduce_point(nums: list[int], den: int) -> tuple[list[int], int]:
    g = den
    for v in nums:
        g = math.gcd(g, v)
    if g > 1:
        return [v // g for v in nums], den // g
    return nums, den


def _seidel(rows: list[IntRow], obj: Optional[tuple[int, ...]], bounds, rng):
    """bounds: per-variable (lo, hi) Fractions. Returns (status, nums, den)."""
    d = len(bounds)
    if d == 1:
        lo, hi = bounds[0]
        ln, ld = lo.numerator, lo.denominator
        hn, hd = hi.numerator, hi.denominator
        for (a,), b in rows:
            if a > 0:
                if b * hd < hn * a:  # b/a < hi
                    hn, hd = b, a
            elif a < 0:
                if b * ld < ln * a:  # b/a > lo (a negative flips the compare)
                    ln, ld = -b, -a
            elif b < 0:
                return INFEASIBLE, None, None
        if ln * hd > hn * ld:
            return INFEASIBLE, None, None
        if obj is not None and obj[0] < 0:
            return FEASIBLE, [ln], ld
        return FEASIBLE, [hn], hd

    order = list(rows)
    rng.shuffle(order)
    # Start from the box corner optimizing the objective.
    den = 1
    for (lo, hi) in bounds:
        den = math.lcm(den, lo.denominator, hi.denominator)
    nums = []
    for i, (lo, hi) in enumerate(bounds):
        pick = hi if obj is None or obj[i] >= 0 else lo
        nums.append(int(pick * den))

    inserted: list[IntRow] = []
    for a, b in order:
        if sum(ai * ni for ai, ni in zip(a, nums)) <= b * den:
            inserted.append((a, b))
            continue
        # Optimum moves onto a.x = b; eliminate the largest-coefficient var.
        j = max(range(d), key=lambda i: abs(a[i]))
        aj = a[j]
        if aj == 0:
            return INFEASIBLE, None, None  # 0 <= b violated
        s = 1 if aj > 0 else -1
        mag = abs(aj)
        keep = [i for i in range(d) if i != j]

        def project(ra, rb):
            coef = ra[j]
            na = [ra[i] * mag - s * coef * a[i] for i in keep]
            nb = rb * mag - s * coef * b
            return _reduce_row(na, nb)

        reduced: list[IntRow] = []
        lo_j, hi_j = bounds[j]
        # x_j >= lo_j and x_j <= hi_j as integer rows over the kept vars.
        ld, hd = lo_j.denominator, hi_j.denominator
        reduced.append(project(tuple(-ld if i == j else 0 for i in range(d)), -int(lo_j * ld)))
        reduced.append(project(tuple(hd if i == j else 0 for i in range(d)), int(hi_j * hd)))
        for row in inserted:
            reduced.append(project(*row))
        robj = None
        if obj is not None:
            coef = obj[j]
            robj = tuple(obj[i] * mag - s * coef * a[i] for i in keep)
        rbounds = [bounds[i] for i in keep]
        status, ynums, yden = _seidel(reduced, robj, rbounds, rng)
        if status != FEASIBLE:
            return INFEASIBLE, None, None
        # x_j = (b - sum_{i != j} a_i x_i) / a_j over the common denominator
        # D = a_j * yden; kept coordinates scale by a_j.
        xj_num = b * yden - sum(a[i] * yv for i, yv in zip(keep, ynums))
        den = aj * yden
        nums = []
        it = iter(ynums)
        for i in range(d):
            nums.append(xj_num if i == j else next(it) * aj)
        if den < 0:
            den = -den
            nums = [-v for v in nums]
        nums, den = _reduce_point(nums, den)
        inserted.append((a, b))
    return FEASIBLE, nums, den


def _solve_boxed(lp: LinearProgram, seed: int, bounds) -> LpResult:
    rng = random.Random(seed)
    rows = [_int_row(a, b) for a, b in lp.constraints]
    obj = None
    if lp.objective is not None:
        oden = 1
        for c in lp.objective:
            oden = math.lcm(oden, c.denominator)
        obj = tuple(int(c * oden) for c in lp.objective)
    status, nums, den = _seidel(rows, obj, bounds, rng)
    if status != FEASIBLE:
        return LpResult(INFEASIBLE)
    return LpResult(FEASIBLE, tuple(Fraction(v, den) for v in nums))


def solve(
    lp: LinearProgram,
    seed: int = 0,
    max_dim: int = 12,
    bounds: Optional[Sequence[tuple]] = None,
) -> LpResult:
    """Solve the LP deterministically for a fixed seed.

    Feasibility problems (no objective) return ``feasible`` with a verified
    point or ``infeasible``; with an objective the point is optimal, and
    ``unbounded`` is reported when the objective grows without limit.
    ``bounds`` optionally supplies per-variable (lo, hi) boxes; callers with
    naturally bounded variables should pass them.
    """
    if lp.dim > max_dim:
        raise UnsupportedDimensionError(
            f"LP dimension {lp.dim} exceeds the fixed-dimension cap {max_dim}"
        )
    if bounds is None:
        box = [(-BIG_M, BIG_M)] * lp.dim
        artificial = True
    else:
        if len(bounds) != lp.dim:
            raise ParameterError("bounds length must equal dim")
        box = [(to_fraction(lo), to_fraction(hi)) for lo, hi in bounds]
        artificial = False

    res = _solve_boxed(lp, seed, box)
    if res.status != FEASIBLE or lp.objective is None or not artificial:
        return _verify(lp, res, box)
    # Unboundedness test: enlarge the artificial box; a strictly better
    # objective value means the true problem is unbounded.
    wide = [(-BIG_M * BIG_M, BIG_M * BIG_M)] * lp.dim
    res2 = _solve_boxed(lp, seed, wide)
    v1 = sum(c * x for c, x in zip(lp.objective, res.x))
    v2 = sum(c * x for c, x in zip(lp.objective, res2.x))
    if v2 > v1:
        return LpResult(UNBOUNDED)
    return _verify(lp, res, box)


def _verify(lp: LinearProgram, res: LpResult, box) -> LpResult:
    # Certificate check: substitute the answer back into every constraint.
    if res.status != FEASIBLE:
        return res
    for a, b in lp.constraints:
        if sum(ai * xi for ai, xi in zip(a, res.x)) > b:
            raise AssertionError("solver returned an infeasible point")
    for (lo, hi), xi in zip(box, res.x):
        if not lo <= xi <= hi:
            raise AssertionError("solver returned a point outside its box")
    return res


def simplex_rows(d: int) -> list[Row]:
    """sum w = 1 as an equality pair (w >= 0 is handled via bounds)."""
    ones = tuple(Fraction(1) for _ in range(d))
    return equality_rows(ones, 1)


def box_lp(box: WeightBox, extra_rows: Sequence[Row] = ()) -> LinearProgram:
    """Feasibility LP for V intersected with the simplex."""
    rows = list(box.inequalities) + simplex_rows(box.d) + list(extra_rows)
    return LinearProgram(dim=box.d, constraints=tuple(rows))


def feasible_point_in_box(
    box: WeightBox, d: int, seed: int = 0
) -> Optional[WeightVector]:
    """An arbitrary weight vector in V (None when V cuts the simplex away)."""
    if box.d != d:
        raise ParameterError("box dimension mismatch")
    lp = box_lp(box)
    res = solve(
        lp,
        seed=seed,
        max_dim=max(12, d),
        bounds=[(Fraction(0), Fraction(1))] * d,
    )
    if res.status != FEASIBLE:
        return None
    return WeightVector(res.x)
