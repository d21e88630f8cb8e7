"""Core domain model: candidates, datasets, fairness bounds, weight vectors.

Every type here is immutable after construction and safe to share across
worker threads. Tie handling is exact: datasets carry their scores both as
floats (grid decimals) and as scaled integers, and scoring against exact
rational weights is done in integer/rational arithmetic so that equal scores
compare equal.
"""

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import ParameterError
from .exact import is_on_grid, to_fraction

SIMPLEX_TOL = 1e-9


@dataclass(frozen=True)
class Candidate:
    """One item: a point of d scoring attributes plus a group label."""

    cid: int
    scores: tuple[float, ...]
    group: str

    def __post_init__(self):
        if len(self.scores) == 0:
            raise ParameterError("candidate needs at least one score")
        for s in self.scores:
            if not math.isfinite(s) or s < 0.0 or s > 1.0:
                raise ParameterError(
                    f"candidate {self.cid}: score {s!r} outside [0, 1]"
                )


class Dataset:
    """An ordered candidate set with one protected group label.

    Scores must sit on the decimal grid ``10**-grid_decimals`` (the snapping
    happens at ingestion); this is what makes downstream tie detection exact.
    Candidate ids must be 0..n-1 in list order.
    """

    def __init__(self, candidates: Sequence[Candidate], protected: str, grid_decimals: int = 6):
        candidates = list(candidates)
        if not candidates:
            raise ParameterError("dataset must contain at least one candidate")
        if grid_decimals < 0 or grid_decimals > 12:
            raise ParameterError("grid_decimals must be in [0, 12]")
        d = len(candidates[0].scores)
        scale = 10**grid_decimals
        int_rows = []
        for pos, c in enumerate(candidates):
            if c.cid != pos:
                raise ParameterError("candidate ids must be 0..n-1 in order")
            if len(c.scores) != d:
                raise ParameterError("all candidates must share one dimension")
            row = []
            for s in c.scores:
                if not is_on_grid(s, grid_decimals):
                    raise ParameterError(
                        f"candidate {c.cid}: score {s!r} is not on the "
                        f"1e-{grid_decimals} grid; snap scores at ingestion"
                    )
                row.append(round(s * scale))
            int_rows.append(tuple(row))
        self.candidates: tuple[Candidate, ...] = tuple(candidates)
        self.protected = protected
        self.grid_decimals = grid_decimals
        self.scale = scale
        self.d = d
        self.n = len(candidates)
        self.int_scores: tuple[tuple[int, ...], ...] = tuple(int_rows)
        self.protected_flags: tuple[bool, ...] = tuple(
            c.group == protected for c in candidates
        )
        self._int_matrix = None

    @property
    def groups(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for c in self.candidates:
            seen.setdefault(c.group, None)
        return tuple(seen)

    @property
    def protected_count(self) -> int:
        return sum(self.protected_flags)

    def int_matrix(self) -> np.ndarray:
        """n x d int64 matrix of grid-scaled scores (cached)."""
        if self._int_matrix is None:
            self._int_matrix = np.asarray(self.int_scores, dtype=np.int64)
        return self._int_matrix

    def frac_scores(self, cid: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self.scale) for v in self.int_scores[cid])

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class FairnessSpec:
    """Protected-group count bounds for the top-k: lower <= |topk & G1| <= upper."""

    k: int
    lower: int
    upper: int

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError("k must be a positive integer")
        if not 0 <= self.lower <= self.upper <= self.k:
            raise ParameterError("need 0 <= lower <= upper <= k")

    def validate_against(self, ds: Dataset) -> None:
        if self.k > ds.n:
            raise ParameterError(f"k={self.k} exceeds dataset size n={ds.n}")
        if self.lower > ds.protected_count:
            warnings.warn(
                f"lower bound {self.lower} exceeds the protected-group size "
                f"{ds.protected_count}; no weight vector can be fair",
                stacklevel=2,
            )


@dataclass(frozen=True)
class WeightVector:
    """Non-negative weights summing to 1 (within 1e-9 for float inputs)."""

    components: tuple

    def __init__(self, components: Iterable):
        comps = tuple(components)
        if not comps:
            raise ParameterError("weight vector must have at least one component")
        total = 0
        for w in comps:
            if isinstance(w, float) and not math.isfinite(w):
                raise ParameterError(f"non-finite weight {w!r}")
            if w < 0:
                raise ParameterError(f"negative weight {w!r}")
            total += w
        if abs(total - 1) > SIMPLEX_TOL:
            raise ParameterError(f"weights sum to {total}, expected 1")
        object.__setattr__(self, "components", comps)

    @property
    def d(self) -> int:
        return len(self.components)

    def as_fractions(self) -> tuple[Fraction, ...]:
        return tuple(to_fraction(w) for w in self.components)

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(w) for w in self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]


@dataclass(frozen=True)
class WeightBox:
    """The feasible weight region V: a*w <= b rows, on top of the implicit
    simplex constraints (w >= 0, sum w = 1), which always apply."""

    d: int
    inequalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...]

    def __post_init__(self):
        for a, _ in self.inequalities:
            if len(a) != self.d:
                raise ParameterError("box inequality dimension mismatch")

    @classmethod
    def full_simplex(cls, d: int) -> "WeightBox":
        return cls(d=d, inequalities=())

    @classmethod
    def from_epsilon_box(cls, w0: WeightVector, eps) -> "WeightBox":
        """The repair neighborhood |w_i - w0_i| <= eps, as 2d inequalities."""
        eps = to_fraction(eps)
        if eps < 0 or eps > 1:
            raise ParameterError(f"eps must be in [0, 1], got {eps}")
        center = w0.as_fractions()
        d = len(center)
        rows = []
        for i, wi in enumerate(center):
            unit = tuple(Fraction(1 if j == i else 0) for j in range(d))
            neg = tuple(Fraction(-1 if j == i else 0) for j in range(d))
            rows.append((unit, wi + eps))   # w_i <= w0_i + eps
            rows.append((neg, eps - wi))    # -w_i <= eps - w0_i
        return cls(d=d, inequalities=tuple(rows))

    def contains(self, w: WeightVector) -> bool:
        """Exact membership in V intersected with the simplex."""
        fr = w.as_fractions()
        if len(fr) != self.d:
            return False
        if any(f < 0 for f in fr) or sum(fr) != 1:
            return False
        return all(
            sum(ai * wi for ai, wi in zip(a, fr)) <= b
            for a, b in self.inequalities
        )


@dataclass(frozen=True)
class TopKResult:
    """Tie classes of a top-k selection.

    ``strictly_in`` score strictly above every candidate outside
    ``strictly_in | tied_pool``; any choice of ``slots`` elements from
    ``tied_pool`` together with ``strictly_in`` is a valid top-k subset, and
    every valid top-k subset arises this way.
    """

    strictly_in: frozenset[int]
    tied_pool: frozenset[int]
    slots: int

    def __post_init__(self):
        if self.slots < 0 or self.slots > len(self.tied_pool):
            raise ParameterError("slots out of range")
        if not self.tied_pool and self.slots != 0:
            raise ParameterError("empty tie pool requires slots == 0")

    @property
    def k(self) -> int:
        return len(self.strictly_in) + self.slots

    def completions(self):
        """Iterate all valid top-k subsets (combinatorial; test-scale only)."""
        import itertools

        pool = sorted(self.tied_pool)
        for chosen in itertools.combinations(pool, self.slots):
            yield frozenset(self.strictly_in | set(chosen))

    def is_valid_completion(self, subset: Iterable[int]) -> bool:
        s = frozenset(subset)
        return (
            len(s) == self.k
            and self.strictly_in <= s
            and (s - self.strictly_in) <= self.tied_pool
        )


def score_of(w: WeightVector, c: Candidate):
    """Inner product w . p(c). Exact when the weights are Fractions."""
    if w.d != len(c.scores):
        raise ParameterError(
            f"dimension mismatch: weight has {w.d}, candidate has {len(c.scores)}"
        )
    return sum(wi * pi for wi, pi in zip(w.components, c.scores))


def exact_scores(ds: Dataset, w: WeightVector) -> list:
    """Grid-exact candidate scores under ``w`` as comparable integers.

    The weights are read as exact rationals with common denominator D; the
    returned values are the scores scaled by D * ds.scale, so equality of the
    integers is equality of the true scores.
    """
    fr = w.as_fractions()
    if len(fr) != ds.d:
        raise ParameterError("weight dimension does not match dataset")
    den = math.lcm(*(f.denominator for f in fr))
    nums = [int(f * den) for f in fr]
    # int64 fast path when products cannot overflow
    bound = ds.scale * max(nums, default=0) * ds.d
    if bound < 2**62:
        m = ds.int_matrix()
        return (m @ np.asarray(nums, dtype=np.int64)).tolist()
    return [
        sum(nv * pv for nv, pv in zip(nums, row)) for row in ds.int_scores
    ]


def top_k(ds: Dataset, w: WeightVector, k: int) -> TopKResult:
    """Tie-aware top-k of the dataset under ``w`` (exact comparisons)."""
    if not 1 <= k <= ds.n:
        raise ParameterError(f"k must be in [1, {ds.n}], got {k}")
    vals = exact_scores(ds, w)
    order = sorted(range(ds.n), key=lambda i: vals[i], reverse=True)
    kth = vals[order[k - 1]]
    above = [i for i in order if vals[i] > kth]
    tied = [i for i in order if vals[i] == kth]
    if len(above) + len(tied) == k:
        return TopKResult(frozenset(above + tied), frozenset(), 0)
    return TopKResult(frozenset(above), frozenset(tied), k - len(above))


def fairness_interval(ds: Dataset, r: TopKResult) -> tuple[int, int]:
    """Tight [min, max] of protected counts over all valid completions."""
    fixed = sum(1 for i in r.strictly_in if ds.protected_flags[i])
    g = sum(1 for i in r.tied_pool if ds.protected_flags[i])
    o = len(r.tied_pool) - g
    s = r.slots
    return fixed + max(0, s - o), fixed + min(s, g)


def is_fair(spec: FairnessSpec, interval: tuple[int, int]) -> bool:
    """True iff the achievable protected-count interval meets the bounds."""
    lo, hi = interval
    if lo > hi:
        raise ParameterError("interval min exceeds max")
    return max(lo, spec.lower) <= min(hi, spec.upper)
