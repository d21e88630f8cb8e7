"""Dual transform, dominance relations, and k-skyband preprocessing.

A candidate's score point p maps to the hyperplane
``x_d = (p_1 - p_d) x_1 + ... + (p_{d-1} - p_d) x_{d-1} + p_d``; evaluating it
at (w_1, ..., w_{d-1}) gives the candidate's score under the simplex weight
vector (w_1, ..., w_{d-1}, 1 - sum w_i). The transform therefore preserves the
score order of every candidate pair at every weight vector.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ParameterError
from .exact import to_fraction
from .model import Candidate, Dataset


@dataclass(frozen=True)
class DualHyperplane:
    """x_d = coeffs . (x_1..x_{d-1}) + intercept, owned by one candidate."""

    owner: int
    coeffs: tuple[Fraction, ...]
    intercept: Fraction

    def value_at(self, xs: Sequence) -> Fraction:
        xs = tuple(to_fraction(x) for x in xs)
        if len(xs) != len(self.coeffs):
            raise ParameterError("evaluation point has wrong dimension")
        return sum((a * x for a, x in zip(self.coeffs, xs)), self.intercept)


@dataclass(frozen=True)
class DualLine:
    """2-D specialization: y = slope * x + intercept.

    ``stable_index`` is the ingestion order and breaks ties between duplicate
    lines deterministically. ``protected`` tags the owner's group membership
    so kinetic structures can count protected leaves without a lookup.
    """

    owner: int
    slope: Fraction
    intercept: Fraction
    stable_index: int
    protected: bool = field(default=False, compare=False)

    def value_at(self, x) -> Fraction:
        return self.slope * to_fraction(x) + self.intercept


def dual_transform(c: Candidate) -> DualHyperplane:
    """Map a candidate's score point to its dual hyperplane (exact)."""
    p = [to_fraction(s) for s in c.scores]
    pd = p[-1]
    return DualHyperplane(
        owner=c.cid,
        coeffs=tuple(pi - pd for pi in p[:-1]),
        intercept=pd,
    )


def dual_lines(ds: Dataset) -> list[DualLine]:
    """Exact dual lines of a 2-D dataset, built from the grid integers."""
    if ds.d != 2:
        raise ParameterError("dual lines exist only for d=2 datasets")
    out = []
    for i, (p1, p2) in enumerate(ds.int_scores):
        out.append(
            DualLine(
                owner=i,
                slope=Fraction(p1 - p2, ds.scale),
                intercept=Fraction(p2, ds.scale),
                stable_index=i,
                protected=ds.protected_flags[i],
            )
        )
    return out


def dominates(a: Candidate, b: Candidate) -> bool:
    """Strict coordinatewise dominance: a_i > b_i for every i."""
    if len(a.scores) != len(b.scores):
        raise ParameterError("dominance needs matching dimensions")
    return all(x > y for x, y in zip(a.scores, b.scores))


def dominance_counts(ds: Dataset, block: int = 512) -> np.ndarray:
    """count[j] = number of candidates that strictly dominate candidate j."""
    m = ds.int_matrix()
    n = ds.n
    counts = np.zeros(n, dtype=np.int64)
    for start in range(0, n, block):
        chunk = m[start : start + block]  # b x d
        # dom[i, j] with i over all candidates, j over the chunk
        dom = np.all(m[:, None, :] > chunk[None, :, :], axis=2)
        counts[start : start + block] = dom.sum(axis=0)
    return counts


def dominating_counts(ds: Dataset, block: int = 512) -> np.ndarray:
    """count[i] = number of candidates that candidate i strictly dominates."""
    m = ds.int_matrix()
    n = ds.n
    counts = np.zeros(n, dtype=np.int64)
    for start in range(0, n, block):
        chunk = m[start : start + block]
        dom = np.all(chunk[None, :, :] > m[:, None, :], axis=2)  # [j, i_chunk]
        counts[start : start + block] = dom.sum(axis=0)
    return counts


def k_skyband(ds: Dataset, k: int) -> set[int]:
    """Ids of candidates dominated by at most k-1 others.

    Every top-k subset of every non-negative weight vector is contained in
    this set, so it is a sound preprocessing reducer. Quadratic pairwise
    counting; fine at desk scale, flagged for future optimization.
    """
    if not 1 <= k <= ds.n:
        raise ParameterError(f"k must be in [1, {ds.n}], got {k}")
    counts = dominance_counts(ds)
    return {i for i in range(ds.n) if counts[i] <= k - 1}


def restrict_to_skyband(ds: Dataset, k: int, reducer=None) -> tuple[Dataset, list[int]]:
    """Dataset restricted to the k-skyband, plus the id remap (new -> old).

    ``reducer`` is a hook for stronger preprocessing: a callable
    (dataset, k) -> iterable of retained old ids. Defaults to k_skyband.
    """
    keep = sorted((reducer or k_skyband)(ds, k))
    remap = list(keep)
    cands = [
        Candidate(cid=new, scores=ds.candidates[old].scores, group=ds.candidates[old].group)
        for new, old in enumerate(remap)
    ]
    return Dataset(cands, protected=ds.protected, grid_decimals=ds.grid_decimals), remap
