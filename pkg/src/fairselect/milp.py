"""Mixed-integer feasibility for fair top-k weight search.

The model couples a weight vector w, a score cut-off lam in [0, 1], and one
binary indicator per candidate through the window constraint

    -1 <= w . p(c) - lam - delta_c <= 0

so that delta_c is forced to 0 below the cut, forced to 1 above it, and free
at equality (which is exactly how tie completions enter the model). The
cardinality row sum(delta) = k pins the cut; the fairness rows bound the
protected indicators. Finding a fair weight vector is finding any feasible
point.

Solved here by depth-first branch-and-bound on the exact LP relaxation
(delta relaxed to [0, 1]): branch on the most fractional indicator, delta=1
first, stopping at the first integral feasible point. A node budget keeps
degenerate instances from running away; exhaustion is a distinct verdict,
never conflated with infeasibility. Models can also be exported in CPLEX-LP
text form for external solvers.
"""

import time as _time
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import lp as lpmod
from .errors import ParameterError
from .exact import to_fraction
from .geometry import dominance_counts, dominating_counts
from .model import Candidate, Dataset, FairnessSpec, WeightBox, WeightVector

FOUND = "found"
INFEASIBLE = "infeasible"
BUDGET = "budget"
TIMEOUT = "timeout"

DEFAULT_NODE_BUDGET = 10**6


@dataclass(frozen=True)
class MilpModel:
    """Feasibility program over (w, lam, delta)."""

    d: int
    n: int
    scores: tuple[tuple[Fraction, ...], ...]
    protected: tuple[bool, ...]
    k: int
    lower: int
    upper: int
    box_rows: tuple = ()

    @property
    def variable_count(self) -> int:
        return self.d + 1 + self.n

    @property
    def window_constraint_count(self) -> int:
        return 2 * self.n

    def structurally_equal(self, other: "MilpModel") -> bool:
        return (
            self.d == other.d
            and self.n == other.n
            and self.scores == other.scores
            and self.protected == other.protected
            and (self.k, self.lower, self.upper) == (other.k, other.lower, other.upper)
            and self.box_rows == other.box_rows
        )


@dataclass(frozen=True)
class MilpOutcome:
    status: str
    w: Optional[tuple[Fraction, ...]] = None
    lam: Optional[Fraction] = None
    delta: Optional[tuple[int, ...]] = None
    counters: dict = field(default_factory=dict)

    @property
    def chosen_ids(self) -> Optional[tuple[int, ...]]:
        if self.delta is None:
            return None
        return tuple(i for i, v in enumerate(self.delta) if v == 1)


def build_model(ds: Dataset, spec: FairnessSpec, box: WeightBox) -> MilpModel:
    """Assemble the feasibility program for a dataset and bounds."""
    spec.validate_against(ds)
    if box.d != ds.d:
        raise ParameterError("box dimension does not match dataset")
    scores = tuple(ds.frac_scores(i) for i in range(ds.n))
    for row in scores:
        for v in row:
            if not 0 <= v <= 1:
                raise ParameterError("scores must be normalized to [0, 1]")
    return MilpModel(
        d=ds.d,
        n=ds.n,
        scores=scores,
        protected=ds.protected_flags,
        k=spec.k,
        lower=spec.lower,
        upper=spec.upper,
        box_rows=tuple(box.inequalities),
    )


def check_indicator_semantics(w: WeightVector, lam, c: Candidate, delta_c: int) -> bool:
    """Property oracle for the window constraint's indicator semantics."""
    lam = to_fraction(lam)
    score = sum(
        wi * to_fraction(pi) for wi, pi in zip(w.as_fractions(), c.scores)
    )
    if score < lam:
        return delta_c == 0
    if score > lam:
        return delta_c == 1
    return delta_c in (0, 1)


def _dominance_fixing(m: MilpModel) -> dict[int, int]:
    """delta values implied by dominance: dominated by >= k others -> 0,
    dominating >= n-k others -> 1. Exact consequences of the window system."""
    cands = [
        Candidate(i, tuple(float(v) for v in row), "G1" if m.protected[i] else "G2")
        for i, row in enumerate(m.scores)
    ]
    ds = Dataset(cands, protected="G1", grid_decimals=_common_decimals(m))
    dominated = dominance_counts(ds)
    dominating = dominating_counts(ds)
    fixed: dict[int, int] = {}
    for i in range(m.n):
        if dominated[i] >= m.k:
            fixed[i] = 0
        elif dominating[i] >= m.n - m.k:
            fixed[i] = 1
    return fixed


def _common_decimals(m: MilpModel) -> int:
    dec = 0
    for row in m.scores:
        for v in row:
            d = 0
            den = v.denominator
            while den % 10 == 0:
                den //= 10
                d += 1
            while den % 2 == 0 or den % 5 == 0:
                den //= 2 if den % 2 == 0 else 5
                d += 1
            if den != 1:
                raise ParameterError("scores are not grid decimals")
            dec = max(dec, d)
    return max(dec, 1)


def _relaxation(m: MilpModel, fixed: dict[int, int], seed: int):
    """Solve the LP relaxation with some deltas fixed.

    Returns (w, lam, delta_by_cid) or None when infeasible. Variables are
    [w_1..w_d, lam, delta_free...].
    """
    free = [i for i in range(m.n) if i not in fixed]
    nf = len(free)
    dim = m.d + 1 + nf
    col_of = {c: m.d + 1 + j for j, c in enumerate(free)}
    zero = Fraction(0)
    rows = []

    def make(wpart, lam_coef, delta_pairs, rhs):
        a = list(wpart) + [lam_coef] + [zero] * nf
        for c, coef in delta_pairs:
            a[col_of[c]] = coef
        return tuple(a), rhs

    one = Fraction(1)
    for c in range(m.n):
        p = m.scores[c]
        if c in fixed:
            v = Fraction(fixed[c])
            rows.append(make(p, -one, (), v))                       # w.p - lam <= v
            rows.append(make(tuple(-x for x in p), one, (), 1 - v))  # lam - w.p <= 1 - v
        else:
            rows.append(make(p, -one, ((c, -one),), zero))
            rows.append(make(tuple(-x for x in p), one, ((c, one),), one))
    k_free = m.k - sum(v for v in fixed.values())
    if k_free < 0 or k_free > nf:
        return None
    ones = [(c, one) for c in free]
    rows.extend(
        (make((zero,) * m.d, zero, ones, Fraction(k_free)),
         make((zero,) * m.d, zero, [(c, -one) for c in free], Fraction(-k_free)))
    )
    g_fixed = sum(v for c, v in fixed.items() if m.protected[c])
    prot_free = [(c, one) for c in free if m.protected[c]]
    lo = m.lower - g_fixed
    hi = m.upper - g_fixed
    if not prot_free:
        if not lo <= 0 <= hi:
            return None
    else:
        rows.append(make((zero,) * m.d, zero, prot_free, Fraction(hi)))
        rows.append(
            make((zero,) * m.d, zero, [(c, -one) for c, _ in prot_free], Fraction(-lo))
        )
    for a, b in m.box_rows:
        rows.append(make(a, zero, (), b))
    rows.extend(
        lpmod.equality_rows([one] * m.d + [zero] * (1 + nf), 1)
    )
    prog = lpmod.LinearProgram(dim=dim, constraints=tuple(rows))
    bounds = [(Fraction(0), Fraction(1))] * dim
    res = lpmod.solve(prog, seed=seed, max_dim=dim, bounds=bounds)
    if res.status != lpmod.FEASIBLE:
        return None
    x = res.x
    w = x[: m.d]
    lam = x[m.d]
    delta = {c: x[col_of[c]] for c in free}
    delta.update({c: Fraction(v) for c, v in fixed.items()})
    return w, lam, delta


def solve_feasibility(
    m: MilpModel,
    seed: int = 0,
    budget: int = DEFAULT_NODE_BUDGET,
    time_limit: Optional[float] = None,
) -> MilpOutcome:
    """Depth-first branch and bound, first feasible solution wins."""
    counters = {"nodes": 0, "lps": 0}
    deadline = None if time_limit is None else _time.monotonic() + time_limit
    root = _dominance_fixing(m)
    stack: list[dict[int, int]] = [root]
    half = Fraction(1, 2)
    while stack:
        if counters["nodes"] >= budget:
            return MilpOutcome(BUDGET, counters=counters)
        if deadline is not None and _time.monotonic() > deadline:
            return MilpOutcome(TIMEOUT, counters=counters)
        fixed = stack.pop()
        counters["nodes"] += 1
        n1 = sum(v for v in fixed.values())
        g1 = sum(v for c, v in fixed.items() if m.protected[c])
        free_prot = sum(1 for c in range(m.n) if c not in fixed and m.protected[c])
        if n1 > m.k or m.k - n1 > m.n - len(fixed):
            continue
        if g1 > m.upper or g1 + free_prot < m.lower:
            continue
        node_seed = zlib.crc32(repr((seed, sorted(fixed.items()))).encode())
        counters["lps"] += 1
        sol = _relaxation(m, fixed, node_seed)
        if sol is None:
            continue
        w, lam, delta = sol
        frac = [(abs(v - half), c) for c, v in delta.items() if v.denominator != 1]
        if not frac:
            dvec = tuple(int(delta[c]) for c in range(m.n))
            _verify_solution(m, w, lam, dvec)
            return MilpOutcome(FOUND, tuple(w), lam, dvec, counters)
        _, branch_c = min(frac)
        stack.append({**fixed, branch_c: 0})
        stack.append({**fixed, branch_c: 1})  # delta=1 explored first
    return MilpOutcome(INFEASIBLE, counters=counters)


def _verify_solution(m: MilpModel, w, lam, delta) -> None:
    if sum(delta) != m.k:
        raise AssertionError("cardinality violated")
    prot = sum(v for c, v in enumerate(delta) if m.protected[c])
    if not m.lower <= prot <= m.upper:
        raise AssertionError("fairness bounds violated")
    if sum(w) != 1 or any(x < 0 for x in w):
        raise AssertionError("weight simplex violated")
    for c in range(m.n):
        s = sum(wi * pi for wi, pi in zip(w, m.scores[c]))
        if not -1 <= s - lam - delta[c] <= 0:
            raise AssertionError("window constraint violated")
    for a, b in m.box_rows:
        if sum(ai * wi for ai, wi in zip(a, w)) > b:
            raise AssertionError("box constraint violated")


# ---------------------------------------------------------------------------
# CPLEX-LP text export / parse

def _decimal_str(x: Fraction) -> str:
    num, den = x.numerator, x.denominator
    if den == 1:
        return str(num)
    p2 = p5 = 0
    d = den
    while d % 2 == 0:
        d //= 2
        p2 += 1
    while d % 5 == 0:
        d //= 5
        p5 += 1
    if d != 1:
        raise ParameterError(
            f"{x} has no finite decimal form; LP export needs decimal data"
        )
    digits = max(p2, p5)
    scaled = num * 10**digits // den
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}" if digits else f"{sign}{s}"


def _terms(pairs) -> str:
    parts = []
    for coef, name in pairs:
        if coef == 0:
            continue
        mag = abs(coef)
        coef_s = "" if mag == 1 else _decimal_str(mag) + " "
        if not parts:
            parts.append(("- " if coef < 0 else "") + coef_s + name)
        else:
            parts.append(("- " if coef < 0 else "+ ") + coef_s + name)
    if not parts:  # empty sum: write an explicit zero term
        return "0 w1"
    return " ".join(parts)


def export_lp_file(m: MilpModel, path) -> None:
    """Write the model in CPLEX-LP text format (re-parseable)."""
    wnames = [f"w{i + 1}" for i in range(m.d)]
    lines = ["Minimize", " obj: 0", "Subject To"]
    for c in range(m.n):
        pairs = list(zip(m.scores[c], wnames)) + [(-1, "lam"), (-1, f"d{c}")]
        lines.append(f" win_lo_{c}: {_terms(pairs)} >= -1")
        lines.append(f" win_hi_{c}: {_terms(pairs)} <= 0")
    lines.append(
        f" card: {_terms([(1, f'd{c}') for c in range(m.n)])} = {m.k}"
    )
    prot_pairs = [(1, f"d{c}") for c in range(m.n) if m.protected[c]]
    lines.append(f" fair_lo: {_terms(prot_pairs)} >= {m.lower}")
    lines.append(f" fair_hi: {_terms(prot_pairs)} <= {m.upper}")
    lines.append(f" simplex: {_terms([(1, wn) for wn in wnames])} = 1")
    for i, (a, b) in enumerate(m.box_rows):
        lines.append(f" box_{i}: {_terms(list(zip(a, wnames)))} <= {_decimal_str(b)}")
    lines.append("Bounds")
    for wn in wnames:
        lines.append(f" 0 <= {wn} <= 1")
    lines.append(" 0 <= lam <= 1")
    lines.append("Binaries")
    lines.append(" " + " ".join(f"d{c}" for c in range(m.n)))
    lines.append("End")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_expr(expr: str) -> dict[str, Fraction]:
    tokens = expr.replace("+", " + ").replace("-", " - ").split()
    coeffs: dict[str, Fraction] = {}
    sign = Fraction(1)
    pending: Optional[Fraction] = None
    for tok in tokens:
        if tok == "+":
            sign = Fraction(1)
        elif tok == "-":
            sign = Fraction(-1)
        else:
            try:
                val = Fraction(tok)
            except ValueError:
                coef = sign * (pending if pending is not None else Fraction(1))
                coeffs[tok] = coeffs.get(tok, Fraction(0)) + coef
                sign = Fraction(1)
                pending = None
                continue
            pending = val
    return coeffs


def parse_lp_file(path) -> MilpModel:
    """Re-read an exported model; inverse of :func:`export_lp_file`."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    rows: dict[str, tuple[dict[str, Fraction], str, Fraction]] = {}
    binaries: list[str] = []
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        low = line.lower()
        if low in ("minimize", "subject to", "bounds", "binaries", "end"):
            section = low
            continue
        if section == "subject to":
            name, rest = line.split(":", 1)
            for op in (">=", "<=", "="):
                if op in rest:
                    lhs, rhs = rest.split(op, 1)
                    rows[name.strip()] = (_parse_expr(lhs), op, Fraction(rhs.strip()))
                    break
        elif section == "binaries":
            binaries.extend(line.split())
    n = len(binaries)
    d = len([v for v in rows["simplex"][0] if v.startswith("w")])
    scores = []
    protected = []
    fair_vars = set(rows["fair_lo"][0])
    for c in range(n):
        coeffs, _, _ = rows[f"win_hi_{c}"]
        scores.append(tuple(coeffs.get(f"w{i + 1}", Fraction(0)) for i in range(d)))
        protected.append(f"d{c}" in fair_vars and rows["fair_lo"][0][f"d{c}"] != 0)
    box_rows = []
    for name in sorted(
        (r for r in rows if r.startswith("box_")), key=lambda s: int(s.split("_")[1])
    ):
        coeffs, _, b = rows[name]
        box_rows.append(
            (tuple(coeffs.get(f"w{i + 1}", Fraction(0)) for i in range(d)), b)
        )
    return MilpModel(
        d=d,
        n=n,
        scores=tuple(scores),
        protected=tuple(protected),
        k=int(rows["card"][2]),
        lower=int(rows["fair_lo"][2]),
        upper=int(rows["fair_hi"][2]),
        box_rows=tuple(box_rows),
    )
