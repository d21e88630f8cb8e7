"""High-dimensional fair-weight search: implicit traversal of k-level cells.

Cells of the (k-1)-level correspond to top-k subsets; adjacent cells differ
by one swapped element. The search is a breadth-first traversal over subsets
driven by a shared work queue: each job is a candidate subset, tested by a
separating-hyperplane LP over the weight region, expanded into its single-swap
neighbors when feasible and unseen.

Candidates with identical score vectors are collapsed into one class with a
multiplicity before the search; a search node is then a per-class count
vector, and fairness is an interval test over the protected counts the class
members can realize. This keeps duplicate-heavy (degenerate) inputs from
exploding the subset graph while still covering every tie completion.

Termination uses a shared pending counter: a worker counts itself before
every dequeue attempt and uncounts itself only upon observing an empty queue.
A worker exits when, having just observed the queue empty, the counter reads
zero: at that instant no worker can be holding or producing work. False
"pending" positives merely cause another scan; premature exit is impossible.
"""

import itertools
import threading
import time as _time
import zlib
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import lp as lpmod
from .errors import ParameterError, UnsupportedDimensionError
from .model import Dataset, FairnessSpec, WeightBox, WeightVector, top_k

FOUND = "found"
INFEASIBLE = "infeasible"
BUDGET = "budget"
TIMEOUT = "timeout"
CANCELLED = "cancelled"

_STATUS_PRIORITY = {FOUND: 3, CANCELLED: 2, BUDGET: 1, TIMEOUT: 1}


@dataclass(frozen=True)
class HdOutcome:
    status: str
    weight: Optional[WeightVector] = None
    subset_ids: Optional[tuple[int, ...]] = None
    counters: dict = field(default_factory=dict)
    explored: Optional[tuple] = None


class _Classes:
    """Candidates grouped by identical score vector."""

    def __init__(self, ds: Dataset):
        by_scores: dict[tuple[int, ...], list[int]] = {}
        for i, row in enumerate(ds.int_scores):
            by_scores.setdefault(row, []).append(i)
        self.scores = []      # Fraction tuples, one per class
        self.members = []     # sorted cids per class
        self.prot_members = []
        self.size = []
        self.prot = []
        self.class_of = [0] * ds.n
        for row, cids in sorted(by_scores.items(), key=lambda kv: kv[1][0]):
            idx = len(self.scores)
            self.scores.append(tuple(Fraction(v, ds.scale) for v in row))
            self.members.append(tuple(cids))
            pm = tuple(c for c in cids if ds.protected_flags[c])
            self.prot_members.append(pm)
            self.size.append(len(cids))
            self.prot.append(len(pm))
            for c in cids:
                self.class_of[c] = idx
        self.count = len(self.scores)
        # dom[a][b]: does class a's point strictly dominate class b's
        self.dom = [
            [
                a != b and all(x > y for x, y in zip(self.scores[a], self.scores[b]))
                for b in range(self.count)
            ]
            for a in range(self.count)
        ]

    def counts_of_subset(self, cids) -> tuple[int, ...]:
        counts = [0] * self.count
        for c in cids:
            counts[self.class_of[c]] += 1
        return tuple(counts)

    def protected_interval(self, counts) -> tuple[int, int]:
        lo = hi = 0
        for r, cnt in enumerate(counts):
            if cnt == 0:
                continue
            lo += max(0, cnt - (self.size[r] - self.prot[r]))
            hi += min(cnt, self.prot[r])
        return lo, hi

    def materialize(self, counts, target_protected: int) -> tuple[int, ...]:
        """Concrete candidate ids realizing the counts with the given
        protected total (must lie in the protected interval)."""
        takes = []
        lo_total = 0
        for r, cnt in enumerate(counts):
            lo_r = max(0, cnt - (self.size[r] - self.prot[r])) if cnt else 0
            takes.append(lo_r)
            lo_total += lo_r
        deficit = target_protected - lo_total
        for r, cnt in enumerate(counts):
            if deficit <= 0:
                break
            hi_r = min(cnt, self.prot[r]) if cnt else 0
            bump = min(deficit, hi_r - takes[r])
            takes[r] += bump
            deficit -= bump
        if deficit != 0:
            raise AssertionError("target protected count not realizable")
        ids: list[int] = []
        for r, cnt in enumerate(counts):
            if cnt == 0:
                continue
            take = takes[r]
            prot = self.prot_members[r]
            others = [c for c in self.members[r] if c not in prot]
            ids.extend(prot[:take])
            ids.extend(others[: cnt - take])
        return tuple(sorted(ids))

    def expand_all_subsets(self, counts):
        """Every concrete subset realizing a class-count vector (test scale)."""
        per_class = [
            itertools.combinations(self.members[r], cnt)
            for r, cnt in enumerate(counts)
            if cnt > 0
        ]
        for combo in itertools.product(*per_class):
            yield frozenset(itertools.chain.from_iterable(combo))


def _node_seed(seed: int, counts) -> int:
    return zlib.crc32(repr((seed, counts)).encode())


def find_fair_hd(
    ds: Dataset,
    spec: FairnessSpec,
    box: WeightBox,
    workers: int = 1,
    seed: int = 0,
    budget: Optional[int] = None,
    time_limit: Optional[float] = None,
    dominance_pruning: bool = True,
    track_explored: bool = False,
    cancel_event: Optional[threading.Event] = None,
) -> HdOutcome:
    """Search V for a weight vector whose top-k has a fair completion.

    The feasibility verdict is independent of ``workers`` and of dequeue
    order; only the witness may differ. ``budget`` caps the number of subset
    expansions and yields a distinct ``budget`` status when exhausted.
    """
    if not 2 <= ds.d <= 12:
        raise UnsupportedDimensionError("the k-level search supports 2 <= d <= 12")
    if workers < 1:
        raise ParameterError("workers must be >= 1")
    if box.d != ds.d:
        raise ParameterError("box dimension does not match dataset")
    spec.validate_against(ds)

    counters = {"lps": 0, "expanded": 0, "enqueued": 0, "pruned": 0}
    w0 = lpmod.feasible_point_in_box(box, ds.d, seed=seed)
    counters["lps"] += 1
    if w0 is None:
        return HdOutcome(INFEASIBLE, counters=counters)

    k = spec.k
    if k == ds.n:
        ids = tuple(range(ds.n))
        if spec.lower <= ds.protected_count <= spec.upper:
            return HdOutcome(FOUND, w0, ids, counters)
        return HdOutcome(INFEASIBLE, counters=counters)

    classes = _Classes(ds)
    r0 = top_k(ds, w0, k)
    seed_subset = sorted(r0.strictly_in) + sorted(r0.tied_pool)[: r0.slots]
    root = classes.counts_of_subset(seed_subset)

    box_rows = list(box.inequalities)
    simplex = lpmod.simplex_rows(ds.d)
    bounds = [(Fraction(0), Fraction(1))] * ds.d

    def separation_lp(counts) -> Optional[tuple[Fraction, ...]]:
        ins = [r for r in range(classes.count) if counts[r] > 0]
        outs = [r for r in range(classes.count) if counts[r] < classes.size[r]]
        rows = list(box_rows) + simplex
        for a in ins:
            pa = classes.scores[a]
            for b in outs:
                if a == b:
                    continue
                pb = classes.scores[b]
                rows.append((tuple(x - y for x, y in zip(pb, pa)), Fraction(0)))
        prog = lpmod.LinearProgram(dim=ds.d, constraints=tuple(rows))
        res = lpmod.solve(prog, seed=_node_seed(seed, counts), max_dim=max(12, ds.d), bounds=bounds)
        return res.x if res.status == lpmod.FEASIBLE else None

    # Shared search state
    dq: deque = deque()
    visited: dict = {}
    state_lock = threading.Lock()
    pending = [0]
    pending_lock = threading.Lock()
    stop = threading.Event()
    outcome: dict = {"status": None, "weight": None, "ids": None}
    explored: list = []
    deadline = None if time_limit is None else _time.monotonic() + time_limit

    def publish(status, weight=None, ids=None):
        with state_lock:
            cur = outcome["status"]
            if cur is None or _STATUS_PRIORITY.get(status, 0) > _STATUS_PRIORITY.get(cur, 0):
                outcome["status"] = status
                outcome["weight"] = weight
                outcome["ids"] = ids
        stop.set()

    def check_fair(counts, witness) -> bool:
        lo, hi = classes.protected_interval(counts)
        if max(lo, spec.lower) <= min(hi, spec.upper):
            target = max(lo, spec.lower)
            ids = classes.materialize(counts, target)
            publish(FOUND, WeightVector(witness), ids)
            return True
        return False

    def expand(counts) -> bool:
        """Insert-once expansion; returns False when the budget is spent."""
        token = object()
        if visited.setdefault(counts, token) is not token:
            return True
        with state_lock:
            counters["expanded"] += 1
            over = budget is not None and counters["expanded"] > budget
            if track_explored:
                explored.append(counts)
        if over:
            publish(BUDGET)
            return False
        for o in range(classes.count):
            if counts[o] == 0:
                continue
            for c in range(classes.count):
                if c == o or counts[c] >= classes.size[c]:
                    continue
                if dominance_pruning and classes.dom[o][c]:
                    with state_lock:
                        counters["pruned"] += 1
                    continue
                nxt = list(counts)
                nxt[o] -= 1
                nxt[c] += 1
                key = tuple(nxt)
                if key in visited:
                    continue
                dq.append(key)
                with state_lock:
                    counters["enqueued"] += 1
        return True

    def process(counts) -> None:
        if counts in visited:
            return
        witness = separation_lp(counts)
        with state_lock:
            counters["lps"] += 1
        if witness is None:
            return
        if check_fair(counts, witness):
            return
        expand(counts)

    def worker() -> None:
        counted = False
        while not stop.is_set():
            if deadline is not None and _time.monotonic() > deadline:
                publish(TIMEOUT)
                break
            if cancel_event is not None and cancel_event.is_set():
                publish(CANCELLED)
                break
            if not counted:
                with pending_lock:
                    pending[0] += 1
                counted = True
            try:
                job = dq.popleft()
            except IndexError:
                with pending_lock:
                    pending[0] -= 1
                    drained = pending[0] == 0
                counted = False
                if drained:
                    break
                _time.sleep(1e-5)
                continue
            process(job)

    # Seed node: check fairness at w0 directly, then expand its neighbors.
    if check_fair(root, w0.as_fractions()):
        return HdOutcome(FOUND, outcome["weight"], tuple(outcome["ids"]), counters)
    if expand(root):
        threads = [threading.Thread(target=worker, daemon=True) for _ in range(workers)]
        for th in threads:
            th.start()
        for th in threads:
            th.join()

    status = outcome["status"] or INFEASIBLE
    result_explored = tuple(explored) if track_explored else None
    if status == FOUND:
        return HdOutcome(
            FOUND, outcome["weight"], tuple(outcome["ids"]), counters, result_explored
        )
    return HdOutcome(status, counters=counters, explored=result_explored)
