"""Pure-Python 2-D sweep kernel (fallback backend).

Implements the event loop of the practical 2-D k-level sweep on top of
:class:`fairselect.kinetic.KineticTournament`. The compiled backend in
``_sweepcore`` mirrors this logic with int64 arithmetic; this module is the
reference and handles arbitrary rational inputs via big integers.
"""

import math
import time as _time
from fractions import Fraction

from .geometry import DualLine
from .kinetic import MAX, MIN, KineticTournament

FOUND = "found"
INFEASIBLE = "infeasible"
TIMEOUT = "timeout"


def _intersect_after(h1: DualLine, h2: DualLine, now: Fraction):
    if h1.slope == h2.slope:
        return None
    x = (h2.intercept - h1.intercept) / (h1.slope - h2.slope)
    return x if x > now else None


def _strictly_below(h1: DualLine, h2: DualLine, t: Fraction) -> bool:
    v1, v2 = h1.value_at(t), h2.value_at(t)
    if v1 != v2:
        return v1 < v2
    if h1.slope != h2.slope:
        return h1.slope < h2.slope
    return h1.stable_index > h2.stable_index  # duplicates: smaller index above


def run_sweep(
    lines: list[DualLine],
    k: int,
    lower: int,
    upper: int,
    lb: Fraction,
    ub: Fraction,
    time_limit=None,
    on_event=None,
):
    """Sweep [lb, ub] for a coordinate whose top-k admits a fair completion.

    The fairness test at lb itself is the caller's job (it is tie-aware and
    uses the core model); this kernel reports the first *event* coordinate in
    (lb, ub] that passes the tie-aware test, or infeasible.

    ``on_event(t, q1, q2)`` is a test hook invoked after each boundary event
    is fully processed (post-exchange).
    """
    n = len(lines)
    assert 1 <= k < n, "caller handles k == n and validates k"
    prot = {ln.owner: ln.protected for ln in lines}
    den = 1
    for ln in lines:
        den = math.lcm(den, ln.slope.denominator, ln.intercept.denominator)

    vals = [ln.value_at(lb) for ln in lines]
    order = sorted(
        range(n), key=lambda i: (-vals[i], -lines[i].slope, lines[i].stable_index)
    )
    q1 = KineticTournament([lines[i] for i in order[:k]], MIN, lb, scale_den=den)
    q2 = KineticTournament([lines[i] for i in order[k:]], MAX, lb, scale_den=den)

    counters = {"events": 0, "exchanges": 0, "simultaneous": 0, "max_op_updates": 0}
    deadline = None if time_limit is None else _time.monotonic() + time_limit

    def track():
        counters["max_op_updates"] = max(
            counters["max_op_updates"], q1.last_op_updates, q2.last_op_updates
        )

    now = lb
    while True:
        if deadline is not None and counters["events"] % 64 == 0:
            if _time.monotonic() > deadline:
                return {"status": TIMEOUT, "t": None, "counters": counters}
        t1 = q1.next_event_time()
        t2 = q2.next_event_time()
        t3 = _intersect_after(q1.top(), q2.top(), now)
        t = min(x for x in (t1, t2, t3) if x is not None) if t3 is not None else min(t1, t2)
        if t is math.inf or t > ub:
            return {"status": INFEASIBLE, "t": None, "counters": counters}
        counters["events"] += 1
        # Boundary activity at t: the tops' values coincide there. A genuine
        # top crossing (t == t3) implies it; duplicate lines straddling the
        # boundary satisfy it at every event while the straddle lasts, which
        # is exactly when other lines can tie the cut without the tops ever
        # "crossing".
        boundary = q1.top().value_at(t) == q2.top().value_at(t)
        if boundary:
            simultaneous = False
            if t == t1:
                simultaneous = True
                while q1.next_event_time() == t:
                    q1.advance()
                    track()
            if t == t2:
                simultaneous = True
                while q2.next_event_time() == t:
                    q2.advance()
                    track()
            q1.seek(t)
            q2.seek(t)
            m1 = q1.collect_tied_with_top(t)
            m2 = q2.collect_tied_with_top(t)
            if len(m1) + len(m2) > 2:
                simultaneous = True
            if simultaneous:
                counters["simultaneous"] += 1
            # Tie-aware fairness over every completion of the boundary pool.
            g = sum(prot[i] for i in m1) + sum(prot[i] for i in m2)
            fixed = q1.pg_count() - sum(prot[i] for i in m1)
            o = len(m1) + len(m2) - g
            s = len(m1)
            lo = fixed + max(0, s - o)
            hi = fixed + min(s, g)
            if max(lo, lower) <= min(hi, upper):
                return {"status": FOUND, "t": t, "counters": counters}
            while _strictly_below(q1.top(), q2.top(), t):
                counters["exchanges"] += 1
                h1, h2 = q1.top(), q2.top()
                q1.replace(h1.owner, h2)
                q2.replace(h2.owner, h1)
                track()
            if on_event is not None:
                on_event(t, q1, q2)
        elif t == t1:
            q1.advance()
            track()
        else:
            q2.advance()
            track()
        now = t
