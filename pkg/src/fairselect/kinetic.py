"""Kinetic tournament tree over 2-D dual lines.

A fixed-size priority queue parameterized by the sweep coordinate ("time").
Each internal node of a flattened full binary tree (pre-order layout) caches
the winner of its subtree at the current time together with the earliest
future time any comparison in the subtree can change. The leaf set is fixed
for the structure's lifetime; membership changes only through `replace`.

Ordering is the perturbed order (value just after the current time): value
first, then slope (the x = t + eps rule at a crossing), then stable index for
duplicate lines, with the smaller index counting as "above". A max-queue's
top among duplicates is therefore the smaller stable index and a min-queue's
the larger, keeping every structure consistent with one total order.
Crossing times are exact rationals of the grid-snapped inputs, compared
exactly, so simultaneous events are detected reliably.

One `advance` processes one certificate event; simultaneous events at the
same coordinate surface as repeated `advance` calls returning the same
`next_event_time` until drained (how the sweep uses it). Between drains the
root's value is correct; the perturbed tie-break is settled once drained.
"""

import math
from fractions import Fraction
from typing import Iterable, Optional

from .errors import ParameterError, StateError
from .geometry import DualLine

MIN = "min"
MAX = "max"

INF = (1, 0)  # times are (num, den) with den > 0; den == 0 means +infinity


def _time_lt(a, b):
    if a[1] == 0:
        return False
    if b[1] == 0:
        return True
    return a[0] * b[1] < b[0] * a[1]


def _time_eq(a, b):
    if a[1] == 0 or b[1] == 0:
        return a[1] == b[1]
    return a[0] * b[1] == b[0] * a[1]


def _time_min(a, b):
    return b if _time_lt(b, a) else a


def _as_time(t) -> tuple[int, int]:
    if isinstance(t, tuple):
        return t
    f = Fraction(t)
    return f.numerator, f.denominator


class KineticTournament:
    """Kinetic priority queue with a fixed leaf set."""

    def __init__(self, lines: Iterable[DualLine], mode: str, t0=0, scale_den: Optional[int] = None):
        lines = list(lines)
        if not lines:
            raise ParameterError("kinetic tournament needs at least one line")
        if mode not in (MIN, MAX):
            raise ParameterError(f"mode must be '{MIN}' or '{MAX}'")
        self.mode = mode
        self._sign = 1 if mode == MAX else -1
        self.size = len(lines)
        self._den = scale_den or 1
        for ln in lines:
            self._den = math.lcm(self._den, ln.slope.denominator, ln.intercept.denominator)
        self._m = [0] * self.size
        self._c = [0] * self.size
        self._prot = [False] * self.size
        self._sidx = [0] * self.size
        self._line: list[DualLine] = [None] * self.size  # type: ignore[list-item]
        self._slot_of: dict[int, int] = {}
        for i, ln in enumerate(lines):
            self._install(i, ln)
        self._pg = sum(self._prot)
        self.now = _as_time(t0)

        # Pre-order flattened full binary tree over leaf slots.
        nnodes = 2 * self.size - 1
        self._nleaf = [-1] * nnodes
        self._nleft = [-1] * nnodes
        self._nright = [-1] * nnodes
        self._parent = [-1] * nnodes
        self._winner = [-1] * nnodes
        self._cert = [INF] * nnodes
        self._mev = [INF] * nnodes
        self._leaf_node = [0] * self.size
        self._next_id = 0
        self._root = self._layout(0, self.size)
        self.total_updates = 0
        self.last_op_updates = 0
        self._init_node(self._root)

    # -- construction -----------------------------------------------------

    def _install(self, slot: int, ln: DualLine) -> None:
        m = ln.slope * self._den
        c = ln.intercept * self._den
        if m.denominator != 1 or c.denominator != 1:
            raise AssertionError("line does not fit the current scale")
        self._m[slot] = m.numerator
        self._c[slot] = c.numerator
        self._prot[slot] = ln.protected
        self._sidx[slot] = ln.stable_index
        self._line[slot] = ln
        if ln.owner in self._slot_of and self._slot_of[ln.owner] != slot:
            raise ParameterError(f"duplicate owner id {ln.owner} in one queue")
        self._slot_of[ln.owner] = slot

    def _rescale(self, new_den: int) -> None:
        factor = new_den // self._den
        for i in range(self.size):
            self._m[i] *= factor
            self._c[i] *= factor
        self._den = new_den

    def _layout(self, lo: int, hi: int) -> int:
        node = self._next_id
        self._next_id += 1
        if hi - lo == 1:
            self._nleaf[node] = lo
            self._leaf_node[lo] = node
            return node
        mid = lo + (hi - lo + 1) // 2
        left = self._layout(lo, mid)
        right = self._layout(mid, hi)
        self._nleft[node] = left
        self._nright[node] = right
        self._parent[left] = node
        self._parent[right] = node
        return node

    def _init_node(self, node: int) -> None:
        leaf = self._nleaf[node]
        if leaf >= 0:
            self._winner[node] = leaf
            return
        self._init_node(self._nleft[node])
        self._init_node(self._nright[node])
        self._refresh(node)

    # -- ordering ---------------------------------------------------------

    def _beats(self, i: int, j: int, t) -> bool:
        """Does leaf i win over leaf j under the perturbed order at time t."""
        a, b = t
        vi = self._m[i] * a + self._c[i] * b
        vj = self._m[j] * a + self._c[j] * b
        if vi != vj:
            return (vi > vj) if self._sign > 0 else (vi < vj)
        if self._m[i] != self._m[j]:
            return (self._m[i] > self._m[j]) if self._sign > 0 else (self._m[i] < self._m[j])
        return (self._sidx[i] < self._sidx[j]) == (self._sign > 0)

    def _cross_after(self, i: int, j: int, t) -> tuple[int, int]:
        """Crossing time of leaves i and j strictly after t, or INF."""
        dm = self._m[i] - self._m[j]
        if dm == 0:
            return INF
        num = self._c[j] - self._c[i]
        if dm < 0:
            num, dm = -num, -dm
        # num/dm > t ?
        if num * t[1] > t[0] * dm:
            return (num, dm)
        return INF

    def _refresh(self, node: int) -> None:
        """Recompute one internal node's winner/certificate at self.now."""
        left, right = self._nleft[node], self._nright[node]
        wl, wr = self._winner[left], self._winner[right]
        self._winner[node] = wl if self._beats(wl, wr, self.now) else wr
        self._cert[node] = self._cross_after(wl, wr, self.now)
        self._mev[node] = _time_min(
            self._cert[node], _time_min(self._mev[left], self._mev[right])
        )
        self.total_updates += 1
        self.last_op_updates += 1

    def _refresh_upward(self, node: int) -> None:
        while node != -1:
            self._refresh(node)
            node = self._parent[node]

    # -- queries ----------------------------------------------------------

    def top(self) -> DualLine:
        return self._line[self._winner[self._root]]

    def pg_count(self) -> int:
        return self._pg

    def next_event_time(self):
        n, d = self._mev[self._root]
        return math.inf if d == 0 else Fraction(n, d)

    def owners(self) -> set[int]:
        return set(self._slot_of)

    # -- mutation ---------------------------------------------------------

    def seek(self, t) -> None:
        """Move time forward to t without crossing any event."""
        t = _as_time(t)
        if _time_lt(t, self.now):
            raise StateError("cannot seek backwards")
        if not _time_lt(t, self._mev[self._root]):
            raise StateError("seek would cross a pending event; use advance")
        self.now = t

    def advance(self) -> None:
        """Process the earliest pending certificate event.

        Several certificates may share one coordinate; each call handles one
        (deepest first), so callers drain a coordinate by advancing until
        next_event_time() moves past it.
        """
        self.last_op_updates = 0
        t = self._mev[self._root]
        if t[1] == 0:
            raise StateError("no pending events: next event time is +infinity")
        node = self._root
        while True:
            left, right = self._nleft[node], self._nright[node]
            if left != -1 and _time_eq(self._mev[left], t):
                node = left
            elif right != -1 and _time_eq(self._mev[right], t):
                node = right
            else:
                break
        self.now = t
        self._refresh_upward(node)

    def replace(self, out_id: int, new_line: DualLine) -> None:
        """Swap one leaf for a new line; caches refresh along its path."""
        self.last_op_updates = 0
        slot = self._slot_of.get(out_id)
        if slot is None:
            raise ParameterError(f"line {out_id} is not a leaf of this queue")
        need = math.lcm(
            self._den, new_line.slope.denominator, new_line.intercept.denominator
        )
        if need != self._den:
            self._rescale(need)
        self._pg -= self._prot[slot]
        del self._slot_of[out_id]
        self._install(slot, new_line)
        self._pg += self._prot[slot]
        self._refresh_upward(self._parent[self._leaf_node[slot]])

    # -- tie collection ---------------------------------------------------

    def collect_tied_with_top(self, t) -> set[int]:
        """Owners of all leaves whose value at t equals the top's value at t.

        Requires now <= t < next_event_time (the window where caches hold).
        """
        t = _as_time(t)
        if _time_lt(t, self.now) or not _time_lt(t, self._mev[self._root]):
            raise StateError("tree is not valid at the queried time")
        a, b = t

        def val(slot: int) -> int:
            return self._m[slot] * a + self._c[slot] * b

        target = val(self._winner[self._root])
        out: set[int] = set()
        stack = [self._root]
        while stack:
            node = stack.pop()
            if val(self._winner[node]) != target:
                continue
            leaf = self._nleaf[node]
            if leaf >= 0:
                out.add(self._line[leaf].owner)
            else:
                stack.append(self._nleft[node])
                stack.append(self._nright[node])
        return out
