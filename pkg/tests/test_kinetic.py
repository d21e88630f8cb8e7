"""Kinetic tournament tests: spec examples plus randomized-schedule oracles.

The naive oracle re-sorts all leaves at the current coordinate under the
perturbed order (value, then slope, then stable index). Advances are applied
one certificate at a time; full perturbed-order correctness of the top is
asserted at drained coordinates (matching how the sweep uses the queue), and
the extremal *value* is asserted after every single advance.
"""

import math
import random
from fractions import Fraction

import pytest

from fairselect.errors import ParameterError, StateError
from fairselect.geometry import DualLine
from fairselect.kinetic import MAX, MIN, KineticTournament


def line(owner, slope, intercept, idx=None, protected=False):
    return DualLine(
        owner=owner,
        slope=Fraction(slope),
        intercept=Fraction(intercept),
        stable_index=owner if idx is None else idx,
        protected=protected,
    )


def fan():
    # y = x, y = 1 - x, y = 0.5: all cross at x = 1/2
    return [line(0, 1, 0), line(1, -1, 1), line(2, 0, Fraction(1, 2))]


def naive_winner(lines, mode, t: Fraction):
    # One total order: value, slope, then smaller stable index counts as
    # "above"; a min-queue's duplicate winner is thus the larger index.
    sign = 1 if mode == MAX else -1

    def key(ln):
        return (sign * ln.value_at(t), sign * ln.slope, -sign * ln.stable_index)

    return max(lines, key=key)


class TestBuildAndTop:
    def test_fan_max_at_zero(self):
        q = KineticTournament(fan(), MAX, 0)
        assert q.top().owner == 1  # y = 1 - x has value 1

    def test_single_line(self):
        q = KineticTournament([line(7, 2, 0)], MAX, 0)
        assert q.top().owner == 7
        assert q.next_event_time() == math.inf

    def test_duplicates_resolve_by_stable_index(self):
        dup = [line(0, 0, 0.5, idx=5), line(1, 0, 0.5, idx=2)]
        # smaller stable index is "above": it is the max-queue's top and the
        # one a min-queue keeps farthest from its boundary
        assert KineticTournament(dup, MAX, 0).top().owner == 1
        assert KineticTournament(dup, MIN, 0).top().owner == 0

    def test_empty_rejected(self):
        with pytest.raises(ParameterError):
            KineticTournament([], MAX, 0)


class TestEvents:
    def test_fan_next_event(self):
        q = KineticTournament(fan(), MAX, 0)
        assert q.next_event_time() == Fraction(1, 2)

    def test_parallel_lines_never_cross(self):
        q = KineticTournament([line(0, 1, 0), line(1, 1, Fraction(1, 2))], MAX, 0)
        assert q.next_event_time() == math.inf

    def test_advance_past_infinity_is_error(self):
        q = KineticTournament([line(0, 1, 0)], MAX, 0)
        with pytest.raises(StateError):
            q.advance()

    def test_advance_applies_slope_rule_max(self):
        q = KineticTournament(fan(), MAX, 0)
        while q.next_event_time() == Fraction(1, 2):
            q.advance()
        assert q.top().owner == 0  # slope 1 wins just after the crossing

    def test_advance_applies_slope_rule_min(self):
        q = KineticTournament(fan(), MIN, 0)
        while q.next_event_time() == Fraction(1, 2):
            q.advance()
        assert q.top().owner == 1  # slope -1 is lowest after the crossing


class TestReplace:
    def test_replace_updates_pg_count(self):
        lines = [line(0, 1, 0, protected=True), line(1, -1, 1), line(2, 0, 0.3)]
        q = KineticTournament(lines, MAX, 0)
        assert q.pg_count() == 1
        q.replace(0, line(9, 0, 0.1, protected=False))
        assert q.pg_count() == 0
        q.replace(9, line(10, 0, 0.2, protected=True))
        assert q.pg_count() == 1

    def test_replace_with_itself_is_idempotent(self):
        lines = fan()
        q = KineticTournament(lines, MAX, 0)
        top_before = q.top().owner
        nxt_before = q.next_event_time()
        q.replace(2, lines[2])
        assert q.top().owner == top_before
        assert q.next_event_time() == nxt_before

    def test_replace_missing_owner(self):
        q = KineticTournament(fan(), MAX, 0)
        with pytest.raises(ParameterError):
            q.replace(99, line(4, 0, 0))

    def test_size_conserved(self):
        q = KineticTournament(fan(), MAX, 0)
        q.replace(1, line(5, 2, -1))
        assert q.size == 3 and q.owners() == {0, 2, 5}


class TestCollectTied:
    def test_fan_all_tied_at_half(self):
        q = KineticTournament(fan(), MAX, 0)
        while q.next_event_time() == Fraction(1, 2):
            q.advance()
        assert q.collect_tied_with_top(Fraction(1, 2)) == {0, 1, 2}

    def test_generic_position_top_only(self):
        q = KineticTournament(fan(), MAX, 0)
        assert q.collect_tied_with_top(Fraction(1, 4)) == {1}

    def test_duplicates_all_returned(self):
        lines = [line(0, 0, 0.5), line(1, 0, 0.5), line(2, 1, 0)]
        q = KineticTournament(lines, MAX, 0)
        assert q.collect_tied_with_top(0) == {0, 1}


def random_lines(rng, n, grid=8):
    lines = []
    for i in range(n):
        lines.append(
            line(
                i,
                Fraction(rng.randint(-grid, grid), grid),
                Fraction(rng.randint(0, grid), grid),
                protected=rng.random() < 0.5,
            )
        )
    return lines


class TestRandomizedScheduleOracle:
    @pytest.mark.parametrize("mode", [MIN, MAX])
    def test_oracle_equivalence(self, mode):
        rng = random.Random(mode == MAX)
        for trial in range(30):
            n = rng.randint(2, 48)
            lines = random_lines(rng, n)
            pool = random_lines(rng, n)
            for i, ln in enumerate(pool):
                pool[i] = DualLine(ln.owner + 1000, ln.slope, ln.intercept,
                                   ln.stable_index + 1000, ln.protected)
            q = KineticTournament(lines, mode, 0)
            current = {ln.owner: ln for ln in lines}
            bound = 2 * math.ceil(math.log2(q.size)) + 1
            for step in range(60):
                nxt = q.next_event_time()
                if rng.random() < 0.3 and pool:
                    out = rng.choice(sorted(current))
                    new = pool.pop()
                    q.replace(out, new)
                    del current[out]
                    current[new.owner] = new
                    assert q.last_op_updates <= bound
                elif nxt != math.inf:
                    while q.next_event_time() == nxt:
                        q.advance()
                        assert q.last_op_updates <= bound
                        # extremal value is right after every single advance
                        t = q.now
                        tf = Fraction(t[0], t[1])
                        vals = [ln.value_at(tf) for ln in current.values()]
                        best = max(vals) if mode == MAX else min(vals)
                        assert q.top().value_at(tf) == best
                else:
                    break
                t = Fraction(q.now[0], q.now[1])
                expect = naive_winner(list(current.values()), mode, t)
                assert q.top().owner == expect.owner
                assert q.pg_count() == sum(ln.protected for ln in current.values())

    def test_event_soundness_top_constant_between_events(self):
        rng = random.Random(99)
        for trial in range(15):
            lines = random_lines(rng, rng.randint(3, 24))
            q = KineticTournament(lines, MAX, 0)
            for _ in range(25):
                nxt = q.next_event_time()
                if nxt == math.inf:
                    break
                prev = Fraction(q.now[0], q.now[1])
                # sample strictly inside (prev, nxt): naive winner equals top
                for frac in (Fraction(1, 3), Fraction(2, 3)):
                    t = prev + (nxt - prev) * frac
                    expect = naive_winner(lines, MAX, t)
                    assert q.top().value_at(t) == expect.value_at(t)
                while q.next_event_time() == nxt:
                    q.advance()
