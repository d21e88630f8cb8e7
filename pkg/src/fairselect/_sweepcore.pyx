# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled 2-D sweep kernel.

Same event loop as ``fairselect._sweep_py`` but with the kinetic tournament
trees laid out as flat int64 arrays. Sound only when the caller has verified
that every intermediate product fits in int64 (see sweep2d eligibility
check); all arithmetic is exact integer arithmetic under that guard.
"""

import time as _time

import numpy as np

ctypedef long long i64

cdef struct TP:  # rational time; d == 0 encodes +infinity
    i64 n
    i64 d


cdef inline bint time_lt(TP a, TP b) noexcept:
    if a.d == 0:
        return False
    if b.d == 0:
        return True
    return a.n * b.d < b.n * a.d


cdef inline bint time_eq(TP a, TP b) noexcept:
    if a.d == 0 or b.d == 0:
        return a.d == b.d
    return a.n * b.d == b.n * a.d


cdef inline TP time_min(TP a, TP b) noexcept:
    return b if time_lt(b, a) else a


cdef inline TP inf_tp() noexcept:
    cdef TP t
    t.n = 1
    t.d = 0
    return t


cdef class KTree:
    cdef i64[::1] lm, lc, lsidx, lowner
    cdef unsigned char[::1] lprot
    cdef i64[::1] nleaf, nleft, nright, parent, winner
    cdef i64[::1] certn, certd, mevn, mevd
    cdef i64[::1] leaf_node, slot_of, stack
    cdef i64 root, size, pg
    cdef int sign
    cdef TP now
    cdef i64 next_id

    def __init__(self, i64[::1] ms, i64[::1] cs, unsigned char[::1] prot,
                 i64[::1] members, int sign, i64 n_global, i64 lbn, i64 lbd):
        cdef i64 L = members.shape[0]
        cdef i64 i, idx
        self.size = L
        self.sign = sign
        self.now.n = lbn
        self.now.d = lbd
        self.pg = 0
        self.lm = np.empty(L, dtype=np.int64)
        self.lc = np.empty(L, dtype=np.int64)
        self.lsidx = np.empty(L, dtype=np.int64)
        self.lowner = np.empty(L, dtype=np.int64)
        self.lprot = np.empty(L, dtype=np.uint8)
        self.slot_of = np.full(n_global, -1, dtype=np.int64)
        for i in range(L):
            idx = members[i]
            self.lm[i] = ms[idx]
            self.lc[i] = cs[idx]
            self.lprot[i] = prot[idx]
            self.lsidx[i] = idx
            self.lowner[i] = idx
            self.slot_of[idx] = i
            self.pg += prot[idx]
        cdef i64 nn = 2 * L - 1
        self.nleaf = np.full(nn, -1, dtype=np.int64)
        self.nleft = np.full(nn, -1, dtype=np.int64)
        self.nright = np.full(nn, -1, dtype=np.int64)
        self.parent = np.full(nn, -1, dtype=np.int64)
        self.winner = np.full(nn, -1, dtype=np.int64)
        self.certn = np.empty(nn, dtype=np.int64)
        self.certd = np.zeros(nn, dtype=np.int64)
        self.mevn = np.empty(nn, dtype=np.int64)
        self.mevd = np.zeros(nn, dtype=np.int64)
        self.leaf_node = np.empty(L, dtype=np.int64)
        self.stack = np.empty(nn + 1, dtype=np.int64)
        self.next_id = 0
        self.root = self._layout(0, L)
        self._init_node(self.root)

    cdef i64 _layout(self, i64 lo, i64 hi):
        cdef i64 node = self.next_id
        cdef i64 mid, left, right
        self.next_id += 1
        if hi - lo == 1:
            self.nleaf[node] = lo
            self.leaf_node[lo] = node
            return node
        mid = lo + (hi - lo + 1) // 2
        left = self._layout(lo, mid)
        right = self._layout(mid, hi)
        self.nleft[node] = left
        self.nright[node] = right
        self.parent[left] = node
        self.parent[right] = node
        return node

    cdef void _init_node(self, i64 node) noexcept:
        if self.nleaf[node] >= 0:
            self.winner[node] = self.nleaf[node]
            self.certd[node] = 0
            self.certn[node] = 1
            self.mevd[node] = 0
            self.mevn[node] = 1
            return
        self._init_node(self.nleft[node])
        self._init_node(self.nright[node])
        self.refresh(node)

    cdef inline bint beats(self, i64 i, i64 j) noexcept:
        cdef i64 vi = self.lm[i] * self.now.n + self.lc[i] * self.now.d
        cdef i64 vj = self.lm[j] * self.now.n + self.lc[j] * self.now.d
        if vi != vj:
            return vi > vj if self.sign > 0 else vi < vj
        if self.lm[i] != self.lm[j]:
            return self.lm[i] > self.lm[j] if self.sign > 0 else self.lm[i] < self.lm[j]
        return (self.lsidx[i] < self.lsidx[j]) == (self.sign > 0)

    cdef inline TP cross_after(self, i64 i, i64 j) noexcept:
        cdef TP out
        cdef i64 dm = self.lm[i] - self.lm[j]
        cdef i64 num = self.lc[j] - self.lc[i]
        if dm == 0:
            return inf_tp()
        if dm < 0:
            dm = -dm
            num = -num
        if num * self.now.d > self.now.n * dm:
            out.n = num
            out.d = dm
            return out
        return inf_tp()

    cdef void refresh(self, i64 node) noexcept:
        cdef i64 left = self.nleft[node]
        cdef i64 right = self.nright[node]
        cdef i64 wl = self.winner[left]
        cdef i64 wr = self.winner[right]
        cdef TP cert, mev
        self.winner[node] = wl if self.beats(wl, wr) else wr
        cert = self.cross_after(wl, wr)
        self.certn[node] = cert.n
        self.certd[node] = cert.d
        mev.n = self.mevn[left]
        mev.d = self.mevd[left]
        if time_lt(TP(self.mevn[right], self.mevd[right]), mev):
            mev.n = self.mevn[right]
            mev.d = self.mevd[right]
        if time_lt(cert, mev):
            mev = cert
        self.mevn[node] = mev.n
        self.mevd[node] = mev.d

    cdef void refresh_up(self, i64 node) noexcept:
        while node != -1:
            self.refresh(node)
            node = self.parent[node]

    cdef inline TP next_event(self) noexcept:
        cdef TP t
        t.n = self.mevn[self.root]
        t.d = self.mevd[self.root]
        return t

    cdef void advance(self) noexcept:
        cdef TP t = self.next_event()
        cdef i64 node = self.root
        cdef i64 left, right
        while True:
            left = self.nleft[node]
            right = self.nright[node]
            if left != -1 and time_eq(TP(self.mevn[left], self.mevd[left]), t):
                node = left
            elif right != -1 and time_eq(TP(self.mevn[right], self.mevd[right]), t):
                node = right
            else:
                break
        self.now = t
        self.refresh_up(node)

    cdef void seek(self, TP t) noexcept:
        self.now = t

    cdef inline i64 top_slot(self) noexcept:
        return self.winner[self.root]

    cdef void collect_tied(self, TP t, i64 *count, i64 *protcount) noexcept:
        cdef i64 target, sp, node, leaf, w
        cdef i64 a = t.n
        cdef i64 b = t.d
        w = self.winner[self.root]
        target = self.lm[w] * a + self.lc[w] * b
        count[0] = 0
        protcount[0] = 0
        sp = 0
        self.stack[sp] = self.root
        sp += 1
        while sp > 0:
            sp -= 1
            node = self.stack[sp]
            w = self.winner[node]
            if self.lm[w] * a + self.lc[w] * b != target:
                continue
            leaf = self.nleaf[node]
            if leaf >= 0:
                count[0] += 1
                protcount[0] += self.lprot[leaf]
            else:
                self.stack[sp] = self.nleft[node]
                sp += 1
                self.stack[sp] = self.nright[node]
                sp += 1

    cdef void put(self, i64 slot, i64 m, i64 c, unsigned char p, i64 sidx, i64 owner) noexcept:
        self.pg += <i64>p - <i64>self.lprot[slot]
        self.slot_of[self.lowner[slot]] = -1
        self.lm[slot] = m
        self.lc[slot] = c
        self.lprot[slot] = p
        self.lsidx[slot] = sidx
        self.lowner[slot] = owner
        self.slot_of[owner] = slot
        self.refresh_up(self.parent[self.leaf_node[slot]])


def run_sweep(ms_in, cs_in, prot_in, order_in,
              long long k, long long lower, long long upper,
              long long lbn, long long lbd, long long ubn, long long ubd,
              double time_limit):
    """Drive the sweep; returns a dict with status, t, and counters."""
    cdef i64[::1] ms = np.ascontiguousarray(ms_in, dtype=np.int64)
    cdef i64[::1] cs = np.ascontiguousarray(cs_in, dtype=np.int64)
    cdef unsigned char[::1] prot = np.ascontiguousarray(prot_in, dtype=np.uint8)
    cdef i64[::1] order = np.ascontiguousarray(order_in, dtype=np.int64)
    cdef i64 n = ms.shape[0]
    cdef TP lb, ub, now, t, t1, t2, t3
    lb.n = lbn
    lb.d = lbd
    ub.n = ubn
    ub.d = ubd

    cdef KTree q1 = KTree(ms, cs, prot, order[:k], -1, n, lbn, lbd)
    cdef KTree q2 = KTree(ms, cs, prot, order[k:], +1, n, lbn, lbd)

    cdef i64 events = 0, exchanges = 0, simultaneous = 0
    cdef i64 m1, m2, p1, p2, g, o, s, fixed, lo_cnt, hi_cnt
    cdef i64 s1, s2, dm, num
    cdef i64 v1, v2
    cdef i64 xm, xc, xs, xo
    cdef unsigned char xp
    cdef bint sim, below
    cdef double deadline = -1.0
    if time_limit > 0:
        deadline = _time.monotonic() + time_limit

    now = lb
    while True:
        if deadline > 0 and events % 256 == 0:
            if _time.monotonic() > deadline:
                return {"status": "timeout", "t_num": 0, "t_den": 0,
                        "events": events, "exchanges": exchanges,
                        "simultaneous": simultaneous}
        t1 = q1.next_event()
        t2 = q2.next_event()
        # crossing of the two tops strictly after `now`
        s1 = q1.top_slot()
        s2 = q2.top_slot()
        dm = q1.lm[s1] - q2.lm[s2]
        num = q2.lc[s2] - q1.lc[s1]
        if dm == 0:
            t3 = inf_tp()
        else:
            if dm < 0:
                dm = -dm
                num = -num
            if num * now.d > now.n * dm:
                t3.n = num
                t3.d = dm
            else:
                t3 = inf_tp()
        t = time_min(t1, time_min(t2, t3))
        if t.d == 0 or time_lt(ub, t):
            return {"status": "infeasible", "t_num": 0, "t_den": 0,
                    "events": events, "exchanges": exchanges,
                    "simultaneous": simultaneous}
        events += 1
        # Boundary activity trigger: the tops' values coincide at t (a top
        # crossing implies it; duplicate tops straddling the boundary satisfy
        # it at every event while the straddle lasts).
        if (q1.lm[s1] * t.n + q1.lc[s1] * t.d
                == q2.lm[s2] * t.n + q2.lc[s2] * t.d):
            sim = False
            if time_eq(t, t1):
                sim = True
                while time_eq(q1.next_event(), t):
                    q1.advance()
            if time_eq(t, t2):
                sim = True
                while time_eq(q2.next_event(), t):
                    q2.advance()
            q1.seek(t)
            q2.seek(t)
            q1.collect_tied(t, &m1, &p1)
            q2.collect_tied(t, &m2, &p2)
            if m1 + m2 > 2:
                sim = True
            if sim:
                simultaneous += 1
            g = p1 + p2
            fixed = q1.pg - p1
            o = m1 + m2 - g
            s = m1
            lo_cnt = fixed + (s - o if s > o else 0)
            hi_cnt = fixed + (s if s < g else g)
            if (lo_cnt if lo_cnt > lower else lower) <= (hi_cnt if hi_cnt < upper else upper):
                return {"status": "found", "t_num": t.n, "t_den": t.d,
                        "events": events, "exchanges": exchanges,
                        "simultaneous": simultaneous}
            while True:
                s1 = q1.top_slot()
                s2 = q2.top_slot()
                v1 = q1.lm[s1] * t.n + q1.lc[s1] * t.d
                v2 = q2.lm[s2] * t.n + q2.lc[s2] * t.d
                below = v1 < v2 or (
                    v1 == v2
                    and (
                        q1.lm[s1] < q2.lm[s2]
                        or (q1.lm[s1] == q2.lm[s2] and q1.lsidx[s1] > q2.lsidx[s2])
                    )
                )
                if not below:
                    break
                exchanges += 1
                xm = q1.lm[s1]
                xc = q1.lc[s1]
                xp = q1.lprot[s1]
                xs = q1.lsidx[s1]
                xo = q1.lowner[s1]
                q1.put(s1, q2.lm[s2], q2.lc[s2], q2.lprot[s2],
                       q2.lsidx[s2], q2.lowner[s2])
                q2.put(s2, xm, xc, xp, xs, xo)
        elif time_eq(t, t1):
            q1.advance()
        else:
            q2.advance()
        now = t
