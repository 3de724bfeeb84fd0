"""Conflict-driven clause learning solver.

Two watched literals, first-UIP learning with basic clause minimization,
VSIDS-style activities with phase saving, Luby restarts and LBD-based
learnt clause deletion.

Literal values live in a single list indexed by the signed literal itself:
positive literals use indices ``1..n`` and negative ones wrap around to the
end of the list, so ``val[lit]`` and ``val[-lit]`` are both direct lookups.
"""

from __future__ import annotations

import heapq
import random
import time
from typing import Sequence

SAT, UNSAT, UNKNOWN = "sat", "unsat", "unknown"


def luby(i: int) -> int:
    """i-th element (1-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1


class CdclSolver:
    def __init__(self, num_vars: int, clauses: Sequence[Sequence[int]], seed: int = 0):
        n = num_vars
        self.n = n
        size = 2 * n + 1
        self.val = [0] * size
        self.level = [0] * (n + 1)
        self.reason: list = [None] * (n + 1)
        self.watches: list[list[list[int]]] = [[] for _ in range(size)]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        rnd = random.Random(seed)
        self.activity = [rnd.random() * 1e-5 for _ in range(n + 1)]
        self.var_inc = 1.0
        self.phase = [False] * (n + 1)
        self.seen = bytearray(n + 1)
        self.learnts: list[list[int]] = []
        self.lbd: dict[int, int] = {}
        self.ok = True
        self.stats = {"decisions": 0, "conflicts": 0, "propagations": 0, "restarts": 0, "learnts": 0}
        self.heap = [(-self.activity[v], v) for v in range(1, n + 1)]
        heapq.heapify(self.heap)

        for c in clauses:
            c = list(dict.fromkeys(c))
            if any(-l in c for l in c):
                continue
            for l in c:
                if l == 0 or abs(l) > n:
                    raise ValueError(f"literal {l} out of range for {n} variables")
            if not c:
                self.ok = False
            elif len(c) == 1:
                lit = c[0]
                if self.val[lit] == -1:
                    self.ok = False
                elif self.val[lit] == 0:
                    self._assign(lit, None)
            else:
                self.watches[c[0]].append(c)
                self.watches[c[1]].append(c)

    # -- assignment --------------------------------------------------------

    def _assign(self, lit: int, reason) -> None:
        v = lit if lit > 0 else -lit
        self.val[lit] = 1
        self.val[-lit] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        trail, val, phase, reason, act, heap = self.trail, self.val, self.phase, self.reason, self.activity, self.heap
        stop = self.trail_lim[lvl]
        for i in range(len(trail) - 1, stop - 1, -1):
            lit = trail[i]
            v = lit if lit > 0 else -lit
            phase[v] = lit > 0
            val[lit] = 0
            val[-lit] = 0
            reason[v] = None
            heapq.heappush(heap, (-act[v], v))
        del trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(trail)

    # -- propagation -------------------------------------------------------

    def _propagate(self):
        val, watches, trail = self.val, self.watches, self.trail
        level, reason = self.level, self.reason
        cur = len(self.trail_lim)
        qhead = self.qhead
        props = 0
        confl = None
        while qhead < len(trail):
            p = trail[qhead]
            qhead += 1
            props += 1
            false_lit = -p
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                first = c[0]
                if first == false_lit:
                    first = c[1]
                    c[0] = first
                    c[1] = false_lit
                if val[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if val[first] == -1:
                        confl = c
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                    else:
                        v = first if first > 0 else -first
                        val[first] = 1
                        val[-first] = -1
                        level[v] = cur
                        reason[v] = c
                        trail.append(first)
            del ws[j:]
            if confl is not None:
                break
        self.qhead = qhead
        self.stats["propagations"] += props
        return confl

    # -- conflict analysis -------------------------------------------------

    def _bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for u in range(1, self.n + 1):
                act[u] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[u], u) for u in range(1, self.n + 1) if self.val[u] == 0]
            heapq.heapify(self.heap)
        elif self.val[v] == 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        seen, level, reason, trail = self.seen, self.level, self.reason, self.trail
        cur = len(self.trail_lim)
        learnt = [0]
        to_clear = []
        path = 0
        p = 0
        idx = len(trail) - 1
        c = confl
        while True:
            for q in c if p == 0 else c[1:]:
                v = q if q > 0 else -q
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    to_clear.append(v)
                    self._bump(v)
                    if level[v] >= cur:
                        path += 1
                    else:
                        learnt.append(q)
            while True:
                lit = trail[idx]
                if seen[lit if lit > 0 else -lit]:
                    break
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = p if p > 0 else -p
            c = reason[v]
            seen[v] = 0
            path -= 1
            if path == 0:
                break
        learnt[0] = -p

        # drop literals implied by the rest of the clause
        kept = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q if q > 0 else -q]
            if r is None:
                kept.append(q)
                continue
            for x in r[1:]:
                vx = x if x > 0 else -x
                if not seen[vx] and level[vx] > 0:
                    kept.append(q)
                    break
        for v in to_clear:
            seen[v] = 0
        learnt = kept

        if len(learnt) == 1:
            return learnt, 0
        best = 1
        for i in range(2, len(learnt)):
            if level[abs(learnt[i])] > level[abs(learnt[best])]:
                best = i
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[abs(learnt[1])]

    # -- learnt clause management -----------------------------------------

    def _reduce(self) -> None:
        val, reason = self.val, self.reason

        def locked(c):
            v = abs(c[0])
            return val[c[0]] == 1 and reason[v] is c

        cands = [c for c in self.learnts if self.lbd[id(c)] > 2 and not locked(c)]
        cands.sort(key=lambda c: (self.lbd[id(c)], len(c)), reverse=True)
        drop = {id(c) for c in cands[: len(cands) // 2]}
        if not drop:
            return
        self.learnts = [c for c in self.learnts if id(c) not in drop]
        for cid in drop:
            del self.lbd[cid]
        for ws in self.watches:
            if ws:
                ws[:] = [c for c in ws if id(c) not in drop]

    # -- main loop ---------------------------------------------------------

    def _pick(self) -> int:
        heap, val, act = self.heap, self.val, self.activity
        while heap:
            a, v = heapq.heappop(heap)
            if val[v] == 0 and -a == act[v]:
                return v
        for v in range(1, self.n + 1):
            if val[v] == 0:
                return v
        return 0

    def solve(self, max_conflicts: int | None = None, max_seconds: float | None = None):
        """Return ``(status, model)``; model is a list of signed literals."""
        start = time.perf_counter()
        if not self.ok or self._propagate() is not None:
            self.ok = False
            return UNSAT, None
        stats = self.stats
        restart_no = 1
        restart_at = luby(restart_no) * 100
        since_restart = 0
        reduce_at = 2000
        while True:
            confl = self._propagate()
            if confl is not None:
                stats["conflicts"] += 1
                since_restart += 1
                if not self.trail_lim:
                    self.ok = False
                    return UNSAT, None
                learnt, bt = self._analyze(confl)
                self._backtrack(bt)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    levels = {self.level[abs(l)] for l in learnt}
                    self.learnts.append(learnt)
                    self.lbd[id(learnt)] = len(levels)
                    stats["learnts"] += 1
                    self.watches[learnt[0]].append(learnt)
                    self.watches[learnt[1]].append(learnt)
                    self._assign(learnt[0], learnt)
                self.var_inc /= 0.95
                if max_conflicts is not None and stats["conflicts"] >= max_conflicts:
                    self._backtrack(0)
                    return UNKNOWN, None
                if max_seconds is not None and stats["conflicts"] % 64 == 0:
                    if time.perf_counter() - start > max_seconds:
                        self._backtrack(0)
                        return UNKNOWN, None
                continue
            if since_restart >= restart_at:
                stats["restarts"] += 1
                restart_no += 1
                restart_at = luby(restart_no) * 100
                since_restart = 0
                self._backtrack(0)
                continue
            if len(self.learnts) >= reduce_at + len(self.trail):
                self._reduce()
                reduce_at += 300
            v = self._pick()
            if v == 0:
                model = [u if self.val[u] == 1 else -u for u in range(1, self.n + 1)]
                return SAT, model
            stats["decisions"] += 1
            self.trail_lim.append(len(self.trail))
            self._assign(v if self.phase[v] else -v, None)
