"""Semantic checks of controllers on the explicit product graph.

Dual policies are judged through trap sets: non-goal vertex sets in which
every fair vertex keeps all its successors and every unfair vertex keeps
at least one. Vertices without successors (open or blocked policy points)
trivially stay, since a run that stops there never reaches the goal.
A reachable non-empty trap lets the environment avoid the goal forever
while respecting fairness; conversely the infinitely-visited part of any
fair goal-avoiding run is a trap.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .core import FondProblem, Mode
from .policy import DEFAULT_VERTEX_BUDGET, Controller, ProductGraph, build_product

KINDS = ("openPolicy", "precondViolation", "goalMislabel", "unreachableGoal", "badCycle", "trapSet")


@dataclass
class Failure:
    kind: str
    witness: list
    detail: str = ""


@dataclass
class Verdict:
    valid: bool
    mode: Mode
    failures: list[Failure] = field(default_factory=list)
    vertices: int = 0
    edges: int = 0
    product: ProductGraph | None = field(default=None, repr=False, compare=False)

    def kinds(self) -> set[str]:
        return {f.kind for f in self.failures}

    def to_dict(self, P: FondProblem | None = None) -> dict:
        g = self.product

        def show(v):
            if g is None or P is None:
                return v
            n, s = g.vertices[v]
            return {"node": n, "state": P.describe(s)}

        return {
            "valid": self.valid,
            "mode": self.mode.value,
            "vertices": self.vertices,
            "edges": self.edges,
            "failures": [
                {"kind": f.kind, "detail": f.detail, "witness": [show(v) for v in f.witness[:20]]}
                for f in self.failures
            ],
        }


def _predecessors(g: ProductGraph) -> list[list[int]]:
    pred: list[list[int]] = [[] for _ in range(len(g))]
    for v, out in enumerate(g.succ):
        for _, t in out:
            pred[t].append(v)
    return pred


def can_reach_goal(g: ProductGraph) -> list[bool]:
    pred = _predecessors(g)
    ok = [False] * len(g)
    queue = deque(g.goal)
    for v in g.goal:
        ok[v] = True
    while queue:
        v = queue.popleft()
        for u in pred[v]:
            if not ok[u]:
                ok[u] = True
                queue.append(u)
    return ok


def find_cycle(g: ProductGraph) -> list[int] | None:
    """Vertices of the first cycle met by an iterative DFS, or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = [WHITE] * len(g)
    for root in range(len(g)):
        if color[root] != WHITE:
            continue
        stack = [(root, 0)]
        path = [root]
        color[root] = GREY
        while stack:
            v, i = stack[-1]
            if i < len(g.succ[v]):
                stack[-1] = (v, i + 1)
                t = g.succ[v][i][1]
                if color[t] == GREY:
                    return path[path.index(t):]
                if color[t] == WHITE:
                    color[t] = GREY
                    stack.append((t, 0))
                    path.append(t)
            else:
                color[v] = BLACK
                stack.pop()
                path.pop()
    return None


def trap_fixpoint(g: ProductGraph) -> set[int]:
    """Greatest trap, by deleting vertices that break the trap conditions."""
    n = len(g)
    inside = [v not in g.goal for v in range(n)]
    pred = _predecessors(g)
    count = [0] * n  # successor edges that stay inside
    for v in range(n):
        count[v] = sum(1 for _, t in g.succ[v] if inside[t])

    def broken(v: int) -> bool:
        deg = len(g.succ[v])
        if deg == 0:
            return False
        return count[v] < deg if g.fair[v] else count[v] == 0

    queue = deque(v for v in range(n) if inside[v] and broken(v))
    for v in queue:
        inside[v] = False
    while queue:
        v = queue.popleft()
        for u in pred[v]:
            count[u] -= 1
            if inside[u] and broken(u):
                inside[u] = False
                queue.append(u)
    return {v for v in range(n) if inside[v]}


def is_trap(g: ProductGraph, members: set[int]) -> bool:
    for v in members:
        if v in g.goal:
            return False
        ts = g.targets(v)
        if not ts:
            continue
        if g.fair[v]:
            if any(t not in members for t in ts):
                return False
        elif not any(t in members for t in ts):
            return False
    return True


def trap_bruteforce(g: ProductGraph, limit: int = 20) -> set[int] | None:
    """Union of all non-empty traps by subset enumeration, or None."""
    if len(g) > limit:
        raise ValueError(f"brute force limited to {limit} vertices, got {len(g)}")
    cand = [v for v in range(len(g)) if v not in g.goal]
    found: set[int] = set()
    for mask in range(1, 1 << len(cand)):
        members = {cand[i] for i in range(len(cand)) if mask >> i & 1}
        if members <= found:
            continue
        if is_trap(g, members):
            found |= members
    return found or None


def check_product(g: ProductGraph, mode: Mode) -> Verdict:
    mode = Mode.parse(mode)
    failures = [Failure(kind, [v], detail) for kind, v, detail in g.violations]
    if mode is Mode.STRONG_CYCLIC:
        ok = can_reach_goal(g)
        bad = [v for v in range(len(g)) if not ok[v]]
        if bad:
            failures.append(Failure("unreachableGoal", bad, "no path to a goal vertex"))
    elif mode is Mode.STRONG:
        cyc = find_cycle(g)
        if cyc is not None:
            failures.append(Failure("badCycle", cyc, "cycle in the reachable product"))
        ok = can_reach_goal(g)
        bad = [v for v in range(len(g)) if not ok[v]]
        if bad:
            failures.append(Failure("unreachableGoal", bad, "no path to a goal vertex"))
    else:
        trap = trap_fixpoint(g)
        if trap:
            failures.append(Failure("trapSet", sorted(trap), "goal-avoiding set the environment can keep"))
    return Verdict(not failures, mode, failures, len(g), g.num_edges, g)


def verify(P: FondProblem, c: Controller, mode: Mode | str, budget: int = DEFAULT_VERTEX_BUDGET) -> Verdict:
    return check_product(build_product(P, c, budget), Mode.parse(mode))
