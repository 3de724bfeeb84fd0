"""Explicit-state solvability and the robustness metrics built on it.

``S*`` is computed over the states reachable from s0 as a greatest
fixpoint: drop actions that can leave the set, then drop states that can
no longer reach the goal, until nothing changes. ``L_m`` is the breadth
first distance from s0 to the goal using only actions whose outcomes all
stay in ``S*``. A shortest such path never revisits a state, so a policy
can follow it and fall back to the safe actions of ``S*`` elsewhere.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .core import FondProblem, State

DEFAULT_STATE_BUDGET = 10**6


class StateBudgetError(RuntimeError):
    pass


@dataclass
class SolvabilityReport:
    solvable: bool
    solvable_set: frozenset[State] = field(repr=False)
    reachable: int
    lm: int | None = None
    shortest_weak_plan: int | None = None
    misleading_exists: bool = False
    misleading_count: int | None = None

    def to_dict(self) -> dict:
        return {
            "solvable": self.solvable,
            "reachableStates": self.reachable,
            "solvableStates": len(self.solvable_set),
            "Lm": self.lm,
            "shortestWeakPlan": self.shortest_weak_plan,
            "misleadingExists": self.misleading_exists,
            "misleadingCount": self.misleading_count,
        }

    def to_text(self) -> str:
        def fmt(v):
            if isinstance(v, bool):
                return str(v).lower()
            return "none" if v is None else str(v)

        return "".join(f"{k}={fmt(v)}\n" for k, v in self.to_dict().items())


def reachable_states(P: FondProblem, budget: int = DEFAULT_STATE_BUDGET) -> dict[State, list[tuple[int, list[State]]]]:
    """Reachable state -> [(group id, successor states)]; goal states are terminal."""
    s0 = P.initial_state
    graph: dict[State, list[tuple[int, list[State]]]] = {}
    queue = deque([s0])
    seen = {s0}
    while queue:
        s = queue.popleft()
        moves = []
        if not P.is_goal(s):
            for g in P.applicable_groups(s):
                succ = [(s & ~P.outcomes[o].del_mask) | P.outcomes[o].add_mask for o in g.outcomes]
                moves.append((g.id, succ))
                for t in succ:
                    if t not in seen:
                        if len(seen) >= budget:
                            raise StateBudgetError(f"more than {budget} reachable states")
                        seen.add(t)
                        queue.append(t)
        graph[s] = moves
    return graph


def _solvable_set(P: FondProblem, graph) -> frozenset[State]:
    alive = set(graph)
    while True:
        pred: dict[State, set[State]] = {s: set() for s in alive}
        for s in alive:
            for _, succ in graph[s]:
                if all(t in alive for t in succ):
                    for t in succ:
                        pred[t].add(s)
        good = {s for s in alive if P.is_goal(s)}
        queue = deque(good)
        while queue:
            t = queue.popleft()
            for s in pred[t]:
                if s not in good:
                    good.add(s)
                    queue.append(s)
        if good == alive:
            return frozenset(alive)
        alive = good


def explicit_solve(P: FondProblem, budget: int = DEFAULT_STATE_BUDGET) -> SolvabilityReport:
    graph = reachable_states(P, budget)
    S = _solvable_set(P, graph)
    return SolvabilityReport(P.initial_state in S, S, len(graph))


def compute_lm(P: FondProblem, solvable_set: frozenset[State], budget: int = DEFAULT_STATE_BUDGET) -> int:
    s0 = P.initial_state
    if s0 not in solvable_set:
        raise ValueError("initial state is not in the solvable set")
    dist = {s0: 0}
    queue = deque([s0])
    while queue:
        s = queue.popleft()
        if P.is_goal(s):
            return dist[s]
        for g in P.applicable_groups(s):
            succ = [(s & ~P.outcomes[o].del_mask) | P.outcomes[o].add_mask for o in g.outcomes]
            if not all(t in solvable_set for t in succ):
                continue
            for t in succ:
                if t not in dist:
                    dist[t] = dist[s] + 1
                    queue.append(t)
    raise AssertionError("solvable set without a goal path")


def shortest_weak_plan(P: FondProblem, budget: int = DEFAULT_STATE_BUDGET) -> int | None:
    s0 = P.initial_state
    dist = {s0: 0}
    queue = deque([s0])
    while queue:
        s = queue.popleft()
        if P.is_goal(s):
            return dist[s]
        for o in P.outcomes:
            if s & o.pre_mask != o.pre_mask:
                continue
            t = (s & ~o.del_mask) | o.add_mask
            if t not in dist:
                if len(dist) >= budget:
                    raise StateBudgetError(f"more than {budget} relaxed states")
                dist[t] = dist[s] + 1
                queue.append(t)
    return None


def _relaxed_graph(P: FondProblem, budget: int) -> dict[State, list[State]]:
    s0 = P.initial_state
    graph: dict[State, list[State]] = {}
    queue = deque([s0])
    seen = {s0}
    while queue:
        s = queue.popleft()
        out = []
        if not P.is_goal(s):
            for o in P.outcomes:
                if s & o.pre_mask == o.pre_mask:
                    t = (s & ~o.del_mask) | o.add_mask
                    out.append(t)
                    if t not in seen:
                        if len(seen) >= budget:
                            raise StateBudgetError(f"more than {budget} relaxed states")
                        seen.add(t)
                        queue.append(t)
        graph[s] = out
    return graph


def count_weak_plans(P: FondProblem, max_len: int, cap: int, budget: int = DEFAULT_STATE_BUDGET) -> int:
    """Acyclic relaxed plans of length <= max_len that stop at the first goal state."""
    graph = _relaxed_graph(P, budget)
    pred: dict[State, list[State]] = {s: [] for s in graph}
    for s, out in graph.items():
        for t in out:
            pred[t].append(s)
    # distance to the goal, used to prune branches that cannot finish in time
    h = {s: 0 for s in graph if P.is_goal(s)}
    queue = deque(h)
    while queue:
        t = queue.popleft()
        for s in pred[t]:
            if s not in h:
                h[s] = h[t] + 1
                queue.append(s)

    count = 0
    on_path: set[State] = set()

    def dfs(s: State, depth: int) -> None:
        nonlocal count
        if P.is_goal(s):
            count += 1
            return
        on_path.add(s)
        for t in graph[s]:
            if count >= cap:
                break
            if t not in on_path and t in h and depth + 1 + h[t] <= max_len:
                dfs(t, depth + 1)
        on_path.discard(s)

    s0 = P.initial_state
    if s0 in h and h[s0] <= max_len:
        dfs(s0, 0)
    return min(count, cap)


def misleading_report(P: FondProblem, cap: int = 1000, report: SolvabilityReport | None = None) -> tuple[bool, int]:
    """Whether some weak plan is shorter than L_m, and how many (up to ``cap``).

    For unsolvable problems every weak plan is misleading; the count then
    covers plans of shortest-weak-plan length.
    """
    report = report or explicit_solve(P)
    swp = shortest_weak_plan(P)
    if swp is None:
        return False, 0
    if report.solvable:
        lm = compute_lm(P, report.solvable_set)
        if swp >= lm:
            return False, 0
        return True, count_weak_plans(P, lm - 1, cap)
    return True, count_weak_plans(P, swp, cap)


def analyze(P: FondProblem, cap: int = 1000, budget: int = DEFAULT_STATE_BUDGET) -> SolvabilityReport:
    report = explicit_solve(P, budget)
    report.shortest_weak_plan = shortest_weak_plan(P, budget)
    if report.solvable:
        report.lm = compute_lm(P, report.solvable_set, budget)
    report.misleading_exists, report.misleading_count = misleading_report(P, cap, report)
    return report
