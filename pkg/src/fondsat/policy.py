"""Finite-state controllers: decoding from SAT models, execution, products."""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .core import FondProblem, Outcome, State, atoms_in
from .encoder import NODE_GOAL, NODE_INIT, VarMap

Vertex = tuple[int, State]
Chooser = Callable[[Vertex, Sequence[Outcome]], Outcome]

DEFAULT_VERTEX_BUDGET = 10**6


class DecodeError(RuntimeError):
    """The model does not describe a well-formed controller (an encoder bug)."""


class PolicyOpenError(RuntimeError):
    pass


class ProductBudgetError(RuntimeError):
    pass


@dataclass
class Controller:
    """``actions[n]`` is a group id or None; transitions are keyed by (node, label)."""

    k: int
    actions: list[int | None]
    transitions: dict[tuple[int, str], int]
    labels: list[frozenset[int]]
    reached: list[bool]

    @property
    def size(self) -> int:
        """Number of reached nodes, the goal node included."""
        return sum(self.reached)

    def used_nodes(self) -> list[int]:
        return [n for n in range(self.k) if self.reached[n]]


def empty_controller() -> Controller:
    """Controller for problems whose initial state already satisfies the goal."""
    return Controller(2, [None, None], {}, [frozenset(), frozenset()], [True, False])


def decode(model: Sequence[int], vm: VarMap, P: FondProblem) -> Controller:
    k = vm.k
    truth = set(l for l in model if l > 0)

    def on(key):
        v = vm.get(key)
        return v is not None and v in truth

    reached = [on(("reachI", n)) for n in range(k)]
    actions: list[int | None] = []
    for n in range(k):
        groups = {o.group for o in P.outcomes if on(("act", n, o.id))}
        if len(groups) > 1:
            names = sorted(P.groups[g].name for g in groups)
            raise DecodeError(f"node {n} has several active action groups: {names}")
        if n == NODE_GOAL and groups:
            raise DecodeError("goal node has an active action")
        actions.append(next(iter(groups)) if groups else None)

    transitions: dict[tuple[int, str], int] = {}
    for n in range(k):
        g = actions[n]
        if g is None:
            continue
        for oid in P.groups[g].outcomes:
            label = P.outcomes[oid].name
            B = vm.label_index[label]
            succ = [n2 for n2 in range(k) if on(("grp", n, B, n2))]
            if len(succ) > 1:
                raise DecodeError(f"node {n} label {label} has successors {succ}")
            if not succ:
                if reached[n]:
                    raise DecodeError(f"reached node {n} has no successor for {label}")
                continue
            transitions[(n, label)] = succ[0]

    labels = [
        frozenset(a for a in range(len(P.atoms)) if on(("p", n, a))) for n in range(k)
    ]
    return Controller(k, actions, transitions, labels, reached)


# -- execution --------------------------------------------------------------


def is_goal_vertex(P: FondProblem, c: Controller, v: Vertex) -> bool:
    """The goal node, or an action-free node sitting in a goal state."""
    n, s = v
    return n == NODE_GOAL or (c.actions[n] is None and P.is_goal(s))


def step(P: FondProblem, c: Controller, v: Vertex, b: Outcome) -> Vertex:
    n, s = v
    g = c.actions[n]
    if g is None:
        raise PolicyOpenError(f"node {n} has no action")
    if b.group != g:
        raise ValueError(f"outcome {b.name} does not belong to the action of node {n}")
    s2 = P.apply_outcome(b, s)
    n2 = c.transitions.get((n, b.name))
    if n2 is None:
        raise PolicyOpenError(f"node {n} has no transition for {b.name}")
    return (n2, s2)


def random_chooser(seed: int = 0) -> Chooser:
    rng = random.Random(seed)
    return lambda v, outs: outs[rng.randrange(len(outs))]


def index_chooser(i: int) -> Chooser:
    """Always the i-th outcome (clipped); i = -1 picks the last one."""
    return lambda v, outs: outs[min(i, len(outs) - 1)] if i >= 0 else outs[-1]


def scripted_chooser(indices: Sequence[int], fallback: int = 0) -> Chooser:
    it = iter(indices)

    def choose(v, outs):
        i = next(it, fallback)
        return outs[min(i, len(outs) - 1)]

    return choose


@dataclass
class Trajectory:
    vertices: list[Vertex]
    outcomes: list[Outcome]
    status: str  # goal | openPolicy | stepLimit

    def __len__(self) -> int:
        return len(self.outcomes)


def simulate(P: FondProblem, c: Controller, chooser: Chooser, max_steps: int = 1000) -> Trajectory:
    v: Vertex = (NODE_INIT, P.initial_state)
    verts = [v]
    outs: list[Outcome] = []
    while True:
        if is_goal_vertex(P, c, v):
            return Trajectory(verts, outs, "goal")
        if len(outs) >= max_steps:
            return Trajectory(verts, outs, "stepLimit")
        n, s = v
        g = c.actions[n]
        if g is None or not P.applicable(P.groups[g], s):
            return Trajectory(verts, outs, "openPolicy")
        options = [P.outcomes[o] for o in P.groups[g].outcomes]
        b = chooser(v, options)
        try:
            v = step(P, c, v, b)
        except PolicyOpenError:
            return Trajectory(verts, outs, "openPolicy")
        outs.append(b)
        verts.append(v)


# -- product graph ----------------------------------------------------------


@dataclass
class ProductGraph:
    """Explicit graph over vertex ids; ``succ[v]`` lists (outcome id, target id).

    Graphs built by hand (tests, oracles) may leave ``vertices`` as plain
    labels and ``violations`` empty.
    """

    vertices: list
    succ: list[list[tuple[int, int]]]
    fair: list[bool]
    goal: set[int]
    initial: int = 0
    violations: list[tuple[str, int, str]] = field(default_factory=list)
    label_violations: list[tuple[int, int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return sum(len(s) for s in self.succ)

    def targets(self, v: int) -> list[int]:
        return [t for _, t in self.succ[v]]


def build_product(P: FondProblem, c: Controller, budget: int = DEFAULT_VERTEX_BUDGET) -> ProductGraph:
    start: Vertex = (NODE_INIT, P.initial_state)
    index = {start: 0}
    verts: list[Vertex] = [start]
    succ: list[list[tuple[int, int]]] = []
    fair: list[bool] = []
    goal: set[int] = set()
    violations: list[tuple[str, int, str]] = []
    label_viol: list[tuple[int, int]] = []
    i = 0
    while i < len(verts):
        n, s = verts[i]
        out: list[tuple[int, int]] = []
        succ.append(out)
        g = c.actions[n] if n < c.k else None
        fair.append(True if g is None else P.groups[g].fair)
        missing = c.labels[n] - frozenset(atoms_in(s)) if n < c.k else frozenset()
        for a in sorted(missing):
            label_viol.append((i, a))
        if n == NODE_GOAL:
            goal.add(i)
            if not P.is_goal(s):
                violations.append(("goalMislabel", i, "goal node reached in a non-goal state"))
            i += 1
            continue
        if g is None:
            if P.is_goal(s):
                goal.add(i)
            else:
                violations.append(("openPolicy", i, f"node {n} has no action"))
            i += 1
            continue
        grp = P.groups[g]
        if not P.applicable(grp, s):
            violations.append(("precondViolation", i, f"{grp.name} not applicable"))
            i += 1
            continue
        for oid in grp.outcomes:
            b = P.outcomes[oid]
            n2 = c.transitions.get((n, b.name))
            if n2 is None:
                violations.append(("openPolicy", i, f"node {n} has no transition for {b.name}"))
                continue
            w = (n2, (s & ~b.del_mask) | b.add_mask)
            j = index.get(w)
            if j is None:
                if len(verts) >= budget:
                    raise ProductBudgetError(f"product exceeds {budget} vertices")
                j = len(verts)
                index[w] = j
                verts.append(w)
            out.append((oid, j))
        i += 1
    return ProductGraph(verts, succ, fair, goal, 0, violations, label_viol)


# -- serialization ----------------------------------------------------------


def controller_to_dict(P: FondProblem, c: Controller) -> dict:
    nodes = []
    for n in range(c.k):
        g = c.actions[n]
        nodes.append(
            {
                "id": n,
                "reached": c.reached[n],
                "action": None if g is None else P.groups[g].name,
                "true_atoms": [P.atoms[a].name for a in sorted(c.labels[n])],
            }
        )
    trans = [
        {"from": n, "label": label, "to": n2}
        for (n, label), n2 in sorted(c.transitions.items())
    ]
    return {"format": "fondsat-controller/1", "problem": P.name, "k": c.k, "nodes": nodes, "transitions": trans}


def controller_from_dict(P: FondProblem, data: dict) -> Controller:
    k = int(data["k"])
    group_ids = {g.name: g.id for g in P.groups}
    atom_ids = {a.name: a.id for a in P.atoms}
    actions: list[int | None] = [None] * k
    labels = [frozenset()] * k
    reached = [False] * k
    for node in data["nodes"]:
        n = int(node["id"])
        if not 0 <= n < k:
            raise ValueError(f"node id {n} out of range")
        name = node.get("action")
        if name is not None:
            if name not in group_ids:
                raise ValueError(f"unknown action {name!r} at node {n}")
            actions[n] = group_ids[name]
        try:
            labels[n] = frozenset(atom_ids[a] for a in node.get("true_atoms", []))
        except KeyError as exc:
            raise ValueError(f"unknown atom {exc.args[0]!r} at node {n}") from None
        reached[n] = bool(node.get("reached", True))
    transitions = {}
    for t in data["transitions"]:
        n, n2 = int(t["from"]), int(t["to"])
        if not (0 <= n < k and 0 <= n2 < k):
            raise ValueError(f"transition {n}->{n2} out of range")
        transitions[(n, t["label"])] = n2
    return Controller(k, actions, transitions, labels, reached)


def dump_controller(P: FondProblem, c: Controller) -> str:
    return json.dumps(controller_to_dict(P, c), indent=2) + "\n"


def load_controller(P: FondProblem, text: str) -> Controller:
    return controller_from_dict(P, json.loads(text))
