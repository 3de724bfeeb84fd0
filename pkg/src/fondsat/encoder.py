"""CNF encoding of k-node controllers for FOND problems.

Node 0 is the initial controller node and node 1 the goal node; the others
are interchangeable, which is what the symmetry-breaking clauses exploit.
Every clause carries a provenance tag naming its family, see ``FAMILIES``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .cnf import Cnf
from .core import FondProblem, Mode

NODE_INIT = 0
NODE_GOAL = 1

# tag -> short description; tests assert every emitted tag is listed here
FAMILIES = {
    "1": "initial node is false on atoms outside s0",
    "2": "goal node is true on goal atoms",
    "3": "an active outcome needs its precondition at the node",
    "4": "sibling outcomes are active together",
    "5": "at most one action group per node",
    "6": "active outcome has a successor node and vice versa",
    "6amo": "at most one successor node per (node, outcome label)",
    "edge-def": "edge(n,n') iff some label leads from n to n'",
    "7": "frame axiom, one clause per outcome",
    "7'": "frame axiom over edges",
    "7''": "frame axiom for outcomes whose sibling adds the atom",
    "8": "deleted atoms are false at the successor node",
    "9": "initial node is reachable",
    "10": "reachability from the initial node is closed under edges",
    "11": "goal node reaches the goal in j steps for all j",
    "12": "no other node reaches the goal in zero steps",
    "13": "reaching the goal within j+1 steps needs a justifying successor",
    "13rev": "a successor within j steps gives j+1 steps",
    "13'": "every successor must be within j steps",
    "14": "goal distance bounds are monotone",
    "15": "reachable nodes reach the goal within k steps",
    "goal-freeze": "goal node has no action",
    "reach-acts": "reachable non-goal nodes have an action",
    "16": "fair actions mark the node fair",
    "17": "unfair actions mark the node unfair",
    "sym": "node numbering follows first discovery",
}


class VarMap:
    """Bijection between semantic variables and DIMACS ids ``1..count``.

    Keys are tuples whose first element names the kind: ``("p", n, atom)``,
    ``("act", n, outcome)``, ``("grp", n, label, n2)``, ``("edge", n, n2)``,
    ``("reachI", n)``, ``("reachG", n, j)``, ``("fair", n)``,
    ``("justify", n, n2, j)`` and ``("aux", tag, i)``.
    """

    def __init__(self, problem: FondProblem, k: int, mode: Mode):
        self.problem = problem
        self.k = k
        self.mode = mode
        self.labels: list[str] = problem.outcome_names()
        self.label_index = {b: i for i, b in enumerate(self.labels)}
        self.index: dict[tuple, int] = {}
        self.keys: list[tuple | None] = [None]

    @property
    def count(self) -> int:
        return len(self.keys) - 1

    def register(self, key: tuple) -> int:
        v = self.index.get(key)
        if v is None:
            v = len(self.keys)
            self.index[key] = v
            self.keys.append(key)
        return v

    def __getitem__(self, key: tuple) -> int:
        return self.index[key]

    def get(self, key: tuple) -> int | None:
        return self.index.get(key)

    def __contains__(self, key: tuple) -> bool:
        return key in self.index

    # typed accessors

    def p(self, n: int, atom: int) -> int:
        return self.index[("p", n, atom)]

    def act(self, n: int, outcome: int) -> int:
        return self.index[("act", n, outcome)]

    def grp(self, n: int, label: int, n2: int) -> int:
        return self.index[("grp", n, label, n2)]

    def edge(self, n: int, n2: int) -> int:
        return self.index[("edge", n, n2)]

    def reach_i(self, n: int) -> int:
        return self.index[("reachI", n)]

    def reach_g(self, n: int, j: int) -> int:
        return self.index[("reachG", n, j)]

    def fair(self, n: int) -> int:
        return self.index[("fair", n)]

    def justify(self, n: int, n2: int, j: int) -> int:
        return self.index[("justify", n, n2, j)]

    def name(self, v: int) -> str:
        key = self.keys[v]
        kind = key[0]
        P = self.problem
        if kind == "p":
            return f"p({key[1]},{P.atoms[key[2]].name})"
        if kind == "act":
            o = P.outcomes[key[2]]
            return f"act({key[1]},{P.groups[o.group].name}/{o.name})"
        if kind == "grp":
            return f"grp({key[1]},{self.labels[key[2]]},{key[3]})"
        return f"{kind}({','.join(str(x) for x in key[1:])})"

    def names(self) -> list[str]:
        return [""] + [self.name(v) for v in range(1, len(self.keys))]

    def sidecar(self) -> str:
        """``id<TAB>name`` lines for debugging external solver runs."""
        return "".join(f"{v}\t{self.name(v)}\n" for v in range(1, len(self.keys)))


@dataclass(frozen=True)
class EncodeOptions:
    mode: Mode = Mode.STRONG_CYCLIC
    use_optimized7: bool = True
    symmetry_breaking: bool = True
    amo: str = "pairwise"
    include_reverse13: bool = True

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        if self.amo not in ("pairwise", "ladder"):
            raise ValueError(f"unknown at-most-one encoding {self.amo!r}")


def effective_mode(P: FondProblem, mode: Mode) -> Mode:
    """Dual mode without unfair groups is plain strong-cyclic planning."""
    mode = Mode.parse(mode)
    if mode is Mode.DUAL and not P.has_unfair:
        return Mode.STRONG_CYCLIC
    return mode


def _register(vm: VarMap, P: FondProblem, k: int, mode: Mode) -> None:
    nodes = range(k)
    sources = [n for n in nodes if n != NODE_GOAL]
    for n in nodes:
        for a in range(len(P.atoms)):
            vm.register(("p", n, a))
    for n in nodes:
        for o in range(len(P.outcomes)):
            vm.register(("act", n, o))
    for n in sources:
        for B in range(len(vm.labels)):
            for n2 in nodes:
                vm.register(("grp", n, B, n2))
    for n in sources:
        for n2 in nodes:
            vm.register(("edge", n, n2))
    for n in nodes:
        vm.register(("reachI", n))
    for n in nodes:
        for j in range(k + 1):
            vm.register(("reachG", n, j))
    if mode is Mode.DUAL:
        for n in sources:
            vm.register(("fair", n))
    if mode is not Mode.STRONG:
        for n in sources:
            for n2 in nodes:
                for j in range(k):
                    vm.register(("justify", n, n2, j))


def encode(P: FondProblem, k: int, opts: EncodeOptions | None = None) -> tuple[Cnf, VarMap]:
    opts = opts or EncodeOptions()
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    mode = effective_mode(P, opts.mode)
    if mode is not opts.mode:
        warnings.warn("dual mode without unfair actions; encoding as strong-cyclic", stacklevel=2)

    vm = VarMap(P, k, mode)
    _register(vm, P, k, mode)
    cnf = Cnf(num_vars=vm.count)

    nodes = range(k)
    sources = [n for n in nodes if n != NODE_GOAL]
    atoms = range(len(P.atoms))
    label_of = [vm.label_index[o.name] for o in P.outcomes]
    by_label: list[list[int]] = [[] for _ in vm.labels]
    for o in P.outcomes:
        by_label[label_of[o.id]].append(o.id)
    adders: list[list[int]] = [[] for _ in atoms]
    for o in P.outcomes:
        for a in o.add:
            adders[a].append(o.id)
    reps = [g.outcomes[0] for g in P.groups]
    labels_of_node = range(len(vm.labels))

    p, act, grp, edge = vm.p, vm.act, vm.grp, vm.edge

    # (1), (2)
    for a in atoms:
        if a not in P.init:
            cnf.add([-p(NODE_INIT, a)], "1")
    for a in sorted(P.goal):
        cnf.add([p(NODE_GOAL, a)], "2")

    for o in range(len(P.outcomes)):
        cnf.add([-act(NODE_GOAL, o)], "goal-freeze")

    for n in sources:
        # (3)
        for o in P.outcomes:
            for a in sorted(o.pre):
                cnf.add([-act(n, o.id), p(n, a)], "3")
        # (4)
        for g in P.groups:
            for b in g.outcomes:
                for b2 in g.outcomes:
                    if b != b2:
                        cnf.add([-act(n, b), act(n, b2)], "4")
        # (5)
        sel = [act(n, r) for r in reps]
        if opts.amo == "ladder" and len(sel) > 2:
            _ladder_amo(cnf, sel, "5")
        else:
            for x, y in combinations(sel, 2):
                cnf.add([-x, -y], "5")
        # (6)
        for o in P.outcomes:
            B = label_of[o.id]
            cnf.add([-act(n, o.id)] + [grp(n, B, n2) for n2 in nodes], "6")
        for B in labels_of_node:
            for n2 in nodes:
                cnf.add([-grp(n, B, n2)] + [act(n, o) for o in by_label[B]], "6")
            for n2, n3 in combinations(nodes, 2):
                cnf.add([-grp(n, B, n2), -grp(n, B, n3)], "6amo")
        # edge definition
        for n2 in nodes:
            for B in labels_of_node:
                cnf.add([-grp(n, B, n2), edge(n, n2)], "edge-def")
            cnf.add([-edge(n, n2)] + [grp(n, B, n2) for B in labels_of_node], "edge-def")
        # (7) family
        if opts.use_optimized7:
            for n2 in nodes:
                for a in atoms:
                    cnf.add(
                        [-edge(n, n2), p(n, a), -p(n2, a)] + [act(n, o) for o in adders[a]],
                        "7'",
                    )
            for g in P.groups:
                sib_adds = set()
                for b in g.outcomes:
                    sib_adds |= P.outcomes[b].add
                for b in g.outcomes:
                    o = P.outcomes[b]
                    B = label_of[b]
                    for a in sorted(sib_adds - o.add):
                        for n2 in nodes:
                            cnf.add([-grp(n, B, n2), -act(n, b), p(n, a), -p(n2, a)], "7''")
        else:
            for o in P.outcomes:
                B = label_of[o.id]
                for a in atoms:
                    if a in o.add:
                        continue
                    for n2 in nodes:
                        cnf.add([-grp(n, B, n2), -act(n, o.id), p(n, a), -p(n2, a)], "7")
        # (8)
        for o in P.outcomes:
            B = label_of[o.id]
            for a in sorted(o.delete):
                for n2 in nodes:
                    cnf.add([-act(n, o.id), -grp(n, B, n2), -p(n2, a)], "8")

    # (9), (10)
    cnf.add([vm.reach_i(NODE_INIT)], "9")
    for n in sources:
        for n2 in nodes:
            cnf.add([-edge(n, n2), -vm.reach_i(n), vm.reach_i(n2)], "10")

    # (11), (12)
    for j in range(k + 1):
        cnf.add([vm.reach_g(NODE_GOAL, j)], "11")
    for n in sources:
        cnf.add([-vm.reach_g(n, 0)], "12")

    # (13) and its strong / dual variants
    for n in sources:
        if mode is Mode.DUAL:
            fair_lit = vm.fair(n)
            _cyclic_reach(cnf, vm, n, nodes, k, opts.include_reverse13, gate=[-fair_lit])
            _strong_reach(cnf, vm, n, nodes, k, gate=[fair_lit])
        elif mode is Mode.STRONG:
            _strong_reach(cnf, vm, n, nodes, k, gate=[])
        else:
            _cyclic_reach(cnf, vm, n, nodes, k, opts.include_reverse13, gate=[])

    # (14), (15)
    for n in sources:
        for j in range(k):
            cnf.add([-vm.reach_g(n, j), vm.reach_g(n, j + 1)], "14")
        cnf.add([-vm.reach_i(n), vm.reach_g(n, k)], "15")

    if mode in (Mode.STRONG, Mode.DUAL):
        for n in sources:
            cnf.add([-vm.reach_i(n)] + [act(n, r) for r in reps], "reach-acts")

    if mode is Mode.DUAL:
        fair_reps = [g.outcomes[0] for g in P.groups if g.fair]
        unfair_reps = [g.outcomes[0] for g in P.groups if not g.fair]
        for n in sources:
            f = vm.fair(n)
            for r in fair_reps:
                cnf.add([-act(n, r), f], "16")
            cnf.add([-f] + [act(n, r) for r in fair_reps], "16")
            for r in unfair_reps:
                cnf.add([-act(n, r), -f], "17")
            cnf.add([f] + [act(n, r) for r in unfair_reps], "17")

    if opts.symmetry_breaking:
        add_symmetry_breaking(cnf, vm, k)
    # ladder auxiliaries live above the registered variables
    cnf.num_vars = max(cnf.num_vars, vm.count)
    return cnf, vm


def _cyclic_reach(cnf: Cnf, vm: VarMap, n: int, nodes: range, k: int, reverse: bool, gate: list[int]) -> None:
    for j in range(k):
        cnf.add(gate + [-vm.reach_g(n, j + 1)] + [vm.justify(n, n2, j) for n2 in nodes], "13")
        for n2 in nodes:
            just = vm.justify(n, n2, j)
            cnf.add([-just, vm.edge(n, n2)], "13")
            cnf.add([-just, vm.reach_g(n2, j)], "13")
            if reverse:
                cnf.add(gate + [-vm.edge(n, n2), -vm.reach_g(n2, j), vm.reach_g(n, j + 1)], "13rev")


def _strong_reach(cnf: Cnf, vm: VarMap, n: int, nodes: range, k: int, gate: list[int]) -> None:
    for j in range(k):
        for n2 in nodes:
            cnf.add(gate + [-vm.reach_g(n, j + 1), -vm.edge(n, n2), vm.reach_g(n2, j)], "13'")


def _ladder_amo(cnf: Cnf, xs: list[int], tag: str) -> None:
    """Sequential-counter at-most-one over ``xs`` with fresh auxiliaries."""
    s_prev = None
    for i, x in enumerate(xs[:-1]):
        s = cnf.new_var()
        cnf.add([-x, s], tag)
        if s_prev is not None:
            cnf.add([-s_prev, s], tag)
            cnf.add([-x, -s_prev], tag)
        s_prev = s
    cnf.add([-xs[-1], -s_prev], tag)


def add_symmetry_breaking(cnf: Cnf, vm: VarMap, k: int) -> None:
    """Order interchangeable nodes 2..k-1 by first discovery.

    Any controller can be renumbered so that a node m >= 3 is only used if
    m-1 is, and m's smallest predecessor is no larger than that of m-1; the
    renumbering is the order in which a breadth-first walk from node 0
    meets the nodes, with unused nodes last.
    """
    sources = [n for n in range(k) if n != NODE_GOAL]
    for m in range(3, k):
        prev = [vm.edge(i, m - 1) for i in sources]
        for j in sources:
            cnf.add([-vm.edge(j, m)] + prev, "sym")
            cnf.add([-vm.edge(j, m)] + [vm.edge(i, m - 1) for i in sources if i <= j], "sym")
    cnf.num_vars = max(cnf.num_vars, vm.count)


def iter_true(model: list[int], vm: VarMap, kind: str) -> Iterator[tuple]:
    """Keys of the given kind that are true in ``model``."""
    for lit in model:
        if lit > 0 and lit < len(vm.keys):
            key = vm.keys[lit]
            if key[0] == kind:
                yield key
