"""Grounded FOND model: atoms, outcomes, action groups and transition semantics.

States are Python ints used as bit-sets over atom ids, so they are canonical,
hashable and cheap to compare.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

State = int


class Mode(str, Enum):
    STRONG_CYCLIC = "strong-cyclic"
    STRONG = "strong"
    DUAL = "dual"

    @classmethod
    def parse(cls, text: "str | Mode") -> "Mode":
        if isinstance(text, Mode):
            return text
        norm = text.strip().lower().replace("_", "-")
        aliases = {"strongcyclic": "strong-cyclic", "sc": "strong-cyclic", "cyclic": "strong-cyclic"}
        return cls(aliases.get(norm, norm))


class ContractError(ValueError):
    """An operation was called outside its precondition."""


def state_of(atom_ids: Iterable[int]) -> State:
    s = 0
    for i in atom_ids:
        s |= 1 << i
    return s


def atoms_in(state: State) -> list[int]:
    out = []
    i = 0
    while state:
        if state & 1:
            out.append(i)
        state >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class Atom:
    id: int
    name: str


@dataclass(frozen=True)
class Outcome:
    """One deterministic sibling of a (possibly non-deterministic) action.

    ``name`` is the argument-free outcome label (``schema#ordinal``) shared by
    the same outcome of every ground instance of a schema.
    """

    id: int
    group: int
    name: str
    pre: frozenset[int]
    add: frozenset[int]
    delete: frozenset[int]
    pre_mask: int = field(init=False, repr=False, compare=False)
    add_mask: int = field(init=False, repr=False, compare=False)
    del_mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.add & self.delete:
            raise ContractError(
                f"outcome {self.name} of group {self.group} adds and deletes "
                f"the same atoms {sorted(self.add & self.delete)}"
            )
        object.__setattr__(self, "pre_mask", state_of(self.pre))
        object.__setattr__(self, "add_mask", state_of(self.add))
        object.__setattr__(self, "del_mask", state_of(self.delete))


@dataclass(frozen=True)
class ActionGroup:
    id: int
    name: str
    outcomes: tuple[int, ...]
    pre: frozenset[int]
    fair: bool = True
    pre_mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.outcomes:
            raise ContractError(f"action group {self.name} has no outcomes")
        object.__setattr__(self, "pre_mask", state_of(self.pre))

    @property
    def deterministic(self) -> bool:
        return len(self.outcomes) == 1


@dataclass(frozen=True)
class FondProblem:
    atoms: tuple[Atom, ...]
    init: frozenset[int]
    goal: frozenset[int]
    groups: tuple[ActionGroup, ...]
    outcomes: tuple[Outcome, ...]
    name: str = "problem"

    def __post_init__(self):
        n = len(self.atoms)
        for i, a in enumerate(self.atoms):
            if a.id != i:
                raise ContractError(f"atom ids must be dense, got {a.id} at {i}")
        if len({a.name for a in self.atoms}) != n:
            raise ContractError("atom names must be unique")
        for part, ids in (("init", self.init), ("goal", self.goal)):
            bad = [i for i in ids if not 0 <= i < n]
            if bad:
                raise ContractError(f"{part} references unknown atoms {bad}")
        owner: dict[int, int] = {}
        for gi, g in enumerate(self.groups):
            if g.id != gi:
                raise ContractError(f"group ids must be dense, got {g.id} at {gi}")
            names = set()
            for oid in g.outcomes:
                if oid in owner:
                    raise ContractError(f"outcome {oid} belongs to two groups")
                owner[oid] = gi
                o = self.outcomes[oid]
                if o.group != gi:
                    raise ContractError(f"outcome {oid} points at group {o.group}, not {gi}")
                if o.pre != g.pre:
                    raise ContractError(f"outcome {oid} precondition differs from its group")
                if o.name in names:
                    raise ContractError(f"group {g.name} repeats outcome name {o.name}")
                names.add(o.name)
                for ids in (o.pre, o.add, o.delete):
                    if any(not 0 <= i < n for i in ids):
                        raise ContractError(f"outcome {o.name} references unknown atoms")
        for oi, o in enumerate(self.outcomes):
            if o.id != oi:
                raise ContractError(f"outcome ids must be dense, got {o.id} at {oi}")
            if oi not in owner:
                raise ContractError(f"outcome {oi} is not owned by any group")

    # -- semantics ---------------------------------------------------------

    @property
    def initial_state(self) -> State:
        return state_of(self.init)

    @property
    def goal_mask(self) -> int:
        return state_of(self.goal)

    def is_goal(self, s: State) -> bool:
        g = self.goal_mask
        return s & g == g

    def applicable(self, g: ActionGroup, s: State) -> bool:
        return s & g.pre_mask == g.pre_mask

    def apply_outcome(self, b: Outcome, s: State) -> State:
        if s & b.pre_mask != b.pre_mask:
            raise ContractError(f"outcome {b.name} of {self.groups[b.group].name} not applicable")
        return (s & ~b.del_mask) | b.add_mask

    def successors(self, g: ActionGroup, s: State) -> list[tuple[Outcome, State]]:
        if not self.applicable(g, s):
            raise ContractError(f"group {g.name} not applicable")
        out = []
        for oid in g.outcomes:
            b = self.outcomes[oid]
            out.append((b, (s & ~b.del_mask) | b.add_mask))
        return out

    def applicable_groups(self, s: State) -> list[ActionGroup]:
        return [g for g in self.groups if s & g.pre_mask == g.pre_mask]

    # -- helpers -----------------------------------------------------------

    def atom_id(self, name: str) -> int:
        for a in self.atoms:
            if a.name == name:
                return a.id
        raise KeyError(name)

    def group_by_name(self, name: str) -> ActionGroup:
        for g in self.groups:
            if g.name == name:
                return g
        raise KeyError(name)

    def describe(self, s: State) -> str:
        return "{" + ", ".join(self.atoms[i].name for i in atoms_in(s)) + "}"

    def outcome_names(self) -> list[str]:
        """Distinct outcome labels in first-appearance order."""
        seen: dict[str, None] = {}
        for o in self.outcomes:
            seen.setdefault(o.name, None)
        return list(seen)

    def with_fairness(self, fair: bool | Mapping[str, bool]) -> FondProblem:
        """Copy with fairness tags replaced, either uniformly or by group name."""
        if not isinstance(fair, bool):
            unknown = set(fair) - {g.name for g in self.groups}
            if unknown:
                raise ContractError(f"unknown action groups {sorted(unknown)}")
        groups = []
        for g in self.groups:
            f = fair if isinstance(fair, bool) else fair.get(g.name, g.fair)
            groups.append(ActionGroup(g.id, g.name, g.outcomes, g.pre, f))
        return FondProblem(self.atoms, self.init, self.goal, tuple(groups), self.outcomes, self.name)

    @property
    def has_unfair(self) -> bool:
        return any(not g.fair for g in self.groups)


def build_problem(
    atom_names: Iterable[str],
    init: Iterable[str],
    goal: Iterable[str],
    actions: Iterable[tuple],
    name: str = "problem",
) -> FondProblem:
    """Convenience constructor from names.

    ``actions`` holds ``(group_name, pre, outcomes)`` or
    ``(group_name, pre, outcomes, fair)`` where ``outcomes`` is a list of
    ``(label, add, delete)`` triples over atom names.
    """
    atoms = tuple(Atom(i, n) for i, n in enumerate(atom_names))
    index = {a.name: a.id for a in atoms}

    def ids(names):
        return frozenset(index[n] for n in names)

    groups: list[ActionGroup] = []
    outcomes: list[Outcome] = []
    for spec in actions:
        gname, pre, outs = spec[0], spec[1], spec[2]
        fair = spec[3] if len(spec) > 3 else True
        gid = len(groups)
        pre_ids = ids(pre)
        oids = []
        for label, add, delete in outs:
            oid = len(outcomes)
            outcomes.append(Outcome(oid, gid, label, pre_ids, ids(add), ids(delete)))
            oids.append(oid)
        groups.append(ActionGroup(gid, gname, tuple(oids), pre_ids, fair))
    return FondProblem(atoms, ids(init), ids(goal), tuple(groups), tuple(outcomes), name)


def relaxation(p: FondProblem) -> FondProblem:
    """All-outcome determinization: every outcome becomes its own group."""
    groups = []
    outcomes = []
    for o in p.outcomes:
        g = p.groups[o.group]
        gid = len(groups)
        name = g.name if g.deterministic else f"{g.name}[{o.name}]"
        outcomes.append(Outcome(gid, gid, o.name, o.pre, o.add, o.delete))
        groups.append(ActionGroup(gid, name, (gid,), o.pre, g.fair))
    return FondProblem(p.atoms, p.init, p.goal, tuple(groups), tuple(outcomes), p.name)


# Module-level aliases mirroring the operation names used across the package.

def applicable(p: FondProblem, g: ActionGroup, s: State) -> bool:
    return p.applicable(g, s)


def apply_outcome(p: FondProblem, b: Outcome, s: State) -> State:
    return p.apply_outcome(b, s)


def successors(p: FondProblem, g: ActionGroup, s: State) -> list[tuple[Outcome, State]]:
    return p.successors(g, s)


def is_goal(p: FondProblem, s: State) -> bool:
    return p.is_goal(s)
