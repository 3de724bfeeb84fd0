"""Parameterized PDDL generators for the benchmark domains.

Each generator documents its own vocabulary. ``generate`` returns the
domain and problem texts; ``DomainRecipe.expected`` records the properties
the tests hold the generated instances to.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .core import FondProblem, build_problem


class RecipeError(ValueError):
    pass


@dataclass(frozen=True)
class ParamSpec:
    default: int
    low: int
    high: int
    doc: str


@dataclass
class DomainInfo:
    name: str
    params: dict[str, ParamSpec]
    doc: str
    # mode -> solvable; "misleading" -> whether misleading plans exist
    expected: dict[str, bool]
    build: Callable[..., tuple[str, str]] = field(repr=False)


@dataclass
class DomainRecipe:
    name: str
    params: dict[str, int] = field(default_factory=dict)

    @property
    def info(self) -> DomainInfo:
        if self.name not in CATALOG:
            raise RecipeError(f"unknown domain {self.name!r}; known: {sorted(CATALOG)}")
        return CATALOG[self.name]

    def resolved(self) -> dict[str, int]:
        info = self.info
        unknown = set(self.params) - set(info.params)
        if unknown:
            raise RecipeError(f"{self.name}: unknown parameters {sorted(unknown)}")
        out = {}
        for key, spec in info.params.items():
            v = self.params.get(key, spec.default)
            if not isinstance(v, int) or not spec.low <= v <= spec.high:
                raise RecipeError(f"{self.name}: {key}={v!r} outside [{spec.low}, {spec.high}]")
            out[key] = v
        return out

    @property
    def expected(self) -> dict[str, bool]:
        return dict(self.info.expected)

    def label(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in self.resolved().items())
        return f"{self.name}({args})"


def generate(recipe: DomainRecipe) -> tuple[str, str]:
    return recipe.info.build(**recipe.resolved())


def list_domains() -> dict[str, DomainInfo]:
    return dict(CATALOG)


def load_recipe(recipe: DomainRecipe) -> FondProblem:
    from .pddl import load_pddl

    return load_pddl(*generate(recipe))


# -- text helpers -------------------------------------------------------------


def _action(name: str, params: str, pre: str, effect: str) -> str:
    return (
        f"  (:action {name}\n"
        f"    :parameters ({params})\n"
        f"    :precondition (and {pre})\n"
        f"    :effect {effect})\n"
    )


def _domain(name: str, types: str, predicates: str, actions: list[str]) -> str:
    return (
        f"(define (domain {name})\n"
        "  (:requirements :strips :typing :non-deterministic)\n"
        f"  (:types {types})\n"
        f"  (:predicates {predicates})\n" + "".join(actions) + ")\n"
    )


def _problem(name: str, domain: str, objects: str, init: list[str], goal: list[str], unfair: list[str] = ()) -> str:
    out = [
        f"(define (problem {name})\n",
        f"  (:domain {domain})\n",
        f"  (:objects {objects})\n",
        "  (:init\n",
    ]
    out += [f"    {a}\n" for a in init]
    out.append("  )\n")
    out.append(f"  (:goal (and {' '.join(goal)}))\n")
    if unfair:
        out.append(f"  (:unfair {' '.join(unfair)})\n")
    out.append(")\n")
    return "".join(out)


# -- tireworld on a single road -------------------------------------------


def tireworld_line(m: int) -> tuple[str, str]:
    """Road l0..lm with a spare everywhere.

    Driving may leave the tire flat. Changing it uses the local spare and
    may fail without using it, so a flat tire can keep the car in place.
    """
    actions = [
        _action(
            "move-car",
            "?from - location ?to - location",
            "(vehicle-at ?from) (road ?from ?to) (not-flattire)",
            "(and (vehicle-at ?to) (not (vehicle-at ?from)) (oneof (and) (not (not-flattire))))",
        ),
        _action(
            "changetire",
            "?loc - location",
            "(spare-in ?loc) (vehicle-at ?loc)",
            "(oneof (and (not (spare-in ?loc)) (not-flattire)) (and))",
        ),
    ]
    dom = _domain(
        "tireworld-line",
        "location",
        "(vehicle-at ?l - location) (road ?from - location ?to - location) "
        "(spare-in ?l - location) (not-flattire)",
        actions,
    )
    locs = [f"l{i}" for i in range(m + 1)]
    init = ["(vehicle-at l0)", "(not-flattire)"]
    init += [f"(road l{i} l{i + 1})" for i in range(m)]
    init += [f"(spare-in {l})" for l in locs]
    prob = _problem(f"tireworld-line-{m}", "tireworld-line", " ".join(locs) + " - location", init, [f"(vehicle-at l{m})"])
    return dom, prob


# -- doors ----------------------------------------------------------------


def doors(n: int) -> tuple[str, str]:
    """Rooms r1..rn in a row, no way back.

    Entering a middle room sets its exit door open or closed at random.
    The last room can be entered through a closed door only with the key,
    which lies in r1 and is picked up on the way out of it.
    """
    door = "(oneof (and (door-open ?to) (not (door-closed ?to))) (and (door-closed ?to) (not (door-open ?to))))"
    move = "(at ?to) (not (at ?from))"
    actions = [
        _action(
            "grab-key-enter",
            "?from - room ?to - room",
            "(at ?from) (next ?from ?to) (door-open ?from) (key-in ?from) (middle ?to)",
            f"(and {move} (has-key) (not (key-in ?from)) {door})",
        ),
        _action(
            "enter-open",
            "?from - room ?to - room",
            "(at ?from) (next ?from ?to) (door-open ?from) (middle ?to)",
            f"(and {move} {door})",
        ),
        _action(
            "enter-closed",
            "?from - room ?to - room",
            "(at ?from) (next ?from ?to) (door-closed ?from) (middle ?to)",
            f"(and {move} {door})",
        ),
        _action(
            "enter-last-open",
            "?from - room ?to - room",
            "(at ?from) (next ?from ?to) (door-open ?from) (last ?to)",
            f"(and {move})",
        ),
        _action(
            "enter-last-closed",
            "?from - room ?to - room",
            "(at ?from) (next ?from ?to) (door-closed ?from) (last ?to) (has-key)",
            f"(and {move})",
        ),
    ]
    dom = _domain(
        "doors",
        "room",
        "(at ?r - room) (next ?a - room ?b - room) (middle ?r - room) (last ?r - room) "
        "(door-open ?r - room) (door-closed ?r - room) (key-in ?r - room) (has-key)",
        actions,
    )
    rooms = [f"r{i}" for i in range(1, n + 1)]
    init = ["(at r1)", "(door-open r1)", "(key-in r1)"]
    init += [f"(next r{i} r{i + 1})" for i in range(1, n)]
    init += [f"(middle r{i})" for i in range(2, n)]
    init.append(f"(last r{n})")
    prob = _problem(f"doors-{n}", "doors", " ".join(rooms) + " - room", init, [f"(at r{n})"])
    return dom, prob


# -- islands --------------------------------------------------------------


def islands(n: int, animals: int) -> tuple[str, str]:
    """Two n x n grids; the agent starts at a-1-1 and must reach b-1-1.

    Swimming between the two corners may drown the agent (a dead end).
    The bridge joins a-n-n and b-n-n through the cell ``bridge`` and is
    blocked until every animal has been shooed away from a-n-n, one after
    the other.
    """
    actions = [
        _action(
            "move",
            "?from - cell ?to - cell",
            "(alive) (at ?from) (adj ?from ?to)",
            "(and (at ?to) (not (at ?from)))",
        ),
        _action(
            "swim",
            "?from - cell ?to - cell",
            "(alive) (at ?from) (swim-link ?from ?to)",
            "(oneof (and (at ?to) (not (at ?from))) (not (alive)))",
        ),
        _action(
            "step-on-bridge",
            "?from - cell ?to - cell",
            "(alive) (at ?from) (bridge-link ?from ?to) (bridge-free)",
            "(and (at ?to) (not (at ?from)))",
        ),
        _action(
            "shoo",
            "?a - animal ?a2 - animal ?c - cell",
            "(alive) (at ?c) (shoo-spot ?c) (blocking ?a) (after ?a ?a2)",
            "(and (not (blocking ?a)) (blocking ?a2))",
        ),
        _action(
            "shoo-last",
            "?a - animal ?c - cell",
            "(alive) (at ?c) (shoo-spot ?c) (blocking ?a) (last-animal ?a)",
            "(and (not (blocking ?a)) (bridge-free))",
        ),
    ]
    dom = _domain(
        "islands",
        "cell animal",
        "(at ?c - cell) (adj ?a - cell ?b - cell) (alive) (swim-link ?a - cell ?b - cell) "
        "(bridge-link ?a - cell ?b - cell) (bridge-free) (shoo-spot ?c - cell) "
        "(blocking ?a - animal) (after ?a - animal ?b - animal) (last-animal ?a - animal)",
        actions,
    )
    cells = []
    init = ["(alive)", "(at a-1-1)", "(swim-link a-1-1 b-1-1)", f"(shoo-spot a-{n}-{n})"]
    for isl in "ab":
        for x in range(1, n + 1):
            for y in range(1, n + 1):
                cells.append(f"{isl}-{x}-{y}")
                for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    if 1 <= x + dx <= n and 1 <= y + dy <= n:
                        init.append(f"(adj {isl}-{x}-{y} {isl}-{x + dx}-{y + dy})")
    cells.append("bridge")
    init += [f"(bridge-link a-{n}-{n} bridge)", f"(adj bridge b-{n}-{n})", f"(adj b-{n}-{n} bridge)"]
    names = [f"animal{i}" for i in range(1, animals + 1)]
    init.append(f"(blocking {names[0]})")
    init += [f"(after {names[i]} {names[i + 1]})" for i in range(animals - 1)]
    init.append(f"(last-animal {names[-1]})")
    prob = _problem(
        f"islands-{n}",
        "islands",
        " ".join(cells) + " - cell " + " ".join(names) + " - animal",
        init,
        ["(at b-1-1)"],
    )
    return dom, prob


# -- miner ----------------------------------------------------------------


def miner(items: int, far: int) -> tuple[str, str]:
    """Items buried under stones at a near site (one step from base) and a
    far site (``far`` steps away). Moving the stone or digging at the near
    site may kill the agent; at the far site both are safe."""
    risky = "(oneof {ok} (not (alive)))"
    actions = [
        _action("move", "?from - loc ?to - loc", "(alive) (at ?from) (adj ?from ?to)", "(and (at ?to) (not (at ?from)))"),
        _action(
            "move-stone-safe",
            "?l - loc",
            "(alive) (at ?l) (stone ?l) (safe ?l)",
            "(and (clear ?l) (not (stone ?l)))",
        ),
        _action(
            "move-stone-risky",
            "?l - loc",
            "(alive) (at ?l) (stone ?l) (unsafe ?l)",
            risky.format(ok="(and (clear ?l) (not (stone ?l)))"),
        ),
        _action(
            "dig-safe",
            "?i - item ?l - loc",
            "(alive) (at ?l) (clear ?l) (buried ?i ?l) (safe ?l)",
            "(and (holding ?i) (not (buried ?i ?l)))",
        ),
        _action(
            "dig-risky",
            "?i - item ?l - loc",
            "(alive) (at ?l) (clear ?l) (buried ?i ?l) (unsafe ?l)",
            risky.format(ok="(and (holding ?i) (not (buried ?i ?l)))"),
        ),
    ]
    dom = _domain(
        "miner",
        "loc item",
        "(at ?l - loc) (adj ?a - loc ?b - loc) (alive) (stone ?l - loc) (clear ?l - loc) "
        "(safe ?l - loc) (unsafe ?l - loc) (buried ?i - item ?l - loc) (holding ?i - item)",
        actions,
    )
    path = ["base"] + [f"way{i}" for i in range(1, far)] + ["far"]
    locs = path + ["near"]
    init = ["(alive)", "(at base)", "(adj base near)", "(adj near base)", "(unsafe near)", "(safe far)"]
    for a, b in zip(path, path[1:]):
        init += [f"(adj {a} {b})", f"(adj {b} {a})"]
    init += ["(stone near)", "(stone far)"]
    its = [f"item{i}" for i in range(1, items + 1)]
    for it in its:
        init += [f"(buried {it} near)", f"(buried {it} far)"]
    prob = _problem(
        f"miner-{items}-{far}",
        "miner",
        " ".join(locs) + " - loc " + " ".join(its) + " - item",
        init,
        [f"(holding {it})" for it in its],
    )
    return dom, prob


# -- tireworld variants with spiky roads ----------------------------------


_SPIKY_PREDICATES = (
    "(vehicle-at ?l - location) (road ?a - location ?b - location) "
    "(spiky-road ?a - location ?b - location) (spare-at ?s - spare ?l - location) "
    "(holding ?s - spare) (hand-free) (not-flattire)"
)


def _car_actions(extra_pre: str = "", move_extra: str = "") -> list[str]:
    move = f"(vehicle-at ?to) (not (vehicle-at ?from)){move_extra}"
    return [
        _action(
            "move-car",
            "?from - location ?to - location",
            f"(vehicle-at ?from) (road ?from ?to) (not-flattire){extra_pre}",
            f"(and {move})",
        ),
        _action(
            "move-car-spiky",
            "?from - location ?to - location",
            f"(vehicle-at ?from) (spiky-road ?from ?to) (not-flattire){extra_pre}",
            f"(and {move} (oneof (and) (not (not-flattire))))",
        ),
        _action(
            "load-tire",
            "?s - spare ?l - location",
            "(vehicle-at ?l) (spare-at ?s ?l) (hand-free)",
            "(and (holding ?s) (not (spare-at ?s ?l)) (not (hand-free)))",
        ),
        _action(
            "drop-tire",
            "?s - spare ?l - location",
            "(vehicle-at ?l) (holding ?s)",
            "(and (spare-at ?s ?l) (hand-free) (not (holding ?s)))",
        ),
        _action(
            "changetire",
            "?s - spare",
            "(holding ?s)",
            "(and (not (holding ?s)) (hand-free) (not-flattire))",
        ),
    ]


def tireworld_spiky(spares: int, long_road: int) -> tuple[str, str]:
    """Short road s-a-b-c-g whose segments a-b and b-c are spiky, with
    ``spares`` spares at a, and a long road s-c1-..-ck-g (k = long_road)
    whose single spiky segment follows the spare at its second to last
    stop. The car holds at most one spare."""
    dom = _domain("tireworld-spiky", "location spare", _SPIKY_PREDICATES, _car_actions())
    longs = [f"c{i}" for i in range(1, long_road + 1)]
    locs = ["s", "a", "b", "c", "g"] + longs
    init = ["(vehicle-at s)", "(hand-free)", "(not-flattire)"]
    init += ["(road s a)", "(spiky-road a b)", "(spiky-road b c)", "(road c g)"]
    chain = ["s"] + longs + ["g"]
    spiky_at = len(chain) - 3  # segment c_{k-1} -> c_k
    for i, (x, y) in enumerate(zip(chain, chain[1:])):
        init.append(f"({'spiky-road' if i == spiky_at else 'road'} {x} {y})")
    names = [f"sp{i}" for i in range(1, spares + 2)]
    init += [f"(spare-at {sp} a)" for sp in names[:-1]]
    init.append(f"(spare-at {names[-1]} {chain[spiky_at]})")
    prob = _problem(
        f"tireworld-spiky-{spares}-{long_road}",
        "tireworld-spiky",
        " ".join(locs) + " - location " + " ".join(names) + " - spare",
        init,
        ["(vehicle-at g)"],
    )
    return dom, prob


def tireworld_truck(length: int, spiky: int) -> tuple[str, str]:
    """One-way road L0..L<length> for the car, the first ``spiky`` segments
    spiky. Spares and a truck start at L0. The truck carries one spare at a
    time, drives both ways and ignores spikes; car and truck never share a
    location other than L0."""
    car = _car_actions(extra_pre=" (truck-free ?to)", move_extra=" (car-free ?from) (not (car-free ?to))")
    truck_move = "(truck-at ?to) (not (truck-at ?from)) (truck-free ?from) (not (truck-free ?to))"
    truck = [
        _action(
            "drive-truck",
            "?from - location ?to - location",
            "(truck-at ?from) (truck-road ?from ?to) (car-free ?to)",
            f"(and {truck_move})",
        ),
        _action(
            "drive-truck-home",
            "?from - location ?to - location",
            "(truck-at ?from) (truck-road ?from ?to) (home ?to)",
            f"(and {truck_move})",
        ),
        _action(
            "truck-load",
            "?s - spare ?l - location",
            "(truck-at ?l) (spare-at ?s ?l) (truck-empty)",
            "(and (truck-holding ?s) (not (spare-at ?s ?l)) (not (truck-empty)))",
        ),
        _action(
            "truck-unload",
            "?s - spare ?l - location",
            "(truck-at ?l) (truck-holding ?s)",
            "(and (spare-at ?s ?l) (truck-empty) (not (truck-holding ?s)))",
        ),
    ]
    preds = _SPIKY_PREDICATES + (
        " (truck-at ?l - location) (truck-road ?a - location ?b - location) (home ?l - location)"
        " (car-free ?l - location) (truck-free ?l - location) (truck-holding ?s - spare) (truck-empty)"
    )
    dom = _domain("tireworld-truck", "location spare", preds, car + truck)
    locs = [f"L{i}" for i in range(length + 1)]
    init = ["(vehicle-at L0)", "(truck-at L0)", "(hand-free)", "(truck-empty)", "(not-flattire)", "(home L0)"]
    for i in range(length):
        kind = "spiky-road" if i < spiky else "road"
        init.append(f"({kind} L{i} L{i + 1})")
    # the truck never needs to reach the goal location
    for i in range(length - 1):
        init += [f"(truck-road L{i} L{i + 1})", f"(truck-road L{i + 1} L{i})"]
    init += [f"(car-free {l})" for l in locs[1:]]
    init += [f"(truck-free {l})" for l in locs[1:]]
    names = [f"sp{i}" for i in range(1, spiky + 1)]
    init += [f"(spare-at {sp} L0)" for sp in names]
    prob = _problem(
        f"tireworld-truck-{length}-{spiky}",
        "tireworld-truck",
        " ".join(locs) + " - location " + " ".join(names) + " - spare",
        init,
        [f"(vehicle-at L{length})"],
    )
    return dom, prob


# -- grid duel ------------------------------------------------------------


def grid_duel(n: int) -> tuple[str, str]:
    """Agent in the left column, adversary in the right one, both in the
    middle row of n rows; the agent wins by reaching the right column.

    An agent move (0 to 2 rows, clipped at the edges) or wait also lets the
    adversary drift 0 or 1 rows; both choices are fair outcomes of one
    action. Crossing into row r needs r free, after which the adversary
    answers with an unfair move and the agent only arrives if r is still
    free. Otherwise the run is stuck.
    """
    stay = "(and)"

    def agent_out(t):
        return f"(and (agent-at {t}) (not (agent-at ?r)))"

    def adv_out(t):
        return f"(and (adv-at {t}) (not (adv-at ?a)) (free ?a) (not (free {t})))"

    agent_kinds = [
        ("move-up2", "?r - row ?r1 - row ?r2 - row", "(agent-at ?r) (above ?r1 ?r) (above ?r2 ?r1)", ["?r1", "?r2"]),
        ("move-up1", "?r - row ?r1 - row", "(agent-at ?r) (above ?r1 ?r) (top ?r1)", ["?r1"]),
        ("move-down2", "?r - row ?r1 - row ?r2 - row", "(agent-at ?r) (above ?r ?r1) (above ?r1 ?r2)", ["?r1", "?r2"]),
        ("move-down1", "?r - row ?r1 - row", "(agent-at ?r) (above ?r ?r1) (bottom ?r1)", ["?r1"]),
        ("wait", "", "", []),
    ]
    adv_kinds = [
        ("mid", "?a - row ?up - row ?down - row", "(adv-at ?a) (above ?up ?a) (above ?a ?down)", ["?up", "?down"]),
        ("top", "?a - row ?down - row", "(adv-at ?a) (top ?a) (above ?a ?down)", ["?down"]),
        ("bottom", "?a - row ?up - row", "(adv-at ?a) (bottom ?a) (above ?up ?a)", ["?up"]),
    ]
    actions = []
    for name, params, pre, targets in agent_kinds:
        for adv, aparams, apre, atargets in adv_kinds:
            agent_eff = f"(oneof {stay} {' '.join(agent_out(t) for t in targets)})" if targets else ""
            adv_eff = f"(oneof {stay} {' '.join(adv_out(t) for t in atargets)})"
            actions.append(
                _action(
                    f"{name}-{adv}",
                    f"{params} {aparams}".strip(),
                    f"(agent-turn) {pre} {apre}",
                    f"(and {agent_eff} {adv_eff})",
                )
            )
    actions.append(
        _action(
            "cross",
            "?r - row",
            "(agent-turn) (agent-at ?r) (free ?r)",
            "(and (not (agent-turn)) (crossing ?r) (intercept-turn))",
        )
    )
    for adv, aparams, apre, atargets in adv_kinds:
        actions.append(
            _action(
                f"intercept-{adv}",
                aparams,
                f"(intercept-turn) {apre}",
                f"(and (not (intercept-turn)) (resolve-turn) (oneof {stay} {' '.join(adv_out(t) for t in atargets)}))",
            )
        )
    actions.append(
        _action(
            "arrive",
            "?r - row",
            "(resolve-turn) (crossing ?r) (free ?r)",
            "(and (not (resolve-turn)) (agent-right))",
        )
    )
    dom = _domain(
        "grid-duel",
        "row",
        "(agent-at ?r - row) (adv-at ?r - row) (free ?r - row) (above ?a - row ?b - row) "
        "(top ?r - row) (bottom ?r - row) (agent-turn) (intercept-turn) "
        "(resolve-turn) (crossing ?r - row) (agent-right)",
        actions,
    )
    rows = [f"row{i}" for i in range(1, n + 1)]
    mid = (n + 1) // 2
    init = ["(agent-turn)", f"(agent-at row{mid})", f"(adv-at row{mid})", "(top row1)", f"(bottom row{n})"]
    init += [f"(above row{i} row{i + 1})" for i in range(1, n)]
    init += [f"(free row{i})" for i in range(1, n + 1) if i != mid]
    prob = _problem(
        f"grid-duel-{n}",
        "grid-duel",
        " ".join(rows) + " - row",
        init,
        ["(agent-right)"],
        unfair=["intercept-mid", "intercept-top", "intercept-bottom"],
    )
    return dom, prob


CATALOG: dict[str, DomainInfo] = {
    "tireworldLine": DomainInfo(
        "tireworldLine",
        {"m": ParamSpec(4, 2, 12, "road length")},
        "single road with a spare at every location",
        {"strong-cyclic": True, "strong": False, "misleading": False},
        lambda m: tireworld_line(m),
    ),
    "doors": DomainInfo(
        "doors",
        {"n": ParamSpec(3, 2, 12, "number of rooms")},
        "row of rooms with randomly closing doors and a key",
        {"strong-cyclic": True, "strong": True, "misleading": False},
        lambda n: doors(n),
    ),
    "islands": DomainInfo(
        "islands",
        {"n": ParamSpec(2, 1, 5, "island side"), "animals": ParamSpec(1, 1, 4, "animals on the bridge")},
        "risky swim versus a blocked bridge",
        {"strong-cyclic": True, "strong": True, "misleading": True},
        lambda n, animals: islands(n, animals),
    ),
    "miner": DomainInfo(
        "miner",
        {"items": ParamSpec(1, 1, 4, "items to retrieve"), "far": ParamSpec(3, 2, 6, "distance to the safe site")},
        "unsafe near dig site versus a safe far one",
        {"strong-cyclic": True, "strong": True, "misleading": True},
        lambda items, far: miner(items, far),
    ),
    "tireworldSpiky": DomainInfo(
        "tireworldSpiky",
        {"spares": ParamSpec(2, 1, 4, "spares on the short road"), "long_road": ParamSpec(3, 2, 6, "stops on the long road")},
        "short doubly spiky road versus a long road with one spiky segment",
        {"strong-cyclic": True, "strong": True, "misleading": True},
        lambda spares, long_road: tireworld_spiky(spares, long_road),
    ),
    "tireworldTruck": DomainInfo(
        "tireworldTruck",
        {"length": ParamSpec(3, 2, 5, "road length"), "spiky": ParamSpec(2, 1, 4, "leading spiky segments")},
        "a truck places spares before the car leaves",
        {"strong-cyclic": True, "strong": True, "misleading": True},
        lambda length, spiky: tireworld_truck(length, min(spiky, length)),
    ),
    "gridDuel": DomainInfo(
        "gridDuel",
        {"n": ParamSpec(3, 3, 10, "rows")},
        "agent must slip past an adversary; only dual policies exist",
        {"strong-cyclic": True, "strong": False, "dual": True, "misleading": False},
        lambda n: grid_duel(n),
    ),
}


# -- random tiny problems -------------------------------------------------


def random_fond(
    rng: random.Random | int,
    max_atoms: int = 5,
    max_groups: int = 4,
    max_outcomes: int = 3,
    unfair_prob: float = 0.0,
) -> FondProblem:
    """Small random problem over atoms x0.. with actions g0.., labelled s<schema>#<j>."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    n = rng.randint(2, max_atoms)
    names = [f"x{i}" for i in range(n)]
    init = [a for a in names if rng.random() < 0.3]
    goal = rng.sample(names, rng.randint(1, min(2, n)))
    actions = []
    n_groups = rng.randint(1, max_groups)
    # groups may share a schema, and with it their outcome labels
    n_schemas = rng.randint(1, n_groups)
    for gi in range(n_groups):
        schema = rng.randrange(n_schemas)
        pre = rng.sample(names, rng.randint(0, min(2, n)))
        outs = []
        for oi in range(rng.randint(1, max_outcomes)):
            add = set(rng.sample(names, rng.randint(0, 2)))
            dele = set(rng.sample(names, rng.randint(0, 1))) - add
            outs.append((f"s{schema}#{oi + 1}", sorted(add), sorted(dele)))
        actions.append((f"g{gi}", pre, outs, rng.random() >= unfair_prob))
    return build_problem(names, init, goal, actions, name=f"random-{n}")
