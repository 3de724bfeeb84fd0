"""Hand-built problems shared by the tests."""

from fondsat.core import build_problem


def coin_flip(fair: bool = True):
    return build_problem(
        ["p"],
        [],
        ["p"],
        [("flip", [], [("flip#1", ["p"], []), ("flip#2", [], [])], fair)],
        name="coin-flip",
    )


def one_action():
    return build_problem(["p"], [], ["p"], [("a", [], [("a#1", ["p"], [])])], name="one-action")


def chain(length: int = 3):
    atoms = [f"at{i}" for i in range(length + 1)]
    acts = [(f"go{i}", [atoms[i]], [(f"go{i}#1", [atoms[i + 1]], [atoms[i]])]) for i in range(length)]
    return build_problem(atoms, [atoms[0]], [atoms[-1]], acts, name=f"chain-{length}")


def unsolvable():
    # nothing ever adds the goal atom
    return build_problem(["p", "q"], [], ["p"], [("a", [], [("a#1", ["q"], [])])], name="unsolvable")


def dead_end():
    # the only action may land in an absorbing non-goal state
    return build_problem(
        ["ready", "p", "dead"],
        ["ready"],
        ["p"],
        [("try", ["ready"], [("try#1", ["p"], []), ("try#2", ["dead"], ["ready"])])],
        name="dead-end",
    )


def already_goal():
    return build_problem(["p"], ["p"], ["p"], [("a", [], [("a#1", [], ["p"])])], name="already-goal")
