import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fondsat.benchgen import DomainRecipe, load_recipe, random_fond
from fondsat.core import state_of
from fondsat.encoder import encode
from fondsat.planner import PlanRequest, plan
from fondsat.policy import (
    Controller,
    DecodeError,
    PolicyOpenError,
    ProductBudgetError,
    build_product,
    controller_from_dict,
    controller_to_dict,
    decode,
    dump_controller,
    empty_controller,
    index_chooser,
    load_controller,
    random_chooser,
    scripted_chooser,
    simulate,
    step,
)
from fondsat.sat import solve_internal
from problems import already_goal, chain, coin_flip, one_action


def solved(P, mode="strong-cyclic", max_k=8):
    rep = plan(P, PlanRequest(mode=mode, max_k=max_k))
    assert rep.solved, rep.status
    return rep.controller


def test_decode_one_action():
    P = one_action()
    cnf, vm = encode(P, 2)
    c = decode(solve_internal(cnf).model, vm, P)
    assert c.k == 2
    assert c.actions[0] == 0 and c.actions[1] is None
    assert c.transitions == {(0, "a#1"): 1}


def test_decode_coin_flip_self_loop():
    P = coin_flip()
    cnf, vm = encode(P, 2)
    c = decode(solve_internal(cnf).model, vm, P)
    assert c.transitions == {(0, "flip#1"): 1, (0, "flip#2"): 0}
    assert c.size == 2


def test_unreached_node_without_action():
    P = coin_flip()
    cnf, vm = encode(P, 3)
    # force node 2 unreached and action-free on top of a normal solution
    for o in range(len(P.outcomes)):
        cnf.add([-vm.act(2, o)])
    cnf.add([-vm.reach_i(2)])
    c = decode(solve_internal(cnf).model, vm, P)
    assert c.actions[2] is None and not c.reached[2]
    assert c.size == 2


def test_decode_rejects_two_groups():
    P = load_recipe(DomainRecipe("doors", {"n": 2}))
    cnf, vm = encode(P, 2)
    model = solve_internal(cnf).model
    bad = set(model)
    for o in range(len(P.outcomes)):
        bad.discard(-vm.act(0, o))
        bad.add(vm.act(0, o))
    with pytest.raises(DecodeError):
        decode(sorted(bad, key=abs), vm, P)


def test_step_coin_flip():
    P = coin_flip()
    c = solved(P)
    heads, tails = P.outcomes
    assert step(P, c, (0, 0), heads) == (1, state_of([0]))
    assert step(P, c, (0, 0), tails) == (0, 0)
    with pytest.raises(PolicyOpenError):
        step(P, c, (1, state_of([0])), heads)


def test_step_deterministic():
    P = chain(3)
    c = solved(P)
    v = (0, P.initial_state)
    b = P.outcomes[P.groups[c.actions[0]].outcomes[0]]
    assert step(P, c, v, b) == step(P, c, v, b)


def test_simulate_examples():
    P = coin_flip()
    c = solved(P)
    t = simulate(P, c, index_chooser(0))
    assert t.status == "goal" and len(t) == 1
    t = simulate(P, c, index_chooser(-1), max_steps=10)
    assert t.status == "stepLimit" and len(t) == 10
    assert all(v == (0, 0) for v in t.vertices)
    t = simulate(already_goal(), empty_controller(), index_chooser(0))
    assert t.status == "goal" and len(t) == 0


def test_simulate_scripted_and_random():
    P = coin_flip()
    c = solved(P)
    t = simulate(P, c, scripted_chooser([1, 1, 1, 0]))
    assert t.status == "goal" and len(t) == 4
    lengths = [len(simulate(P, c, random_chooser(s))) for s in range(200)]
    # geometric with mean 2
    assert 1.5 < sum(lengths) / len(lengths) < 2.6


def test_product_coin_flip():
    P = coin_flip()
    g = build_product(P, solved(P))
    assert len(g) == 2 and g.num_edges == 2
    assert g.goal == {1}


def test_product_chain():
    P = chain(3)
    g = build_product(P, solved(P))
    assert len(g) == 4 and g.num_edges == 3


def test_product_tireworld_larger_than_controller():
    P = load_recipe(DomainRecipe("tireworldLine", {"m": 4}))
    c = solved(P)
    assert c.k <= 8
    assert len(build_product(P, c)) > c.size


def test_product_budget():
    P = load_recipe(DomainRecipe("tireworldLine", {"m": 4}))
    with pytest.raises(ProductBudgetError):
        build_product(P, solved(P), budget=3)


def test_product_records_open_policy():
    P = coin_flip()
    c = solved(P)
    del c.transitions[(0, "flip#2")]
    g = build_product(P, c)
    assert [k for k, _, _ in g.violations] == ["openPolicy"]


@settings(max_examples=40)
@given(seed=st.integers(0, 10**6))
def test_node_labels_hold_in_reached_states(seed):
    P = random_fond(seed, max_atoms=5, max_groups=4)
    rep = plan(P, PlanRequest(max_k=5))
    if rep.controller is None:
        return
    g = build_product(P, rep.controller)
    assert g.label_violations == []
    assert g.violations == []


def test_serialization_round_trip():
    P = load_recipe(DomainRecipe("doors", {"n": 3}))
    c = solved(P)
    text = dump_controller(P, c)
    back = load_controller(P, text)
    assert back.actions == c.actions
    assert back.transitions == c.transitions
    assert back.labels == c.labels
    assert json.loads(text)["format"] == "fondsat-controller/1"


def test_deserialization_errors():
    P = coin_flip()
    data = controller_to_dict(P, solved(P))
    data["nodes"][0]["action"] = "nope"
    with pytest.raises(ValueError):
        controller_from_dict(P, data)
    data = controller_to_dict(P, solved(P))
    data["transitions"][0]["to"] = 9
    with pytest.raises(ValueError):
        controller_from_dict(P, data)


def test_empty_controller_shape():
    c = empty_controller()
    assert isinstance(c, Controller) and c.size == 1 and c.used_nodes() == [0]
