import random
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fondsat.benchgen import DomainRecipe, load_recipe, random_fond
from fondsat.cnf import emit_dimacs, parse_dimacs
from fondsat.core import Mode
from fondsat.encoder import FAMILIES, EncodeOptions, effective_mode, encode, iter_true
from fondsat.sat import evaluate, solve_internal
from problems import coin_flip, dead_end, one_action, unsolvable


def sat(P, k, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cnf, _ = encode(P, k, EncodeOptions(**kw))
    return solve_internal(cnf).sat


def test_one_action_model():
    P = one_action()
    cnf, vm = encode(P, 2)
    res = solve_internal(cnf)
    assert res.sat and evaluate(cnf, res.model)
    truth = set(res.model)
    assert vm.act(0, 0) in truth
    assert vm.grp(0, vm.label_index["a#1"], 1) in truth
    assert vm.reach_i(0) in truth


def test_one_action_family_counts():
    k = 2
    cnf, _ = encode(one_action(), k)
    counts = cnf.tag_counts()
    assert counts["2"] == 1
    assert counts["9"] == 1
    assert counts["11"] == k + 1


@pytest.mark.parametrize("k", [2, 3, 4])
def test_unsolvable_is_unsat(k):
    assert not sat(unsolvable(), k)
    assert not sat(dead_end(), k)


def test_k_below_two_rejected():
    with pytest.raises(ValueError):
        encode(coin_flip(), 1)


def test_bad_amo_rejected():
    with pytest.raises(ValueError):
        EncodeOptions(amo="bitwise")


def _rich_problem():
    # deletes, sibling adds, several groups: every numbered family fires
    return load_recipe(DomainRecipe("tireworldLine", {"m": 2}))


def test_strong_cyclic_covers_families_1_to_15():
    cnf, _ = encode(_rich_problem(), 4, EncodeOptions(use_optimized7=True))
    assert {str(i) for i in range(1, 16)} <= cnf.families()
    cnf, _ = encode(_rich_problem(), 4, EncodeOptions(use_optimized7=False))
    assert "7" in cnf.tag_counts()


@pytest.mark.parametrize("mode", list(Mode))
@pytest.mark.parametrize("optimized", [True, False])
@pytest.mark.parametrize("amo", ["pairwise", "ladder"])
def test_all_tags_documented(mode, optimized, amo):
    P = _rich_problem().with_fairness({"changetire(l1)": False}) if mode is Mode.DUAL else _rich_problem()
    cnf, _ = encode(P, 4, EncodeOptions(mode=mode, use_optimized7=optimized, amo=amo))
    assert set(cnf.tag_counts()) <= set(FAMILIES)
    assert max(abs(l) for c in cnf.clauses for l in c) <= cnf.num_vars


def test_mode_specific_families():
    P = _rich_problem()
    strong, _ = encode(P, 4, EncodeOptions(mode="strong"))
    assert "13'" in strong.tag_counts() and "13rev" not in strong.tag_counts()
    U = P.with_fairness({"changetire(l1)": False})
    dual, _ = encode(U, 4, EncodeOptions(mode="dual"))
    tags = dual.tag_counts()
    assert {"16", "17", "13", "13'", "13rev"} <= set(tags)


def test_dual_without_unfair_falls_back():
    with pytest.warns(UserWarning):
        cnf, vm = encode(coin_flip(), 2, EncodeOptions(mode="dual"))
    assert vm.mode is Mode.STRONG_CYCLIC
    assert effective_mode(coin_flip(), Mode.DUAL) is Mode.STRONG_CYCLIC
    assert effective_mode(coin_flip(False), Mode.DUAL) is Mode.DUAL


def test_coin_flip_modes():
    assert sat(coin_flip(), 2)
    for k in range(2, 7):
        assert not sat(coin_flip(), k, mode="strong")
        assert not sat(coin_flip(False), k, mode="dual")


def test_symmetry_none_at_k2():
    cnf, _ = encode(coin_flip(), 2)
    assert cnf.tag_counts()["sym"] == 0


def test_symmetry_k4_examples():
    solvable = load_recipe(DomainRecipe("doors", {"n": 3}))
    assert sat(solvable, 4, symmetry_breaking=True)
    assert sat(solvable, 4, symmetry_breaking=False)
    assert not sat(unsolvable(), 4, symmetry_breaking=True)
    assert not sat(unsolvable(), 4, symmetry_breaking=False)


def test_dimacs_round_trip_of_encoding():
    cnf, vm = encode(one_action(), 2)
    back = parse_dimacs(emit_dimacs(cnf, vm.names()))
    assert back.num_vars == cnf.num_vars and back.clauses == cnf.clauses
    assert solve_internal(back).sat


def test_varmap_names_and_sidecar():
    cnf, vm = encode(_rich_problem(), 3)
    names = vm.names()[1:]
    assert len(names) == vm.count == len(set(names))
    lines = vm.sidecar().splitlines()
    assert len(lines) == vm.count and lines[0].startswith("1\t")
    # grp/edge/justify exist only for non-goal sources
    assert ("grp", 1, 0, 0) not in vm and ("edge", 1, 0) not in vm
    assert ("edge", 0, 1) in vm


def test_iter_true():
    cnf, vm = encode(one_action(), 2)
    model = solve_internal(cnf).model
    assert ("act", 0, 0) in set(iter_true(model, vm, "act"))


def _random_problem(seed, unfair=0.0):
    return random_fond(random.Random(seed), max_atoms=5, max_groups=4, unfair_prob=unfair)


@settings(max_examples=60)
@given(seed=st.integers(0, 10**6), k=st.integers(2, 4))
def test_optimized_frame_equisatisfiable(seed, k):
    P = _random_problem(seed)
    assert sat(P, k, use_optimized7=True) == sat(P, k, use_optimized7=False)


@settings(max_examples=60)
@given(seed=st.integers(0, 10**6), k=st.integers(2, 4), mode=st.sampled_from(list(Mode)))
def test_symmetry_equisatisfiable(seed, k, mode):
    P = _random_problem(seed, unfair=0.4 if mode is Mode.DUAL else 0.0)
    assert sat(P, k, mode=mode, symmetry_breaking=True) == sat(P, k, mode=mode, symmetry_breaking=False)


@settings(max_examples=40)
@given(seed=st.integers(0, 10**6), k=st.integers(2, 4))
def test_amo_and_reverse13_equisatisfiable(seed, k):
    P = _random_problem(seed)
    base = sat(P, k)
    assert sat(P, k, amo="ladder") == base
    assert sat(P, k, include_reverse13=False) == base


@settings(max_examples=40)
@given(seed=st.integers(0, 10**6), k=st.integers(2, 4), mode=st.sampled_from(list(Mode)))
def test_monotone_in_k(seed, k, mode):
    P = _random_problem(seed, unfair=0.4 if mode is Mode.DUAL else 0.0)
    if sat(P, k, mode=mode):
        assert sat(P, k + 1, mode=mode)


@settings(max_examples=40)
@given(seed=st.integers(0, 10**6), k=st.integers(2, 4))
def test_strong_implies_strong_cyclic(seed, k):
    P = _random_problem(seed)
    if sat(P, k, mode="strong"):
        assert sat(P, k)
