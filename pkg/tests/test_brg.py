import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import words
from capped import capped_check
from petridetect import (
    LabeledPetriNet,
    UnsupportedStructureError,
    alpha_flag,
    basis_marking_set,
    build_brg,
    build_verifier,
    consistent_markings,
    fire_sequence,
    load_fixture,
    reachability_graph,
    run_relation,
)
from petridetect.fixtures import random_valid_lpn
from petridetect.net import marking_from_places

seeds = st.integers(0, 2**32 - 1)


def vm(vn, left, right):
    return marking_from_places(vn.lpn, [p + "'" for p in left] + list(right))


@pytest.fixture(scope="module")
def fig1_brg(fig1):
    return build_brg(build_verifier(fig1))


class TestAlpha:
    def test_initial_is_one(self, fig1):
        vn = build_verifier(fig1)
        assert alpha_flag(vn, vn.lpn.m0) == 1 == alpha_flag(vn, vn.lpn.m0, method="ilp")

    def test_p6_pair_is_zero(self, fig1):
        vn = build_verifier(fig1)
        mk = vm(vn, ["p6"], ["p6"])
        assert alpha_flag(vn, mk) == 0 == alpha_flag(vn, mk, method="ilp")

    def test_no_unobservables(self):
        vn = build_verifier(load_fixture("d1"))
        assert alpha_flag(vn, vn.lpn.m0) == 0 == alpha_flag(vn, vn.lpn.m0, method="ilp")

    def test_cyclic_rejected(self):
        vn = build_verifier(load_fixture("cyclic_tu"))
        with pytest.raises(UnsupportedStructureError):
            alpha_flag(vn, vn.lpn.m0)

    def test_cyclic_unchecked_still_sound(self):
        vn = build_verifier(load_fixture("cyclic_tu"))
        assert alpha_flag(vn, vn.lpn.m0, method="ilp", check_acyclic=False) == 1

    def test_unknown_method(self, fig1):
        vn = build_verifier(fig1)
        with pytest.raises(ValueError):
            alpha_flag(vn, vn.lpn.m0, method="guess")


class TestBuild:
    def test_fig1_states(self, fig1_brg):
        vn = fig1_brg.vn
        assert len(fig1_brg) == 7
        assert fig1_brg.initial.marking == vn.lpn.m0 and fig1_brg.initial.alpha == 1
        by = fig1_brg.by_marking
        assert by[vm(vn, ["p5"], ["p5"])].alpha == 1
        assert by[vm(vn, ["p2"], ["p2"])].alpha == 1
        assert by[vm(vn, ["p6"], ["p6"])].alpha == 0
        assert by[vm(vn, ["p3"], ["p3"])].alpha == 0
        assert sum(not x.diag_equal for x in fig1_brg.states) == 2

    def test_lookup(self, fig1_brg):
        x = fig1_brg.states[3]
        assert fig1_brg.state("x3") is x and fig1_brg.state(3) is x and fig1_brg.state(x.marking) is x

    def test_fully_observable_injective(self):
        lpn = LabeledPetriNet.from_arcs(
            {"p1": 1, "p2": 0}, {"t1": "a", "t2": "b"}, [("p1", "t1"), ("t1", "p2"), ("p2", "t2"), ("t2", "p1")]
        )
        brg = build_brg(build_verifier(lpn))
        rg = reachability_graph(brg.vn.lpn)
        assert {x.marking for x in brg.states} == set(rg.nodes)
        assert len(brg.edges) == len(rg.edges)
        assert all(x.alpha == 0 and x.diag_equal for x in brg.states)

    def test_nondeterministic_relation(self, fig1_brg):
        assert not fig1_brg.is_deterministic()


class TestRun:
    def test_empty_word(self, fig1_brg):
        x = fig1_brg.states[2]
        assert run_relation(fig1_brg, x, "") == {x}

    def test_around_cycle(self, fig1_brg):
        x = fig1_brg.by_marking[vm(fig1_brg.vn, ["p6"], ["p6"])]
        assert run_relation(fig1_brg, x, "ba") == {x}

    def test_chain_is_deterministic(self):
        lpn = LabeledPetriNet.from_arcs(
            {"p1": 1, "p2": 0, "p3": 0},
            {"t1": "a", "t2": "b", "t3": "c"},
            [("p1", "t1"), ("t1", "p2"), ("p2", "t2"), ("t2", "p3"), ("p3", "t3"), ("t3", "p1")],
        )
        brg = build_brg(build_verifier(lpn))
        for w in ["a", "ab", "abc", "abca"]:
            assert len(run_relation(brg, brg.initial, w)) == 1
        assert run_relation(brg, brg.initial, "b") == frozenset()


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_alpha_routes_agree(seed):
    lpn = random_valid_lpn(np.random.default_rng(seed))
    vn = build_verifier(lpn)
    for x in build_brg(vn).states:
        assert alpha_flag(vn, x.marking, method="ilp") == x.alpha == alpha_flag(vn, x.marking)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_brg_no_larger_than_vn_rg(seed):
    lpn = random_valid_lpn(np.random.default_rng(seed))
    vn = build_verifier(lpn)
    assert len(build_brg(vn)) <= len(reachability_graph(vn.lpn).nodes)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_edges_replay_in_verifier(seed):
    lpn = random_valid_lpn(np.random.default_rng(seed))
    vn = build_verifier(lpn)
    nodes = set(reachability_graph(vn.lpn).nodes)
    bms = basis_marking_set(vn.lpn)
    for e in bms.edges:
        assert fire_sequence(vn.lpn, e.source, e.explanation + (e.transition,)) == e.target
        assert e.target in nodes


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_confusion_iff_uncertain_state(seed):
    from petridetect.detectability import shortest_words

    lpn = random_valid_lpn(np.random.default_rng(seed))
    brg = build_brg(build_verifier(lpn))
    uncertain = [x for x in brg.states if not x.certain]
    if uncertain:
        w = shortest_words(brg)[uncertain[0]]
        assert len(consistent_markings(lpn, w)) > 1
    else:
        assert all(len(consistent_markings(lpn, w)) <= 1 for w in words(lpn.alphabet, 5))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_extreme_flag_patterns(seed):
    lpn = random_valid_lpn(np.random.default_rng(seed))
    _, brg, (strong, periodic) = capped_check(lpn)
    if all(x.certain for x in brg.states):
        assert strong.verdict and periodic.verdict
    if all(x.alpha == 1 for x in brg.states):
        assert not strong.verdict and not periodic.verdict
