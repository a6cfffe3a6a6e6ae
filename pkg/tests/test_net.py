import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from petridetect import (
    FiringError,
    InconclusiveError,
    LabeledPetriNet,
    StructuralError,
    enabled,
    fire,
    fire_sequence,
    is_acyclic,
    is_deadlock_free,
    load_fixture,
    reachability_graph,
    tu_induced_subnet,
)
from petridetect.errors import BudgetExceededError
from petridetect.fixtures import random_lpn, random_valid_lpn
from petridetect.net import marking_from_places, marking_str, parikh, induced_subnet

seeds = st.integers(0, 2**32 - 1)


def d1(label="a"):
    return LabeledPetriNet.from_arcs({"p1": 1, "p2": 0}, {"t1": label}, [("p1", "t1"), ("t1", "p2")])


def m(lpn, *places):
    return marking_from_places(lpn, places)


class TestFiring:
    def test_enabled_at_initial(self, fig1):
        assert enabled(fig1, fig1.m0, "t1")

    def test_zero_marking_disables_every_consuming_transition(self, fig1):
        zero = fig1.net.zero_marking()
        assert not any(enabled(fig1, zero, t) for t in fig1.transitions)

    def test_d1_token_in_p2_does_not_enable(self):
        lpn = d1()
        assert not enabled(lpn, m(lpn, "p2"), "t1")

    def test_unknown_transition(self, fig1):
        with pytest.raises(StructuralError):
            enabled(fig1, fig1.m0, "t99")

    def test_wrong_dimension(self, fig1):
        with pytest.raises(StructuralError):
            enabled(fig1, (1, 0), "t1")

    def test_fire_two_steps_to_p5(self, fig1):
        assert fire_sequence(fig1, fig1.m0, ["t2", "t4"]) == m(fig1, "p5")

    def test_self_loop_leaves_marking(self):
        lpn = LabeledPetriNet.from_arcs({"p": 1}, {"t": "a"}, [("p", "t"), ("t", "p")])
        assert fire(lpn, lpn.m0, "t") == lpn.m0

    def test_d1_fire(self):
        lpn = d1()
        assert fire(lpn, lpn.m0, "t1") == m(lpn, "p2")

    def test_fire_disabled(self):
        lpn = d1()
        with pytest.raises(FiringError):
            fire(lpn, m(lpn, "p2"), "t1")

    def test_sequence_to_p6(self, fig1):
        assert fire_sequence(fig1, fig1.m0, ["t1", "t3", "t5"]) == m(fig1, "p6")

    def test_empty_sequence(self, fig1):
        assert fire_sequence(fig1, fig1.m0, []) == fig1.m0

    def test_sequence_error_reports_index(self):
        lpn = d1()
        with pytest.raises(FiringError) as exc:
            fire_sequence(lpn, lpn.m0, ["t1", "t1"])
        assert exc.value.index == 1

    def test_marking_rendering(self, fig1):
        assert marking_str(fig1.places, (0, 0, 2, 0, 1, 0, 0)) == "2p3+p5"
        assert marking_str(fig1.places, fig1.net.zero_marking()) == "0"


class TestStructure:
    def test_rejects_negative_matrix(self):
        from petridetect import PetriNet

        with pytest.raises(StructuralError):
            PetriNet(("p",), ("t",), [[-1]], [[0]])

    def test_rejects_mismatched_matrices(self):
        from petridetect import PetriNet

        with pytest.raises(StructuralError):
            PetriNet(("p",), ("t",), [[1]], [[0, 1]])

    def test_rejects_negative_marking(self):
        with pytest.raises(StructuralError):
            LabeledPetriNet.from_arcs({"p": -1}, {"t": "a"}, [("p", "t")])

    def test_alphabet_covers_labels(self, fig1):
        assert fig1.alphabet == {"a", "b", "c"}

    def test_incidence_is_post_minus_pre(self, fig1):
        net = fig1.net
        assert np.array_equal(net.incidence, net.post - net.pre)

    def test_tu_subnet(self, fig1):
        sub = tu_induced_subnet(fig1)
        assert set(sub.kept) == {"t1", "t2", "t3", "t6"}
        assert np.array_equal(sub.c_u, sub.post_u - sub.pre_u)
        assert is_acyclic(sub)

    def test_fully_observable_subnet_is_empty(self):
        sub = tu_induced_subnet(d1())
        assert sub.kept == () and sub.c_u.shape == (2, 0)
        assert is_acyclic(sub)

    def test_d1_unobservable_subnet_columns(self):
        lpn = d1(None)
        sub = tu_induced_subnet(lpn)
        assert sub.pre_u.tolist() == [[1], [0]] and sub.post_u.tolist() == [[0], [1]]

    def test_two_cycle_is_cyclic(self):
        lpn = LabeledPetriNet.from_arcs(
            {"p": 1, "q": 0}, {"t": None, "u": None}, [("p", "t"), ("t", "q"), ("q", "u"), ("u", "p")]
        )
        assert not is_acyclic(tu_induced_subnet(lpn))

    def test_subnet_parikh(self, fig1):
        sub = induced_subnet(fig1, ["t1", "t3"])
        assert sub.parikh(["t3", "t1", "t3"]) == (1, 2)


class TestReachability:
    def test_fig1_vn_nodes(self, fig1):
        from petridetect import build_verifier

        assert len(reachability_graph(build_verifier(fig1).lpn).nodes) == 25

    def test_dead_start(self):
        lpn = LabeledPetriNet.from_arcs({"p": 0}, {"t": "a"}, [("p", "t")])
        rg = reachability_graph(lpn)
        assert rg.nodes == (lpn.m0,) and rg.edges == ()

    def test_d1(self):
        rg = reachability_graph(d1())
        assert len(rg.nodes) == 2 and len(rg.edges) == 1

    def test_budget_guard(self):
        grow = LabeledPetriNet.from_arcs({"p": 1}, {"t": "a"}, [("p", "t"), ("t", "p", 2)])
        with pytest.raises(BudgetExceededError, match="budget of 50"):
            reachability_graph(grow, 50)

    def test_truncated_graph_is_inconclusive(self):
        grow = LabeledPetriNet.from_arcs({"p": 1}, {"t": "a"}, [("p", "t"), ("t", "p", 2)])
        rg = reachability_graph(grow, 10, truncate=True)
        assert not rg.complete
        with pytest.raises(InconclusiveError):
            is_deadlock_free(rg, grow)

    def test_deadlock_freedom(self, fig1):
        assert is_deadlock_free(reachability_graph(fig1), fig1)
        loop = LabeledPetriNet.from_arcs({"p": 1}, {"t": "a"}, [("p", "t"), ("t", "p")])
        assert is_deadlock_free(reachability_graph(loop), loop)
        assert not is_deadlock_free(reachability_graph(d1()), d1())

    def test_nodes_sorted_and_edges_follow_bfs(self, fig1):
        rg = reachability_graph(fig1)
        assert list(rg.nodes) == sorted(rg.nodes)
        assert rg.edges[0][0] == fig1.m0


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_rg_edges_obey_firing_rule(seed):
    lpn = random_valid_lpn(np.random.default_rng(seed))
    net = lpn.net
    rg = reachability_graph(lpn)
    nodes = set(rg.nodes)
    for src, t, dst in rg.edges:
        j = net.transition_index(t)
        assert all(a >= b for a, b in zip(src, net.pre[:, j]))
        assert dst == tuple(int(v) for v in np.add(src, net.incidence[:, j]))
        assert dst in nodes
    for node in rg.nodes:
        for t in net.transitions:
            if enabled(lpn, node, t):
                assert fire(lpn, node, t) in nodes


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_rg_is_reproducible(seed):
    lpn = random_valid_lpn(np.random.default_rng(seed))
    assert reachability_graph(lpn) == reachability_graph(lpn)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(["t1", "t2", "t3"])), st.lists(st.sampled_from(["t1", "t2", "t3"])))
def test_parikh_is_additive(s1, s2):
    order = ("t1", "t2", "t3")
    assert parikh(order, s1 + s2) == tuple(a + b for a, b in zip(parikh(order, s1), parikh(order, s2)))


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_acyclicity_matches_graph_library(seed):
    lpn = random_lpn(np.random.default_rng(seed), p_silent=0.7)
    sub = tu_induced_subnet(lpn)
    g = nx.DiGraph()
    for j, t in enumerate(sub.kept):
        for i, p in enumerate(lpn.places):
            if sub.pre_u[i, j]:
                g.add_edge(("p", p), ("t", t))
            if sub.post_u[i, j]:
                g.add_edge(("t", t), ("p", p))
    assert is_acyclic(sub) == nx.is_directed_acyclic_graph(g)


def test_fixtures_parse(named_all):
    fig1 = named_all["fig1"]
    assert len(fig1.places) == 7 and len(fig1.transitions) == 8
    assert load_fixture("fig4").m0 == (1, 0, 0, 0, 0, 0)
