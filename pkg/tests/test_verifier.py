import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from petridetect import (
    LabeledPetriNet,
    acyclicity_transfer_check,
    build_verifier,
    fire_sequence,
    load_fixture,
    reachability_graph,
    vn_language_check,
)
from petridetect.fixtures import random_lpn, random_valid_lpn
from petridetect.verifier import pair_id

seeds = st.integers(0, 2**32 - 1)


def test_fig1_transition_counts(fig1):
    vn = build_verifier(fig1)
    assert len(vn.lpn.unobservable) == 8
    pairs = {vn.provenance[t] for t in vn.lpn.observable}
    assert pairs == {("t4", "t4"), ("t5", "t5"), ("t5", "t4"), ("t4", "t5"), ("t7", "t7"), ("t8", "t8")}


def test_fig1_ids_and_initial(fig1):
    vn = build_verifier(fig1)
    assert "(t4',t5)" in vn.lpn.transitions and "(lam,t1)" in vn.lpn.transitions
    assert "(t1',lam)" in vn.lpn.transitions
    assert vn.lpn.places[:7] == tuple(p + "'" for p in fig1.places)
    assert vn.lpn.m0 == fig1.m0 + fig1.m0


def test_arc_columns(fig1):
    vn = build_verifier(fig1)
    net, src = vn.net, fig1.net
    n = len(src.places)
    for tid, (left, right) in vn.provenance.items():
        j = net.transition_index(tid)
        for block, orig in ((slice(0, n), left), (slice(n, 2 * n), right)):
            if orig is None:
                assert not net.pre[block, j].any() and not net.post[block, j].any()
            else:
                k = src.transition_index(orig)
                assert np.array_equal(net.pre[block, j], src.pre[:, k])
                assert np.array_equal(net.post[block, j], src.post[:, k])
        assert vn.lpn.labeling[tid] == (fig1.labeling[right] if left is not None and right is not None else None)


def test_injective_observable_is_diagonal():
    lpn = load_fixture("d1")
    loop = LabeledPetriNet.from_arcs(
        {"p1": 1, "p2": 0}, {"t1": "a", "t2": "b"}, [("p1", "t1"), ("t1", "p2"), ("p2", "t2"), ("t2", "p1")]
    )
    for net in (lpn, loop):
        vn = build_verifier(net)
        assert len(vn.lpn.transitions) == len(net.transitions)
        assert all(vn.is_diagonal(mk) for mk in reachability_graph(vn.lpn).nodes)


def test_two_same_label_transitions_give_four():
    lpn = LabeledPetriNet.from_arcs(
        {"p1": 1, "p2": 0}, {"t1": "a", "t2": "a"}, [("p1", "t1"), ("t1", "p2"), ("p1", "t2"), ("t2", "p2")]
    )
    assert len(build_verifier(lpn).lpn.observable) == 4


def test_language_check_fig1(fig1):
    vn = build_verifier(fig1)
    assert vn_language_check(fig1, vn, 4)
    assert vn_language_check(fig1, vn, 0)


def test_language_check_detects_a_broken_verifier(fig1):
    vn = build_verifier(fig1)
    # swap the right-hand columns of two synchronised transitions
    pre, post = vn.net.pre.copy(), vn.net.post.copy()
    a, b = vn.net.transition_index("(t4',t4)"), vn.net.transition_index("(t7',t7)")
    pre[:, [a, b]] = pre[:, [b, a]]
    post[:, [a, b]] = post[:, [b, a]]
    from petridetect import PetriNet
    from petridetect.verifier import VerifierNet

    broken_net = PetriNet(vn.net.places, vn.net.transitions, pre, post)
    broken = VerifierNet(fig1, LabeledPetriNet(broken_net, vn.lpn.m0, vn.lpn.labeling), vn.provenance)
    assert not vn_language_check(fig1, broken, 3)


def test_acyclicity_transfer_cases():
    for name in ("fig1", "cyclic_tu", "d1"):
        assert acyclicity_transfer_check(load_fixture(name))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_structural_identities(seed):
    lpn = random_valid_lpn(np.random.default_rng(seed))
    vn = build_verifier(lpn)
    assert len(vn.lpn.places) == 2 * len(lpn.places)
    assert sum(vn.lpn.m0) == 2 * sum(lpn.m0)
    assert len(vn.lpn.unobservable) == 2 * len(lpn.unobservable)
    counts = [len(lpn.transitions_with_label(e)) for e in lpn.alphabet]
    assert len(vn.lpn.observable) == sum(k * k for k in counts) <= len(lpn.transitions) ** 2


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_reachable_halves_are_reachable(seed):
    lpn = random_valid_lpn(np.random.default_rng(seed))
    vn = build_verifier(lpn)
    nodes = set(reachability_graph(lpn).nodes)
    for mk in reachability_graph(vn.lpn).nodes:
        left, right = vn.halves(mk)
        assert left in nodes and right in nodes


def _diagonal_run(lpn, seq):
    out = []
    for t in seq:
        if lpn.labeling[t] is None:
            out += [pair_id(None, t), pair_id(t, None)]
        else:
            out.append(pair_id(t, t))
    return out


@settings(max_examples=40, deadline=None)
@given(seeds, st.lists(st.integers(0, 7), max_size=6))
def test_diagonal_closure(seed, choices):
    lpn = random_valid_lpn(np.random.default_rng(seed))
    vn = build_verifier(lpn)
    mk, seq = lpn.m0, []
    from petridetect.net import enabled_transitions, fire

    for c in choices:
        ts = enabled_transitions(lpn, mk)
        t = ts[c % len(ts)]
        mk = fire(lpn, mk, t)
        seq.append(t)
    assert fire_sequence(vn.lpn, vn.lpn.m0, _diagonal_run(lpn, seq)) == mk + mk


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_language_check_random(seed):
    lpn = random_valid_lpn(np.random.default_rng(seed), max_places=5, max_transitions=5)
    assert vn_language_check(lpn, build_verifier(lpn), 3)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_acyclicity_transfer_random(seed):
    assert acyclicity_transfer_check(random_lpn(np.random.default_rng(seed), p_silent=0.7))
