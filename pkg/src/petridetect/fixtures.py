"""Bundled example nets and a seeded random generator of small valid nets."""

from __future__ import annotations

from importlib import resources

import numpy as np

from .errors import BudgetExceededError
from .io import parse_net
from .net import LabeledPetriNet, is_acyclic, is_deadlock_free, reachability_graph, tu_induced_subnet

FIXTURES = ("fig1", "fig4", "fig7", "d1", "branch", "xm_gap", "loop_gap", "cyclic_tu")
SYMBOLS = ("a", "b", "c")


def fixture_text(name: str) -> str:
    return resources.files("petridetect.data").joinpath(f"{name}.net").read_text(encoding="utf-8")


def load_fixture(name: str) -> LabeledPetriNet:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    return parse_net(fixture_text(name))


def _pick_places(rng: np.random.Generator, n_places: int, total: int) -> list[tuple[int, int]]:
    """Split ``total`` tokens of arc weight over distinct places (weights <= 2)."""
    arcs: dict[int, int] = {}
    while total > 0:
        w = 1 if total == 1 or rng.random() < 0.8 else 2
        i = int(rng.integers(n_places))
        if arcs.get(i, 0) + w > 2:
            continue
        arcs[i] = arcs.get(i, 0) + w
        total -= w
    return sorted(arcs.items())


def random_lpn(
    rng: np.random.Generator,
    max_places: int = 8,
    max_transitions: int = 8,
    p_silent: float = 0.35,
) -> LabeledPetriNet:
    """A random labeled net, not necessarily bounded or live.

    Most transitions conserve tokens, which keeps the reachability graph
    small; labels come from a one to three symbol alphabet.
    """
    n_p = int(rng.integers(2, max_places + 1))
    n_t = int(rng.integers(2, max_transitions + 1))
    n_sym = int(rng.integers(1, len(SYMBOLS) + 1))
    places = [f"p{i + 1}" for i in range(n_p)]
    transitions = {}
    arcs = []
    for j in range(n_t):
        t = f"t{j + 1}"
        transitions[t] = None if rng.random() < p_silent else SYMBOLS[int(rng.integers(n_sym))]
        n_in = 1 if rng.random() < 0.75 else 2
        n_out = n_in if rng.random() < 0.8 else int(rng.integers(1, 3))
        for i, w in _pick_places(rng, n_p, n_in):
            arcs.append((places[i], t, w))
        for i, w in _pick_places(rng, n_p, n_out):
            arcs.append((t, places[i], w))
    tokens = {p: 0 for p in places}
    for _ in range(int(rng.integers(1, 4))):
        tokens[places[int(rng.integers(n_p))]] += 1
    return LabeledPetriNet.from_arcs(tokens, transitions, arcs)


def is_valid(lpn: LabeledPetriNet, max_rg: int = 2000) -> bool:
    """Bounded within ``max_rg`` markings, deadlock free, acyclic unobservable part, some observation."""
    if not lpn.observable or not is_acyclic(tu_induced_subnet(lpn)):
        return False
    try:
        rg = reachability_graph(lpn, max_rg)
    except BudgetExceededError:
        return False
    return is_deadlock_free(rg, lpn)


def random_valid_lpn(
    rng: np.random.Generator,
    max_places: int = 8,
    max_transitions: int = 8,
    max_rg: int = 2000,
    max_tries: int = 10_000,
) -> LabeledPetriNet:
    """Resample :func:`random_lpn` until :func:`is_valid` holds."""
    for _ in range(max_tries):
        lpn = random_lpn(rng, max_places, max_transitions)
        if is_valid(lpn, max_rg):
            return lpn
    raise RuntimeError(f"no valid net after {max_tries} draws")


def random_valid_corpus(seed: int, count: int, **kwargs) -> list[LabeledPetriNet]:
    rng = np.random.default_rng(seed)
    return [random_valid_lpn(rng, **kwargs) for _ in range(count)]
