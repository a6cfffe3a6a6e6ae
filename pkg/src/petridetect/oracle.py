"""Brute-force ground truth: observer over the full reachability graph.

Nothing here touches basis markings, the verifier net or the BRG.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

from .config import default_node_budget
from .errors import BudgetExceededError, InapplicableAssumptionsError
from .net import LabeledPetriNet, Marking, ReachabilityGraph, is_deadlock_free, reachability_graph

StateSet = frozenset  # of Marking


class _ObservedRG:
    """Reachability graph split into unobservable and per-label successor maps."""

    def __init__(self, lpn: LabeledPetriNet, rg: ReachabilityGraph):
        self.lpn = lpn
        self.rg = rg
        self.silent: dict[Marking, list[Marking]] = {m: [] for m in rg.nodes}
        self.by_label: dict[Marking, dict[str, list[Marking]]] = {m: {} for m in rg.nodes}
        for src, t, dst in rg.edges:
            e = lpn.labeling[t]
            if e is None:
                self.silent[src].append(dst)
            else:
                self.by_label[src].setdefault(e, []).append(dst)

    def closure(self, ms: Iterable[Marking]) -> StateSet:
        out = set(ms)
        stack = list(out)
        while stack:
            m = stack.pop()
            for m2 in self.silent[m]:
                if m2 not in out:
                    out.add(m2)
                    stack.append(m2)
        return frozenset(out)

    def step(self, s: StateSet, e: str) -> StateSet:
        return self.closure(m2 for m in s for m2 in self.by_label[m].get(e, ()))

    def start(self) -> StateSet:
        return self.closure([self.lpn.m0])


@dataclass(frozen=True, eq=False)
class ObserverAutomaton:
    states: tuple[StateSet, ...]
    edges: tuple[tuple[int, str, int], ...]
    alphabet: frozenset[str]
    _delta: dict = field(init=False, repr=False)

    def __post_init__(self):
        delta = {}
        for i, e, j in self.edges:
            if (i, e) in delta:
                raise AssertionError("observer is not deterministic")
            delta[(i, e)] = j
        object.__setattr__(self, "_delta", delta)

    @property
    def initial(self) -> StateSet:
        return self.states[0]

    def run(self, w) -> StateSet:
        """Observer state reached by ``w``; empty if ``w`` is not observable."""
        i = 0
        for e in w:
            i = self._delta.get((i, e))
            if i is None:
                return frozenset()
        return self.states[i]

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.states)))
        g.add_edges_from((i, j) for i, _, j in self.edges)
        return g


def build_observer(lpn: LabeledPetriNet, budget: int | None = None) -> ObserverAutomaton:
    """Subset construction over the label projection of the reachability graph."""
    budget = default_node_budget() if budget is None else budget
    orc = _ObservedRG(lpn, reachability_graph(lpn, budget))
    labels = sorted(lpn.alphabet)
    first = orc.start()
    index = {first: 0}
    states = [first]
    edges = []
    queue = deque([first])
    while queue:
        s = queue.popleft()
        for e in labels:
            s2 = orc.step(s, e)
            if not s2:
                continue
            if s2 not in index:
                if len(states) >= budget:
                    raise BudgetExceededError("observer construction", budget)
                index[s2] = len(states)
                states.append(s2)
                queue.append(s2)
            edges.append((index[s], e, index[s2]))
    return ObserverAutomaton(tuple(states), tuple(edges), lpn.alphabet)


def _require_live(lpn: LabeledPetriNet, budget: int | None) -> None:
    budget = default_node_budget() if budget is None else budget
    try:
        rg = reachability_graph(lpn, budget)
    except BudgetExceededError as exc:
        raise InapplicableAssumptionsError([f"possibly unbounded: {exc}"]) from exc
    if not is_deadlock_free(rg, lpn):
        raise InapplicableAssumptionsError(["net is not deadlock free"])


def _on_cycle(g: nx.DiGraph) -> set[int]:
    out = set()
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1:
            out |= comp
        else:
            (v,) = comp
            if g.has_edge(v, v):
                out.add(v)
    return out


def oracle_strong_detectability(lpn: LabeledPetriNet, budget: int | None = None) -> bool:
    """Every observer state reachable from an observer cycle is a singleton."""
    _require_live(lpn, budget)
    obs = build_observer(lpn, budget)
    g = obs.graph()
    seeds = _on_cycle(g)
    reach = set(seeds)
    for v in seeds:
        reach |= nx.descendants(g, v)
    return all(len(obs.states[v]) == 1 for v in reach)


def oracle_periodic_strong_detectability(lpn: LabeledPetriNet, budget: int | None = None) -> bool:
    """Every observer cycle passes through a singleton state."""
    _require_live(lpn, budget)
    obs = build_observer(lpn, budget)
    g = obs.graph()
    unsure = [v for v in g.nodes if len(obs.states[v]) != 1]
    return nx.is_directed_acyclic_graph(g.subgraph(unsure))


@dataclass(frozen=True)
class FalsifierWitness:
    """``prefix`` then ``loop`` returns to the same estimate, so ``loop`` can be pumped.

    For strong detectability ``suffix`` then leads to an estimate with more
    than one marking; for the periodic property every estimate along the
    loop already has more than one.
    """

    prefix: tuple[str, ...]
    loop: tuple[str, ...]
    suffix: tuple[str, ...]

    @property
    def word(self) -> tuple[str, ...]:
        return self.prefix + self.loop + self.suffix

    def pumped(self, n: int) -> tuple[str, ...]:
        return self.prefix + self.loop * n + self.suffix


def bounded_falsifier(
    lpn: LabeledPetriNet,
    horizon: int,
    property: str = "strong",
    budget: int | None = None,
) -> FalsifierWitness | None:
    """Search observations up to ``horizon`` for a pumpable refutation.

    A returned witness refutes the property on a bounded deadlock-free net;
    ``None`` is inconclusive.
    """
    if property not in ("strong", "periodic-strong"):
        raise ValueError(f"unknown property {property!r}")
    budget = default_node_budget() if budget is None else budget
    orc = _ObservedRG(lpn, reachability_graph(lpn, budget))
    labels = sorted(lpn.alphabet)
    word: list[str] = []
    path: list[StateSet] = [orc.start()]

    def loop_at_end():
        """Latest earlier position whose estimate equals the current one."""
        last = path[-1]
        for j in range(len(path) - 2, -1, -1):
            if path[j] == last:
                return j
        return None

    def search(pumped):
        # pumped: (j, d) meaning word[j:d] is a loop, or None
        d = len(word)
        if pumped is None:
            j = loop_at_end()
            if j is not None:
                if property == "periodic-strong":
                    if all(len(s) > 1 for s in path[j + 1:]):
                        return FalsifierWitness(tuple(word[:j]), tuple(word[j:]), ())
                else:
                    pumped = (j, d)
        if property == "strong" and pumped is not None and len(path[-1]) > 1:
            j, k = pumped
            return FalsifierWitness(tuple(word[:j]), tuple(word[j:k]), tuple(word[k:]))
        if d == horizon:
            return None
        for e in labels:
            s2 = orc.step(path[-1], e)
            if not s2:
                continue
            word.append(e)
            path.append(s2)
            found = search(pumped)
            word.pop()
            path.pop()
            if found is not None:
                return found
        return None

    return search(None)
