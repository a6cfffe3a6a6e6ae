"""Strong and periodically strong detectability from the verifier's BRG."""

from __future__ import annotations

import warnings as _warnings
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator

import networkx as nx

from .brg import Brg, BrgState, build_brg, run_relation
from .config import default_cycle_budget, default_node_budget
from .errors import BudgetExceededError, InapplicableAssumptionsError
from .net import (
    LabeledPetriNet,
    is_acyclic,
    is_deadlock_free,
    reachability_graph,
    tu_induced_subnet,
)
from .verifier import VerifierNet, build_verifier

STRONG = "strong"
PERIODIC = "periodic-strong"
XM_LITERAL = "literal"
XM_PER_CYCLE = "per-cycle"


@dataclass(frozen=True)
class SimpleCycle:
    """An elementary cycle ``states[0] -labels[0]-> states[1] ... -labels[-1]-> states[0]``.

    The rotation starting at the lowest state index is canonical.
    """

    states: tuple[BrgState, ...]
    labels: tuple[str, ...]

    def __len__(self):
        return len(self.states)

    @property
    def word(self) -> tuple[str, ...]:
        return self.labels

    def rotated(self, start: BrgState) -> "SimpleCycle":
        r = self.states.index(start)
        return SimpleCycle(self.states[r:] + self.states[:r], self.labels[r:] + self.labels[:r])

    def return_word(self, r: int) -> tuple[str, ...]:
        """Labels leading from the successor of ``states[r]`` back to ``states[r]``."""
        k = len(self.states)
        return tuple(self.labels[(r + i) % k] for i in range(1, k))

    def __str__(self):
        parts = []
        for x, e in zip(self.states, self.labels):
            parts += [x.name, e]
        return " ".join(parts + [self.states[0].name])


@dataclass(frozen=True)
class MarkedStateSet:
    global_set: frozenset[BrgState]
    per_cycle: dict[SimpleCycle, frozenset[BrgState]]


@dataclass(frozen=True)
class Witness:
    cycle: SimpleCycle
    word: tuple[str, ...]
    state: BrgState

    def to_dict(self) -> dict:
        return {
            "cycle_states": [x.name for x in self.cycle.states],
            "cycle_word": list(self.cycle.labels),
            "word": list(self.word),
            "state": self.state.name,
        }


@dataclass
class VerdictReport:
    property: str
    verdict: bool
    witness: Witness | None = None
    stats: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "stats": dict(self.stats),
            "warnings": list(self.warnings),
        }


def _index_graph(brg: Brg):
    g = nx.DiGraph()
    g.add_nodes_from(range(len(brg.states)))
    labels: dict[tuple[int, int], list[str]] = {}
    for src, e, dst in brg.edges:
        g.add_edge(src.index, dst.index)
        labs = labels.setdefault((src.index, dst.index), [])
        if e not in labs:
            labs.append(e)
    return g, {h: sorted(v) for h, v in labels.items()}


def iter_simple_cycles(brg: Brg, cycle_budget: int | None = None) -> Iterator[SimpleCycle]:
    """Elementary cycles in a fixed but unsorted order, each in canonical rotation.

    Parallel edges with different labels between two states give distinct
    cycles.
    """
    budget = default_cycle_budget() if cycle_budget is None else cycle_budget
    g, labels = _index_graph(brg)
    count = 0
    for nodes in nx.simple_cycles(g):
        r = nodes.index(min(nodes))
        nodes = nodes[r:] + nodes[:r]
        hops = [(nodes[i], nodes[(i + 1) % len(nodes)]) for i in range(len(nodes))]
        states = tuple(brg.states[i] for i in nodes)
        for word in product(*(labels[h] for h in hops)):
            count += 1
            if count > budget:
                raise BudgetExceededError("simple cycle enumeration", budget)
            yield SimpleCycle(states, tuple(word))


def simple_cycles(brg: Brg, cycle_budget: int | None = None) -> tuple[SimpleCycle, ...]:
    """All elementary cycles, sorted by (length, state indices, labels)."""
    out = list(iter_simple_cycles(brg, cycle_budget))
    out.sort(key=lambda c: (len(c), [x.index for x in c.states], c.labels))
    return tuple(out)


def cyclic_states(brg: Brg) -> frozenset[BrgState]:
    """States lying on at least one cycle, from the strongly connected components."""
    g, _ = _index_graph(brg)
    out = set()
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1 or g.has_edge(next(iter(comp)), next(iter(comp))):
            out |= comp
    return frozenset(brg.states[i] for i in out)


def _forward_closure(brg: Brg, seeds: Iterable[BrgState]) -> set[BrgState]:
    out = set(seeds)
    stack = list(out)
    while stack:
        x = stack.pop()
        for y in brg.successors(x):
            if y not in out:
                out.add(y)
                stack.append(y)
    return out


def states_reachable_from_cycles(brg: Brg, cycles: Iterable[SimpleCycle] | None = None) -> frozenset[BrgState]:
    """Forward closure of all cycle states, cycle states included.

    Without ``cycles`` the cycle states come from :func:`cyclic_states`,
    which avoids enumerating cycles.
    """
    seeds = cyclic_states(brg) if cycles is None else (x for c in cycles for x in c.states)
    return frozenset(_forward_closure(brg, seeds))


def marked_on_cycle(brg: Brg, cyc: SimpleCycle, *, full_word: bool = True) -> frozenset[BrgState]:
    """States of ``cyc`` that are certain and re-reached deterministically along it.

    ``states[r]`` qualifies when it has alpha 0, equal halves, and every run
    spelling the whole cycle word from ``states[r]`` ends there and nowhere
    else.  With ``full_word=False`` the runs start at the successor instead,
    which skips the first edge; on a self-loop that test is empty and marks
    any certain state.
    """
    k = len(cyc)
    marked = set()
    for r, x in enumerate(cyc.states):
        if not x.certain:
            continue
        if full_word:
            ends = run_relation(brg, x, cyc.rotated(x).word)
        else:
            ends = run_relation(brg, cyc.states[(r + 1) % k], cyc.return_word(r))
        if ends == {x}:
            marked.add(x)
    return frozenset(marked)


def marked_states(brg: Brg, cycles: Iterable[SimpleCycle], *, full_word: bool = True) -> MarkedStateSet:
    per_cycle = {cyc: marked_on_cycle(brg, cyc, full_word=full_word) for cyc in cycles}
    global_set = frozenset().union(*per_cycle.values()) if per_cycle else frozenset()
    return MarkedStateSet(global_set, per_cycle)


def shortest_words(brg: Brg) -> dict[BrgState, tuple[str, ...]]:
    """A shortest word from the initial state to each reachable state (label-sorted BFS)."""
    words = {brg.initial: ()}
    queue = deque([brg.initial])
    while queue:
        x = queue.popleft()
        for e, y in brg.labeled_successors(x):
            if y not in words:
                words[y] = words[x] + (e,)
                queue.append(y)
    return words


def _words_from(brg: Brg, start: BrgState) -> dict[BrgState, tuple[str, ...]]:
    words = {start: ()}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for e, y in brg.labeled_successors(x):
            if y not in words:
                words[y] = words[x] + (e,)
                queue.append(y)
    return words


def confusion_word(brg: Brg, cycle: SimpleCycle, r: int) -> tuple[str, ...]:
    """Observation reaching ``cycle.states[r]`` and then spelling the cycle once.

    For a state that is not marked this word has more than one consistent
    marking in the source system.
    """
    x = cycle.states[r]
    return shortest_words(brg)[x] + cycle.rotated(x).word


@lru_cache(maxsize=128)
def _assumption_violations(lpn: LabeledPetriNet, node_budget: int) -> tuple[str, ...]:
    problems = []
    if not is_acyclic(tu_induced_subnet(lpn)):
        problems.append("unobservable subnet is cyclic")
    try:
        rg = reachability_graph(lpn, node_budget)
    except BudgetExceededError as exc:
        problems.append(f"possibly unbounded: {exc}")
    else:
        if not is_deadlock_free(rg, lpn):
            problems.append("net is not deadlock free")
    return tuple(problems)


def check_assumptions(lpn: LabeledPetriNet, node_budget: int | None = None) -> None:
    """Raise ``InapplicableAssumptionsError`` unless lpn is bounded, deadlock free and T_u-acyclic."""
    budget = default_node_budget() if node_budget is None else node_budget
    problems = _assumption_violations(lpn, budget)
    if problems:
        raise InapplicableAssumptionsError(list(problems))


def _base_stats(brg: Brg) -> dict:
    vn = brg.vn
    return {
        "lpn_places": len(vn.source.places),
        "lpn_transitions": len(vn.source.transitions),
        "vn_places": len(vn.lpn.places),
        "vn_transitions": len(vn.lpn.transitions),
        "vn_observable_transitions": len(vn.lpn.observable),
        "brg_states": len(brg.states),
        "brg_edges": len(brg.edges),
    }


def check_strong_detectability(
    brg: Brg,
    *,
    verify_assumptions: bool = True,
    node_budget: int | None = None,
) -> VerdictReport:
    """Strongly detectable iff every state reachable from a cycle is certain."""
    if verify_assumptions:
        check_assumptions(brg.vn.source, node_budget)
    on_cycle = cyclic_states(brg)
    reach = _forward_closure(brg, on_cycle)
    bad = sorted((x for x in reach if not x.certain), key=lambda x: x.index)
    report = VerdictReport(STRONG, not bad, stats=_base_stats(brg))
    report.stats["cyclic_states"] = len(on_cycle)
    if bad:
        report.witness = _strong_witness(brg, on_cycle, bad[0])
    return report


def _shortest_cycle_through(brg: Brg, c: BrgState) -> SimpleCycle:
    # a shortest closed walk never repeats a state
    parent: dict[BrgState, tuple[BrgState, str]] = {}
    queue = deque()
    for e, y in brg.labeled_successors(c):
        if y not in parent:
            parent[y] = (c, e)
            queue.append(y)
    while c not in parent:
        x = queue.popleft()
        for e, y in brg.labeled_successors(x):
            if y not in parent:
                parent[y] = (x, e)
                queue.append(y)
    states, labels = [], []
    x = c
    while True:
        prev, e = parent[x]
        states.append(prev)
        labels.append(e)
        x = prev
        if x is c:
            break
    return SimpleCycle(tuple(reversed(states)), tuple(reversed(labels)))


def _strong_witness(brg: Brg, on_cycle, target: BrgState) -> Witness:
    prefix = shortest_words(brg)
    back = _reverse_closure(brg, target)
    c = min((x for x in on_cycle if x in back), key=lambda x: (len(prefix[x]), x.index))
    cyc = _shortest_cycle_through(brg, c)
    return Witness(cyc, prefix[c] + cyc.labels + _words_from(brg, c)[target], target)


def _reverse_closure(brg: Brg, target: BrgState) -> set[BrgState]:
    pred: dict[BrgState, set[BrgState]] = {x: set() for x in brg.states}
    for src, _, dst in brg.edges:
        pred[dst].add(src)
    out = {target}
    stack = [target]
    while stack:
        x = stack.pop()
        for y in pred[x]:
            if y not in out:
                out.add(y)
                stack.append(y)
    return out


def check_periodic_strong_detectability(
    brg: Brg,
    *,
    xm_semantics: str = XM_PER_CYCLE,
    verify_assumptions: bool = True,
    node_budget: int | None = None,
    cycle_budget: int | None = None,
) -> VerdictReport:
    """Periodically strongly detectable iff every simple cycle holds a marked state.

    ``"per-cycle"`` (default) needs a state marked for that very cycle,
    tested on the whole cycle word, and stops at the first cycle without
    one.  ``"literal"`` tests marks from the successor state, accepts any
    state of the global marked set and enumerates every cycle first; it can
    accept nets that are not periodically strongly detectable.
    """
    if xm_semantics not in (XM_LITERAL, XM_PER_CYCLE):
        raise ValueError(f"unknown xm semantics {xm_semantics!r}")
    if verify_assumptions:
        check_assumptions(brg.vn.source, node_budget)
    report = VerdictReport(PERIODIC, True, stats=_base_stats(brg))
    report.stats["xm_semantics"] = xm_semantics
    failing = None
    examined = 0
    if xm_semantics == XM_PER_CYCLE:
        marked: set[BrgState] = set()
        for cyc in iter_simple_cycles(brg, cycle_budget):
            examined += 1
            here = marked_on_cycle(brg, cyc)
            marked |= here
            if not here:
                failing = cyc
                break
        report.stats["cycles_examined"] = examined
        report.stats["marked_states"] = sorted((x.index for x in marked))
    else:
        cycles = simple_cycles(brg, cycle_budget)
        examined = len(cycles)
        xm = marked_states(brg, cycles, full_word=False)
        report.stats["cycles_examined"] = examined
        report.stats["marked_states"] = sorted(x.index for x in xm.global_set)
        failing = next((c for c in cycles if not any(x in xm.global_set for x in c.states)), None)
    report.stats["marked_states"] = [f"x{i}" for i in report.stats["marked_states"]]
    if examined == 0:
        msg = "BRG has no cycles: verdict holds vacuously, the system has no infinite runs"
        report.warnings.append(msg)
        _warnings.warn(msg, RuntimeWarning, stacklevel=2)
    if failing is not None:
        prefix = shortest_words(brg)
        entry = min(failing.states, key=lambda x: (len(prefix[x]), x.index))
        rot = failing.rotated(entry)
        report.verdict = False
        report.witness = Witness(rot, prefix[entry] + rot.labels, entry)
    return report


def check_lpn(
    lpn: LabeledPetriNet,
    properties: Iterable[str] = (STRONG, PERIODIC),
    *,
    xm_semantics: str = XM_PER_CYCLE,
    node_budget: int | None = None,
    cycle_budget: int | None = None,
    graph_sizes: bool = True,
) -> tuple[VerifierNet, Brg, list[VerdictReport]]:
    """Assumption check, verifier construction, BRG and the requested verdicts in one call.

    With ``graph_sizes`` each report's stats also carry the node counts of
    the net's and the verifier's reachability graphs (None if over budget).
    """
    check_assumptions(lpn, node_budget)
    vn = build_verifier(lpn)
    brg = build_brg(vn, node_budget)
    sizes = _graph_sizes(lpn, vn, node_budget) if graph_sizes else {}
    reports = []
    for prop in properties:
        if prop == STRONG:
            reports.append(
                check_strong_detectability(brg, verify_assumptions=False)
            )
        elif prop == PERIODIC:
            reports.append(
                check_periodic_strong_detectability(
                    brg,
                    xm_semantics=xm_semantics,
                    verify_assumptions=False,
                    cycle_budget=cycle_budget,
                )
            )
        else:
            raise ValueError(f"unknown property {prop!r}")
        reports[-1].stats.update(sizes)
    return vn, brg, reports


def _graph_sizes(lpn: LabeledPetriNet, vn: VerifierNet, node_budget: int | None) -> dict:
    out = {}
    for key, net in (("rg_nodes", lpn), ("vn_rg_nodes", vn.lpn)):
        try:
            out[key] = len(reachability_graph(net, node_budget).nodes)
        except BudgetExceededError:
            out[key] = None
    return out
