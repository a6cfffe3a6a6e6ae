"""Minimal explanations, basis markings and sets of consistent markings.

Everything here assumes the unobservable subnet is acyclic.  Under that
assumption the marking reached by an unobservable sequence depends only on
its count vector, which is what lets us search over e-vectors instead of
sequences.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .config import default_node_budget
from .errors import BudgetExceededError, DomainError, UnsupportedStructureError
from .net import (
    LabeledPetriNet,
    Marking,
    _enabled_j,
    _fire_j,
    is_acyclic,
    reachability_graph,
    tu_induced_subnet,
)

EVector = tuple[int, ...]
Word = tuple[str, ...]


@dataclass(frozen=True)
class Explanation:
    sequence: tuple[str, ...]
    evector: EVector


@dataclass(frozen=True)
class BasisEdge:
    source: Marking
    transition: str
    evector: EVector
    explanation: tuple[str, ...]
    target: Marking


@dataclass(frozen=True)
class BasisMarkingSet:
    """Basis markings in discovery order plus the edges that generated them."""

    lpn: LabeledPetriNet
    markings: tuple[Marking, ...]
    edges: tuple[BasisEdge, ...]

    @property
    def initial(self) -> Marking:
        return self.markings[0]

    def __len__(self):
        return len(self.markings)

    @cached_property
    def marking_set(self) -> frozenset[Marking]:
        return frozenset(self.markings)

    def __contains__(self, m):
        return m in self.marking_set


def as_word(w: str | Iterable[str]) -> Word:
    """Normalise an observation.

    A plain string is split into one-character symbols; pass a sequence to
    use labels longer than one character.
    """
    if isinstance(w, str):
        return tuple(w)
    return tuple(w)


def require_acyclic(lpn: LabeledPetriNet) -> None:
    if not is_acyclic(tu_induced_subnet(lpn)):
        raise UnsupportedStructureError("the unobservable subnet has a directed cycle")


def _u_indices(lpn: LabeledPetriNet) -> list[int]:
    return [lpn.net.transition_index(t) for t in lpn.unobservable]


def _dominates(y: EVector, z: EVector) -> bool:
    """y >= z componentwise."""
    return all(a >= b for a, b in zip(y, z))


def minimal_explanations(
    lpn: LabeledPetriNet,
    m: Sequence[int],
    t: str,
    *,
    budget: int | None = None,
) -> tuple[Explanation, ...]:
    """Parikh-minimal unobservable sequences that enable ``t`` at ``m``.

    Breadth-first over e-vectors by total length.  A vector that already
    enables ``t``, or that dominates a vector found earlier, is not expanded.
    For each minimal vector the lexicographically smallest sequence (in the
    net's transition order) is returned as its witness.
    """
    net = lpn.net
    j_t = net.transition_index(t)
    if lpn.labeling[t] is None:
        raise DomainError(f"{t} is unobservable")
    require_acyclic(lpn)
    m = net.check_marking(m)
    budget = default_node_budget() if budget is None else budget
    u_idx = _u_indices(lpn)
    n_u = len(u_idx)
    zero = (0,) * n_u

    found: list[Explanation] = []
    level: dict[EVector, tuple[Marking, tuple[int, ...]]] = {zero: (m, ())}
    visited = 1
    while level:
        nxt: dict[EVector, tuple[Marking, tuple[int, ...]]] = {}
        for y in sorted(level, key=lambda v: level[v][1]):
            mk, seq = level[y]
            if any(_dominates(y, e.evector) for e in found):
                continue
            if _enabled_j(net, mk, j_t):
                found.append(Explanation(tuple(net.transitions[u_idx[k]] for k in seq), y))
                continue
            for k, j in enumerate(u_idx):
                if not _enabled_j(net, mk, j):
                    continue
                y2 = y[:k] + (y[k] + 1,) + y[k + 1:]
                cand = seq + (k,)
                prev = nxt.get(y2)
                if prev is None:
                    visited += 1
                    if visited > budget:
                        raise BudgetExceededError("explanation search", budget)
                    nxt[y2] = (_fire_j(net, mk, j), cand)
                elif cand < prev[1]:
                    nxt[y2] = (prev[0], cand)
        level = nxt
    return tuple(sorted(found, key=lambda e: (sum(e.evector), e.evector)))


def _unobservable_tree(
    lpn: LabeledPetriNet, m: Marking, budget: int
) -> list[tuple[EVector, Marking, tuple[int, ...]]]:
    """Every firable e-vector from ``m`` with its marking and lex-min witness."""
    net = lpn.net
    u_idx = _u_indices(lpn)
    zero = (0,) * len(u_idx)
    out = [(zero, m, ())]
    level = {zero: (m, ())}
    while level:
        nxt: dict[EVector, tuple[Marking, tuple[int, ...]]] = {}
        for y, (mk, seq) in level.items():
            for k, j in enumerate(u_idx):
                if not _enabled_j(net, mk, j):
                    continue
                y2 = y[:k] + (y[k] + 1,) + y[k + 1:]
                cand = seq + (k,)
                prev = nxt.get(y2)
                if prev is None:
                    nxt[y2] = (_fire_j(net, mk, j), cand)
                elif cand < prev[1]:
                    nxt[y2] = (prev[0], cand)
        out.extend((y, mk, seq) for y, (mk, seq) in nxt.items())
        if len(out) > budget:
            raise BudgetExceededError("unobservable explanation tree", budget)
        level = nxt
    return out


def _minimal_from_tree(lpn, tree, j_t) -> list[Explanation]:
    net = lpn.net
    u_names = lpn.unobservable
    cands = [(y, seq) for y, mk, seq in tree if _enabled_j(net, mk, j_t)]
    cands.sort(key=lambda c: (sum(c[0]), c[0]))
    minimal: list[tuple[EVector, tuple[int, ...]]] = []
    for y, seq in cands:
        if not any(_dominates(y, z) for z, _ in minimal):
            minimal.append((y, seq))
    return [Explanation(tuple(u_names[k] for k in seq), y) for y, seq in minimal]


def basis_marking_set(lpn: LabeledPetriNet, node_budget: int | None = None) -> BasisMarkingSet:
    """Least set containing m0 and closed under minimal explanation + observable firing.

    Markings are discovered breadth-first; at each marking the observable
    transitions are expanded sorted by (label, net order).
    """
    require_acyclic(lpn)
    budget = default_node_budget() if node_budget is None else int(node_budget)
    net = lpn.net
    obs = sorted(lpn.observable, key=lambda t: (lpn.labeling[t], net.transition_index(t)))
    obs_j = [(t, net.transition_index(t)) for t in obs]
    start = lpn.m0
    seen = {start}
    order = [start]
    queue = deque([start])
    edges: list[BasisEdge] = []
    while queue:
        mb = queue.popleft()
        tree = _unobservable_tree(lpn, mb, budget)
        reached = {y: mk for y, mk, _ in tree}
        for t, j in obs_j:
            for ex in _minimal_from_tree(lpn, tree, j):
                mk = reached[ex.evector]
                target = _fire_j(net, mk, j)
                if target not in seen:
                    if len(seen) >= budget:
                        raise BudgetExceededError("basis marking set", budget)
                    seen.add(target)
                    order.append(target)
                    queue.append(target)
                edges.append(BasisEdge(mb, t, ex.evector, ex.sequence, target))
    return BasisMarkingSet(lpn, tuple(order), tuple(edges))


def unobservable_reach(
    lpn: LabeledPetriNet, m_b: Sequence[int], budget: int | None = None
) -> frozenset[Marking]:
    """Markings reachable from ``m_b`` by unobservable firings only."""
    net = lpn.net
    budget = default_node_budget() if budget is None else budget
    start = net.check_marking(m_b)
    u_idx = _u_indices(lpn)
    seen = {start}
    stack = [start]
    while stack:
        m = stack.pop()
        for j in u_idx:
            if _enabled_j(net, m, j):
                m2 = _fire_j(net, m, j)
                if m2 not in seen:
                    seen.add(m2)
                    if len(seen) > budget:
                        raise BudgetExceededError("unobservable reach", budget)
                    stack.append(m2)
    return frozenset(seen)


class ConsistencyEstimator:
    """Computes C(w) either from the full reachability graph or from basis markings.

    Both constructions are cached, so many words can be evaluated cheaply.
    """

    def __init__(self, lpn: LabeledPetriNet, node_budget: int | None = None):
        self.lpn = lpn
        self.node_budget = node_budget
        self._rg_succ = None
        self._basis = None
        self._ureach: dict[Marking, frozenset[Marking]] = {}

    def _check(self, w) -> Word:
        w = as_word(w)
        bad = [e for e in w if e not in self.lpn.alphabet]
        if bad:
            raise DomainError(f"symbols outside the alphabet: {sorted(set(bad))}")
        return w

    # route (a): filter the reachability graph by observation
    def _rg(self):
        if self._rg_succ is None:
            rg = reachability_graph(self.lpn, self.node_budget)
            lab = self.lpn.labeling
            unobs: dict[Marking, list[Marking]] = {m: [] for m in rg.nodes}
            obs: dict[tuple[Marking, str], list[Marking]] = {}
            for src, t, dst in rg.edges:
                if lab[t] is None:
                    unobs[src].append(dst)
                else:
                    obs.setdefault((src, lab[t]), []).append(dst)
            self._rg_succ = (unobs, obs)
        return self._rg_succ

    def _closure(self, ms: Iterable[Marking]) -> set[Marking]:
        unobs, _ = self._rg()
        out = set(ms)
        stack = list(out)
        while stack:
            m = stack.pop()
            for m2 in unobs[m]:
                if m2 not in out:
                    out.add(m2)
                    stack.append(m2)
        return out

    def via_rg(self, w) -> frozenset[Marking]:
        w = self._check(w)
        _, obs = self._rg()
        current = self._closure([self.lpn.m0])
        for e in w:
            step = [m2 for m in current for m2 in obs.get((m, e), ())]
            current = self._closure(step)
        return frozenset(current)

    # route (b): basis markings reached along w, then unobservable reach
    def basis(self) -> BasisMarkingSet:
        if self._basis is None:
            self._basis = basis_marking_set(self.lpn, self.node_budget)
        return self._basis

    def consistent_basis(self, w) -> frozenset[Marking]:
        w = self._check(w)
        bms = self.basis()
        lab = self.lpn.labeling
        step: dict[tuple[Marking, str], set[Marking]] = {}
        for edge in bms.edges:
            step.setdefault((edge.source, lab[edge.transition]), set()).add(edge.target)
        current = {bms.initial}
        for e in w:
            current = {m2 for m in current for m2 in step.get((m, e), ())}
        return frozenset(current)

    def via_basis(self, w) -> frozenset[Marking]:
        out: set[Marking] = set()
        for mb in self.consistent_basis(w):
            if mb not in self._ureach:
                self._ureach[mb] = unobservable_reach(self.lpn, mb, self.node_budget)
            out |= self._ureach[mb]
        return frozenset(out)


def consistent_markings(
    lpn: LabeledPetriNet,
    w: str | Iterable[str],
    *,
    method: str = "basis",
    node_budget: int | None = None,
) -> frozenset[Marking]:
    """Markings consistent with observation ``w``.

    ``method`` is ``"rg"`` (filter the reachability graph), ``"basis"``
    (union of unobservable reaches of the consistent basis markings) or
    ``"both"``, which computes the two and raises ``AssertionError`` if they
    differ.
    """
    est = ConsistencyEstimator(lpn, node_budget)
    if method == "rg":
        return est.via_rg(w)
    if method == "basis":
        return est.via_basis(w)
    if method == "both":
        a, b = est.via_rg(w), est.via_basis(w)
        if a != b:
            raise AssertionError(f"C(w) routes disagree for {as_word(w)}: {sorted(a)} vs {sorted(b)}")
        return a
    raise ValueError(f"unknown method {method!r}")
