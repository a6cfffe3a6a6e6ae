"""Place/transition nets, labeled nets, firing rules and reachability graphs.

Markings are plain tuples of ints in the net's place order, so they hash and
compare cheaply.  Pre and Post are kept as read-only integer matrices with
one row per place and one column per transition.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .config import default_node_budget
from .errors import (
    BudgetExceededError,
    FiringError,
    InconclusiveError,
    StructuralError,
)

Marking = tuple[int, ...]

#: Label of an unobservable transition.
EPS = None


def _frozen_matrix(values, shape: tuple[int, int], name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.int64).reshape(shape)
    if (arr < 0).any():
        raise StructuralError(f"{name} matrix has negative entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PetriNet:
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    pre: np.ndarray
    post: np.ndarray
    _pidx: dict = field(init=False, repr=False)
    _tidx: dict = field(init=False, repr=False)
    _pre_cols: tuple = field(init=False, repr=False)
    _delta_cols: tuple = field(init=False, repr=False)

    def __post_init__(self):
        places = tuple(self.places)
        transitions = tuple(self.transitions)
        if len(set(places)) != len(places):
            raise StructuralError("duplicate place id")
        if len(set(transitions)) != len(transitions):
            raise StructuralError("duplicate transition id")
        if set(places) & set(transitions):
            raise StructuralError("place and transition ids must be disjoint")
        shape = (len(places), len(transitions))
        pre = np.asarray(self.pre)
        post = np.asarray(self.post)
        if pre.size != shape[0] * shape[1] or post.size != shape[0] * shape[1]:
            raise StructuralError(f"pre/post must both have shape {shape}")
        pre = _frozen_matrix(pre, shape, "pre")
        post = _frozen_matrix(post, shape, "post")
        set_ = object.__setattr__
        set_(self, "places", places)
        set_(self, "transitions", transitions)
        set_(self, "pre", pre)
        set_(self, "post", post)
        set_(self, "_pidx", {p: i for i, p in enumerate(places)})
        set_(self, "_tidx", {t: j for j, t in enumerate(transitions)})
        set_(self, "_pre_cols", tuple(tuple(int(v) for v in pre[:, j]) for j in range(shape[1])))
        delta = post - pre
        set_(self, "_delta_cols", tuple(tuple(int(v) for v in delta[:, j]) for j in range(shape[1])))

    @property
    def incidence(self) -> np.ndarray:
        """C = Post - Pre."""
        return self.post - self.pre

    def place_index(self, p: str) -> int:
        try:
            return self._pidx[p]
        except KeyError:
            raise StructuralError(f"unknown place {p!r}") from None

    def transition_index(self, t: str) -> int:
        try:
            return self._tidx[t]
        except KeyError:
            raise StructuralError(f"unknown transition {t!r}") from None

    def pre_column(self, t: str) -> tuple[int, ...]:
        return self._pre_cols[self.transition_index(t)]

    def delta_column(self, t: str) -> tuple[int, ...]:
        return self._delta_cols[self.transition_index(t)]

    def zero_marking(self) -> Marking:
        return (0,) * len(self.places)

    def check_marking(self, m: Sequence[int]) -> Marking:
        m = tuple(int(v) for v in m)
        if len(m) != len(self.places):
            raise StructuralError(f"marking has dimension {len(m)}, net has {len(self.places)} places")
        if any(v < 0 for v in m):
            raise StructuralError("marking has negative entries")
        return m

    def __eq__(self, other):
        if not isinstance(other, PetriNet):
            return NotImplemented
        return (
            self.places == other.places
            and self.transitions == other.transitions
            and np.array_equal(self.pre, other.pre)
            and np.array_equal(self.post, other.post)
        )

    def __hash__(self):
        return hash((self.places, self.transitions, self.pre.tobytes(), self.post.tobytes()))


@dataclass(frozen=True, eq=False)
class LabeledPetriNet:
    """A net system with initial marking and a labeling into ``alphabet`` or ``EPS``."""

    net: PetriNet
    m0: Marking
    labeling: Mapping[str, str | None]
    alphabet: frozenset[str] = frozenset()
    observable: tuple[str, ...] = field(init=False)
    unobservable: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        net = self.net
        m0 = net.check_marking(self.m0)
        labeling = dict(self.labeling)
        missing = [t for t in net.transitions if t not in labeling]
        if missing:
            raise StructuralError(f"transitions without label: {missing}")
        extra = [t for t in labeling if t not in net._tidx]
        if extra:
            raise StructuralError(f"labels given for unknown transitions: {extra}")
        for t, lab in labeling.items():
            if lab is not None and (not isinstance(lab, str) or lab == ""):
                raise StructuralError(f"bad label {lab!r} for {t}")
        used = {lab for lab in labeling.values() if lab is not None}
        alphabet = frozenset(self.alphabet) | used
        labeling = {t: labeling[t] for t in net.transitions}
        set_ = object.__setattr__
        set_(self, "m0", m0)
        set_(self, "labeling", labeling)
        set_(self, "alphabet", alphabet)
        set_(self, "observable", tuple(t for t in net.transitions if labeling[t] is not None))
        set_(self, "unobservable", tuple(t for t in net.transitions if labeling[t] is None))

    @classmethod
    def from_arcs(
        cls,
        places: Mapping[str, int] | Sequence[str],
        transitions: Mapping[str, str | None],
        arcs: Iterable[tuple],
        alphabet: Iterable[str] = (),
    ) -> "LabeledPetriNet":
        """Build a labeled net from arc triples.

        ``places`` maps place ids to initial tokens (or is a plain id list for
        an all-zero initial marking).  Arcs are ``(src, dst)`` or
        ``(src, dst, weight)``; a place-to-transition arc contributes to Pre,
        a transition-to-place arc to Post.  Repeated arcs add up.
        """
        if isinstance(places, Mapping):
            pids = list(places)
            m0 = [int(places[p]) for p in pids]
        else:
            pids = list(places)
            m0 = [0] * len(pids)
        tids = list(transitions)
        pidx = {p: i for i, p in enumerate(pids)}
        tidx = {t: j for j, t in enumerate(tids)}
        pre = np.zeros((len(pids), len(tids)), dtype=np.int64)
        post = np.zeros_like(pre)
        for arc in arcs:
            src, dst, *rest = arc
            weight = int(rest[0]) if rest else 1
            if weight < 1:
                raise StructuralError(f"arc {src}->{dst} has weight {weight}")
            if src in pidx and dst in tidx:
                pre[pidx[src], tidx[dst]] += weight
            elif src in tidx and dst in pidx:
                post[pidx[dst], tidx[src]] += weight
            else:
                raise StructuralError(f"arc {src}->{dst} must join a declared place and transition")
        net = PetriNet(tuple(pids), tuple(tids), pre, post)
        return cls(net, tuple(m0), dict(transitions), frozenset(alphabet))

    @property
    def places(self) -> tuple[str, ...]:
        return self.net.places

    @property
    def transitions(self) -> tuple[str, ...]:
        return self.net.transitions

    def label(self, t: str) -> str | None:
        self.net.transition_index(t)
        return self.labeling[t]

    def is_observable(self, t: str) -> bool:
        return self.label(t) is not None

    def transitions_with_label(self, e: str) -> tuple[str, ...]:
        return tuple(t for t in self.observable if self.labeling[t] == e)

    def project(self, seq: Iterable[str]) -> tuple[str, ...]:
        """The observation of a transition sequence."""
        return tuple(self.labeling[t] for t in seq if self.labeling[t] is not None)

    def __eq__(self, other):
        if not isinstance(other, LabeledPetriNet):
            return NotImplemented
        return (
            self.net == other.net
            and self.m0 == other.m0
            and self.labeling == other.labeling
            and self.alphabet == other.alphabet
        )

    def __hash__(self):
        return hash((self.net, self.m0, tuple(self.labeling.items()), self.alphabet))


NetLike = Union[PetriNet, LabeledPetriNet]


def _as_net(obj: NetLike) -> PetriNet:
    return obj.net if isinstance(obj, LabeledPetriNet) else obj


def marking_str(places: Sequence[str], m: Sequence[int]) -> str:
    """Render a marking as a weighted sum of places, e.g. ``2p3+p5``."""
    terms = []
    for p, k in zip(places, m):
        if k == 1:
            terms.append(p)
        elif k > 1:
            terms.append(f"{k}{p}")
    return "+".join(terms) if terms else "0"


def marking_from_places(net: NetLike, tokens: Mapping[str, int] | Iterable[str]) -> Marking:
    net = _as_net(net)
    m = [0] * len(net.places)
    if isinstance(tokens, Mapping):
        items = tokens.items()
    else:
        items = ((p, 1) for p in tokens)
    for p, k in items:
        m[net.place_index(p)] += int(k)
    return tuple(m)


def _enabled_j(net: PetriNet, m: Marking, j: int) -> bool:
    return all(mi >= pi for mi, pi in zip(m, net._pre_cols[j]))


def _fire_j(net: PetriNet, m: Marking, j: int) -> Marking:
    return tuple(mi + di for mi, di in zip(m, net._delta_cols[j]))


def enabled(net: NetLike, m: Sequence[int], t: str) -> bool:
    net = _as_net(net)
    j = net.transition_index(t)
    m = net.check_marking(m)
    return _enabled_j(net, m, j)


def enabled_transitions(net: NetLike, m: Sequence[int]) -> tuple[str, ...]:
    net = _as_net(net)
    m = net.check_marking(m)
    return tuple(t for j, t in enumerate(net.transitions) if _enabled_j(net, m, j))


def fire(net: NetLike, m: Sequence[int], t: str) -> Marking:
    net = _as_net(net)
    j = net.transition_index(t)
    m = net.check_marking(m)
    if not _enabled_j(net, m, j):
        raise FiringError(f"{t} is not enabled at {marking_str(net.places, m)}", t)
    return _fire_j(net, m, j)


def fire_sequence(net: NetLike, m: Sequence[int], seq: Iterable[str]) -> Marking:
    net = _as_net(net)
    m = net.check_marking(m)
    for i, t in enumerate(seq):
        j = net.transition_index(t)
        if not _enabled_j(net, m, j):
            raise FiringError(
                f"step {i}: {t} is not enabled at {marking_str(net.places, m)}", t, index=i
            )
        m = _fire_j(net, m, j)
    return m


def parikh(transitions: NetLike | Sequence[str], seq: Iterable[str]) -> tuple[int, ...]:
    """Count vector of ``seq`` over ``transitions`` (a net or an explicit id order)."""
    if isinstance(transitions, (PetriNet, LabeledPetriNet)):
        order = _as_net(transitions).transitions
    else:
        order = tuple(transitions)
    index = {t: j for j, t in enumerate(order)}
    y = [0] * len(order)
    for t in seq:
        if t not in index:
            raise StructuralError(f"unknown transition {t!r}")
        y[index[t]] += 1
    return tuple(y)


@dataclass(frozen=True, eq=False)
class InducedSubnet:
    """The restriction of a labeled net to a subset of its transitions."""

    parent: LabeledPetriNet
    kept: tuple[str, ...]
    pre_u: np.ndarray
    post_u: np.ndarray

    @property
    def c_u(self) -> np.ndarray:
        return self.post_u - self.pre_u

    @property
    def net(self) -> PetriNet:
        return PetriNet(self.parent.places, self.kept, self.pre_u, self.post_u)

    def parikh(self, seq: Iterable[str]) -> tuple[int, ...]:
        return parikh(self.kept, seq)


def induced_subnet(lpn: LabeledPetriNet, kept: Iterable[str]) -> InducedSubnet:
    kept = tuple(kept)
    cols = [lpn.net.transition_index(t) for t in kept]
    pre_u = lpn.net.pre[:, cols].copy()
    post_u = lpn.net.post[:, cols].copy()
    pre_u.setflags(write=False)
    post_u.setflags(write=False)
    return InducedSubnet(lpn, kept, pre_u, post_u)


def tu_induced_subnet(lpn: LabeledPetriNet) -> InducedSubnet:
    return induced_subnet(lpn, lpn.unobservable)


def is_acyclic(subnet: InducedSubnet) -> bool:
    """True iff the place/transition graph of the subnet has no directed cycle."""
    n_p = len(subnet.parent.places)
    n_t = len(subnet.kept)
    # Nodes 0..n_p-1 are places, n_p.. are the kept transitions.
    adj: list[list[int]] = [[] for _ in range(n_p + n_t)]
    for j in range(n_t):
        for i in range(n_p):
            if subnet.pre_u[i, j] > 0:
                adj[i].append(n_p + j)
            if subnet.post_u[i, j] > 0:
                adj[n_p + j].append(i)
    return not _has_cycle(adj)


def _has_cycle(adj: list[list[int]]) -> bool:
    WHITE, GREY, BLACK = 0, 1, 2
    color = [WHITE] * len(adj)
    for root in range(len(adj)):
        if color[root] != WHITE:
            continue
        color[root] = GREY
        stack = [(root, iter(adj[root]))]
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if color[nxt] == GREY:
                    return True
                if color[nxt] == WHITE:
                    color[nxt] = GREY
                    stack.append((nxt, iter(adj[nxt])))
                    break
            else:
                color[node] = BLACK
                stack.pop()
    return False


@dataclass(frozen=True)
class ReachabilityGraph:
    """Reachable markings (sorted) and firing edges (in BFS discovery order)."""

    nodes: tuple[Marking, ...]
    edges: tuple[tuple[Marking, str, Marking], ...]
    initial: Marking
    complete: bool = True

    def successors(self) -> dict[Marking, list[tuple[str, Marking]]]:
        succ: dict[Marking, list[tuple[str, Marking]]] = {m: [] for m in self.nodes}
        for src, t, dst in self.edges:
            succ[src].append((t, dst))
        return succ


def reachability_graph(
    lpn: NetLike,
    node_budget: int | None = None,
    *,
    m0: Sequence[int] | None = None,
    truncate: bool = False,
) -> ReachabilityGraph:
    """Breadth-first reachability graph from the initial marking.

    Going over ``node_budget`` raises ``BudgetExceededError`` unless
    ``truncate`` is set, in which case the partial graph comes back with
    ``complete=False``.
    """
    budget = default_node_budget() if node_budget is None else int(node_budget)
    if budget <= 0:
        raise ValueError("node_budget must be positive")
    net = _as_net(lpn)
    if m0 is None:
        if not isinstance(lpn, LabeledPetriNet):
            raise StructuralError("a bare PetriNet needs an explicit m0")
        m0 = lpn.m0
    start = net.check_marking(m0)
    seen = {start}
    queue = deque([start])
    edges = []
    complete = True
    n_t = len(net.transitions)
    while queue:
        m = queue.popleft()
        for j in range(n_t):
            if not _enabled_j(net, m, j):
                continue
            m2 = _fire_j(net, m, j)
            if m2 not in seen:
                if len(seen) >= budget:
                    if not truncate:
                        raise BudgetExceededError("reachability graph", budget)
                    complete = False
                    continue
                seen.add(m2)
                queue.append(m2)
            edges.append((m, net.transitions[j], m2))
    return ReachabilityGraph(tuple(sorted(seen)), tuple(edges), start, complete)


def is_deadlock_free(rg: ReachabilityGraph, net: NetLike) -> bool:
    if not rg.complete:
        raise InconclusiveError("deadlock-freeness is inconclusive on a truncated reachability graph")
    net = _as_net(net)
    n_t = len(net.transitions)
    return all(any(_enabled_j(net, m, j) for j in range(n_t)) for m in rg.nodes)
