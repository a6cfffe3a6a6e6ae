"""Basis reachability graph of a verifier net."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .basis import as_word, basis_marking_set, require_acyclic
from .errors import UnsupportedStructureError
from .net import Marking, _enabled_j, _fire_j, marking_str, tu_induced_subnet
from .verifier import VerifierNet


@dataclass(frozen=True, eq=False)
class BrgState:
    """A basis marking of the verifier with its flags; compared by identity."""

    index: int
    marking: Marking
    alpha: int
    diag_equal: bool

    @property
    def name(self) -> str:
        return f"x{self.index}"

    @property
    def certain(self) -> bool:
        """No confusion visible at this state: alpha = 0 and both halves agree."""
        return self.alpha == 0 and self.diag_equal


@dataclass(frozen=True, eq=False)
class Brg:
    vn: VerifierNet
    states: tuple[BrgState, ...]
    edges: tuple[tuple[BrgState, str, BrgState], ...]
    alphabet: frozenset[str]
    _succ: dict = field(init=False, repr=False)

    def __post_init__(self):
        succ: dict[BrgState, dict[str, list[BrgState]]] = {x: {} for x in self.states}
        for src, e, dst in self.edges:
            targets = succ[src].setdefault(e, [])
            if dst not in targets:
                targets.append(dst)
        object.__setattr__(self, "_succ", succ)

    @property
    def initial(self) -> BrgState:
        return self.states[0]

    def __len__(self):
        return len(self.states)

    def successors(self, x: BrgState, e: str | None = None) -> list[BrgState]:
        out = self._succ[x]
        if e is not None:
            return list(out.get(e, ()))
        seen: list[BrgState] = []
        for targets in out.values():
            for y in targets:
                if y not in seen:
                    seen.append(y)
        return seen

    def labeled_successors(self, x: BrgState) -> list[tuple[str, BrgState]]:
        return [(e, y) for e in sorted(self._succ[x]) for y in self._succ[x][e]]

    @cached_property
    def by_marking(self) -> dict[Marking, BrgState]:
        return {x.marking: x for x in self.states}

    def state(self, ref) -> BrgState:
        """Look a state up by name (``"x3"``), index, or verifier marking."""
        if isinstance(ref, BrgState):
            return ref
        if isinstance(ref, str):
            return self.states[int(ref.lstrip("x"))]
        if isinstance(ref, int):
            return self.states[ref]
        return self.by_marking[tuple(ref)]

    def is_deterministic(self) -> bool:
        return all(len(ts) <= 1 for d in self._succ.values() for ts in d.values())

    def describe(self, x: BrgState) -> str:
        return marking_str(self.vn.lpn.places, x.marking)


def _alpha_enabled(vn: VerifierNet, m: Marking) -> int:
    net = vn.net
    for t in vn.lpn.unobservable:
        if _enabled_j(net, m, net.transition_index(t)):
            return 1
    return 0


def _realizable(vn: VerifierNet, m: Marking, y: Iterable[int]) -> bool:
    """Can the multiset of unobservable transitions ``y`` be fired from ``m`` in some order?"""
    net = vn.net
    u_idx = [net.transition_index(t) for t in vn.lpn.unobservable]
    start = tuple(int(v) for v in y)
    stack = [(m, start)]
    seen = {start}
    while stack:
        mk, rest = stack.pop()
        if not any(rest):
            return True
        for k, j in enumerate(u_idx):
            if rest[k] and _enabled_j(net, mk, j):
                r2 = rest[:k] + (rest[k] - 1,) + rest[k + 1:]
                if r2 not in seen:
                    seen.add(r2)
                    stack.append((_fire_j(net, mk, j), r2))
    return False


def _alpha_ilp(vn: VerifierNet, m: Marking) -> int:
    sub = tu_induced_subnet(vn.lpn)
    n_u = len(sub.kept)
    if n_u == 0:
        return 0
    c_u = sub.c_u.astype(float)
    m_vec = np.asarray(m, dtype=float)
    cons = [
        LinearConstraint(c_u, lb=-m_vec, ub=np.inf),
        LinearConstraint(np.ones((1, n_u)), lb=1, ub=np.inf),
    ]
    res = milp(
        c=np.ones(n_u),
        constraints=cons,
        integrality=np.ones(n_u),
        bounds=Bounds(0, np.inf),
    )
    if res.status == 2:
        return 0
    if res.x is None:
        raise RuntimeError(f"milp failed at {m}: {res.message}")
    y = np.rint(res.x).astype(int)
    if not _realizable(vn, m, y):
        raise UnsupportedStructureError(
            "state-equation solution is not realizable by firing; is the unobservable subnet cyclic?"
        )
    return 1


def alpha_flag(vn: VerifierNet, m_b, *, method: str = "enabled", check_acyclic: bool = True) -> int:
    """1 iff a nonzero unobservable continuation exists from ``m_b``.

    ``"ilp"`` solves min 1'y s.t. m_b + C_u y >= 0, 1'y >= 1, y integer >= 0
    and then checks the solution can actually be fired; ``"enabled"`` asks
    whether any unobservable transition is enabled.  With an acyclic
    unobservable subnet the two coincide.
    """
    if check_acyclic:
        require_acyclic(vn.lpn)
    m = vn.net.check_marking(m_b)
    if method == "enabled":
        return _alpha_enabled(vn, m)
    if method == "ilp":
        return _alpha_ilp(vn, m)
    raise ValueError(f"unknown method {method!r}")


def build_brg(vn: VerifierNet, node_budget: int | None = None) -> Brg:
    bms = basis_marking_set(vn.lpn, node_budget)
    states = tuple(
        BrgState(i, m, _alpha_enabled(vn, m), vn.is_diagonal(m)) for i, m in enumerate(bms.markings)
    )
    index = {x.marking: x for x in states}
    lab = vn.lpn.labeling
    edges = []
    seen = set()
    for edge in bms.edges:
        triple = (index[edge.source], lab[edge.transition], index[edge.target])
        if triple not in seen:
            seen.add(triple)
            edges.append(triple)
    return Brg(vn, states, tuple(edges), vn.lpn.alphabet)


def run_relation(brg: Brg, start, w) -> frozenset[BrgState]:
    """States reachable from ``start`` along edge paths spelling ``w``."""
    current = {brg.state(start)}
    for e in as_word(w):
        current = {y for x in current for y in brg.successors(x, e)}
        if not current:
            break
    return frozenset(current)
