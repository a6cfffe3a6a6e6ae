"""Verifier net: the labeled net pairing two runs of a system with equal observations.

Places are the primed copy P' followed by the original places P, so a
verifier marking reads as ``[M'; M]``.  Transitions are pairs
``(left, right)`` of original transitions where ``None`` stands for the
empty move: ``(t', None)`` and ``(None, t)`` for unobservable ones,
``(t', t)`` for observable ones with the same label.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Mapping

import numpy as np

from .config import default_node_budget
from .errors import BudgetExceededError
from .net import (
    LabeledPetriNet,
    Marking,
    PetriNet,
    _enabled_j,
    _fire_j,
    is_acyclic,
    tu_induced_subnet,
)

LAMBDA = "lam"

Pair = tuple["str | None", "str | None"]


def primed(name: str) -> str:
    return name + "'"


def pair_id(left: str | None, right: str | None) -> str:
    lhs = LAMBDA if left is None else primed(left)
    rhs = LAMBDA if right is None else right
    return f"({lhs},{rhs})"


@dataclass(frozen=True, eq=False)
class VerifierNet:
    source: LabeledPetriNet
    lpn: LabeledPetriNet
    provenance: Mapping[str, Pair]

    @property
    def net(self) -> PetriNet:
        return self.lpn.net

    @property
    def n_source_places(self) -> int:
        return len(self.source.places)

    def halves(self, m) -> tuple[Marking, Marking]:
        """Split a verifier marking into (M', M)."""
        n = self.n_source_places
        m = tuple(m)
        return m[:n], m[n:]

    def join(self, left, right) -> Marking:
        return tuple(left) + tuple(right)

    def is_diagonal(self, m) -> bool:
        a, b = self.halves(m)
        return a == b

    def transition_for(self, left: str | None, right: str | None) -> str:
        tid = pair_id(left, right)
        if tid not in self.provenance:
            raise KeyError(f"no verifier transition {tid}")
        return tid

    def project(self, seq) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """Left and right projections of a verifier firing sequence."""
        left, right = [], []
        for tid in seq:
            a, b = self.provenance[tid]
            if a is not None:
                left.append(a)
            if b is not None:
                right.append(b)
        return tuple(left), tuple(right)


def build_verifier(lpn: LabeledPetriNet) -> VerifierNet:
    src = lpn.net
    n_p = len(src.places)
    places = tuple(primed(p) for p in src.places) + src.places
    columns: list[tuple[np.ndarray, np.ndarray]] = []
    ids: list[str] = []
    labels: dict[str, str | None] = {}
    provenance: dict[str, Pair] = {}
    zero = np.zeros(n_p, dtype=np.int64)

    def add(left, right, label):
        pre_l = src.pre[:, src.transition_index(left)] if left is not None else zero
        post_l = src.post[:, src.transition_index(left)] if left is not None else zero
        pre_r = src.pre[:, src.transition_index(right)] if right is not None else zero
        post_r = src.post[:, src.transition_index(right)] if right is not None else zero
        tid = pair_id(left, right)
        ids.append(tid)
        columns.append((np.concatenate([pre_l, pre_r]), np.concatenate([post_l, post_r])))
        labels[tid] = label
        provenance[tid] = (left, right)

    for tu in lpn.unobservable:
        add(None, tu, None)
    for tu in lpn.unobservable:
        add(tu, None, None)
    for e in sorted(lpn.alphabet):
        group = lpn.transitions_with_label(e)
        for left, right in product(group, group):
            add(left, right, e)

    if columns:
        pre = np.stack([c[0] for c in columns], axis=1)
        post = np.stack([c[1] for c in columns], axis=1)
    else:
        pre = np.zeros((2 * n_p, 0), dtype=np.int64)
        post = pre.copy()
    vnet = PetriNet(places, tuple(ids), pre, post)
    vlpn = LabeledPetriNet(vnet, lpn.m0 + lpn.m0, labels, lpn.alphabet)
    return VerifierNet(lpn, vlpn, provenance)


def _sequences(lpn: LabeledPetriNet, length_bound: int, budget: int):
    """All firable sequences of length <= bound with their final markings."""
    net = lpn.net
    out = [((), lpn.m0)]
    frontier = [((), lpn.m0)]
    for _ in range(length_bound):
        nxt = []
        for seq, m in frontier:
            for j, t in enumerate(net.transitions):
                if _enabled_j(net, m, j):
                    nxt.append((seq + (t,), _fire_j(net, m, j)))
        out.extend(nxt)
        if len(out) > budget:
            raise BudgetExceededError("sequence enumeration", budget)
        frontier = nxt
    return out


def _pair_realizable(vn: VerifierNet, s1, s2) -> bool:
    """Is there a verifier run whose projections are exactly (s1, s2)?"""
    vnet = vn.net
    lab = vn.source.labeling
    start = (0, 0, vn.lpn.m0)
    seen = {start}
    queue = deque([start])
    while queue:
        i, j, m = queue.popleft()
        if i == len(s1) and j == len(s2):
            return True
        moves = []
        if i < len(s1) and lab[s1[i]] is None:
            moves.append((i + 1, j, pair_id(s1[i], None)))
        if j < len(s2) and lab[s2[j]] is None:
            moves.append((i, j + 1, pair_id(None, s2[j])))
        if i < len(s1) and j < len(s2) and lab[s1[i]] is not None and lab[s1[i]] == lab[s2[j]]:
            moves.append((i + 1, j + 1, pair_id(s1[i], s2[j])))
        for i2, j2, tid in moves:
            k = vnet.transition_index(tid)
            if _enabled_j(vnet, m, k):
                state = (i2, j2, _fire_j(vnet, m, k))
                if state not in seen:
                    seen.add(state)
                    queue.append(state)
    return False


def vn_language_check(
    lpn: LabeledPetriNet,
    vn: VerifierNet,
    length_bound: int,
    budget: int | None = None,
) -> bool:
    """Exhaustively confirm, up to ``length_bound``, that vn pairs exactly the equal-observation runs.

    Forward: every verifier sequence of at most ``length_bound`` steps
    projects to two firable source sequences with the same observation, and
    lands on the pair of their final markings.  Backward: every pair of
    source sequences, each of at most ``length_bound`` steps, with the same
    observation is the projection of some verifier sequence.
    """
    budget = default_node_budget() if budget is None else budget
    net = lpn.net
    for seq, m in _sequences(vn.lpn, length_bound, budget):
        left, right = vn.project(seq)
        try:
            m_left = _fire_all(net, lpn.m0, left)
            m_right = _fire_all(net, lpn.m0, right)
        except ValueError:
            return False
        if lpn.project(left) != lpn.project(right):
            return False
        if vn.join(m_left, m_right) != m:
            return False

    by_obs: dict[tuple, list[tuple[str, ...]]] = {}
    for seq, _ in _sequences(lpn, length_bound, budget):
        by_obs.setdefault(lpn.project(seq), []).append(seq)
    for group in by_obs.values():
        for s1 in group:
            for s2 in group:
                if not _pair_realizable(vn, s1, s2):
                    return False
    return True


def _fire_all(net: PetriNet, m, seq):
    for t in seq:
        j = net.transition_index(t)
        if not _enabled_j(net, m, j):
            raise ValueError(t)
        m = _fire_j(net, m, j)
    return m


def acyclicity_transfer_check(lpn: LabeledPetriNet, vn: VerifierNet | None = None) -> bool:
    """Does acyclicity of the unobservable subnet agree between ``lpn`` and its verifier?"""
    if vn is None:
        vn = build_verifier(lpn)
    return is_acyclic(tu_induced_subnet(lpn)) == is_acyclic(tu_induced_subnet(vn.lpn))
