"""Text net format, DOT export and JSON reports.

Net format, one section header per line (``name:``), items on the following
lines or after the colon; ``#`` starts a comment::

    places:      p1 p2 p3
    transitions:
      t1 eps          # unobservable
      t2 a
    arcs:
      p1 -> t1
      t1 -> p2 *2     # weight 2
    marking:     p1 p3*2
    alphabet:    a b  # optional, adds unused symbols

``marking`` must appear exactly once; an empty block is the zero marking.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .brg import Brg
from .errors import ParseError
from .net import LabeledPetriNet, ReachabilityGraph, marking_str
from .oracle import ObserverAutomaton
from .verifier import VerifierNet

EPS_LABEL = "eps"
SECTIONS = ("places", "transitions", "arcs", "marking", "alphabet")
_ID = r"[A-Za-z_][A-Za-z0-9_.']*"
_ID_RE = re.compile(rf"^{_ID}$")
_HEADER_RE = re.compile(r"^\s*([A-Za-z]+)\s*:(.*)$")
_ARC_RE = re.compile(rf"^({_ID})\s*->\s*({_ID})(?:\s*\*\s*(\S+))?$")
_TOKENS_RE = re.compile(rf"^({_ID})(?:\*(\S+))?$")


@dataclass
class _Item:
    text: str
    line: int
    col: int


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _split_sections(text: str) -> dict[str, list[_Item]]:
    sections: dict[str, list[_Item]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _HEADER_RE.match(line)
        if m and m.group(1).lower() in SECTIONS:
            name = m.group(1).lower()
            if name in sections:
                raise ParseError(f"duplicate {name} block", lineno, line.index(m.group(1)) + 1)
            sections[name] = []
            current = name
            rest = m.group(2)
            offset = m.start(2)
        elif m:
            raise ParseError(f"unknown section {m.group(1)!r}", lineno, line.index(m.group(1)) + 1)
        else:
            if current is None:
                raise ParseError("content before any section header", lineno, 1)
            rest, offset = line, 0
        body = rest.strip()
        if body:
            sections[current].append(_Item(body, lineno, offset + rest.index(body) + 1))
    return sections


def _weight(token: str | None, item: _Item, what: str) -> int:
    if token is None:
        return 1
    if not token.isdigit() or int(token) < 1:
        raise ParseError(f"malformed weight {token!r} in {what}", item.line, item.col)
    return int(token)


def _words(item: _Item):
    for m in re.finditer(r"\S+", item.text):
        yield m.group(0), item.col + m.start()


def parse_net(text: str) -> LabeledPetriNet:
    sections = _split_sections(text)
    for name in ("places", "transitions", "arcs"):
        if name not in sections:
            raise ParseError(f"missing {name} section", 1, 1)
    if "marking" not in sections:
        raise ParseError("missing marking block (exactly one is required)", 1, 1)

    places: list[str] = []
    for item in sections["places"]:
        for tok, col in _words(item):
            if not _ID_RE.match(tok):
                raise ParseError(f"bad place id {tok!r}", item.line, col)
            if tok in places:
                raise ParseError(f"duplicate place {tok!r}", item.line, col)
            places.append(tok)
    if not places:
        raise ParseError("places section is empty", 1, 1)

    transitions: dict[str, str | None] = {}
    for item in sections["transitions"]:
        parts = list(_words(item))
        if len(parts) != 2:
            raise ParseError("expected '<transition> <label|eps>'", item.line, item.col)
        (tid, col), (lab, lcol) = parts
        if not _ID_RE.match(tid):
            raise ParseError(f"bad transition id {tid!r}", item.line, col)
        if tid in transitions or tid in places:
            raise ParseError(f"duplicate id {tid!r}", item.line, col)
        if not _ID_RE.match(lab):
            raise ParseError(f"bad label {lab!r}", item.line, lcol)
        transitions[tid] = None if lab == EPS_LABEL else lab

    arcs = []
    seen_arcs = set()
    for item in sections["arcs"]:
        m = _ARC_RE.match(item.text)
        if not m:
            raise ParseError("expected '<src> -> <dst> [*weight]'", item.line, item.col)
        src, dst, w = m.groups()
        weight = _weight(w, item, "arc")
        ok = (src in places and dst in transitions) or (src in transitions and dst in places)
        if not ok:
            bad = src if src not in places and src not in transitions else dst
            col = item.col + (item.text.index(bad) if bad in item.text else 0)
            if bad in places or bad in transitions:
                raise ParseError(f"arc {src} -> {dst} must join a place and a transition", item.line, item.col)
            raise ParseError(f"undeclared id {bad!r}", item.line, col)
        if (src, dst) in seen_arcs:
            raise ParseError(f"duplicate arc {src} -> {dst}", item.line, item.col)
        seen_arcs.add((src, dst))
        arcs.append((src, dst, weight))

    tokens = {p: 0 for p in places}
    for item in sections["marking"]:
        for tok, col in _words(item):
            if tok == "0":
                continue
            m = _TOKENS_RE.match(tok)
            if not m:
                raise ParseError(f"bad marking entry {tok!r}", item.line, col)
            p, k = m.groups()
            if p not in tokens:
                raise ParseError(f"undeclared place {p!r} in marking", item.line, col)
            tokens[p] += _weight(k, item, "marking")

    alphabet = []
    for item in sections.get("alphabet", []):
        for tok, col in _words(item):
            if not _ID_RE.match(tok) or tok == EPS_LABEL:
                raise ParseError(f"bad symbol {tok!r}", item.line, col)
            alphabet.append(tok)

    return LabeledPetriNet.from_arcs(tokens, transitions, arcs, alphabet)


def read_net(path) -> LabeledPetriNet:
    with open(path, encoding="utf-8") as fh:
        return parse_net(fh.read())


def emit_net(lpn: LabeledPetriNet) -> str:
    net = lpn.net
    lines = ["places: " + " ".join(net.places), "transitions:"]
    for t in net.transitions:
        lab = lpn.labeling[t]
        lines.append(f"  {t} {EPS_LABEL if lab is None else lab}")
    lines.append("arcs:")
    for j, t in enumerate(net.transitions):
        for i, p in enumerate(net.places):
            w = int(net.pre[i, j])
            if w:
                lines.append(f"  {p} -> {t}" + (f" *{w}" if w > 1 else ""))
        for i, p in enumerate(net.places):
            w = int(net.post[i, j])
            if w:
                lines.append(f"  {t} -> {p}" + (f" *{w}" if w > 1 else ""))
    marks = [p if k == 1 else f"{p}*{k}" for p, k in zip(net.places, lpn.m0) if k]
    lines.append("marking: " + (" ".join(marks) if marks else "0"))
    used = {lab for lab in lpn.labeling.values() if lab is not None}
    extra = sorted(lpn.alphabet - used)
    if extra:
        lines.append("alphabet: " + " ".join(extra))
    return "\n".join(lines) + "\n"


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _digraph(name: str, nodes, edges, extra=()) -> str:
    out = [f"digraph {_q(name)} {{", "  rankdir=LR;", *extra]
    for node_id, attrs in nodes:
        out.append(f"  {_q(node_id)} [{', '.join(f'{k}={_q(v)}' for k, v in attrs)}];")
    for a, b, label in edges:
        out.append(f"  {_q(a)} -> {_q(b)} [label={_q(label)}];")
    out.append("}")
    return "\n".join(out) + "\n"


def brg_node_label(brg: Brg, x) -> str:
    return f"{brg.describe(x)} | {x.alpha} | {int(x.diag_equal)}"


def _dot_brg(brg: Brg) -> str:
    nodes = [(x.name, [("label", f"{x.name}: {brg_node_label(brg, x)}")]) for x in brg.states]
    edges = [(s.name, d.name, e) for s, e, d in sorted(brg.edges, key=lambda k: (k[0].index, k[1], k[2].index))]
    return _digraph("brg", nodes, edges, ["  node [shape=box];"])


def _dot_rg(rg: ReachabilityGraph, places, labeling=None) -> str:
    def name(m):
        return marking_str(places, m) if places is not None else str(m)

    nodes = []
    for m in rg.nodes:
        attrs = [("label", name(m))]
        if m == rg.initial:
            attrs.append(("peripheries", "2"))
        nodes.append((name(m), attrs))
    edges = []
    for s, t, d in rg.edges:
        lab = t if labeling is None else f"{t}:{labeling[t] or 'eps'}"
        edges.append((name(s), name(d), lab))
    return _digraph("rg", nodes, edges, ["  node [shape=ellipse];"])


def _dot_net(lpn: LabeledPetriNet, name: str) -> str:
    net = lpn.net
    nodes = [
        (p, [("shape", "circle"), ("label", f"{p}\n{k}" if k else p)]) for p, k in zip(net.places, lpn.m0)
    ]
    for t in net.transitions:
        lab = lpn.labeling[t]
        nodes.append((t, [("shape", "box"), ("label", f"{t}\n{lab if lab is not None else EPS_LABEL}")]))
    edges = []
    for j, t in enumerate(net.transitions):
        for i, p in enumerate(net.places):
            if net.pre[i, j]:
                edges.append((p, t, str(int(net.pre[i, j])) if net.pre[i, j] > 1 else ""))
            if net.post[i, j]:
                edges.append((t, p, str(int(net.post[i, j])) if net.post[i, j] > 1 else ""))
    return _digraph(name, nodes, edges)


def _dot_observer(obs: ObserverAutomaton, places) -> str:
    def render(s):
        parts = (marking_str(places, m) if places is not None else str(m) for m in sorted(s))
        return "{" + ", ".join(parts) + "}"

    nodes = [(f"q{i}", [("label", render(s))]) for i, s in enumerate(obs.states)]
    edges = [(f"q{i}", f"q{j}", e) for i, e, j in obs.edges]
    return _digraph("observer", nodes, edges, ["  node [shape=box];"])


def emit_dot(obj, lpn: LabeledPetriNet | None = None) -> str:
    """DOT text for a BRG, verifier net, labeled net, reachability graph or observer.

    Reachability graphs and observers carry no place names; pass the net
    they came from as ``lpn`` to render markings by place.
    """
    if isinstance(obj, Brg):
        return _dot_brg(obj)
    if isinstance(obj, VerifierNet):
        return _dot_net(obj.lpn, "verifier")
    if isinstance(obj, LabeledPetriNet):
        return _dot_net(obj, "net")
    if isinstance(obj, ReachabilityGraph):
        places = lpn.places if lpn is not None else None
        return _dot_rg(obj, places, lpn.labeling if lpn is not None else None)
    if isinstance(obj, ObserverAutomaton):
        return _dot_observer(obj, lpn.places if lpn is not None else None)
    raise TypeError(f"cannot render {type(obj).__name__} as DOT")


def report_json(payload) -> str:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
