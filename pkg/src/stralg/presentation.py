"""Quiver presentations of string algebras and their extension automaton.

A string is stored in application order: index 0 holds the first syllable,
which is the rightmost one when the string is written down.  Prepending a
letter therefore appends to the tuple.  The automaton state of a string is
the window of its last ``width`` letters, which is all the context needed to
decide which letters may be prepended next.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

import networkx as nx


class AlgebraError(ValueError):
    """Raised for malformed or invalid presentations."""

    def __init__(self, diagnostics):
        if isinstance(diagnostics, str):
            diagnostics = [diagnostics]
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class Arrow(NamedTuple):
    name: str
    source: str
    target: str


class Letter(NamedTuple):
    """A syllable: an arrow or its formal inverse.

    Tuple order compares by arrow name first and puts the direct letter
    before the inverse one, which is the canonical letter order.
    """

    arrow: str
    inverse: bool = False

    def inv(self) -> "Letter":
        return Letter(self.arrow, not self.inverse)

    def token(self) -> str:
        return self.arrow + ("'" if self.inverse else "")


class ExtState(NamedTuple):
    """Finite view of a string: its last letters, or the zero-string marker."""

    window: tuple
    zero: tuple | None = None


@dataclass(frozen=True)
class AlgebraSpec:
    vertices: tuple
    arrows: tuple
    relations: tuple
    sigma: dict = field(default_factory=dict, compare=False)
    epsilon: dict = field(default_factory=dict, compare=False)

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        if not isinstance(other, AlgebraSpec):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.arrows == other.arrows
            and self.relations == other.relations
            and self.sigma == other.sigma
            and self.epsilon == other.epsilon
        )

    @cached_property
    def arrow(self) -> dict:
        return {a.name: a for a in self.arrows}

    @cached_property
    def letters(self) -> tuple:
        return tuple(sorted(Letter(a.name, inv) for a in self.arrows for inv in (False, True)))

    @cached_property
    def max_relation_length(self) -> int:
        return max((len(r) for r in self.relations), default=2)

    def source(self, letter: Letter) -> str:
        a = self.arrow[letter.arrow]
        return a.target if letter.inverse else a.source

    def target(self, letter: Letter) -> str:
        a = self.arrow[letter.arrow]
        return a.source if letter.inverse else a.target

    def sign_in(self, letter: Letter) -> int:
        """sigma of a letter; an inverse letter takes epsilon of its arrow."""
        return self.epsilon[letter.arrow] if letter.inverse else self.sigma[letter.arrow]

    def sign_out(self, letter: Letter) -> int:
        """epsilon of a letter."""
        return self.sigma[letter.arrow] if letter.inverse else self.epsilon[letter.arrow]

    @cached_property
    def automaton(self) -> "ExtensionAutomaton":
        return ExtensionAutomaton(self)


# ---------------------------------------------------------------- parsing

_SECTION = re.compile(r"^\[(\w+)\]$")
_ARROW = re.compile(r"^(\w+)\s*:\s*(\w+)\s*->\s*(\w+)$")
_SIGN = re.compile(r"^(\w+)\s*:\s*([+-]?1|[+-])\s+([+-]?1|[+-])$")


def _sign_value(tok: str) -> int:
    return -1 if tok.startswith("-") else 1


def parse_algebra(text: str) -> AlgebraSpec:
    """Parse the sectioned algebra format; fills missing signs via solve_signs."""
    vertices: list[str] = []
    arrows: list[Arrow] = []
    relations: list[tuple] = []
    signs: dict[str, tuple[int, int]] = {}
    section = None
    errors = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        col = raw.find(line) + 1
        m = _SECTION.match(line)
        if m:
            section = m.group(1)
            if section not in ("vertices", "arrows", "relations", "signs"):
                errors.append(f"line {lineno}, column {col}: unknown section [{section}]")
            continue
        if section == "vertices":
            vertices.extend(line.split())
        elif section == "arrows":
            m = _ARROW.match(line)
            if not m:
                errors.append(f"line {lineno}, column {col}: expected 'name: source -> target'")
                continue
            arrows.append(Arrow(*m.groups()))
        elif section == "relations":
            path = tuple(tok.strip() for tok in line.split("."))
            if len(path) < 2 or not all(path):
                errors.append(f"line {lineno}, column {col}: relation needs at least two arrows")
                continue
            relations.append(path)
        elif section == "signs":
            m = _SIGN.match(line)
            if not m:
                errors.append(f"line {lineno}, column {col}: expected 'name: sigma epsilon'")
                continue
            signs[m.group(1)] = (_sign_value(m.group(2)), _sign_value(m.group(3)))
        else:
            errors.append(f"line {lineno}, column {col}: content outside any section")

    vset = set(vertices)
    names = [a.name for a in arrows]
    if len(set(vertices)) != len(vertices):
        errors.append("duplicate vertex ids")
    if len(set(names)) != len(names):
        errors.append("duplicate arrow names")
    for a in arrows:
        for end in (a.source, a.target):
            if end not in vset:
                errors.append(f"arrow {a.name} references undeclared vertex {end}")
    by_name = {a.name: a for a in arrows}
    for rel in relations:
        unknown = [n for n in rel if n not in by_name]
        if unknown:
            errors.append(f"relation {'.'.join(rel)} references unknown arrow {unknown[0]}")
            continue
        # written leftmost-last: rel[k+1] is applied before rel[k]
        for later, earlier in zip(rel, rel[1:]):
            if by_name[earlier].target != by_name[later].source:
                errors.append(f"relation {'.'.join(rel)} is not a composable path")
                break
    for n in signs:
        if n not in by_name:
            errors.append(f"signs given for unknown arrow {n}")
    if errors:
        raise AlgebraError(errors)

    spec = AlgebraSpec(tuple(vertices), tuple(arrows), tuple(relations))
    if signs and len(signs) == len(arrows):
        sigma = {n: s[0] for n, s in signs.items()}
        epsilon = {n: s[1] for n, s in signs.items()}
    else:
        sigma, epsilon = solve_signs(spec)
    return AlgebraSpec(spec.vertices, spec.arrows, spec.relations, sigma, epsilon)


def load_algebra(path) -> AlgebraSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read())


def format_algebra(spec: AlgebraSpec, with_signs: bool = True) -> str:
    lines = ["[vertices]", " ".join(spec.vertices), "", "[arrows]"]
    lines += [f"{a.name}: {a.source} -> {a.target}" for a in spec.arrows]
    lines += ["", "[relations]"]
    lines += [".".join(r) for r in spec.relations]
    if with_signs and spec.sigma:
        lines += ["", "[signs]"]
        fmt = lambda s: "+1" if s > 0 else "-1"
        lines += [f"{a.name}: {fmt(spec.sigma[a.name])} {fmt(spec.epsilon[a.name])}" for a in spec.arrows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- validation


def _two_relations(spec: AlgebraSpec) -> set:
    return {r for r in spec.relations if len(r) == 2}


def _sign_constraints(spec: AlgebraSpec):
    """Pairs of sign variables that must take opposite values.

    A variable is ('s', arrow) for sigma or ('e', arrow) for epsilon.
    """
    rel2 = _two_relations(spec)
    out = []
    arrows = spec.arrows
    for i, a in enumerate(arrows):
        for b in arrows[i + 1:]:
            if a.source == b.source:
                out.append((("s", a.name), ("s", b.name), f"arrows {a.name}, {b.name} share a source"))
            if a.target == b.target:
                out.append((("e", a.name), ("e", b.name), f"arrows {a.name}, {b.name} share a target"))
    for beta in arrows:
        for gamma in arrows:
            if gamma.source == beta.target and (gamma.name, beta.name) not in rel2:
                out.append(
                    (("s", gamma.name), ("e", beta.name), f"{gamma.name}{beta.name} is composable and not a relation")
                )
    return out


def validate_algebra(spec: AlgebraSpec) -> list[str]:
    """Return every violated string-algebra axiom; an empty list means ok."""
    problems = []
    rel2 = _two_relations(spec)
    for v in spec.vertices:
        outs = [a.name for a in spec.arrows if a.source == v]
        ins = [a.name for a in spec.arrows if a.target == v]
        if len(outs) > 2:
            problems.append(f"fan-out exceeds 2 at {v}: {', '.join(outs)}")
        if len(ins) > 2:
            problems.append(f"fan-in exceeds 2 at {v}: {', '.join(ins)}")
    for beta in spec.arrows:
        after = [g.name for g in spec.arrows if g.source == beta.target and (g.name, beta.name) not in rel2]
        before = [g.name for g in spec.arrows if g.target == beta.source and (beta.name, g.name) not in rel2]
        if len(after) > 1:
            problems.append(f"more than one arrow composes with {beta.name} outside the relations: {', '.join(after)}")
        if len(before) > 1:
            problems.append(f"more than one arrow precedes {beta.name} outside the relations: {', '.join(before)}")
    if not spec.sigma or not spec.epsilon:
        problems.append("signs missing")
    else:
        value = {("s", n): s for n, s in spec.sigma.items()}
        value.update({("e", n): e for n, e in spec.epsilon.items()})
        for x, y, why in _sign_constraints(spec):
            if value.get(x) is None or value.get(y) is None:
                problems.append(f"signs missing for {x[1]} or {y[1]}")
            elif value[x] != -value[y]:
                problems.append(f"sign-consistency violation: {why}")
    cycle = _relation_free_cycle(spec)
    if cycle:
        problems.append(f"relation-free cycle (infinite-dimensional): {'.'.join(reversed(cycle))}")
    return problems


def _relation_free_cycle(spec: AlgebraSpec):
    """A directed path that can be repeated forever without meeting a relation."""
    width = max(1, spec.max_relation_length - 1)
    forbidden = {tuple(reversed(r)) for r in spec.relations}
    graph = nx.DiGraph()
    start = [(a.name,) for a in spec.arrows]
    seen = set(start)
    queue = deque(start)
    while queue:
        window = queue.popleft()
        last = spec.arrow[window[-1]]
        for nxt in spec.arrows:
            if nxt.source != last.target:
                continue
            longer = window + (nxt.name,)
            if any(longer[-len(f):] == f for f in forbidden if len(f) <= len(longer)):
                continue
            state = longer[-width:]
            graph.add_edge(window, state)
            if state not in seen:
                seen.add(state)
                queue.append(state)
    try:
        cyc = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        return None
    return [edge[1][-1] for edge in cyc]


def solve_signs(spec: AlgebraSpec) -> tuple[dict, dict]:
    """First sign assignment under the order sigma(a1), epsilon(a1), sigma(a2), ...

    Every constraint says two variables differ, so this is a two-colouring;
    each component takes +1 on its earliest variable.
    """
    order = [(kind, a.name) for a in spec.arrows for kind in ("s", "e")]
    graph = nx.Graph()
    graph.add_nodes_from(order)
    for x, y, _ in _sign_constraints(spec):
        graph.add_edge(x, y)
    value = {}
    for var in order:
        if var in value:
            continue
        value[var] = 1
        queue = deque([var])
        while queue:
            u = queue.popleft()
            for w in graph[u]:
                if w not in value:
                    value[w] = -value[u]
                    queue.append(w)
                elif value[w] == value[u]:
                    raise AlgebraError(f"unsat: sign constraints around {u[1]} and {w[1]} are contradictory")
    sigma = {a.name: value[("s", a.name)] for a in spec.arrows}
    epsilon = {a.name: value[("e", a.name)] for a in spec.arrows}
    return sigma, epsilon


# ---------------------------------------------------------------- automaton


class ExtensionAutomaton:
    """Deterministic automaton recognising the valid left extensions of strings."""

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec
        self.width = max(1, spec.max_relation_length - 1)
        forbidden = set()
        for rel in spec.relations:
            direct = tuple(Letter(n, False) for n in reversed(rel))
            forbidden.add(direct)
            forbidden.add(tuple(l.inv() for l in reversed(direct)))
        self._forbidden_by_len: dict[int, set] = {}
        for f in forbidden:
            self._forbidden_by_len.setdefault(len(f), set()).add(f)
        self._leaving: dict[tuple, list] = {}
        for letter in spec.letters:
            key = (spec.source(letter), spec.sign_in(letter))
            self._leaving.setdefault(key, []).append(letter)
        self._step_cache: dict = {}

    def zero_state(self, vertex: str, sign: int) -> ExtState:
        return ExtState((), (vertex, sign))

    def window_of(self, letters: tuple) -> ExtState:
        return ExtState(tuple(letters[-self.width:]), None)

    def candidates(self, state: ExtState) -> list:
        if state.window:
            last = state.window[-1]
            key = (self.spec.target(last), -self.spec.sign_out(last))
        else:
            vertex, sign = state.zero
            key = (vertex, -sign)
        return self._leaving.get(key, [])

    def step(self, state: ExtState, letter: Letter) -> ExtState | None:
        key = (state, letter)
        try:
            return self._step_cache[key]
        except KeyError:
            pass
        result = None
        if letter in self.candidates(state):
            longer = state.window + (letter,)
            bad = any(
                longer[-n:] in fs for n, fs in self._forbidden_by_len.items() if n <= len(longer)
            )
            if not bad:
                result = ExtState(longer[-self.width:], None)
        self._step_cache[key] = result
        return result

    def run(self, state: ExtState, letters: Iterable[Letter]) -> ExtState | None:
        for letter in letters:
            state = self.step(state, letter)
            if state is None:
                return None
        return state

    def extensions(self, state: ExtState) -> tuple:
        """(direct letter or None, inverse letter or None) that may be prepended."""
        direct = inverse = None
        for letter in self.candidates(state):
            if self.step(state, letter) is None:
                continue
            if letter.inverse:
                assert inverse is None, "two inverse extensions"
                inverse = letter
            else:
                assert direct is None, "two direct extensions"
                direct = letter
        return direct, inverse

    def successors(self, state: ExtState):
        for letter in self.candidates(state):
            nxt = self.step(state, letter)
            if nxt is not None:
                yield letter, nxt

    @cached_property
    def zero_states(self) -> tuple:
        return tuple(self.zero_state(v, j) for v in self.spec.vertices for j in (1, -1))

    @cached_property
    def states(self) -> tuple:
        """Every state reachable from a zero string, in discovery order."""
        seen = dict.fromkeys(self.zero_states)
        queue = deque(self.zero_states)
        while queue:
            s = queue.popleft()
            for _, t in self.successors(s):
                if t not in seen:
                    seen[t] = None
                    queue.append(t)
        return tuple(seen)

    @cached_property
    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.states)
        for s in self.states:
            for letter, t in self.successors(s):
                g.add_edge(s, t, letter=letter)
        return g

    @cached_property
    def h_class(self) -> dict:
        """Myhill-Nerode classes of states: equal ids iff equal extension languages."""
        letters = self.spec.letters
        states = self.states
        index = {s: k for k, s in enumerate(states)}
        sink = len(states)
        table = []
        for s in states:
            row = []
            for letter in letters:
                t = self.step(s, letter)
                row.append(sink if t is None else index[t])
            table.append(row)
        block = [0] * len(states) + [1]
        while True:
            signature = {}
            new_block = []
            for k in range(len(states) + 1):
                row = table[k] if k < len(states) else [sink] * len(letters)
                sig = (block[k], tuple(block[t] for t in row))
                new_block.append(signature.setdefault(sig, len(signature)))
            if len(signature) == len(set(block)):
                break
            block = new_block
        return {s: block[index[s]] for s in states}
