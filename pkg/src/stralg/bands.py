"""Bands, their classes under mutual reachability, and class membership tests.

The classes are read off the extension automaton: every band traces a cycle
of window states, two bands reach each other exactly when their cycles share
a strongly connected component, and the reachability preorder on bands is
reachability between those components.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from .presentation import AlgebraSpec, ExtState
from .strings import Str, StringError, mk_string, origin_of, render_word

DEFAULT_CAP = 10**6


class Indeterminate(RuntimeError):
    """A search exceeded its memory guard before reaching an answer."""


# ---------------------------------------------------------------- words


def primitive_root(word: tuple) -> tuple[tuple, int]:
    """Shortest root of a word via its border table."""
    n = len(word)
    if n == 0:
        raise ValueError("empty word has no root")
    border = [0] * (n + 1)
    border[0] = -1
    k = -1
    for i in range(n):
        while k >= 0 and word[k] != word[i]:
            k = border[k]
        k += 1
        border[i + 1] = k
    period = n - border[n]
    if n % period:
        period = n
    return word[:period], n // period


def rotations(word: tuple):
    for r in range(len(word)):
        yield word[r:] + word[:r]


def canonical_rotation(word: tuple) -> tuple:
    """The rotation whose written form (last syllable first) is least."""
    return min(rotations(word), key=lambda r: r[::-1])


def is_cyclic(spec: AlgebraSpec, word: tuple) -> bool:
    """True iff every power of the word (application order) is a string."""
    if not word:
        return False
    aut = spec.automaton
    reps = max(2, math.ceil((aut.width + 1) / len(word)) + 1)
    state = aut.zero_state(*origin_of(spec, word[0]))
    return aut.run(state, word * reps) is not None


def cycle_state(spec: AlgebraSpec, word: tuple) -> ExtState:
    """The window state reached after reading a cyclic word many times."""
    aut = spec.automaton
    reps = max(1, math.ceil(aut.width / len(word)))
    return aut.window_of(word * reps)


@dataclass(frozen=True, order=True)
class BandRep:
    word: tuple
    spec: AlgebraSpec = field(compare=False, repr=False)

    def __str__(self):
        return render_word(self.word)

    def __repr__(self):
        return f"BandRep({render_word(self.word)!r})"

    def __len__(self):
        return len(self.word)

    def as_string(self, power: int = 1) -> Str:
        return mk_string(self.spec, self.word * power)

    def rotations(self):
        return list(rotations(self.word))

    def matches(self, word: tuple) -> bool:
        """Same band up to rotation."""
        return len(word) == len(self.word) and word in set(rotations(self.word))

    def inverse(self) -> "BandRep":
        inv = tuple(l.inv() for l in reversed(self.word))
        return BandRep(canonical_rotation(inv), self.spec)


def make_band(spec: AlgebraSpec, word) -> BandRep:
    word = tuple(word)
    if not is_cyclic(spec, word):
        raise StringError(f"{render_word(word)} is not a cyclic string")
    root, exp = primitive_root(word)
    if exp != 1:
        raise StringError(f"{render_word(word)} is a proper power")
    return BandRep(canonical_rotation(word), spec)


def parse_band(spec: AlgebraSpec, text: str) -> BandRep:
    from .strings import parse_string

    return make_band(spec, parse_string(spec, text).letters)


def is_composite(spec: AlgebraSpec, word: tuple) -> bool:
    """Some rotation splits into two or more consecutive cyclic factors."""
    n = len(word)
    cache: dict = {}

    def cyclic(f):
        if f not in cache:
            cache[f] = is_cyclic(spec, f)
        return cache[f]

    for rot in rotations(word):
        reach = [False] * (n + 1)
        reach[0] = True
        for j in range(1, n + 1):
            for i in range(j):
                if reach[i] and (i, j) != (0, n) and cyclic(rot[i:j]):
                    reach[j] = True
                    break
        if reach[n]:
            return True
    return False


# ---------------------------------------------------------------- classes


@dataclass(frozen=True)
class GmbClass:
    id: int
    bands: tuple
    domestic: bool
    states: frozenset = field(repr=False)
    mirror: int = -1

    @property
    def name(self) -> str:
        return f"K{self.id}"

    def __str__(self):
        return f"{self.name}{{{', '.join(str(b) for b in self.bands)}}}"

    def has_band(self, text_or_word) -> bool:
        word = text_or_word if isinstance(text_or_word, tuple) else None
        if word is None:
            from .strings import parse_string

            word = parse_string(self.bands[0].spec, text_or_word).letters
        return any(b.matches(word) for b in self.bands)


class QbaPoset:
    """The finite poset of band classes with its strict order."""

    def __init__(self, spec: AlgebraSpec, classes: list, order: set):
        self.spec = spec
        self.classes = classes
        self.order = order

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)

    def below(self, a: GmbClass, b: GmbClass) -> bool:
        return (a.id, b.id) in self.order

    def minimal(self, subset) -> list:
        ids = {c.id for c in subset}
        return [c for c in subset if not any((d, c.id) in self.order for d in ids if d != c.id)]

    def class_of_band(self, band) -> GmbClass:
        word = band.word if isinstance(band, BandRep) else tuple(band)
        state = cycle_state(self.spec, word)
        for c in self.classes:
            if state in c.states:
                return c
        raise KeyError(render_word(word))

    def find(self, band_text: str) -> GmbClass:
        for c in self.classes:
            if c.has_band(band_text):
                return c
        raise KeyError(band_text)

    def restrict(self, subset) -> "QbaPoset":
        ids = {c.id for c in subset}
        keep = [c for c in self.classes if c.id in ids]
        return QbaPoset(self.spec, keep, {(a, b) for a, b in self.order if a in ids and b in ids})

    def hasse(self) -> list:
        edges = []
        for a, b in sorted(self.order):
            if not any((a, m) in self.order and (m, b) in self.order for m in (c.id for c in self.classes)):
                edges.append((a, b))
        return edges

    def to_dot(self) -> str:
        lines = ["digraph qba {"]
        for c in self.classes:
            kind = "domestic" if c.domestic else "non-domestic"
            label = "\\n".join(str(b) for b in c.bands)
            lines.append(f'  {c.name} [label="{c.name} ({kind})\\n{label}"];')
        for a, b in self.hasse():
            lines.append(f"  K{a} -> K{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _cycle_word(graph: nx.DiGraph, cycle: list) -> tuple:
    return tuple(graph.edges[cycle[k], cycle[(k + 1) % len(cycle)]]["letter"] for k in range(len(cycle)))


class BandStructure:
    """Prime bands, their classes and the membership tests of one algebra."""

    def __init__(self, spec: AlgebraSpec, cap: int = DEFAULT_CAP):
        self.spec = spec
        self.cap = cap
        self.aut = spec.automaton
        graph = self.aut.graph
        full = [s for s in self.aut.states if s.zero is None and len(s.window) == self.aut.width]
        self.graph = graph.subgraph(full).copy()
        comps = []
        for comp in nx.strongly_connected_components(self.graph):
            if len(comp) > 1 or any(self.graph.has_edge(s, s) for s in comp):
                comps.append(frozenset(comp))
        self._components = comps

    @cached_property
    def cycles(self) -> list:
        """Labels of all simple cycles of the automaton, canonically rotated."""
        words = set()
        budget = self.cap
        for comp in self._components:
            sub = self.graph.subgraph(comp)
            for cyc in nx.simple_cycles(sub):
                budget -= 1
                if budget < 0:
                    raise Indeterminate("simple cycle enumeration exceeded its cap")
                words.add(canonical_rotation(primitive_root(_cycle_word(sub, cyc))[0]))
        return sorted(words)

    @cached_property
    def prime_bands(self) -> list:
        return [BandRep(w, self.spec) for w in self.cycles if not is_composite(self.spec, w)]

    @cached_property
    def poset(self) -> QbaPoset:
        by_comp: dict = {}
        for band in self.prime_bands:
            state = cycle_state(self.spec, band.word)
            comp = next(c for c in self._components if state in c)
            by_comp.setdefault(comp, []).append(band)
        comps = sorted(by_comp, key=lambda c: min(b.word[::-1] for b in by_comp[c]))
        index = {c: k for k, c in enumerate(comps)}
        classes = []
        for k, comp in enumerate(comps):
            bands = tuple(sorted(by_comp[comp], key=lambda b: b.word[::-1]))
            classes.append([k, bands, len(bands) == 1, comp])
        mirror = {}
        for k, comp in enumerate(comps):
            inv = by_comp[comp][0].inverse()
            state = cycle_state(self.spec, inv.word)
            mirror[k] = next(index[c] for c in comps if state in c)
        classes = [GmbClass(k, b, d, s, mirror[k]) for k, b, d, s in classes]
        cond = nx.condensation(self.graph)
        member = cond.graph["mapping"]
        node_of = {k: member[next(iter(comp))] for k, comp in enumerate(comps)}
        closure = nx.transitive_closure_dag(cond)
        order = set()
        for a in range(len(comps)):
            for b in range(len(comps)):
                if a != b and closure.has_edge(node_of[a], node_of[b]):
                    order.add((a, b))
        return QbaPoset(self.spec, classes, order)

    # ------------------------------------------------------------ membership

    def band_reaches(self, b1: BandRep, b2: BandRep) -> bool:
        """Whether b2.u.b1 is a string for some u and some rotations."""
        s1 = cycle_state(self.spec, b1.word)
        s2 = cycle_state(self.spec, b2.word)
        return nx.has_path(self.graph, s1, s2)

    def cyc_membership(self, word: tuple, cls: GmbClass) -> bool:
        word = tuple(word)
        if not is_cyclic(self.spec, word):
            raise StringError(f"{render_word(word)} is not cyclic")
        return cycle_state(self.spec, word) in cls.states

    def cyc_membership_by_factor(self, word: tuple, cls: GmbClass) -> bool:
        """The factor criterion: some rotation of a prime of the class occurs in a power of word."""
        word = tuple(word)
        if not is_cyclic(self.spec, word):
            raise StringError(f"{render_word(word)} is not cyclic")
        longest = max(len(b) for b in cls.bands)
        power = word * (math.ceil(longest / len(word)) + 1)
        for band in cls.bands:
            for rot in band.rotations():
                n = len(rot)
                if any(power[i: i + n] == rot for i in range(len(power) - n + 1)):
                    return True
        return False

    def ext_membership(self, word, cls: GmbClass) -> bool:
        """Whether a word (application order) is a factor of a power of some cycle of the class."""
        word = tuple(word.letters) if isinstance(word, Str) else tuple(word)
        if not word:
            return True
        return bool(self._ext_states(word, cls))

    def _ext_states(self, word: tuple, cls: GmbClass) -> list:
        out = []
        for s in cls.states:
            t = self.aut.run(s, word)
            if t is not None and t in cls.states:
                out.append(s)
        return out

    def reachable_ids(self, state: ExtState, side: int | None) -> set:
        """Classes whose component can be entered from ``state``.

        With a side given, the first letter must have that sign
        (inverse for +1, direct for -1).
        """
        comp_of = self._comp_index
        seen = set()
        queue = deque()
        for letter, nxt in self.aut.successors(state):
            if side is None or (1 if letter.inverse else -1) == side:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        if side is None:
            seen.add(state)
            queue.append(state)
        found = set()
        while queue:
            s = queue.popleft()
            if s in comp_of:
                found.add(comp_of[s])
            for _, t in self.aut.successors(s):
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return found

    @cached_property
    def _comp_index(self) -> dict:
        out = {}
        for cls in self.poset.classes:
            for s in cls.states:
                out[s] = cls.id
        return out

    def reachable_classes(self, x0: Str, side: int) -> tuple[list, list]:
        ids = self.reachable_ids(x0.state, side)
        subset = [c for c in self.poset.classes if c.id in ids]
        return subset, self.poset.minimal(subset)

    def band_free_relative(self, x0: Str, side: int) -> list:
        """All z.x0 in the one-sided hammock with z free of band factors."""
        cyclic_cache: dict = {}

        def has_band_suffix(z: tuple) -> bool:
            for k in range(1, len(z) + 1):
                f = z[-k:]
                hit = cyclic_cache.get(f)
                if hit is None:
                    hit = cyclic_cache[f] = is_cyclic(self.spec, f)
                if hit:
                    return True
            return False

        out = [x0]
        queue = deque()
        for letter, _ in self.aut.successors(x0.state):
            if (1 if letter.inverse else -1) == side:
                queue.append(x0.prepend(letter))
        count = 0
        while queue:
            y = queue.popleft()
            z = y.letters[len(x0):]
            if has_band_suffix(z):
                continue
            out.append(y)
            count += 1
            if count > self.cap:
                raise Indeterminate("band-free enumeration exceeded its cap")
            for letter, _ in self.aut.successors(y.state):
                queue.append(y.prepend(letter))
        return out


def band_structure(spec: AlgebraSpec) -> BandStructure:
    cached = spec.__dict__.get("_band_structure")
    if cached is None:
        cached = BandStructure(spec)
        object.__setattr__(spec, "_band_structure", cached)
    return cached


def enumerate_prime_bands(spec: AlgebraSpec) -> list:
    return band_structure(spec).prime_bands


def compute_qba(spec: AlgebraSpec) -> QbaPoset:
    return band_structure(spec).poset
