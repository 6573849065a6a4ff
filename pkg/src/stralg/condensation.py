"""Condensation of a hammock towards one band class.

All membership questions are answered on window states of the extension
automaton, so every test is exact and terminates.  The only string-dependent
clause is being a left substring of one of the two extremes of the hammock.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .bands import DEFAULT_CAP, BandRep, GmbClass, Indeterminate, band_structure, canonical_rotation, primitive_root
from .hammock import HammockKey, compare_l, extremal_strings, greedy, pred_l, sort_l, succ_l
from .presentation import Letter
from .strings import Str, StringError, mk_string, relative_theta, render, render_word


def _sign(letter: Letter) -> int:
    return 1 if letter.inverse else -1


# ---------------------------------------------------------------- limits


@dataclass(frozen=True)
class AlmostPeriodic:
    """The left N-string ^inf(band).connector.base.

    ``band`` and ``connector`` are words in application order; ``band`` is the
    rotation that actually sits next to the connector.
    """

    band: tuple
    connector: tuple
    base: Str

    def __post_init__(self):
        if not self.band:
            raise ValueError("empty period")

    @property
    def spec(self):
        return self.base.spec

    def band_rep(self) -> BandRep:
        return BandRep(canonical_rotation(self.band), self.spec)

    def prefix(self, copies: int) -> Str:
        """base extended by the connector and ``copies`` periods."""
        out = self.base.extend(self.connector + self.band * copies)
        if out is None:
            raise StringError(f"{self} is not a left N-string")
        return out

    def __str__(self):
        parts = [f"^inf({render_word(self.band)})"]
        if self.connector:
            parts.append(render_word(self.connector))
        parts.append(render(self.base))
        return ".".join(parts)


def almost_periodic(base: Str, before: Str, after: Str) -> AlmostPeriodic:
    """The limit of a chain once ``after`` repeats the state of ``before``."""
    period = after.letters[len(before):]
    connector = before.letters[len(base):]
    period = primitive_root(period)[0]
    while connector and connector[-1] == period[-1]:
        period = (period[-1],) + period[:-1]
        connector = connector[:-1]
    return AlmostPeriodic(period, connector, base)


@dataclass
class Chain:
    """Iterates x_0, x_1, ... of an extending operator with a detected period.

    States of ``items[start + k]`` and ``items[start + k + period]`` agree for
    every k >= 0, so everything state-determined repeats from ``start`` on.
    """

    items: list
    start: int
    period: int


def iterate_to_period(x: Str, step, free, cap: int = DEFAULT_CAP) -> Chain:
    """Iterate ``step`` from x until a state repeats among ``free`` iterates.

    ``free(y)`` must hold exactly when the continuation from y depends on
    y's window state alone; freeness has to persist along the chain.
    """
    items = [x]
    seen = {}
    y = x
    for _ in range(cap):
        if free(y):
            if y.state in seen:
                start = seen[y.state]
                return Chain(items, start, len(items) - 1 - start)
            seen[y.state] = len(items) - 1
        nxt = step(y)
        if nxt is None or len(nxt) <= len(y) or not y.is_left_substring_of(nxt):
            raise StringError(f"iteration from {render(x)} stops extending at {render(y)}")
        items.append(nxt)
        y = nxt
    raise Indeterminate("no periodic behaviour within the iteration cap")


def plain_limit(x: Str, direction: int = 1, key: HammockKey | None = None) -> AlmostPeriodic:
    """<1,l>(x) (direction +1) or <1,l-bar>(x) (direction -1) for plain neighbours."""
    move = succ_l if direction > 0 else pred_l
    chain = iterate_to_period(x, lambda y: move(y, key), lambda y: True)
    return almost_periodic(x, chain.items[chain.start], chain.items[-1])


# ---------------------------------------------------------------- context


class BContext:
    """A one-sided hammock together with a band class reachable from it."""

    def __init__(self, key: HammockKey, cls: GmbClass, cap: int = DEFAULT_CAP):
        self.key = key
        self.cls = cls
        self.cap = cap
        self.spec = key.base.spec
        self.bands = band_structure(self.spec)
        self.aut = self.spec.automaton
        reach = self.bands.reachable_ids(key.base.state, key.side)
        if cls.id not in reach:
            raise ValueError(f"{cls.name} cannot be reached from {key}")
        self.reachable = [c for c in self.bands.poset.classes if c.id in reach]
        self.low, self.high = extremal_strings(key)
        self._st: dict = {}
        self._ost: dict = {}

    @property
    def minimal(self) -> bool:
        return any(c.id == self.cls.id for c in self.bands.poset.minimal(self.reachable))

    def require_minimal(self):
        if not self.minimal:
            raise ValueError(f"{self.cls.name} is not minimal for {self.key}")

    # ------------------------------------------------------------ St / OSt

    def st_state(self, state, sign: int) -> bool:
        """Some cycle of the class with first letter of this sign can be prepended."""
        memo = (state, sign)
        if memo in self._st:
            return self._st[memo]
        comp = self.cls.states
        width = self.aut.width
        found = False
        for start in comp:
            stack = [(start, state, 0)]
            while stack and not found:
                inner, outer, depth = stack.pop()
                if depth == width:
                    found = True
                    break
                for letter, nxt in self.aut.successors(inner):
                    if nxt not in comp or (depth == 0 and _sign(letter) != sign):
                        continue
                    moved = self.aut.step(outer, letter)
                    if moved is not None:
                        stack.append((nxt, moved, depth + 1))
            if found:
                break
        self._st[memo] = found
        return found

    @cached_property
    def _toward_st(self) -> frozenset:
        """States from which some extension lands in St(B)."""
        targets = [s for s in self.aut.states if self.st_state(s, 1) or self.st_state(s, -1)]
        graph = self.aut.graph
        seen = set(targets)
        queue = deque(targets)
        while queue:
            s = queue.popleft()
            for p in graph.predecessors(s):
                if p not in seen:
                    seen.add(p)
                    queue.append(p)
        return frozenset(seen)

    def ost_state(self, state, sign: int) -> bool:
        memo = (state, sign)
        if memo not in self._ost:
            self._ost[memo] = any(
                _sign(letter) == sign and nxt in self._toward_st for letter, nxt in self.aut.successors(state)
            )
        return self._ost[memo]

    def in_st(self, x: Str, sign: int) -> bool:
        return self.st_state(x.state, sign)

    def in_ost(self, x: Str, sign: int) -> bool:
        """Membership in OST_sign for a hammock element."""
        if self.ost_state(x.state, sign):
            return True
        extreme = self.high if sign == 1 else self.low
        return x.is_left_substring_of(extreme)

    def st_ost_membership(self, x: Str) -> dict:
        st = {j for j in (1, -1) if self.in_st(x, j)}
        ost = {j for j in (1, -1) if self.key.contains(x) and self.in_ost(x, j)}
        return {"st": st, "ost": ost}

    def pinned(self, x: Str) -> bool:
        """Whether x is a left substring of an extreme (membership not state-determined)."""
        return x.is_left_substring_of(self.high) or x.is_left_substring_of(self.low)

    def in_ost_any(self, x: Str) -> bool:
        return self.in_ost(x, 1) or self.in_ost(x, -1)

    def in_ost_both(self, x: Str) -> bool:
        return self.in_ost(x, 1) and self.in_ost(x, -1)

    # ------------------------------------------------------------ c_B, phi

    def c_b(self, x: Str) -> Str:
        floor = len(self.key.base)
        for n in range(len(x), floor - 1, -1):
            y = x if n == len(x) else x.prefix(n)
            if self.in_ost_any(y):
                return y
        raise StringError(f"{render(x)} is not in the hammock {self.key}")

    def phi_of_ost(self, z: Str) -> int:
        up, down = self.in_ost(z, 1), self.in_ost(z, -1)
        if up and down:
            return 0
        return 1 if up else -1

    def phi(self, x: Str) -> int:
        c = self.c_b(x)
        if len(c) == len(x):
            return self.phi_of_ost(c)
        return -relative_theta(x, c)

    def fiber_key(self, z: Str) -> HammockKey | None:
        """The hammock condensed onto z; None for the singleton fiber."""
        p = self.phi_of_ost(z)
        return None if p == 0 else HammockKey(z, -p)

    def fiber_ends(self, z: Str) -> tuple[Str, Str]:
        p = self.phi_of_ost(z)
        if p == 0:
            return z, z
        if p == 1:
            return greedy(z, inverse=False), z
        return z, greedy(z, inverse=True)

    def condense(self, x: Str) -> dict:
        c = self.c_b(x)
        out = {"cB": c, "phi": self.phi(x)}
        if self.minimal:
            out["CB"] = self.big_c(c)
        return out

    # ------------------------------------------------------------ neighbours

    def ost_neighbor(self, x: Str, direction: int) -> Str | None:
        """The immediate neighbour of x inside OST; None at the matching extreme."""
        lo, hi = self.fiber_ends(x)
        nxt = succ_l(hi, self.key) if direction > 0 else pred_l(lo, self.key)
        return None if nxt is None else self.c_b(nxt)

    def big_c(self, z: Str) -> Str:
        """The element of OST_{+-1} whose neighbour orbit reaches z."""
        y = z
        for _ in range(self.cap):
            p = self.phi_of_ost(y)
            if p == 0:
                return y
            y = self.ost_neighbor(y, -p)
            if y is None:
                raise StringError(f"no OST_{{+-1}} anchor below {render(z)}")
        raise Indeterminate("anchor search exceeded its cap")

    def chain(self, x: Str, direction: int) -> Chain:
        """Iterates of l_B (direction +1) or l-bar_B (direction -1) from x."""
        return iterate_to_period(
            x,
            lambda y: self.ost_neighbor(y, direction),
            lambda y: not self.pinned(y),
            self.cap,
        )

    def ost_limit(self, x: Str, direction: int) -> AlmostPeriodic:
        if not (self.in_ost(x, direction) and self.ost_state(x.state, direction)):
            raise ValueError(f"{render(x)} does not start an infinite neighbour chain")
        ch = self.chain(x, direction)
        return almost_periodic(x, ch.items[ch.start], ch.items[-1])

    # ------------------------------------------------------------ centers

    def _center_state(self, state) -> bool:
        if not (self.st_state(state, 1) and self.st_state(state, -1)):
            return False
        direct, inverse = self.aut.extensions(state)
        if direct is None or inverse is None:
            return False
        marker = _marker_of_state(self.spec, state)
        for gamma in self.spec.letters:
            if _letter_end(self.spec, gamma) != marker:
                continue
            one = self.aut.window_of((gamma,))
            if not (self.st_state(one, 1) and self.st_state(one, -1)):
                continue
            if all(self.bands.ext_membership((gamma, a), self.cls) for a in (direct, inverse)):
                return True
        return False

    def is_center(self, x: Str) -> bool:
        if not (self.in_st(x, 1) and self.in_st(x, -1)):
            raise ValueError(f"{render(x)} is not in St_(+-1)")
        return self._center_state(x.state)

    @cached_property
    def center_classes(self) -> list:
        """One representative per realised (direct, inverse) extension pair."""
        base = self.key.base
        seen = set()
        queue = deque()
        for letter, nxt in self.aut.successors(base.state):
            if _sign(letter) == self.key.side and nxt not in seen:
                seen.add(nxt)
                queue.append(base.prepend(letter))
        found: dict = {}
        while queue:
            y = queue.popleft()
            if self._center_state(y.state):
                pair = self.aut.extensions(y.state)
                found.setdefault(pair, y)
            for letter, nxt in self.aut.successors(y.state):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(y.prepend(letter))
        return [CenterClass(pair, rep) for pair, rep in sorted(found.items(), key=lambda kv: _pair_key(kv[0]))]

    def beam_structure(self) -> "BeamReport":
        self.require_minimal()
        key = self.key
        candidates = {y.letters: y for y in self.bands.band_free_relative(key.base, key.side)}
        for extreme in (self.low, self.high):
            for n in range(len(key.base), len(extreme) + 1):
                y = extreme.prefix(n)
                candidates.setdefault(y.letters, y)
        boundaries = []
        for y in candidates.values():
            if not key.contains(y) or not self.in_ost_both(y):
                continue
            if len(y) > len(key.base) and self.in_st(y, 1) and self.in_st(y, -1) and self._center_state(y.state):
                continue
            boundaries.append(y)
        boundaries = sort_l(boundaries)
        left_end = self._walk(self.low, boundaries[0])
        right_end = self._walk(boundaries[-1], None)[1:]
        classes = [] if self.cls.domestic else self.center_classes
        return BeamReport(
            boundaries=boundaries,
            beams=list(zip(boundaries, boundaries[1:])),
            kB=len(classes),
            centerClasses=classes,
            endSegments=(left_end, right_end),
        )

    def _walk(self, start: Str, stop: Str | None) -> list:
        """OST elements from start up to (excluding) stop, or to the top."""
        out = []
        y = start
        for _ in range(self.cap):
            if stop is not None and compare_l(y, stop) >= 0:
                return out
            out.append(y)
            y = self.ost_neighbor(y, 1)
            if y is None:
                return out
        raise Indeterminate("end segment walk exceeded its cap")

    def b_equivalent(self, x: Str, y: Str) -> bool:
        return b_equivalent(x, y)


def _pair_key(pair) -> tuple:
    return tuple((l.arrow, l.inverse) for l in pair)


def _marker_of_state(spec, state) -> tuple:
    if state.window:
        last = state.window[-1]
        return (spec.target(last), spec.sign_out(last))
    return state.zero


def _letter_end(spec, letter: Letter) -> tuple:
    return (spec.target(letter), spec.sign_out(letter))


@dataclass(frozen=True)
class CenterClass:
    pair: tuple
    representative: Str

    def __str__(self):
        a, b = self.pair
        return f"({render_word([a])}, {render_word([b])}) via {render(self.representative)}"


@dataclass
class BeamReport:
    boundaries: list
    beams: list
    kB: int
    centerClasses: list
    endSegments: tuple = field(default_factory=tuple)

    @property
    def nB(self) -> int:
        return len(self.boundaries) - 1


def b_equivalent(x: Str, y: Str) -> bool:
    """Both strings admit the same two distinct one-letter extensions."""
    ex, ey = x.extensions(), y.extensions()
    return None not in ex and ex == ey


# ---------------------------------------------------------------- exits


@dataclass(frozen=True)
class Exit:
    letter: Letter
    rotation: tuple
    non_domestic: bool


def band_ends(cls: GmbClass) -> dict:
    """Exits of every prime band of the class and the two derived band subsets."""
    if not cls.bands:
        return {"baL": set(), "baLbar": set(), "exits": {}}
    spec = cls.bands[0].spec
    structure = band_structure(spec)
    exits = {}
    for band in cls.bands:
        found = []
        for rot in band.rotations():
            x = mk_string(spec, rot)
            for letter in x.extensions():
                if letter is None or letter == rot[0]:
                    continue
                found.append(Exit(letter, rot, structure.ext_membership(rot + (letter,), cls)))
        exits[band] = found
    ba_l = {b for b, ex in exits.items() if not any(e.non_domestic and not e.letter.inverse for e in ex)}
    ba_lbar = {b for b, ex in exits.items() if not any(e.non_domestic and e.letter.inverse for e in ex)}
    return {"baL": ba_l, "baLbar": ba_lbar, "exits": exits}


def st_ost_membership(ctx: BContext, x: Str) -> dict:
    return ctx.st_ost_membership(x)


def condense(ctx: BContext, x: Str) -> dict:
    return ctx.condense(x)


def ost_neighbor(ctx: BContext, x: Str, direction: int) -> Str | None:
    return ctx.ost_neighbor(x, direction)


def ost_limit(ctx: BContext, x: Str, direction: int) -> AlmostPeriodic:
    return ctx.ost_limit(x, direction)


def is_center(ctx: BContext, x: Str) -> bool:
    return ctx.is_center(x)


def beam_structure(ctx: BContext) -> BeamReport:
    return ctx.beam_structure()
