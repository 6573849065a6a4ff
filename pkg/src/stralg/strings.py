"""Finite strings over a string algebra and their word combinatorics."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .presentation import AlgebraSpec, ExtState, Letter


class StringError(ValueError):
    pass


@dataclass(frozen=True)
class Str:
    """A string, letters in application order (index 0 = first syllable).

    ``origin`` is the zero string (vertex, parity) that the string extends on
    the left; for a non-empty string it is determined by the first letter.
    """

    letters: tuple
    origin: tuple
    spec: AlgebraSpec = field(compare=False, repr=False)

    def __len__(self):
        return len(self.letters)

    @cached_property
    def state(self) -> ExtState:
        aut = self.spec.automaton
        if self.letters:
            return aut.window_of(self.letters)
        return aut.zero_state(*self.origin)

    @property
    def theta(self) -> int:
        if not self.letters:
            raise StringError("theta is undefined on a zero-length string")
        return 1 if self.letters[0].inverse else -1

    @property
    def delta(self) -> int:
        if self.letters and all(l.inverse for l in self.letters):
            return 1
        if self.letters and not any(l.inverse for l in self.letters):
            return -1
        return 0

    def prepend(self, letter: Letter) -> "Str | None":
        if self.spec.automaton.step(self.state, letter) is None:
            return None
        return Str(self.letters + (letter,), self.origin, self.spec)

    def extend(self, word) -> "Str | None":
        """Prepend the letters of ``word`` (given in application order)."""
        x = self
        for letter in word:
            x = x.prepend(letter)
            if x is None:
                return None
        return x

    def prefix(self, n: int) -> "Str":
        """The left substring made of the first ``n`` syllables."""
        return Str(self.letters[:n], self.origin, self.spec)

    def extensions(self) -> tuple:
        return self.spec.automaton.extensions(self.state)

    def is_left_substring_of(self, other: "Str") -> bool:
        return self.origin == other.origin and other.letters[: len(self.letters)] == self.letters

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"Str({render(self)!r})"


def zero_string(spec: AlgebraSpec, vertex: str, sign: int) -> Str:
    if vertex not in spec.vertices:
        raise StringError(f"unknown vertex {vertex}")
    return Str((), (vertex, sign), spec)


def origin_of(spec: AlgebraSpec, first: Letter) -> tuple:
    return (spec.source(first), -spec.sign_in(first))


def mk_string(spec: AlgebraSpec, letters, origin=None) -> Str:
    """Validate a word given in application order; reports the offending factor."""
    letters = tuple(letters)
    for letter in letters:
        if letter.arrow not in spec.arrow:
            raise StringError(f"unknown arrow {letter.arrow}")
    if letters:
        natural = origin_of(spec, letters[0])
        if origin is not None and tuple(origin) != natural:
            raise StringError("first letter does not extend the given zero string")
        origin = natural
    elif origin is None:
        raise StringError("a zero-length string needs a (vertex, parity) tag")
    aut = spec.automaton
    state = aut.zero_state(*origin)
    for k, letter in enumerate(letters):
        nxt = aut.step(state, letter)
        if nxt is None:
            raise StringError(_explain(spec, letters[: k + 1]))
        state = nxt
    return Str(letters, tuple(origin), spec)


def _explain(spec: AlgebraSpec, letters: tuple) -> str:
    last, prev = letters[-1], letters[-2] if len(letters) > 1 else None
    if prev is not None and prev.arrow == last.arrow and prev.inverse != last.inverse:
        return f"cancellation {render_word([prev, last])}"
    if prev is not None and spec.source(last) != spec.target(prev):
        return f"non-composable pair {render_word([prev, last])}"
    for rel in spec.relations:
        direct = tuple(Letter(n) for n in reversed(rel))
        inverse = tuple(l.inv() for l in reversed(direct))
        for f in (direct, inverse):
            if letters[-len(f):] == f:
                return f"relation factor {render_word(f)}"
    return f"sign mismatch at {render_word(letters[-2:])}"


# ---------------------------------------------------------------- literals

_ZERO = re.compile(r"^1\((\w+),\s*([+-])1?\)$")


def parse_string(spec: AlgebraSpec, text: str) -> Str:
    """Parse either ``a1'.a0`` tokens or the capitalised form ``A1a0``.

    Tokens are written left to right as printed, so the last token is the
    first syllable.  A zero string is written ``1(v,+)`` or ``1(v,-)``.
    """
    text = text.strip()
    m = _ZERO.match(text)
    if m:
        return zero_string(spec, m.group(1), 1 if m.group(2) == "+" else -1)
    if "." in text or "'" in text or text in spec.arrow:
        tokens = [t.strip() for t in text.split(".")]
        written = []
        for tok in tokens:
            inv = tok.endswith("'")
            name = tok.rstrip("'")
            if name not in spec.arrow:
                raise StringError(f"unknown arrow {name}")
            written.append(Letter(name, inv))
    else:
        written = _tokenize_capitalised(spec, text)
    return mk_string(spec, reversed(written))


def _tokenize_capitalised(spec: AlgebraSpec, text: str) -> list:
    names = sorted(spec.arrow, key=len, reverse=True)
    out = []
    pos = 0
    while pos < len(text):
        for name in names:
            chunk = text[pos: pos + len(name)]
            if chunk == name:
                out.append(Letter(name, False))
                break
            if chunk == name[0].upper() + name[1:] and name[0].islower():
                out.append(Letter(name, True))
                break
        else:
            raise StringError(f"cannot read a syllable at position {pos} of {text!r}")
        pos += len(out[-1].arrow)
    return out


def render_word(letters, capitalised: bool = True) -> str:
    written = list(reversed(list(letters)))
    if capitalised:
        return "".join(l.arrow[0].upper() + l.arrow[1:] if l.inverse else l.arrow for l in written)
    return ".".join(l.token() for l in written)


def render(x: Str, capitalised: bool = True) -> str:
    if not x.letters:
        v, j = x.origin
        return f"1({v},{'+' if j > 0 else '-'})"
    return render_word(x.letters, capitalised)


# ---------------------------------------------------------------- operations


def string_signs(x: Str) -> dict:
    return {"theta": x.theta, "delta": x.delta}


def concat_left(u: Str, x: Str) -> Str:
    """u . x; u is a string whose own origin must be compatible with x's left end."""
    if u.letters and u.origin != end_marker(x):
        raise StringError(f"{render(u)} cannot be placed left of {render(x)}")
    if not u.letters:
        if u.origin != end_marker(x):
            raise StringError(f"zero string {render(u)} does not sit at the left end of {render(x)}")
        return x
    out = x.extend(u.letters)
    if out is None:
        raise StringError(f"{render(u)}{render(x)} violates a relation at the junction")
    return out


def end_marker(x: Str) -> tuple:
    """(t(x), epsilon(x)) in the form a left neighbour must extend."""
    if not x.letters:
        return x.origin
    last = x.letters[-1]
    return (x.spec.target(last), x.spec.sign_out(last))


def common_left_substring(x: Str, y: Str) -> Str:
    if x.origin != y.origin:
        raise StringError(f"{render(x)} and {render(y)} share no left substring")
    n = 0
    for a, b in zip(x.letters, y.letters):
        if a != b:
            break
        n += 1
    return x.prefix(n)


def relative_theta(y: Str, x: Str) -> int:
    """theta(y | x) for a proper left substring x of y."""
    if not (x.is_left_substring_of(y) and len(y) > len(x)):
        raise StringError(f"{render(x)} is not a proper left substring of {render(y)}")
    return 1 if y.letters[len(x)].inverse else -1


def invert(x: Str) -> Str:
    if not x.letters:
        v, j = x.origin
        return Str((), (v, -j), x.spec)
    return mk_string(x.spec, tuple(l.inv() for l in reversed(x.letters)))


def h_equivalent(x: Str, y: Str) -> bool:
    if x.spec is not y.spec:
        raise StringError("strings over different algebras")
    classes = x.spec.automaton.h_class
    return classes[x.state] == classes[y.state]


def h_class(x: Str) -> int:
    return x.spec.automaton.h_class[x.state]


def distinguishing_word(x: Str, y: Str):
    """Shortest word u (application order) with exactly one of ux, uy valid."""
    aut = x.spec.automaton
    start = (x.state, y.state)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        for letter in x.spec.letters:
            a = aut.step(pair[0], letter)
            b = aut.step(pair[1], letter)
            if (a is None) != (b is None):
                word = [letter]
                node = pair
                while parent[node] is not None:
                    node, l = parent[node]
                    word.append(l)
                return tuple(reversed(word))
            if a is None:
                continue
            nxt = (a, b)
            if nxt not in parent:
                parent[nxt] = (pair, letter)
                queue.append(nxt)
    return None
