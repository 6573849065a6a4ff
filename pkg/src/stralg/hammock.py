"""One-sided left hammocks as linear orders."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key

from .strings import Str, StringError, common_left_substring, render


@dataclass(frozen=True)
class HammockKey:
    base: Str
    side: int

    def __post_init__(self):
        if self.side not in (1, -1):
            raise ValueError("side must be +1 or -1")

    def contains(self, x: Str) -> bool:
        if not self.base.is_left_substring_of(x):
            return False
        n = len(self.base)
        return len(x) == n or (1 if x.letters[n].inverse else -1) == self.side

    def __str__(self):
        return f"({render(self.base)}, {'+1' if self.side > 0 else '-1'})"


def compare_l(x: Str, y: Str) -> int:
    """-1, 0 or 1 as x is below, equal to or above y in the left order."""
    m = common_left_substring(x, y)
    n = len(m)
    if len(x) == n and len(y) == n:
        return 0
    if len(x) == n:
        return -1 if y.letters[n].inverse else 1
    if len(y) == n:
        return 1 if x.letters[n].inverse else -1
    return 1 if x.letters[n].inverse else -1


def sort_l(strings) -> list:
    return sorted(strings, key=cmp_to_key(compare_l))


def greedy(x: Str, inverse: bool) -> Str:
    """Prepend letters of one kind for as long as possible."""
    while True:
        direct, inv = x.extensions()
        letter = inv if inverse else direct
        if letter is None:
            return x
        x = x.prepend(letter)


def extremal_strings(key: HammockKey) -> tuple[Str, Str]:
    if key.side == 1:
        return key.base, greedy(key.base, inverse=True)
    return greedy(key.base, inverse=False), key.base


def _inside(y: Str, key: HammockKey | None) -> Str | None:
    return y if key is None or key.contains(y) else None


def succ_l(x: Str, key: HammockKey | None = None) -> Str | None:
    """Immediate successor of x; None at the maximum of the hammock."""
    floor = len(key.base) if key else 0
    direct, inv = x.extensions()
    if inv is not None:
        return _inside(greedy(x.prepend(inv), inverse=False), key)
    for k in range(len(x) - 1, -1, -1):
        if not x.letters[k].inverse:
            return None if k < floor else _inside(x.prefix(k), key)
    return None


def pred_l(x: Str, key: HammockKey | None = None) -> Str | None:
    """Immediate predecessor of x; None at the minimum of the hammock."""
    floor = len(key.base) if key else 0
    direct, inv = x.extensions()
    if direct is not None:
        return _inside(greedy(x.prepend(direct), inverse=True), key)
    for k in range(len(x) - 1, -1, -1):
        if x.letters[k].inverse:
            return None if k < floor else _inside(x.prefix(k), key)
    return None


def enumerate_hammock(key: HammockKey, cap: int) -> list:
    """Hammock elements u.x0 with |u| <= cap, in increasing order."""
    out = [key.base]
    layer = []
    for letter in key.base.extensions():
        if letter is not None and (1 if letter.inverse else -1) == key.side:
            layer.append(key.base.prepend(letter))
    depth = 1
    while layer and depth <= cap:
        out.extend(layer)
        nxt = []
        for y in layer:
            for letter in y.extensions():
                if letter is not None:
                    nxt.append(y.prepend(letter))
        layer = nxt
        depth += 1
    return sort_l(out)


def interval_pivot(a: Str, b: Str) -> Str:
    if compare_l(a, b) > 0:
        raise StringError(f"[{render(a)}, {render(b)}] is not an interval")
    return common_left_substring(a, b)
