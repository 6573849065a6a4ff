"""Finite-description linear order expressions and the hammock order-type recursion."""

from __future__ import annotations

import json
import re
import sys
from dataclasses import dataclass
from functools import lru_cache

from .bands import DEFAULT_CAP, band_structure
from .condensation import BContext
from .hammock import HammockKey, extremal_strings, pred_l, succ_l
from .strings import Str, h_class

# ---------------------------------------------------------------- terms


class LinExpr:
    def __add__(self, other):
        return Sum((self, other))

    def __str__(self):
        return render_expr(self)


@dataclass(frozen=True)
class Zero(LinExpr):
    pass


@dataclass(frozen=True)
class One(LinExpr):
    pass


@dataclass(frozen=True)
class Fin(LinExpr):
    n: int


@dataclass(frozen=True)
class Sum(LinExpr):
    items: tuple


@dataclass(frozen=True)
class ProdOmega(LinExpr):
    body: LinExpr


@dataclass(frozen=True)
class ProdOmegaStar(LinExpr):
    body: LinExpr


@dataclass(frozen=True)
class ProdFin(LinExpr):
    body: LinExpr
    n: int


@dataclass(frozen=True)
class Shuffle(LinExpr):
    items: tuple


OMEGA = ProdOmega(One())
OMEGA_STAR = ProdOmegaStar(One())
ZETA = Sum((OMEGA_STAR, OMEGA))


def fin(n: int) -> LinExpr:
    if n < 0:
        raise ValueError("negative size")
    return Zero() if n == 0 else One() if n == 1 else Fin(n)


def total(items) -> LinExpr:
    items = tuple(items)
    if not items:
        return Zero()
    return items[0] if len(items) == 1 else Sum(items)


def _size(e: LinExpr):
    """Cardinality of a finite term, None when infinite."""
    if isinstance(e, Zero):
        return 0
    if isinstance(e, One):
        return 1
    if isinstance(e, Fin):
        return e.n
    if isinstance(e, Sum):
        sizes = [_size(i) for i in e.items]
        return None if None in sizes else sum(sizes)
    if isinstance(e, ProdFin):
        s = _size(e.body)
        return None if s is None else s * e.n
    if isinstance(e, (ProdOmega, ProdOmegaStar)):
        return 0 if _size(e.body) == 0 else None
    if isinstance(e, Shuffle):
        return 0 if all(_size(i) == 0 for i in e.items) else None
    raise TypeError(e)


# ---------------------------------------------------------------- normaliser


def _flat(e: LinExpr) -> list:
    if isinstance(e, Zero):
        return []
    if isinstance(e, Sum):
        return [x for i in e.items for x in _flat(i)]
    return [e]


def _root(items: list) -> list:
    n = len(items)
    for p in range(1, n + 1):
        if n % p == 0 and items == items[:p] * (n // p):
            return items[:p]
    return items


def _starts_omega(e: LinExpr) -> bool:
    if isinstance(e, ProdOmega):
        return e.body == One() or _starts_omega(e.body)
    if isinstance(e, Sum):
        return bool(e.items) and _starts_omega(e.items[0])
    if isinstance(e, ProdFin):
        return _starts_omega(e.body)
    return False


def _ends_omega_star(e: LinExpr) -> bool:
    if isinstance(e, ProdOmegaStar):
        return e.body == One() or _ends_omega_star(e.body)
    if isinstance(e, Sum):
        return bool(e.items) and _ends_omega_star(e.items[-1])
    if isinstance(e, ProdFin):
        return _ends_omega_star(e.body)
    return False


def _is_const(e) -> bool:
    return isinstance(e, (One, Fin))


def _reduce(e: LinExpr) -> LinExpr:
    if isinstance(e, (Zero, One)):
        return e
    if isinstance(e, Fin):
        return fin(e.n)
    if isinstance(e, ProdFin):
        if e.n < 1:
            return Zero()
        return _reduce(Sum((e.body,) * e.n))
    if isinstance(e, (ProdOmega, ProdOmegaStar)):
        body = _reduce(e.body)
        if isinstance(body, Zero):
            return Zero()
        if _size(body) is not None:
            body = One()
        else:
            body = total(_root(_flat(body)))
        return type(e)(body)
    if isinstance(e, Shuffle):
        args = []
        for a in e.items:
            a = _reduce(a)
            if not isinstance(a, Zero) and a not in args:
                args.append(a)
        if not args:
            return Zero()
        return Shuffle(tuple(sorted(args, key=render_expr)))
    if isinstance(e, Sum):
        items = [x for i in e.items for x in _flat(_reduce(i))]
        while True:
            new = _sum_pass(items)
            if new == items:
                break
            items = new
        return total(items)
    raise TypeError(e)


def _sum_pass(items: list) -> list:
    # fold adjacent constants
    out = []
    for x in items:
        if out and _is_const(out[-1]) and _is_const(x):
            out[-1] = fin(_size(out[-1]) + _size(x))
        else:
            out.append(x)
    items = out
    # n + w... = w...  and  ...w* + n = ...w*
    for j in range(len(items) - 1):
        if _is_const(items[j]) and _starts_omega(items[j + 1]):
            return items[:j] + items[j + 1:]
        if _is_const(items[j + 1]) and _ends_omega_star(items[j]):
            return items[: j + 1] + items[j + 2:]
    # A + A.w = A.w  and  A.w* + A = A.w*
    for j, x in enumerate(items):
        if isinstance(x, ProdOmega):
            block = _flat(x.body)
            k = len(block)
            if j >= k and items[j - k: j] == block:
                return items[: j - k] + items[j:]
        if isinstance(x, ProdOmegaStar):
            block = _flat(x.body)
            k = len(block)
            if items[j + 1: j + 1 + k] == block:
                return items[: j + 1] + items[j + 1 + k:]
    # xi(L) + L_j + xi(L) = xi(L), including the empty middle
    for i, x in enumerate(items):
        if not isinstance(x, Shuffle):
            continue
        for k in range(i + 1, len(items)):
            if items[k] != x:
                continue
            middle = items[i + 1: k]
            if not middle or any(_flat(a) == middle for a in x.items):
                return items[: i + 1] + items[k + 1:]
    return items


def _fold(e: LinExpr) -> LinExpr:
    if isinstance(e, (ProdOmega, ProdOmegaStar)):
        return type(e)(_fold(e.body))
    if isinstance(e, ProdFin):
        return ProdFin(_fold(e.body), e.n)
    if isinstance(e, Shuffle):
        return Shuffle(tuple(sorted((_fold(a) for a in e.items), key=render_expr)))
    if isinstance(e, Sum):
        items = [_fold(i) for i in e.items]
        while True:
            best = None
            n = len(items)
            for size in range(1, n // 2 + 1):
                for start in range(n - 2 * size + 1):
                    block = items[start: start + size]
                    count = 1
                    while items[start + count * size: start + (count + 1) * size] == block:
                        count += 1
                    if count >= 2:
                        cand = (count * size, -start, -size)
                        if best is None or cand > best[0]:
                            best = (cand, start, size, count)
            if best is None:
                break
            _, start, size, count = best
            block = items[start: start + size]
            items = items[:start] + [ProdFin(total(block), count)] + items[start + count * size:]
        return total(items)
    return e


def normalize_expr(e: LinExpr) -> LinExpr:
    """Rewrite to the canonical form; every step is an order isomorphism."""
    return _fold(_reduce(e))


def expr_equal(a: LinExpr, b: LinExpr) -> bool:
    return normalize_expr(a) == normalize_expr(b)


# ---------------------------------------------------------------- text


def _atom(e: LinExpr) -> str:
    text = render_expr(e)
    if isinstance(e, Sum) and e != ZETA:
        return f"({text})"
    return text


def render_expr(e: LinExpr) -> str:
    if isinstance(e, Zero):
        return "0"
    if isinstance(e, One):
        return "1"
    if isinstance(e, Fin):
        return str(e.n)
    if e == ZETA:
        return "z"
    if isinstance(e, Sum):
        return "+".join(_atom(i) if isinstance(i, Sum) else render_expr(i) for i in e.items)
    if isinstance(e, ProdOmega):
        return "w" if e.body == One() else f"{_atom(e.body)}.w"
    if isinstance(e, ProdOmegaStar):
        return "w*" if e.body == One() else f"{_atom(e.body)}.w*"
    if isinstance(e, ProdFin):
        return f"{_atom(e.body)}.{e.n}"
    if isinstance(e, Shuffle):
        return "xi(" + ",".join(render_expr(i) for i in e.items) + ")"
    raise TypeError(e)


class ExprSyntaxError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(xi|w\*|w|z|\d+|[()+.,])")


def _tokenize(text: str) -> list:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_expr(text: str) -> LinExpr:
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ExprSyntaxError(f"expected {expected or 'a token'}, found {tok!r}")
        pos += 1
        return tok

    def expr():
        items = [term()]
        while peek() == "+":
            take()
            items.append(term())
        return total(items)

    def term():
        e = factor()
        while peek() == ".":
            take()
            tok = take()
            if tok == "w":
                e = ProdOmega(e)
            elif tok == "w*":
                e = ProdOmegaStar(e)
            elif tok.isdigit():
                n = int(tok)
                e = Zero() if n == 0 else e if n == 1 else ProdFin(e, n)
            else:
                raise ExprSyntaxError(f"cannot multiply by {tok!r}")
        return e

    def factor():
        tok = take()
        if tok == "(":
            e = expr()
            take(")")
            return e
        if tok == "xi":
            take("(")
            if peek() == ")":
                raise ExprSyntaxError("xi() is empty; write 0")
            args = [expr()]
            while peek() == ",":
                take()
                args.append(expr())
            take(")")
            return Shuffle(tuple(args))
        if tok == "w":
            return OMEGA
        if tok == "w*":
            return OMEGA_STAR
        if tok == "z":
            return ZETA
        if tok.isdigit():
            return fin(int(tok))
        raise ExprSyntaxError(f"unexpected {tok!r}")

    e = expr()
    if pos != len(tokens):
        raise ExprSyntaxError(f"trailing input at token {tokens[pos]!r}")
    return e


def expr_to_json(e: LinExpr) -> dict:
    if isinstance(e, Zero):
        return {"op": "zero"}
    if isinstance(e, One):
        return {"op": "one"}
    if isinstance(e, Fin):
        return {"op": "fin", "n": e.n}
    if isinstance(e, Sum):
        return {"op": "sum", "items": [expr_to_json(i) for i in e.items]}
    if isinstance(e, ProdOmega):
        return {"op": "omega", "body": expr_to_json(e.body)}
    if isinstance(e, ProdOmegaStar):
        return {"op": "omega_star", "body": expr_to_json(e.body)}
    if isinstance(e, ProdFin):
        return {"op": "times", "n": e.n, "body": expr_to_json(e.body)}
    if isinstance(e, Shuffle):
        return {"op": "shuffle", "items": [expr_to_json(i) for i in e.items]}
    raise TypeError(e)


def expr_from_json(data) -> LinExpr:
    if isinstance(data, str):
        data = json.loads(data)
    op = data["op"]
    if op == "zero":
        return Zero()
    if op == "one":
        return One()
    if op == "fin":
        return Fin(data["n"])
    if op == "sum":
        return Sum(tuple(expr_from_json(i) for i in data["items"]))
    if op == "omega":
        return ProdOmega(expr_from_json(data["body"]))
    if op == "omega_star":
        return ProdOmegaStar(expr_from_json(data["body"]))
    if op == "times":
        return ProdFin(expr_from_json(data["body"]), data["n"])
    if op == "shuffle":
        return Shuffle(tuple(expr_from_json(i) for i in data["items"]))
    raise ValueError(f"unknown op {op}")


# ---------------------------------------------------------------- end shapes


def mirror(e: LinExpr) -> LinExpr:
    """The reversed order."""
    if isinstance(e, Sum):
        return Sum(tuple(mirror(i) for i in reversed(e.items)))
    if isinstance(e, ProdOmega):
        return ProdOmegaStar(mirror(e.body))
    if isinstance(e, ProdOmegaStar):
        return ProdOmega(mirror(e.body))
    if isinstance(e, ProdFin):
        return ProdFin(mirror(e.body), e.n)
    if isinstance(e, Shuffle):
        return Shuffle(tuple(mirror(i) for i in e.items))
    return e


def initial_chain(e: LinExpr) -> tuple:
    """Shape of the successor chain from the minimum.

    Returns (k, tail): tail is 'end' (the order has k elements), 'omega' (the
    chain never stops), 'stuck' (the k-th element has no successor but is not
    the maximum) or 'nomin'.
    """
    if isinstance(e, Zero):
        return 0, "end"
    if isinstance(e, (One, Fin)):
        return _size(e), "end"
    if isinstance(e, ProdFin):
        return initial_chain(Sum((e.body,) * e.n)) if e.n > 0 else (0, "end")
    if isinstance(e, ProdOmega):
        k, tail = initial_chain(e.body)
        if tail != "end":
            return k, tail
        return (0, "end") if k == 0 else (None, "omega")
    if isinstance(e, ProdOmegaStar):
        return (0, "end") if _size(e.body) == 0 else (0, "nomin")
    if isinstance(e, Shuffle):
        return (0, "end") if _size(e) == 0 else (0, "nomin")
    if isinstance(e, Sum):
        acc = 0
        for item in e.items:
            k, tail = initial_chain(item)
            if tail == "end":
                acc += k
                continue
            if tail == "nomin":
                return (0, "nomin") if acc == 0 else (acc, "stuck")
            if tail == "omega":
                return None, "omega"
            return acc + k, tail
        return acc, "end"
    raise TypeError(e)


def final_chain(e: LinExpr) -> tuple:
    return initial_chain(mirror(e))


def profile(e: LinExpr) -> tuple:
    """Isomorphism invariants used to cross-check rewriting."""
    return initial_chain(e), final_chain(e), _size(e), _has_shuffle(e)


def _has_shuffle(e: LinExpr) -> bool:
    if isinstance(e, Shuffle):
        return _size(e) != 0
    if isinstance(e, Sum):
        return any(_has_shuffle(i) for i in e.items)
    if isinstance(e, (ProdOmega, ProdOmegaStar, ProdFin)):
        return _has_shuffle(e.body)
    return False


def _walk(start: Str, move, key: HammockKey, depth: int) -> tuple:
    y = start
    for k in range(1, depth + 1):
        y = move(y, key)
        if y is None:
            return k, "end"
    return None, "omega"


def _agrees(predicted: tuple, observed: tuple, depth: int) -> bool:
    if predicted[1] in ("stuck", "nomin"):
        return False
    if observed[1] == "end":
        return predicted == observed
    if predicted[1] == "end":
        return predicted[0] > depth
    return True


def prefix_check(e: LinExpr, key: HammockKey, depth: int = 40) -> bool:
    """Compare the predicted ends of e with successor/predecessor walks in the hammock."""
    low, high = extremal_strings(key)
    up = _walk(low, succ_l, key, depth)
    down = _walk(high, pred_l, key, depth)
    return _agrees(initial_chain(e), up, depth) and _agrees(final_chain(e), down, depth)


# ---------------------------------------------------------------- recursion


@dataclass
class PeriodicTail:
    """Fiber keys along a ray: a finite prefix, then the period repeated forever."""

    prefixKeys: list
    periodKeys: list
    items: list

    def __post_init__(self):
        if not self.periodKeys:
            raise ValueError("empty period")


class OrderTypeEngine:
    """Computes hammock order types, memoised on (H-class, side)."""

    def __init__(self, spec, cap: int = DEFAULT_CAP):
        self.spec = spec
        self.cap = cap
        self.bands = band_structure(spec)
        self.memo: dict = {}
        self.height: dict = {}
        self.max_depth = 0
        self.trace: list = []
        self._bound = 0
        self._children: list = []

    def _count(self, key: HammockKey) -> int:
        aut = self.spec.automaton

        @lru_cache(maxsize=None)
        def count(state) -> int:
            return 1 + sum(count(t) for _, t in aut.successors(state))

        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 10000))
        try:
            return 1 + sum(
                count(t) for letter, t in aut.successors(key.base.state)
                if (1 if letter.inverse else -1) == key.side
            )
        finally:
            sys.setrecursionlimit(limit)

    def _choose(self, classes: list):
        return min(classes, key=lambda c: min(b.word[::-1] for b in c.bands))

    def order_type(self, key: HammockKey, depth: int = 0) -> LinExpr:
        memo_key = (h_class(key.base), key.side)
        if memo_key in self.memo:
            return self.memo[memo_key]
        reach = self.bands.reachable_ids(key.base.state, key.side)
        if depth == 0:
            self._bound = len(reach)
        assert depth <= self._bound, "recursion deeper than the reachable poset"
        self.max_depth = max(self.max_depth, depth)
        self._children.append(0)
        try:
            if not reach:
                result = fin(self._count(key))
            else:
                classes = [c for c in self.bands.poset.classes if c.id in reach]
                cls = self._choose(self.bands.poset.minimal(classes))
                ctx = BContext(key, cls, self.cap)
                result = self._assemble(ctx, len(reach), depth)
        finally:
            below = self._children.pop()
        result = normalize_expr(result)
        self.memo[memo_key] = result
        self.height[memo_key] = below
        return result

    def recursion_height(self, key: HammockKey) -> int:
        """Longest chain of nested fiber recursions below ``key``."""
        self.order_type(key)
        return self.height[(h_class(key.base), key.side)]

    def _fiber(self, ctx: BContext, z: Str, size: int, depth: int) -> LinExpr:
        sub = ctx.fiber_key(z)
        if sub is None:
            return One()
        inner = self.bands.reachable_ids(sub.base.state, sub.side)
        assert len(inner) < size and ctx.cls.id not in inner, "fiber did not shrink the reachable poset"
        result = self.order_type(sub, depth + 1)
        below = self.height[(h_class(sub.base), sub.side)] + 1
        if self._children:
            self._children[-1] = max(self._children[-1], below)
        return result

    def ray_tail(self, ctx: BContext, y: Str, direction: int) -> "PeriodicTail":
        """H-class keys of the fibers along the l_B (or l-bar_B) ray from y."""
        chain = ctx.chain(y, direction)
        s = max(chain.start, 1)
        keys = []
        for z in chain.items[1: s + chain.period]:
            sub = ctx.fiber_key(z)
            keys.append(None if sub is None else (h_class(sub.base), sub.side))
        return PeriodicTail(keys[: s - 1], keys[s - 1:], chain.items[1: s + chain.period])

    def _ray(self, ctx: BContext, y: Str, direction: int, size: int, depth: int) -> LinExpr:
        tail = self.ray_tail(ctx, y, direction)
        types = [self._fiber(ctx, z, size, depth) for z in tail.items]
        k = len(tail.prefixKeys)
        prefix, period = types[:k], types[k:]
        while prefix and prefix[-1] == period[-1]:
            period = [period[-1]] + period[:-1]
            prefix = prefix[:-1]
        period = _root(period)
        if direction > 0:
            return total(prefix + [ProdOmega(total(period))])
        return total([ProdOmegaStar(total(period[::-1]))] + prefix[::-1])

    def center_interval(self, ctx: BContext, x: Str, size: int | None = None, depth: int = 0) -> LinExpr:
        size = size if size is not None else len(ctx.reachable)
        if depth == 0:
            self._bound = len(ctx.reachable)
        down = self._ray(ctx, x, -1, size, depth)
        up = self._ray(ctx, x, 1, size, depth)
        return normalize_expr(Sum((down, One(), up)))

    def _assemble(self, ctx: BContext, size: int, depth: int) -> LinExpr:
        report = ctx.beam_structure()
        self.trace.append((ctx.key, ctx.cls, report))
        parts = [self._fiber(ctx, z, size, depth) for z in report.endSegments[0]]
        middle = None
        if report.kB:
            middle = Shuffle(tuple(self.center_interval(ctx, c.representative, size, depth) for c in report.centerClasses))
        ys = report.boundaries
        for k, y in enumerate(ys):
            parts.append(One())
            if k + 1 < len(ys):
                parts.append(self._ray(ctx, y, 1, size, depth))
                if middle is not None:
                    parts.append(middle)
                parts.append(self._ray(ctx, ys[k + 1], -1, size, depth))
        parts.extend(self._fiber(ctx, z, size, depth) for z in report.endSegments[1])
        return Sum(tuple(parts))


def _engine(spec) -> OrderTypeEngine:
    engine = spec.__dict__.get("_order_engine")
    if engine is None:
        engine = OrderTypeEngine(spec)
        object.__setattr__(spec, "_order_engine", engine)
    return engine


def hammock_order_type(key: HammockKey) -> LinExpr:
    return _engine(key.base.spec).order_type(key)
