"""Gaps of condensed hammocks: where almost periodic left N-strings sit."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .bands import is_cyclic, primitive_root
from .condensation import AlmostPeriodic, BContext, almost_periodic, band_ends
from .ordertype import (
    OMEGA,
    OMEGA_STAR,
    ZETA,
    LinExpr,
    One,
    ProdFin,
    Shuffle,
    Sum,
    normalize_expr,
    render_expr,
)
from .strings import Str, StringError, render


class GapLocation(Enum):
    PLUS = "PLUS"
    MINUS = "MINUS"
    ZERO = "ZERO"


def _in_class(ctx: BContext, ap: AlmostPeriodic) -> bool:
    state = ap.prefix(2).state
    return state in ctx.cls.states


def classify_limit_location(ctx: BContext, ap: AlmostPeriodic, copies: int = 3) -> GapLocation:
    """PLUS for limits of l_B-rays, MINUS for l-bar_B-rays, ZERO otherwise.

    A domestic class has a single band that is a limit from both sides; it is
    reported as PLUS and ``is_dual_limit`` says so.
    """
    ctx.require_minimal()
    for k in range(copies + 1):
        y = ap.prefix(k)
        if not ctx.key.contains(y):
            raise ValueError(f"{render(y)} is outside the hammock {ctx.key}")
    if not _in_class(ctx, ap):
        raise ValueError(f"{ap} does not end in a band of {ctx.cls.name}")
    ends = band_ends(ctx.cls)
    if any(b.matches(ap.band) for b in ends["baL"]):
        return GapLocation.PLUS
    if any(b.matches(ap.band) for b in ends["baLbar"]):
        return GapLocation.MINUS
    return GapLocation.ZERO


def is_dual_limit(ctx: BContext, ap: AlmostPeriodic) -> bool:
    ends = band_ends(ctx.cls)
    return any(b.matches(ap.band) for b in ends["baL"]) and any(b.matches(ap.band) for b in ends["baLbar"])


# ---------------------------------------------------------------- catalogue


class UnsupportedCompletion(ValueError):
    """The expression is outside the two catalogued families."""


@dataclass
class CompletionReport:
    family: str
    expression: LinExpr | None
    census: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "expression": None if self.expression is None else render_expr(self.expression),
            "census": self.census,
        }


_BEAM = Sum((OMEGA, OMEGA_STAR))


def _domestic_blocks(e: LinExpr) -> int | None:
    if e == _BEAM:
        return 1
    if isinstance(e, ProdFin) and e.body == _BEAM:
        return e.n
    return None


def _is_nondomestic_beam(e: LinExpr) -> bool:
    return (
        isinstance(e, Sum)
        and len(e.items) == 3
        and e.items[0] == OMEGA
        and e.items[2] == OMEGA_STAR
        and isinstance(e.items[1], Shuffle)
        and all(a == ZETA for a in e.items[1].items)
    )


def complete_catalog(e: LinExpr) -> CompletionReport:
    e = normalize_expr(e)
    n = _domestic_blocks(e)
    if n is not None:
        filled = normalize_expr(ProdFin(Sum((OMEGA, One(), OMEGA_STAR)), n) if n > 1 else Sum((OMEGA, One(), OMEGA_STAR)))
        return CompletionReport(
            "domesticBeamChain",
            filled,
            {"added_points": n, "plus": n, "minus": n, "dual_limits": True, "zero": False, "real_indexed_middle": False},
        )
    if _is_nondomestic_beam(e):
        return CompletionReport(
            "nondomesticBeam",
            None,
            {
                "shape": "w+1+sum(r in reals) T_r+1+w*",
                "T_r": {"rational": "1+z+1", "irrational": "1"},
                "plus": "least gap and the greatest point of every T_r at a rational",
                "minus": "greatest gap and the least point of every T_r at a rational",
                "zero": "the single point T_r at every irrational r",
                "real_indexed_middle": True,
            },
        )
    raise UnsupportedCompletion(f"{render_expr(e)} is not (w+w*).n or w+xi(z)+w*")


# ---------------------------------------------------------------- census


@dataclass
class GapCensus:
    domestic: bool
    beams: int
    plus: list
    minus: list
    zero: bool
    dual_limit: bool

    def tags(self) -> set:
        out = set()
        if self.plus:
            out.add(GapLocation.PLUS)
        if self.minus:
            out.add(GapLocation.MINUS)
        if self.zero:
            out.add(GapLocation.ZERO)
        return out

    def to_json(self) -> dict:
        return {
            "domestic": self.domestic,
            "beams": self.beams,
            "plus": self.plus,
            "minus": self.minus,
            "zero": self.zero,
            "dual_limit": self.dual_limit,
        }


def gap_census(ctx: BContext) -> GapCensus:
    """Which kinds of gaps the condensed hammock has.

    For a domestic class every beam leaves one gap, approached by an l_B-ray
    from below and an l-bar_B-ray from above, both tending to the one band.
    """
    ctx.require_minimal()
    report = ctx.beam_structure()
    ends = band_ends(ctx.cls)
    if ctx.cls.domestic:
        gaps = [render(y) for y in report.boundaries[:-1]]
        return GapCensus(True, report.nB, gaps, list(gaps), False, True)
    plus = sorted(str(b) for b in ends["baL"])
    minus = sorted(str(b) for b in ends["baLbar"])
    return GapCensus(False, report.nB, plus, minus, True, False)


# ---------------------------------------------------------------- sequences


@dataclass(frozen=True)
class NonPeriodic:
    prefix: Str

    def __str__(self):
        return f"NON_PERIODIC({render(self.prefix)})"


def _detect(base: Str, x: Str):
    tail = x.letters[len(base):]
    n = len(tail)
    for start in range(n):
        rest = tail[start:]
        for p in range(1, len(rest) // 2 + 1):
            if all(rest[i] == rest[i + p] for i in range(len(rest) - p)):
                block = rest[:p]
                if primitive_root(block)[1] == 1 and is_cyclic(x.spec, block):
                    before = base.extend(tail[:start])
                    return almost_periodic(base, before, before.extend(block))
                break
    return None


def converge(xs) -> AlmostPeriodic | NonPeriodic:
    """Limit of a strictly increasing chain of left substrings.

    The answer is read off finite data, so a period is accepted only when the
    same limit is detected on every term of the second half of the sequence.
    """
    xs = list(xs)
    if not xs:
        raise ValueError("empty sequence")
    for a, b in zip(xs, xs[1:]):
        if len(b) <= len(a) or not a.is_left_substring_of(b):
            raise StringError(f"{render(a)} is not a proper left substring of {render(b)}")
    base = xs[0]
    found = {_detect(base, x) for x in xs[len(xs) // 2:]}
    if len(found) == 1 and None not in found:
        return found.pop()
    return NonPeriodic(xs[-1])
