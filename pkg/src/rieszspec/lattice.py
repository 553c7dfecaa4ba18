"""Lattice of positive classes and certified covers.

Every element a determines a positivity class, the class of its
positive part under the dominance preorder: x is dominated by y when
x <= n * y for some natural n.  Classes form a distributive lattice
whose joins and meets are computed on representatives.  All cover
claims made here are backed by explicit dominance certificates that can
be re-verified with a single order test.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import RatInterval, interval_grid
from .riesz import (
    CertificateError,
    Rational,
    RieszElement,
    RieszSpace,
    ToleranceError,
)

__all__ = [
    "LatticeElement",
    "CoverCertificate",
    "ShrinkResult",
    "d_of",
    "precedes",
    "join_all",
    "meet_all",
    "certify_cover",
    "cover_range",
    "cover_interval",
    "shrink_cover",
    "prune_cover",
]


def _pos(space: RieszSpace, a: RieszElement) -> RieszElement:
    return space.join(a, space.zero())


def join_all(space: RieszSpace, elems: Sequence[RieszElement]) -> RieszElement:
    """Join of a nonempty family, folded as a balanced tree."""
    layer = list(elems)
    if not layer:
        raise ValueError("join of an empty family")
    while len(layer) > 1:
        nxt = []
        for i in range(0, len(layer) - 1, 2):
            nxt.append(space.join(layer[i], layer[i + 1]))
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    return layer[0]


def meet_all(space: RieszSpace, elems: Sequence[RieszElement]) -> RieszElement:
    layer = list(elems)
    if not layer:
        raise ValueError("meet of an empty family")
    while len(layer) > 1:
        nxt = []
        for i in range(0, len(layer) - 1, 2):
            nxt.append(space.meet(layer[i], layer[i + 1]))
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    return layer[0]


def precedes(
    space: RieszSpace,
    x: RieszElement,
    y: RieszElement,
    max_n: int = 1 << 20,
) -> int | None:
    """A multiplier n with x <= n * y, or None if none was established.

    Instances that can bound value ratios supply a candidate ceiling,
    which is always re-verified by an order test; without one the search
    doubles n.  None covers both a certified failure (the instance ruled
    support inclusion out) and plain exhaustion, matching the one sided
    nature of dominance.
    """
    try:
        hint = space.dominance_ceiling(x, y)
        if hint is None:
            return None
        n = hint
    except NotImplementedError:
        n = 1
    while n <= max_n:
        if space.leq(x, space.scale(n, y)) is True:
            return n
        n *= 2
    return None


@dataclass(frozen=True)
class LatticeElement:
    """Positivity class of an element, carried by its positive part."""

    space: RieszSpace
    rep: RieszElement

    def join(self, other: "LatticeElement") -> "LatticeElement":
        return LatticeElement(self.space, self.space.join(self.rep, other.rep))

    def meet(self, other: "LatticeElement") -> "LatticeElement":
        return LatticeElement(self.space, self.space.meet(self.rep, other.rep))

    def below(self, other: "LatticeElement") -> bool:
        return precedes(self.space, self.rep, other.rep) is not None

    def is_bottom(self) -> bool:
        return self.space.leq(self.rep, self.space.zero()) is True

    def is_top(self) -> bool:
        return precedes(self.space, self.space.unit(), self.rep) is not None


def d_of(space: RieszSpace, a: RieszElement) -> LatticeElement:
    """The positivity class determined by a."""
    return LatticeElement(space, _pos(space, a))


@dataclass(frozen=True)
class CoverCertificate:
    """Witness that the target class is below the join of the parts.

    The claim is target^+ <= multiplier * join of the parts' positive
    parts; verify replays that single order test.
    """

    space: RieszSpace
    target: RieszElement
    parts: tuple[RieszElement, ...]
    multiplier: int

    def verify(self) -> bool:
        space = self.space
        joined = join_all(space, [_pos(space, p) for p in self.parts])
        return (
            space.leq(_pos(space, self.target), space.scale(self.multiplier, joined))
            is True
        )


def certify_cover(
    space: RieszSpace,
    target: RieszElement,
    parts: Sequence[RieszElement],
    max_n: int = 1 << 20,
) -> CoverCertificate:
    joined = join_all(space, [_pos(space, p) for p in parts])
    n = precedes(space, _pos(space, target), joined, max_n=max_n)
    if n is None:
        raise CertificateError("no dominance multiplier found for the cover")
    return CoverCertificate(space, target, tuple(parts), n)


def cover_range(
    space: RieszSpace, a: RieszElement
) -> tuple[int, int, CoverCertificate]:
    """Integer bounds p < q with the unit class covered by a in (p, q).

    The bounds leave one unit of slack on each side, so the interval
    depth is at least one everywhere and multiplier 1 certifies it.
    """
    q = space.unit_bound(a) + 1
    p = -(space.unit_bound(space.negate(a)) + 1)
    piece = space.in_interval(a, Fraction(p), Fraction(q))
    cert = CoverCertificate(space, space.unit(), (piece,), 1)
    if not cert.verify():
        raise CertificateError("range cover failed to verify")
    return p, q, cert


def cover_interval(
    space: RieszSpace,
    a: RieszElement,
    p: Rational,
    q: Rational,
    width: Rational,
) -> tuple[list[RatInterval], list[RieszElement], CoverCertificate]:
    """Cover the class of a in (p, q) by half overlapping width cells."""
    p, q, width = Fraction(p), Fraction(q), Fraction(width)
    grid = interval_grid(p, q, width)
    cells = [space.in_interval(a, iv.lo, iv.hi) for iv in grid]
    target = space.in_interval(a, p, q)
    cert = certify_cover(space, target, cells)
    return grid, cells, cert


@dataclass(frozen=True)
class ShrinkResult:
    """Cells lowered by r while still covering the unit class."""

    r: Fraction
    multiplier: int
    parts: tuple[RieszElement, ...]
    cert: CoverCertificate


def shrink_cover(
    space: RieszSpace,
    cells: Sequence[RieszElement],
    eps_floor: Rational = Fraction(1, 1 << 48),
) -> ShrinkResult:
    """Find r > 0 with the unit class still covered after lowering by r.

    From a multiplier N with 1 <= N * join(cells), the join is at least
    1/N, so lowering by r = 1/(2N) keeps it at least 1/(2N) and the
    doubled multiplier certifies the shrunken cover.  N is rounded up to
    a power of two.  If order tests stay undecided (err carrying cells),
    the infimum of the join is located through supremum queries on its
    negation at shrinking tolerance until a positive lower witness
    appears, down to eps_floor.
    """
    unit = space.unit()
    joined = join_all(space, list(cells))
    n0 = precedes(space, unit, _pos(space, joined))

    def attempt(r: Fraction, mult: int) -> ShrinkResult | None:
        shrunk = [space.add(b, space.scale(-r, unit)) for b in cells]
        cert = CoverCertificate(space, unit, tuple(shrunk), mult)
        if cert.verify():
            return ShrinkResult(r, mult, tuple(shrunk), cert)
        return None

    if n0 is not None:
        n = 1
        while n < n0:
            n *= 2
        got = attempt(Fraction(1, 2 * n), 2 * n)
        if got is not None:
            return got

    # Undecided order tests: locate inf join(cells) = -sup(-join) directly.
    neg_cut = space.sup_cut(space.negate(joined))
    eps = Fraction(1, 4)
    floor = Fraction(eps_floor)
    while eps >= floor:
        try:
            lower = -neg_cut.approx(eps)
        except ToleranceError:
            break
        if lower > 0:
            r = lower / 2
            n = 1
            while Fraction(1, n) > r:
                n *= 2
            got = attempt(r, 2 * n)
            if got is not None:
                return got
        eps = eps / 4
    raise CertificateError("cover admits no certified positive shrink")


def prune_cover(
    space: RieszSpace,
    cells: Sequence[RieszElement],
    r: Rational,
) -> list[int]:
    """Indices of cells whose positivity at level r is certified.

    Cells answering Below are at most r and can be dropped from a cover
    shrunk by r without losing any covered point.
    """
    from .spectrum import Pos, pos_or_below

    kept = []
    for k, cell in enumerate(cells):
        if isinstance(pos_or_below(space, cell, r), Pos):
            kept.append(k)
    return kept
