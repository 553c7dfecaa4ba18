"""Points of the spectrum as refinable interval filters.

A point of the spectrum is approached through finite data: a list of
constraints "element e lies in the open interval I" whose meet has a
certified positive supremum, the margin.  Evaluating a new element b at
such a point lays an overlapping dyadic grid over the certified range
of b, asks for the supremum of the current meet intersected with each
candidate cell, and keeps the cell with the largest answer (lowest index
on ties).  The chosen interval's midpoint is the evaluation; the margin
shrinks by at most the query precision and stays positive, which is
what keeps the filter consistent and the future choices sound.

Nets: for a finite family and a resolution, each element's certified
range is covered by overlapping cells, the cover is shrunk by a
positive r and pruned, and joint cells that keep a positive meet become
points.  Every representation of the space then agrees with some net
point to within the resolution on every family member.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import RatInterval, interval_grid_window
from .lattice import cover_interval, cover_range, prune_cover, shrink_cover
from .riesz import (
    MarginCollapseError,
    Rational,
    RieszElement,
    RieszSpace,
    norm_cut,
)

__all__ = [
    "Pos",
    "Below",
    "pos_or_below",
    "sup_approx",
    "PointState",
    "point_new",
    "pseudo_dist",
    "SpectrumNet",
    "epsilon_net",
    "StoneYosidaReport",
    "stone_yosida_check",
]


@dataclass(frozen=True)
class Pos:
    """Certified: the supremum exceeds the (positive) witness."""

    witness: Fraction


@dataclass(frozen=True)
class Below:
    """Certified: the element is at most the bound."""

    bound: Fraction


def pos_or_below(space: RieszSpace, a: RieszElement, r: Rational) -> Pos | Below:
    """Decide between sup(a) > r/4 and a <= r/2 with one cut query at r/4."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("r must be positive")
    s = space.sup_cut(a).approx(r / 4)
    if s > r / 2:
        return Pos(s - r / 4)
    return Below(s)


def sup_approx(space: RieszSpace, a: RieszElement, eps: Rational) -> Fraction:
    """Locate sup(a) within eps using only positivity decisions.

    Bisection on the threshold q: a Pos answer for a - q pushes the
    lower end up, a Below answer caps the supremum at q plus the
    certified bound.  Independent of the instance's own cut machinery,
    which makes it a useful cross check.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    unit = space.unit()
    hi = Fraction(space.unit_bound(a))
    lo = -Fraction(space.unit_bound(space.negate(a))) - 1
    while hi - lo > eps:
        q = (lo + hi) / 2
        t = pos_or_below(space, space.add(a, space.scale(-q, unit)), eps / 2)
        if isinstance(t, Pos):
            lo = q
        else:
            hi = q + t.bound
    return hi


class PointState:
    """A spectrum point under refinement; not safe for concurrent use."""

    def __init__(
        self,
        space: RieszSpace,
        constraints: Sequence[tuple[RieszElement, Fraction, Fraction]],
        margin: Fraction,
        ident: int = 0,
    ) -> None:
        if margin <= 0:
            raise MarginCollapseError(f"initial margin {margin} is not positive")
        self.space = space
        self.constraints = list(constraints)
        self.margin = Fraction(margin)
        self.ident = ident
        self._meet: RieszElement | None = None
        self._evals: dict[tuple[RieszElement, int], Fraction] = {}
        self._ranges: dict[RieszElement, tuple[int, int]] = {}

    def meet_element(self) -> RieszElement:
        """Cached meet of all interval constraints."""
        if self._meet is None:
            space = self.space
            m = None
            for e, lo, hi in self.constraints:
                cell = space.in_interval(e, lo, hi)
                m = cell if m is None else space.meet(m, cell)
            if m is None:
                raise ValueError("a point needs at least one constraint")
            self._meet = m
        return self._meet

    def eval(self, b: RieszElement, eps: Rational) -> Fraction:
        """Value of b at this point within eps; narrows the filter.

        The winning cell is the candidate with the largest supremum of
        (current meet) /\\ (b in cell) at precision min(margin, w/2)/8,
        ties resolved toward the lowest cell index.  Candidates that a
        cheap per cell bound already places at or under the incumbent
        are skipped without a cut query.
        """
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        level = 0
        while Fraction(1, 1 << level) > eps:
            level += 1
        key = (b, level)
        cached = self._evals.get(key)
        if cached is not None:
            return cached
        space = self.space
        w = Fraction(1, 1 << level)
        rng = self._ranges.get(b)
        if rng is None:
            p, q, _ = cover_range(space, b)
            self._ranges[b] = (p, q)
        else:
            p, q = rng
        # earlier evals of b already pin it to a window; only cells meeting
        # that window can win, so the rest of the grid is never built
        wlo, whi = Fraction(p), Fraction(q)
        for e2, lo2, hi2 in self.constraints:
            if e2 == b:
                wlo, whi = max(wlo, lo2), min(whi, hi2)
        pairs = (
            interval_grid_window(Fraction(p), Fraction(q), w, wlo, whi)
            if wlo < whi
            else []
        )
        meet_cur = self.meet_element()
        cells = [iv for _, iv in pairs]
        kept = space.candidate_intervals(b, cells, meet_cur)
        cands = [pairs[i] for i in kept]
        delta = min(self.margin, w / 2) / 8
        best_k: int | None = None
        best_iv: RatInterval | None = None
        best_mu: Fraction | None = None
        for k, iv in cands:
            if best_mu is not None:
                cheap = space.interval_sup_upper(b, iv)
                if cheap is None or (cheap, -k) <= (best_mu, -best_k):
                    continue
            cell = space.in_interval(b, iv.lo, iv.hi)
            mu = space.sup_cut(space.meet(meet_cur, cell)).approx(delta)
            if best_mu is None or (mu, -k) > (best_mu, -best_k):
                best_mu, best_k, best_iv = mu, k, iv
        if best_iv is None or best_mu - delta <= 0:
            raise MarginCollapseError(
                f"no cell kept a positive margin while evaluating at level {level}"
            )
        iv = best_iv
        self.constraints.append((b, iv.lo, iv.hi))
        self._meet = space.meet(meet_cur, space.in_interval(b, iv.lo, iv.hi))
        self.margin = best_mu - delta
        val = iv.midpoint
        self._evals[key] = val
        return val


def point_new(
    space: RieszSpace,
    constraints: Sequence[tuple[RieszElement, Rational, Rational]],
    ident: int = 0,
) -> PointState:
    """Start a point from interval constraints, certifying its margin."""
    cs = [(e, Fraction(lo), Fraction(hi)) for e, lo, hi in constraints]
    if not cs:
        raise ValueError("a point needs at least one constraint")
    m = None
    for e, lo, hi in cs:
        cell = space.in_interval(e, lo, hi)
        m = cell if m is None else space.meet(m, cell)
    delta = min(hi - lo for _, lo, hi in cs) / 8
    s = space.sup_cut(m).approx(delta)
    margin = s - delta
    if margin <= 0:
        raise MarginCollapseError("constraints do not certify a point")
    return PointState(space, cs, margin, ident)


def pseudo_dist(
    p1: PointState,
    p2: PointState,
    elements: Sequence[RieszElement],
    eps: Rational,
) -> Fraction:
    """Weighted evaluation gap sum(2^-n * |p1(a_n) - p2(a_n)|) within 3*eps.

    Callers normalize the family into the unit ball so each gap is at
    most 2; the sum is truncated once the geometric tail drops under
    eps, and each retained term is evaluated at eps/4.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    ncut = 1
    while Fraction(2, 1 << ncut) > eps:
        ncut += 1
    total = Fraction(0)
    for n, e in enumerate(elements):
        if n > ncut:
            break
        gap = abs(p1.eval(e, eps / 4) - p2.eval(e, eps / 4))
        total += Fraction(1, 1 << n) * gap
    return total


@dataclass(frozen=True)
class SpectrumNet:
    """Points approximating every representation on a finite family."""

    space: RieszSpace
    elements: tuple[RieszElement, ...]
    eps: Fraction
    resolution: Fraction
    points: tuple[PointState, ...]
    shrink_info: tuple[tuple[Fraction, int], ...]

    def eval_table(self, delta: Rational | None = None) -> list[list[Fraction]]:
        d = Fraction(delta) if delta is not None else self.eps / 4
        return [[pt.eval(e, d) for e in self.elements] for pt in self.points]


def epsilon_net(
    space: RieszSpace,
    elements: Sequence[RieszElement],
    eps: Rational,
) -> SpectrumNet:
    """Cover, shrink, prune, and combine per element cells into points.

    Per element the certified range is covered by half overlapping cells
    of dyadic width at most eps, the cover is lowered by a positive r
    while still covering the unit class, and cells certified at most r
    are discarded.  Joint points then come from a depth first product of
    the surviving cells, keeping a tuple only while the meet of its
    cells stays certifiably positive.  Every representation ends up
    within the resolution of some point on every family member.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not elements:
        raise ValueError("net needs at least one element")
    level = 0
    while Fraction(1, 1 << level) > eps:
        level += 1
    w = Fraction(1, 1 << level)

    per_elem: list[list[tuple[RatInterval, RieszElement]]] = []
    shrink_info: list[tuple[Fraction, int]] = []
    r_joint: Fraction | None = None
    for e in elements:
        p, q, _ = cover_range(space, e)
        grid, cells, _ = cover_interval(space, e, Fraction(p), Fraction(q), w)
        shrunk = shrink_cover(space, cells)
        kept = prune_cover(space, cells, shrunk.r)
        per_elem.append([(grid[k], cells[k]) for k in kept])
        shrink_info.append((shrunk.r, shrunk.multiplier))
        r_joint = shrunk.r if r_joint is None else min(r_joint, shrunk.r)

    points: list[PointState] = []

    def extend(i: int, meet: RieszElement | None, chosen: list[RatInterval]) -> None:
        if meet is not None:
            t = pos_or_below(space, meet, r_joint)
            if isinstance(t, Below):
                return
            if i == len(elements):
                cs = [
                    (elements[j], chosen[j].lo, chosen[j].hi)
                    for j in range(len(elements))
                ]
                points.append(PointState(space, cs, t.witness, ident=len(points)))
                return
        for iv, cell in per_elem[i]:
            nxt = cell if meet is None else space.meet(meet, cell)
            chosen.append(iv)
            extend(i + 1, nxt, chosen)
            chosen.pop()

    extend(0, None, [])
    return SpectrumNet(
        space=space,
        elements=tuple(elements),
        eps=eps,
        resolution=w,
        points=tuple(points),
        shrink_info=tuple(shrink_info),
    )


@dataclass(frozen=True)
class StoneYosidaReport:
    """Norm of an element versus its largest net evaluation."""

    norm_value: Fraction
    net_value: Fraction
    points: int
    eps: Fraction
    bound: Fraction
    ok: bool


def stone_yosida_check(
    space: RieszSpace,
    a: RieszElement,
    eps: Rational,
    net: SpectrumNet | None = None,
) -> StoneYosidaReport:
    """Compare the unit norm of a with its maximum over a net.

    The norm query is eps/2 accurate, each point evaluation eps/4, and
    the net resolution is eps, so the two readings of sup |value| can
    differ by less than 2 * eps.
    """
    eps = Fraction(eps)
    if net is None:
        net = epsilon_net(space, [a], eps)
    norm_value = norm_cut(a).approx(eps / 2)
    net_value = Fraction(0)
    for pt in net.points:
        net_value = max(net_value, abs(pt.eval(a, eps / 4)))
    bound = 2 * eps
    return StoneYosidaReport(
        norm_value=norm_value,
        net_value=net_value,
        points=len(net.points),
        eps=eps,
        bound=bound,
        ok=abs(norm_value - net_value) < bound,
    )
