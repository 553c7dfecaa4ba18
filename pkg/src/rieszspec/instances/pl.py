"""Continuous piecewise linear functions on [0, 1] with rational breakpoints.

Elements are kept in a canonical form: breakpoints strictly increasing from
0 to 1 with no collinear interior point, so equal functions have identical
representations.  Joins insert the exact crossing points of the two graphs
before taking pointwise maxima, which keeps every operation exact.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..exact import RatInterval
from ..riesz import (
    LocatedCut,
    RieszElement,
    RieszSpace,
    pair_index,
    rational_at,
)

__all__ = ["PLSpace", "PLElement"]

Point = tuple[Fraction, Fraction]


def _canonical(points: Sequence[Point]) -> tuple[Point, ...]:
    out: list[Point] = []
    for x, y in points:
        out.append((x, y))
        while len(out) >= 3:
            (x0, y0), (x1, y1), (x2, y2) = out[-3], out[-2], out[-1]
            if (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0):
                del out[-2]
            else:
                break
    return tuple(out)


@dataclass(frozen=True)
class PLElement(RieszElement):
    space: "PLSpace"
    points: tuple[Point, ...]

    def __call__(self, x: Fraction) -> Fraction:
        return self.space.eval_at(self, Fraction(x))


class PLSpace(RieszSpace):
    def __eq__(self, other: object) -> bool:
        return isinstance(other, PLSpace)

    def __hash__(self) -> int:
        return hash("pl")

    def __repr__(self) -> str:
        return "PLSpace()"

    # ----- construction ---------------------------------------------

    def element(self, points: Sequence[tuple[Fraction, Fraction]]) -> PLElement:
        pts = [(Fraction(x), Fraction(y)) for x, y in points]
        if not pts:
            raise ValueError("need at least one breakpoint")
        if pts[0][0] != 0 or pts[-1][0] != 1:
            raise ValueError("breakpoints must span [0, 1]")
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if not x0 < x1:
                raise ValueError("breakpoint abscissae must strictly increase")
        return PLElement(self, _canonical(pts))

    def constant(self, c: Fraction) -> PLElement:
        c = Fraction(c)
        return PLElement(self, ((Fraction(0), c), (Fraction(1), c)))

    def zero(self) -> PLElement:
        return self.constant(Fraction(0))

    def unit(self) -> PLElement:
        return self.constant(Fraction(1))

    # ----- evaluation helpers ---------------------------------------

    def eval_at(self, f: PLElement, x: Fraction) -> Fraction:
        pts = f.points
        if not 0 <= x <= 1:
            raise ValueError("argument outside [0, 1]")
        i = bisect_right(pts, x, key=lambda p: p[0]) - 1
        if i == len(pts) - 1:
            return pts[-1][1]
        (x0, y0), (x1, y1) = pts[i], pts[i + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def _walk(self, f: PLElement, g: PLElement) -> list[tuple[Fraction, Fraction, Fraction]]:
        """(x, f(x), g(x)) at every breakpoint of either, one linear pass."""
        fp, gp = f.points, g.points
        out: list[tuple[Fraction, Fraction, Fraction]] = []
        i = j = 0
        while i < len(fp) or j < len(gp):
            xf = fp[i][0] if i < len(fp) else None
            xg = gp[j][0] if j < len(gp) else None
            if xg is None or (xf is not None and xf <= xg):
                x = xf
            else:
                x = xg
            if i < len(fp) and fp[i][0] == x:
                fv = fp[i][1]
                i += 1
            else:
                (x0, y0), (x1, y1) = fp[i - 1], fp[i]
                fv = y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            if j < len(gp) and gp[j][0] == x:
                gv = gp[j][1]
                j += 1
            else:
                (x0, y0), (x1, y1) = gp[j - 1], gp[j]
                gv = y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            out.append((x, fv, gv))
        return out

    def _pointwise(self, f: PLElement, g: PLElement, op) -> PLElement:
        pts = [(x, op(fv, gv)) for x, fv, gv in self._walk(f, g)]
        return PLElement(self, _canonical(pts))

    # ----- primitive operations -------------------------------------

    def add(self, a: PLElement, b: PLElement) -> PLElement:
        return self._pointwise(a, b, lambda u, v: u + v)

    def scale(self, c: Fraction, a: PLElement) -> PLElement:
        c = Fraction(c)
        return PLElement(self, _canonical([(x, c * y) for x, y in a.points]))

    def negate(self, a: PLElement) -> PLElement:
        return PLElement(self, tuple((x, -y) for x, y in a.points))

    def join(self, a: PLElement, b: PLElement) -> PLElement:
        walk = self._walk(a, b)
        # insert the exact crossings of the two graphs, then take maxima
        pts: list[Point] = []
        for (x0, av0, bv0), (x1, av1, bv1) in zip(walk, walk[1:]):
            pts.append((x0, max(av0, bv0)))
            d0, d1 = av0 - bv0, av1 - bv1
            if (d0 > 0 > d1) or (d0 < 0 < d1):
                t = x0 + (x1 - x0) * d0 / (d0 - d1)
                pts.append((t, av0 + (av1 - av0) * (t - x0) / (x1 - x0)))
        xl, avl, bvl = walk[-1]
        pts.append((xl, max(avl, bvl)))
        return PLElement(self, _canonical(pts))

    def leq(self, a: PLElement, b: PLElement) -> bool:
        return all(av <= bv for _, av, bv in self._walk(a, b))

    def sup_cut(self, a: PLElement) -> LocatedCut:
        return LocatedCut.exact(max(y for _, y in a.points))

    def unit_bound(self, a: PLElement) -> int:
        m = max(y for _, y in a.points)
        if m <= 0:
            return 0
        return -((-m.numerator) // m.denominator)

    def dense_element(self, k: int) -> PLElement:
        res, rest = pair_index(k)
        pieces = res + 1
        ys = []
        for _ in range(pieces):
            i, rest = pair_index(rest)
            ys.append(rational_at(i))
        ys.append(rational_at(rest))
        xs = [Fraction(i, pieces) for i in range(pieces + 1)]
        return self.element(list(zip(xs, ys)))

    # ----- exact structure helpers ----------------------------------

    def positive_regions(self, f: PLElement) -> list[tuple[Fraction, Fraction]]:
        """Closed intervals whose union contains {x : f(x) > 0} exactly up
        to closure; consecutive regions are merged."""
        cuts = [p[0] for p in f.points]
        extra: list[Fraction] = []
        for (x0, y0), (x1, y1) in zip(f.points, f.points[1:]):
            if (y0 > 0 > y1) or (y0 < 0 < y1):
                extra.append(x0 + (x1 - x0) * y0 / (y0 - y1))
        xs = sorted(set(cuts) | set(extra))
        regions: list[tuple[Fraction, Fraction]] = []
        for x0, x1 in zip(xs, xs[1:]):
            mid = (x0 + x1) / 2
            if self.eval_at(f, mid) > 0:
                if regions and regions[-1][1] == x0:
                    regions[-1] = (regions[-1][0], x1)
                else:
                    regions.append((x0, x1))
        return regions

    def range_on(self, f: PLElement, u: Fraction, v: Fraction) -> tuple[Fraction, Fraction]:
        """Exact min and max of f over the closed interval [u, v]."""
        vals = [self.eval_at(f, u), self.eval_at(f, v)]
        vals.extend(y for x, y in f.points if u < x < v)
        return min(vals), max(vals)

    # ----- capability hooks -----------------------------------------

    def candidate_intervals(
        self,
        b: PLElement,
        grid: Sequence[RatInterval],
        context: Optional[PLElement] = None,
    ) -> list[int]:
        if context is None:
            regions = [(Fraction(0), Fraction(1))]
        else:
            regions = self.positive_regions(context)
        images = [self.range_on(b, u, v) for u, v in regions]
        out = []
        for k, iv in enumerate(grid):
            if any(iv.lo < ymax and ymin < iv.hi for ymin, ymax in images):
                out.append(k)
        return out

    def interval_sup_upper(self, b: PLElement, iv: RatInterval) -> Optional[Fraction]:
        mid = iv.midpoint
        best = max(min(y - iv.lo, iv.hi - y) for _, y in b.points)
        for (_, y0), (_, y1) in zip(b.points, b.points[1:]):
            if min(y0, y1) <= mid <= max(y0, y1):
                best = max(best, iv.width / 2)
                break
        return best if best > 0 else None

    def dominance_ceiling(self, x: PLElement, y: PLElement) -> Optional[int]:
        """Exact for positive piecewise linear functions.

        On a common refinement both are linear per segment, so the ratio
        x/y is monotone on each segment and its sup over the whole domain
        is attained at a breakpoint with y > 0 (segments touching a common
        zero carry a constant ratio).  Support failure at any breakpoint
        with y = 0 rules every multiple out.
        """
        ratio = Fraction(0)
        for _, xv, yv in self._walk(x, y):
            if yv <= 0:
                if xv > 0:
                    return None
                continue
            ratio = max(ratio, xv / yv)
        n = -((-ratio.numerator) // ratio.denominator)
        return max(1, n)
