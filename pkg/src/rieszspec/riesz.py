"""Core contract for ordered vector lattices with a strong unit.

A space object carries the operation set (linear structure, join, order
test, suprema as located cuts, integer unit bounds); element objects are
immutable value carriers that delegate to their space.  The order test is
three valued: ``True`` and ``False`` are certified answers, ``None`` means
unknown at the current tolerance and is only ever produced by instances
that track an error radius.  Exact instances never return ``None``.

Derived operations (meet, positive and negative parts, interval elements,
the norm cut) are expressed through the primitive set here, so every
instance gets them for free and can override individual ones when it has a
cheaper exact route.
"""
from __future__ import annotations

import itertools
import threading
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .exact import RatInterval, Rational

__all__ = [
    "Rational",
    "SpaceMismatchError",
    "ToleranceError",
    "MarginCollapseError",
    "CertificateError",
    "LocatedCut",
    "RieszSpace",
    "RieszElement",
    "meet",
    "decompose",
    "in_interval",
    "norm_cut",
    "unit_bound",
]


class SpaceMismatchError(ValueError):
    """Operands live in different spaces."""


class ToleranceError(RuntimeError):
    """A certified answer is not available at the requested tolerance."""


class MarginCollapseError(RuntimeError):
    """A positivity margin could not be maintained during refinement."""


class CertificateError(RuntimeError):
    """A required certificate could not be produced or fails to verify."""


class LocatedCut:
    """Upper cut of a real value, queried through one sided approximations.

    ``approx(eps)`` returns a rational s with  s - eps < value <= s.  The
    best bounds seen so far are cached behind a lock, so repeated queries
    refine monotonically: a later, finer answer never contradicts an
    earlier one by more than the earlier tolerance.
    """

    def __init__(self, fn: Callable[[Fraction], Fraction]):
        self._fn = fn
        self._lock = threading.Lock()
        self._upper: Optional[Fraction] = None
        self._lower: Optional[Fraction] = None  # certified strict lower bound

    @classmethod
    def exact(cls, value: Fraction) -> "LocatedCut":
        v = Fraction(value)
        return cls(lambda eps: v)

    def approx(self, eps: Fraction) -> Fraction:
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("tolerance must be positive")
        with self._lock:
            if (
                self._upper is not None
                and self._lower is not None
                and self._upper - self._lower <= eps
            ):
                return self._upper
            s = self._fn(eps)
            upper = s if self._upper is None else min(s, self._upper)
            lower = s - eps if self._lower is None else max(s - eps, self._lower)
            self._upper, self._lower = upper, lower
            return upper

    def lower_witness(self, eps: Fraction) -> Fraction:
        """Certified strict lower bound at tolerance eps."""
        return self.approx(eps) - Fraction(eps)


class RieszElement:
    """Base for concrete element types; arithmetic delegates to the space."""

    space: "RieszSpace"

    def _require_same_space(self, other: "RieszElement") -> None:
        if self.space != other.space:
            raise SpaceMismatchError(
                f"elements from {self.space!r} and {other.space!r} cannot be combined"
            )

    def __add__(self, other: "RieszElement") -> "RieszElement":
        self._require_same_space(other)
        return self.space.add(self, other)

    def __sub__(self, other: "RieszElement") -> "RieszElement":
        self._require_same_space(other)
        return self.space.add(self, self.space.negate(other))

    def __neg__(self) -> "RieszElement":
        return self.space.negate(self)

    def __mul__(self, c: Fraction) -> "RieszElement":
        return self.space.scale(Fraction(c), self)

    __rmul__ = __mul__

    def join(self, other: "RieszElement") -> "RieszElement":
        self._require_same_space(other)
        return self.space.join(self, other)

    def meet(self, other: "RieszElement") -> "RieszElement":
        self._require_same_space(other)
        return self.space.meet(self, other)

    def leq(self, other: "RieszElement") -> Optional[bool]:
        self._require_same_space(other)
        return self.space.leq(self, other)


class RieszSpace(ABC):
    """Operation set for an ordered vector lattice with strong unit."""

    # ----- primitive operations -------------------------------------

    @abstractmethod
    def zero(self) -> RieszElement: ...

    @abstractmethod
    def unit(self) -> RieszElement: ...

    @abstractmethod
    def add(self, a: RieszElement, b: RieszElement) -> RieszElement: ...

    @abstractmethod
    def scale(self, c: Fraction, a: RieszElement) -> RieszElement: ...

    @abstractmethod
    def negate(self, a: RieszElement) -> RieszElement: ...

    @abstractmethod
    def join(self, a: RieszElement, b: RieszElement) -> RieszElement: ...

    @abstractmethod
    def leq(self, a: RieszElement, b: RieszElement) -> Optional[bool]:
        """Three valued order test; None means unknown at tolerance."""

    @abstractmethod
    def sup_cut(self, a: RieszElement) -> LocatedCut:
        """Located cut for the supremum of a against the unit scale."""

    @abstractmethod
    def unit_bound(self, a: RieszElement) -> int:
        """Nonnegative integer n with a <= n * unit, minimal up to +1 slack."""

    # ----- derived operations, overridable --------------------------

    def meet(self, a: RieszElement, b: RieszElement) -> RieszElement:
        return self.negate(self.join(self.negate(a), self.negate(b)))

    def in_interval(self, a: RieszElement, p: Fraction, q: Fraction) -> RieszElement:
        """(a - p*1) meet (q*1 - a); positive exactly where a sits in (p, q)."""
        p, q = Fraction(p), Fraction(q)
        if not p < q:
            raise ValueError("in_interval needs p < q")
        pu = self.scale(p, self.unit())
        qu = self.scale(q, self.unit())
        return self.meet(self.add(a, self.negate(pu)), self.add(qu, self.negate(a)))

    def dense_element(self, k: int) -> RieszElement:
        """k-th element of a fixed sequence dense in the unit ball."""
        raise NotImplementedError(f"{type(self).__name__} does not enumerate a dense sequence")

    # ----- capability hooks used by search routines ------------------

    def candidate_intervals(
        self,
        b: RieszElement,
        grid: Sequence[RatInterval],
        context: Optional[RieszElement] = None,
    ) -> list[int]:
        """Sound superset of the grid cells where b can take a value.

        Returned indices must include every k with sup(context /\\ (b in
        I_k)) > 0; the default keeps everything.
        """
        return list(range(len(grid)))

    def interval_sup_upper(
        self, b: RieszElement, iv: RatInterval
    ) -> Optional[Fraction]:
        """Upper bound for sup of the interval element of b over iv.

        None certifies that the sup is <= 0.  The default bound is the
        half width, which is always sound.
        """
        return iv.width / 2

    def dominance_ceiling(self, x: RieszElement, y: RieszElement) -> Optional[int]:
        """For positive x, y: an integer N with x <= N*y when some multiple
        works, or None when provably no multiple works.

        Instances with exact order implement this; error tracked instances
        may raise ToleranceError.
        """
        raise NotImplementedError


# ----- free functions over the contract ------------------------------


def meet(a: RieszElement, b: RieszElement) -> RieszElement:
    return a.meet(b)


def decompose(a: RieszElement) -> tuple[RieszElement, RieszElement, RieszElement]:
    """Positive part, negative part, absolute value of a."""
    sp = a.space
    zero = sp.zero()
    pos = sp.join(a, zero)
    neg = sp.join(sp.negate(a), zero)
    return pos, neg, sp.add(pos, neg)


def in_interval(a: RieszElement, p: Fraction, q: Fraction) -> RieszElement:
    return a.space.in_interval(a, p, q)


def norm_cut(a: RieszElement) -> LocatedCut:
    """Located cut of sup |a| = max(sup a, sup -a); no lattice op needed."""
    sp = a.space
    ca = sp.sup_cut(a)
    cn = sp.sup_cut(sp.negate(a))
    return LocatedCut(lambda eps: max(ca.approx(eps), cn.approx(eps)))


def unit_bound(a: RieszElement) -> int:
    return a.space.unit_bound(a)


# ----- shared helpers ------------------------------------------------


def pair_index(k: int) -> tuple[int, int]:
    """Cantor style unpairing of a nonnegative integer, deterministic."""
    if k < 0:
        raise ValueError("index must be nonnegative")
    # diagonal d with d(d+1)/2 <= k
    d = 0
    while (d + 1) * (d + 2) // 2 <= k:
        d += 1
    off = k - d * (d + 1) // 2
    return off, d - off


def integer_at(k: int) -> int:
    """0, 1, -1, 2, -2, ... enumeration of the integers."""
    if k == 0:
        return 0
    half, odd = divmod(k + 1, 2)
    return half if odd else -half


def rational_at(k: int) -> Fraction:
    """Fixed enumeration of the rationals, dense, no repetition guarantees."""
    i, j = pair_index(k)
    return Fraction(integer_at(i), j + 1)
