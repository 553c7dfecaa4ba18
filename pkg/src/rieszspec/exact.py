"""Exact rational substrate: intervals, dyadic rounding, and symmetric matrices.

Everything in this module is float free.  Rationals are stdlib ``Fraction``
values (arbitrary precision, canonical lowest terms, positive denominator),
matrices are immutable tuples of tuples, and every decision procedure is an
exact computation.  The positive semidefinite test is the single trusted
primitive that the rest of the package reduces order questions to.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "parse_rational",
    "format_rational",
    "round_dyadic",
    "RatInterval",
    "interval_combine",
    "interval_distance",
    "interval_grid",
    "interval_grid_window",
    "RationalMatrix",
    "psd_check",
    "char_poly",
    "kernel_basis",
    "invert",
]


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``.  Decimal notation is rejected on purpose."""
    s = text.strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"rational expected in p/q form, got {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r}") from exc


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def round_dyadic(q: Fraction, k: int, mode: str = "down") -> Fraction:
    """Round to the dyadic grid 2**-k, toward -inf ("down") or +inf ("up")."""
    if k < 0:
        raise ValueError("grid exponent must be nonnegative")
    scaled = Fraction(q) * (1 << k)
    if mode == "down":
        n = scaled.numerator // scaled.denominator
    elif mode == "up":
        n = -((-scaled.numerator) // scaled.denominator)
    else:
        raise ValueError(f"mode must be 'down' or 'up', got {mode!r}")
    return Fraction(n, 1 << k)


@dataclass(frozen=True)
class RatInterval:
    """Open interval (lo, hi) with rational endpoints, lo < hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def intersects(self, other: "RatInterval") -> bool:
        return self.lo < other.hi and other.lo < self.hi

    def __repr__(self) -> str:
        return f"({self.lo}, {self.hi})"


def interval_combine(i: RatInterval, j: RatInterval, mode: str) -> RatInterval:
    """Endpointwise sum or join of open intervals."""
    if mode == "sum":
        return RatInterval(i.lo + j.lo, i.hi + j.hi)
    if mode == "join":
        return RatInterval(max(i.lo, j.lo), max(i.hi, j.hi))
    raise ValueError(f"mode must be 'sum' or 'join', got {mode!r}")


def interval_distance(i: RatInterval, j: RatInterval) -> Fraction:
    """Gap between two open intervals; 0 exactly when they overlap."""
    return max(j.lo - i.hi, i.lo - j.hi, Fraction(0))


def interval_grid(p: Fraction, q: Fraction, width: Fraction) -> list[RatInterval]:
    """Overlapping cover of (p, q) by width intervals stepping by width/2.

    Interval k starts at p + k*width/2; the last ones are truncated at q.
    Consecutive intervals overlap by width/2, so every value of (p, q) sits
    at depth >= width/4 inside some interval, except within width/4 of the
    two outer endpoints.
    """
    p, q, width = Fraction(p), Fraction(q), Fraction(width)
    if not p < q:
        raise ValueError("need p < q")
    if width <= 0:
        raise ValueError("need positive width")
    out: list[RatInterval] = []
    k = 0
    half = width / 2
    while p + k * half < q and (k == 0 or p + k * half + half < q):
        lo = p + k * half
        out.append(RatInterval(lo, min(lo + width, q)))
        k += 1
    return out


def interval_grid_window(
    p: Fraction,
    q: Fraction,
    width: Fraction,
    wlo: Fraction,
    whi: Fraction,
) -> list[tuple[int, RatInterval]]:
    """The (index, cell) pairs of ``interval_grid(p, q, width)`` meeting (wlo, whi).

    Indices match the full grid, so callers that resolve ties by index see
    the same winners; only cells outside the window are never built.
    """
    p, q, width = Fraction(p), Fraction(q), Fraction(width)
    wlo, whi = Fraction(wlo), Fraction(whi)
    if not p < q:
        raise ValueError("need p < q")
    if width <= 0:
        raise ValueError("need positive width")
    half = width / 2
    # cell k covers (p + k*half, p + k*half + width); overlap needs lo < whi
    # and wlo < hi, so start two steps before the window and stop at whi
    start = int((wlo - p - width) / half) if wlo > p + width else 0
    out: list[tuple[int, RatInterval]] = []
    k = max(0, start)
    while p + k * half < q and (k == 0 or p + k * half + half < q):
        lo = p + k * half
        if lo >= whi:
            break
        iv = RatInterval(lo, min(lo + width, q))
        if wlo < iv.hi:
            out.append((k, iv))
        k += 1
    return out


def _as_fraction_rows(rows: Iterable[Iterable[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable square matrix with exact rational entries."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        if n == 0:
            raise ValueError("empty matrix")
        if any(len(row) != n for row in self.entries):
            raise ValueError("matrix must be square")

    def __hash__(self) -> int:
        # entry hashing is the hot path in caches keyed by matrices
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.entries)
            object.__setattr__(self, "_hash", h)
        return h

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Fraction]]) -> "RationalMatrix":
        return cls(_as_fraction_rows(rows))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, n: int) -> "RationalMatrix":
        zero = Fraction(0)
        return cls(tuple(tuple(zero for _ in range(n)) for _ in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[Fraction]) -> "RationalMatrix":
        vals = [Fraction(v) for v in values]
        zero = Fraction(0)
        n = len(vals)
        return cls(tuple(tuple(vals[i] if i == j else zero for j in range(n)) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def get(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_dim(other)
        return RationalMatrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_dim(other)
        return RationalMatrix(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(tuple(tuple(-a for a in row) for row in self.entries))

    def scale(self, c: Fraction) -> "RationalMatrix":
        c = Fraction(c)
        return RationalMatrix(tuple(tuple(c * a for a in row) for row in self.entries))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_dim(other)
        n = self.dim
        cols = tuple(tuple(other.entries[k][j] for k in range(n)) for j in range(n))
        return RationalMatrix(
            tuple(
                tuple(sum(row[k] * col[k] for k in range(n)) for col in cols)
                for row in self.entries
            )
        )

    def transpose(self) -> "RationalMatrix":
        n = self.dim
        return RationalMatrix(tuple(tuple(self.entries[j][i] for j in range(n)) for i in range(n)))

    def trace(self) -> Fraction:
        return sum((self.entries[i][i] for i in range(self.dim)), Fraction(0))

    def is_symmetric(self) -> bool:
        n = self.dim
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i))

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.entries for v in row)

    def commutator(self, other: "RationalMatrix") -> "RationalMatrix":
        return self @ other - other @ self

    def commutes_with(self, other: "RationalMatrix") -> bool:
        return self.commutator(other).is_zero()

    def row_sum_bound(self) -> Fraction:
        """Max absolute row sum; an upper bound for the operator norm."""
        return max(sum((abs(v) for v in row), Fraction(0)) for row in self.entries)

    def _check_dim(self, other: "RationalMatrix") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch {self.dim} vs {other.dim}")

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "entries": [[format_rational(v) for v in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RationalMatrix":
        rows = [[parse_rational(v) for v in row] for row in obj["entries"]]
        mat = cls.from_rows(rows)
        if mat.dim != int(obj["dim"]):
            raise ValueError("matrix dim field disagrees with entries")
        return mat


def psd_check(m: RationalMatrix) -> bool:
    """Exact positive semidefiniteness for a symmetric rational matrix.

    Symmetric Gaussian elimination: pick a strictly positive pivot on the
    diagonal and eliminate its row and column; a matrix with no positive
    diagonal left is positive semidefinite iff it is zero.  Any negative
    diagonal entry, or a zero diagonal entry with a nonzero residual row,
    witnesses a direction of negativity.  Non symmetric input is rejected.
    """
    if not m.is_symmetric():
        raise ValueError("psd_check requires a symmetric matrix")
    a = [list(row) for row in m.entries]
    active = list(range(m.dim))
    while active:
        if any(a[i][i] < 0 for i in active):
            return False
        pivots = [i for i in active if a[i][i] > 0]
        if not pivots:
            # all remaining diagonal entries are zero
            return all(a[i][j] == 0 for i in active for j in active)
        p = pivots[0]
        d = a[p][p]
        rest = [i for i in active if i != p]
        for i in rest:
            f = a[i][p] / d
            if f:
                row_i, row_p = a[i], a[p]
                for j in rest:
                    row_i[j] -= f * row_p[j]
        active = rest
    return True


def char_poly(m: RationalMatrix) -> tuple[Fraction, ...]:
    """Monic characteristic polynomial det(x*I - m), coefficients ascending.

    Faddeev-LeVerrier recurrence; exact rational throughout.
    """
    n = m.dim
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = RationalMatrix.identity(n)
    for k in range(1, n + 1):
        am = m @ mk
        c = -am.trace() / k
        coeffs[n - k] = c
        mk = am + RationalMatrix.identity(n).scale(c)
    return tuple(coeffs)


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def kernel_basis(m: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the null space of m, exact."""
    n = m.dim
    rows, pivots = _rref([list(row) for row in m.entries])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][fc]
        basis.append(tuple(vec))
    return basis


def invert(m: RationalMatrix) -> RationalMatrix:
    """Exact inverse via Gauss-Jordan; raises ValueError when singular."""
    n = m.dim
    aug = [list(row) + [Fraction(1) if i == j else Fraction(0) for j in range(n)] for i, row in enumerate(m.entries)]
    rows, pivots = _rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return RationalMatrix.from_rows([row[n:] for row in rows])
