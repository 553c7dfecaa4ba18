"""Seeded generators for test data across all three instances.

Everything here is driven by a caller supplied ``random.Random`` so runs
are reproducible from a single integer seed.  The matrix builders only
ever produce families that commute exactly: a rational orthogonal frame
is drawn once (Cayley transform of a skew matrix) and every family
member is that frame conjugating a diagonal.  When the diagonals are
squares the exact square root of each member is available in closed
form, which downstream checks use as an oracle.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .exact import RationalMatrix, invert
from .instances.pl import PLElement, PLSpace
from .instances.qn import QnElement, QnSpace

__all__ = [
    "rand_rational",
    "rand_qn",
    "rand_pl",
    "rand_orthogonal",
    "rand_diagonal_family",
    "CommutingFamily",
]


def rand_rational(
    rng: random.Random,
    max_num: int = 8,
    max_den: int = 8,
    nonneg: bool = False,
) -> Fraction:
    num = rng.randint(0 if nonneg else -max_num, max_num)
    return Fraction(num, rng.randint(1, max_den))


def rand_qn(space: QnSpace, rng: random.Random, max_num: int = 8) -> QnElement:
    return space.element([rand_rational(rng, max_num) for _ in range(space.n)])


def rand_pl(
    space: PLSpace,
    rng: random.Random,
    max_breaks: int = 12,
    max_num: int = 8,
) -> PLElement:
    """Piecewise linear element with distinct rational interior knots."""
    inner = rng.randint(0, max(0, max_breaks - 2))
    xs = {Fraction(0), Fraction(1)}
    while len(xs) < inner + 2:
        xs.add(Fraction(rng.randint(1, 31), 32))
    points = [(x, rand_rational(rng, max_num)) for x in sorted(xs)]
    return space.element(points)


def rand_orthogonal(rng: random.Random, dim: int, max_den: int = 3) -> RationalMatrix:
    """Rational orthogonal matrix via the Cayley transform of a skew S.

    (I - S)(I + S)^-1 is orthogonal for any skew S, and I + S is always
    invertible since S has purely imaginary eigenvalues.
    """
    rows = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            v = Fraction(rng.randint(-2, 2), rng.randint(1, max_den))
            rows[i][j] = v
            rows[j][i] = -v
    s = RationalMatrix.from_rows(rows)
    eye = RationalMatrix.identity(dim)
    return (eye - s) @ invert(eye + s)


class CommutingFamily:
    """Commuting symmetric matrices sharing one rational eigenframe.

    members[k] = frame @ diag(eigs[k]) @ frame^T, all exact.  sqrt_of
    gives the true square root of a member whose eigenvalues are listed
    as exact squares, for use as an oracle.
    """

    def __init__(self, frame: RationalMatrix, eigs: Sequence[Sequence[Fraction]]):
        self.frame = frame
        self.frame_t = frame.transpose()
        self.eigs = [tuple(Fraction(v) for v in row) for row in eigs]
        self.members = [self._conj(row) for row in self.eigs]

    def _conj(self, diag: Sequence[Fraction]) -> RationalMatrix:
        return self.frame @ RationalMatrix.diagonal(list(diag)) @ self.frame_t

    def sqrt_of(self, k: int, roots: Sequence[Fraction]) -> RationalMatrix:
        """Exact sqrt of member k from caller supplied eigenvalue roots."""
        vals = [Fraction(r) for r in roots]
        if [v * v for v in vals] != list(self.eigs[k]):
            raise ValueError("roots do not square to the member's eigenvalues")
        return self._conj(vals)


def rand_diagonal_family(
    rng: random.Random,
    dim: int,
    count: int,
    palette: Sequence[Fraction] | None = None,
) -> CommutingFamily:
    """Draw a frame and ``count`` spectra from a palette of eigenvalues.

    The default palette keeps every eigenvalue a square of a rational
    at least 1/2, so members are positive definite with spectrum bounded
    away from zero and their square roots are exactly representable.
    """
    if palette is None:
        palette = [
            Fraction(1, 4), Fraction(1), Fraction(9, 4),
            Fraction(4), Fraction(25, 4),
        ]
    frame = rand_orthogonal(rng, dim)
    eigs = [[palette[rng.randrange(len(palette))] for _ in range(dim)]
            for _ in range(count)]
    return CommutingFamily(frame, eigs)
