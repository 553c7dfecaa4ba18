"""Multiplicative structure on the matrix instance.

The centerpiece is an iterative square root for positive semidefinite
members of a commuting algebra.  After scaling A by 4**-k so its norm is
at most one, the iteration

    B_0 = 0,    B_{n+1} = (I - A' + B_n * B_n) / 2

increases to I - sqrt(A').  It runs on coefficient vectors over the
algebra basis with all coefficients rounded down to a fixed dyadic grid,
so iterates stay exactly representable and below the true orbit; a
scalar majorant sequence r_{n+1} = (1 + r_n^2) / 2, rounded up and
capped at one, dominates every iterate.  Termination never trusts the
analysis: the result is accepted only when exact positive
semidefiniteness certificates pass, either

    residual mode:  |S*S - A| <= tol * I, or
    distance mode:  tol*S + A - S*S >= 0  and  (S + tol*I)^2 - A >= 0,

the latter pair certifying that S is within tol of the true square root
in operator norm (S*S - A <= tol*S forces S - sqrt(A) <= tol on each
joint eigenvalue, and (S + tol)^2 >= A forces sqrt(A) <= S + tol).

On top of the square root sit materialized absolute values, positive
parts, joins and meets, a sum of squares decomposition for elements
between 0 and 1, and a multiplicativity check for point evaluations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exact import RationalMatrix, psd_check, round_dyadic
from .instances.herm import CommutingAlgebra, HermElement, HermSpace
from .riesz import CertificateError, Rational, ToleranceError

__all__ = [
    "SqrtTrace",
    "SumOfSquares",
    "GelfandReport",
    "sqrt_psd",
    "abs_element",
    "pos_part",
    "abs_pos_join",
    "product_positive",
    "sum_of_squares",
    "gelfand_check",
]


def _pow2_geq(e: int, n: int, d: int) -> bool:
    """2**e >= n/d for positive integers n, d."""
    return (d << e) >= n if e >= 0 else d >= (n << -e)


def _ceil_log2(x: Fraction) -> int:
    """Smallest integer e with 2**e >= x > 0."""
    n, d = x.numerator, x.denominator
    e = n.bit_length() - d.bit_length() + 1
    while not _pow2_geq(e, n, d):  # pragma: no cover - start value suffices
        e += 1
    while _pow2_geq(e - 1, n, d):
        e -= 1
    return e


def _sqrt_upper(e: Fraction) -> Fraction:
    """A dyadic upper bound on sqrt(e) for e >= 0."""
    if e == 0:
        return Fraction(0)
    j = -(-_ceil_log2(e) // 2)
    return Fraction(1 << j) if j >= 0 else Fraction(1, 1 << -j)


@dataclass(frozen=True)
class SqrtTrace:
    """Audit data for one square root run.

    majorant holds r_0 .. r_{N+1}; every iterate B_n satisfies
    B_n <= r_n * I, and 2 * (r_{N+1} - r_N) * 4**scale_exp is the bound
    the scalar analysis alone would certify for the final residual.
    """

    scale_exp: int
    iterations: int
    majorant: tuple[Fraction, ...]
    majorant_bound: Fraction
    certified_residual: Fraction | None
    certified_distance: Fraction | None


def _check_schedule(n: int) -> bool:
    # powers of two and 3 * powers of two keep certificate checks sparse
    return n & (n - 1) == 0 or (n % 3 == 0 and (n // 3) & (n // 3 - 1) == 0)


def _sqrt_core(
    space: HermSpace,
    amat: RationalMatrix,
    tol: Fraction,
    mode: str,
    collect: list | None = None,
) -> tuple[RationalMatrix, SqrtTrace]:
    alg = space.algebra
    eye = RationalMatrix.identity(space.dim)
    if amat.is_zero():
        trace = SqrtTrace(0, 0, (Fraction(0), Fraction(1, 2)), Fraction(2), tol, tol)
        return RationalMatrix.zeros(space.dim), trace

    # smallest k with amat <= 4^k, decided exactly; keeps mu = 4^k with a
    # rational square root 2^k
    k = 0
    while not psd_check(eye.scale(Fraction(1 << (2 * k))) - amat):
        k += 1
    mu = Fraction(1 << (2 * k))
    coords = alg.coords_of(amat)
    assert coords is not None
    ap = [c / mu for c in coords]
    size = alg.size

    if mode == "residual":
        theta = tol / mu
        need = -(-16 * theta.denominator // theta.numerator)
        m = math.isqrt(need)
        if m * m < need:
            m += 1
        ncap = m + 2
    else:
        # distance certificates fire near n = 2^(k+1)/tol; double for the
        # dyadic rounding drag
        ncap = 2 * math.ceil(Fraction(2 << k, 1) / tol) + 16
    rho_unit = max(alg.basis_norm_sum, Fraction(1))
    grid = max(8, _ceil_log2(8 * ncap * rho_unit * (1 << k) / tol))
    g = Fraction(1, 1 << grid)
    rho_step = round_dyadic(g * rho_unit, grid, "up")

    def certified(smat: RationalMatrix) -> tuple[Fraction | None, Fraction | None]:
        if mode == "residual":
            resid = smat @ smat - amat
            shift = eye.scale(tol)
            if psd_check(shift - resid) and psd_check(shift + resid):
                return tol, None
            return None, None
        upper = smat.scale(tol) + amat - smat @ smat
        lowm = smat + eye.scale(tol)
        if psd_check(upper) and psd_check(lowm @ lowm - amat):
            return None, tol
        return None, None

    b = [Fraction(0)] * size
    rs = [Fraction(0)]
    n = 0
    smat = None
    res_bound = dist_bound = None
    while True:
        n += 1
        sq = alg.mult_coeffs(b, b)
        exact_next = [((1 if i == 0 else 0) - ap[i] + sq[i]) / 2 for i in range(size)]
        b = [round_dyadic(c, grid, "down") for c in exact_next]
        if b != exact_next:
            # recenter only when rounding moved something, so clean inputs
            # (integer spectra on the grid) come out exactly
            b[0] -= rho_step
        rs.append(min(Fraction(1), round_dyadic((1 + rs[-1] ** 2) / 2, grid, "up")))
        if collect is not None:
            collect.append((n, alg.mat_of(b), rs[-1]))
        majorant_fired = (
            mode == "residual" and len(rs) >= 2 and 2 * (rs[-1] - rs[-2]) * mu <= tol
        )
        if _check_schedule(n) or majorant_fired or n >= ncap:
            smat = alg.mat_of(
                [((1 if i == 0 else 0) - b[i]) * (1 << k) for i in range(size)]
            )
            res_bound, dist_bound = certified(smat)
            if res_bound is not None or dist_bound is not None:
                break
            if n >= ncap:
                raise CertificateError(
                    f"square root failed to certify within {ncap} iterations"
                )
    while len(rs) < n + 2:
        rs.append(min(Fraction(1), round_dyadic((1 + rs[-1] ** 2) / 2, grid, "up")))
    trace = SqrtTrace(
        scale_exp=k,
        iterations=n,
        majorant=tuple(rs[: n + 2]),
        majorant_bound=2 * (rs[n + 1] - rs[n]) * mu,
        certified_residual=res_bound,
        certified_distance=dist_bound,
    )
    return smat, trace


def _require_plain(a: HermElement) -> None:
    if a.formula is not None:
        raise TypeError("materialize lattice formulas before this operation")


def sqrt_psd(a: HermElement, tol: Rational) -> tuple[HermElement, SqrtTrace]:
    """Square root with a certified residual: |S*S - A| <= tol * I.

    The returned element's err additionally bounds the operator distance
    to the true square root, found by doubling the tolerance in the
    distance certificates until they pass.
    """
    _require_plain(a)
    space = a.space
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not psd_check(a.matrix):
        raise ValueError("matrix must be positive semidefinite")
    smat, trace = _sqrt_core(space, a.matrix, tol, "residual")
    eye = RationalMatrix.identity(space.dim)
    dist = None
    t = tol
    for _ in range(64):
        lowm = smat + eye.scale(t)
        if psd_check(smat.scale(t) + a.matrix - smat @ smat) and psd_check(
            lowm @ lowm - a.matrix
        ):
            dist = t
            break
        t *= 2
    if dist is None:  # pragma: no cover - large t always certifies
        raise CertificateError("no operator distance certificate found")
    trace = SqrtTrace(
        trace.scale_exp,
        trace.iterations,
        trace.majorant,
        trace.majorant_bound,
        trace.certified_residual,
        dist,
    )
    return HermElement(space, smat, dist + _sqrt_upper(a.err)), trace


def abs_element(a: HermElement, tol: Rational) -> HermElement:
    """Materialized absolute value: within tol of |a| in operator norm."""
    _require_plain(a)
    space = a.space
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    smat, _ = _sqrt_core(space, a.matrix @ a.matrix, tol, "distance")
    return HermElement(space, smat, a.err + tol)


def pos_part(a: HermElement, tol: Rational) -> HermElement:
    """Materialized positive part (a + |a|) / 2; err grows by tol / 2."""
    space = a.space
    return space.scale(Fraction(1, 2), space.add(a, abs_element(a, tol)))


def abs_pos_join(
    kind: str,
    a: HermElement,
    b: HermElement | None = None,
    tol: Rational | None = None,
) -> HermElement:
    """Dispatch materialized lattice operations by name."""
    space = a.space
    tol = Fraction(tol if tol is not None else space.lattice_tol)
    if kind == "abs":
        return abs_element(a, tol)
    if kind == "pos":
        return pos_part(a, tol)
    if kind in ("join", "meet"):
        if b is None:
            raise ValueError(f"{kind} needs two elements")
        node = space.join(a, b) if kind == "join" else space.meet(a, b)
        return space.materialize(node, tol)
    raise ValueError(f"unknown lattice operation {kind!r}")


def product_positive(a: HermElement, b: HermElement) -> bool:
    """Exact check that the product of two positive elements is positive."""
    _require_plain(a)
    _require_plain(b)
    if a.err or b.err:
        raise ToleranceError("product positivity needs err free operands")
    if not (psd_check(a.matrix) and psd_check(b.matrix)):
        raise ValueError("operands must be positive semidefinite")
    return psd_check(a.matrix @ b.matrix)


@dataclass(frozen=True)
class SumOfSquares:
    """A = sum of parts[i]**2 + remainder with |remainder| <= bound."""

    parts: tuple[HermElement, ...]
    remainder: HermElement
    steps: int
    bound: Fraction


def sum_of_squares(a: HermElement, tol: Rational, max_iter: int = 64) -> SumOfSquares:
    """Decompose 0 <= a <= 1 into squares by iterating M -> M - M*M.

    Each pass peels off one square exactly; the loop stops as soon as the
    remainder is certified at most tol.  Iterate entries square at every
    step, so callers should keep tolerances modest (the remainder norm
    shrinks roughly like 1/n).
    """
    _require_plain(a)
    if a.err:
        raise ToleranceError("sum of squares needs an err free element")
    space = a.space
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    eye = RationalMatrix.identity(space.dim)
    if not psd_check(a.matrix):
        raise ValueError("element must be positive semidefinite")
    if not psd_check(eye - a.matrix):
        raise ValueError("element must be at most the unit")
    parts: list[RationalMatrix] = []
    m = a.matrix
    done = False
    for _ in range(max_iter):
        if psd_check(eye.scale(tol) - m):
            done = True
            break
        parts.append(m)
        m = m - m @ m
    if not done and not psd_check(eye.scale(tol) - m):
        raise ToleranceError(f"remainder above {tol} after {max_iter} iterations")
    total = RationalMatrix.zeros(space.dim)
    for p in parts:
        total = total + p @ p
    if total + m != a.matrix:  # pragma: no cover - identity holds by construction
        raise CertificateError("sum of squares identity failed")
    bound = tol
    if parts:
        # the iterates also obey the a priori rate |remainder|^2 <= 1/n
        bound = min(bound, _sqrt_upper(Fraction(1, len(parts))))
    return SumOfSquares(
        parts=tuple(HermElement(space, p, Fraction(0)) for p in parts),
        remainder=HermElement(space, m, Fraction(0)),
        steps=len(parts),
        bound=bound,
    )


@dataclass(frozen=True)
class GelfandReport:
    """Outcome of the multiplicativity audit over an element family."""

    pairs: int
    key_inequality_failures: tuple[tuple[int, int, Fraction], ...]
    points: int
    max_defect: Fraction
    defect_bound: Fraction
    ok: bool


def gelfand_check(
    space: HermSpace,
    elements: Sequence[HermElement],
    eps: Rational,
    ratios: Sequence[Rational] = (Fraction(1, 2), Fraction(1, 4)),
) -> GelfandReport:
    """Audit that point evaluations respect products.

    Two independent obligations: the exact lattice inequality

        (a - r) ^ + /\\ b ^ + <= (1 / r) * (a b) ^ +      for r > 0

    which ties positive parts of factors to the positive part of the
    product, and near multiplicativity of evaluations on an eps net:
    |ev(ab) - ev(a) ev(b)| <= 2 * eps * (1 + |a| + |b|), where |.| is the
    unit norm bound.  Evaluations are eps accurate readings of a true
    representation, which is exactly multiplicative; one eps is spent on
    ev(ab) and the rest scales with the factor norms, giving the stated
    constant 2 for eps <= 1.
    """
    from .spectrum import epsilon_net

    eps = Fraction(eps)
    for e in elements:
        _require_plain(e)
        if e.err:
            raise ToleranceError("multiplicativity audit needs err free elements")
    zero = space.zero()
    unit = space.unit()

    def pos(x: HermElement) -> HermElement:
        return space.join(x, zero)

    failures: list[tuple[int, int, Fraction]] = []
    npairs = 0
    for i, j in combinations(range(len(elements)), 2):
        a, b = elements[i], elements[j]
        prod = space.multiply(a, b)
        for r in ratios:
            r = Fraction(r)
            npairs += 1
            lhs = space.meet(pos(space.add(a, space.scale(-r, unit))), pos(b))
            rhs = space.scale(1 / r, pos(prod))
            if space.leq(lhs, rhs) is not True:
                failures.append((i, j, r))

    family: list[HermElement] = list(elements)
    prods: dict[tuple[int, int], int] = {}
    for i, j in combinations(range(len(elements)), 2):
        family.append(space.multiply(elements[i], elements[j]))
        prods[(i, j)] = len(family) - 1
    net = epsilon_net(space, family, eps)
    max_defect = Fraction(0)
    bound = Fraction(0)
    for i, j in combinations(range(len(elements)), 2):
        a, b = elements[i], elements[j]
        na = Fraction(max(space.unit_bound(a), space.unit_bound(space.negate(a))))
        nb = Fraction(max(space.unit_bound(b), space.unit_bound(space.negate(b))))
        bound = max(bound, 2 * eps * (1 + na + nb))
        prod = family[prods[(i, j)]]
        for pt in net.points:
            va = pt.eval(a, eps / 4)
            vb = pt.eval(b, eps / 4)
            vab = pt.eval(prod, eps / 4)
            max_defect = max(max_defect, abs(vab - va * vb))
    ok = not failures and max_defect <= bound
    return GelfandReport(
        pairs=npairs,
        key_inequality_failures=tuple(failures),
        points=len(net.points),
        max_defect=max_defect,
        defect_bound=bound,
        ok=ok,
    )
