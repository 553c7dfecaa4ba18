"""Commuting symmetric rational matrices as an ordered vector space.

A :class:`CommutingAlgebra` closes a family of pairwise commuting
symmetric matrices under products and keeps an exact basis.  Because the
algebra is commutative and semisimple it is a product of evaluation
characters: every member is simultaneously diagonalized, and each joint
eigenvalue assigns a real algebraic number to every member.  We expose
those characters exactly.  A separating member g is found whose minimal
polynomial has degree equal to the algebra dimension; each character j
corresponds to one real root gamma_j, isolated by Sturm sequences, and
the value of any member b at character j is q_b(gamma_j) for a rational
polynomial q_b obtained by rewriting b in the power basis of g.

Order facts (is b - a positive semidefinite, suprema of spectra, how far
an element sits inside an interval) then reduce to exact sign tests and
refinable rational enclosures of polynomial values at isolated roots.

Elements carry an error radius ``err``: the element stands for anything
within operator distance err of the stored matrix, and every certified
answer is required to hold for the whole ball.  Lattice expressions
(join, meet, interval depth) are kept as formulas evaluated through the
characters, which makes them exact; :meth:`HermSpace.materialize` turns
a formula back into a single matrix with a certified error radius via
the square root construction.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..exact import RationalMatrix, RatInterval, invert, psd_check
from ..polyroots import (
    Poly,
    count_roots,
    isolate_real_roots,
    poly_add,
    poly_eval,
    poly_eval_interval,
    poly_gcd,
    poly_normalize,
    poly_scale,
    poly_sub,
    refine_root,
    sturm_chain,
)
from ..riesz import (
    LocatedCut,
    Rational,
    RieszElement,
    RieszSpace,
    SpaceMismatchError,
    ToleranceError,
    pair_index,
    rational_at,
)

__all__ = ["CommutingAlgebra", "HermElement", "HermSpace"]


class _ErrTainted(Exception):
    """Internal: a formula rests on elements with nonzero err."""


def _as_matrix(m: RationalMatrix | Sequence[Sequence[object]]) -> RationalMatrix:
    if isinstance(m, RationalMatrix):
        return m
    return RationalMatrix.from_rows(m)


class CommutingAlgebra:
    """Unital algebra generated by commuting symmetric rational matrices."""

    def __init__(
        self,
        generators: Iterable[RationalMatrix | Sequence[Sequence[object]]] = (),
        dim: int | None = None,
    ) -> None:
        gens = tuple(_as_matrix(g) for g in generators)
        if gens:
            dim = gens[0].dim
        elif dim is None:
            dim = 1
        self.dim = dim
        for i, g in enumerate(gens):
            if g.dim != dim:
                raise ValueError(f"generator {i} has dimension {g.dim}, expected {dim}")
            if not g.is_symmetric():
                raise ValueError(f"generator {i} is not symmetric")
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                c = gens[i].commutator(gens[j])
                if not c.is_zero():
                    r, s = next(
                        (r, s)
                        for r in range(dim)
                        for s in range(dim)
                        if c.entries[r][s] != 0
                    )
                    raise ValueError(
                        f"generators {i} and {j} fail to commute: "
                        f"commutator entry ({r},{s}) = {c.entries[r][s]}"
                    )
        self.generators = gens

        # Echelon basis of the span, closed under products.  Rows are the
        # flattened basis matrices reduced in insertion order, so later
        # rows vanish at the pivots of earlier ones.
        self._rows: list[tuple[list[Fraction], int]] = []
        self._basis: list[RationalMatrix] = []
        self._insert(RationalMatrix.identity(dim))
        for g in gens:
            self._insert(g)
        queue = list(self._basis[1:])
        while queue:
            m = queue.pop(0)
            for g in gens:
                if self._insert(m @ g):
                    queue.append(self._basis[-1])
        self.size = len(self._basis)
        self.basis_norm_sum: Fraction = sum(
            (e.row_sum_bound() for e in self._basis), Fraction(0)
        )

        # Multiplication table in basis coordinates.
        self._table: dict[tuple[int, int], tuple[Fraction, ...]] = {}
        for i in range(self.size):
            for j in range(i, self.size):
                coords = self.coords_of(self._basis[i] @ self._basis[j])
                if coords is None:
                    raise ValueError("algebra closure failed to capture a product")
                self._table[(i, j)] = coords

        self._lock = threading.Lock()
        self._vpoly: dict[RationalMatrix, Poly] = {}
        self._cmp_cache: dict[tuple[Poly, Fraction, int], int] = {}
        self._init_characters()

    # -- linear structure ------------------------------------------------

    def _insert(self, m: RationalMatrix) -> bool:
        vec = [c for row in m.entries for c in row]
        for rvec, piv in self._rows:
            f = vec[piv]
            if f:
                for k in range(len(vec)):
                    vec[k] -= f * rvec[k]
        piv = next((k for k, v in enumerate(vec) if v), None)
        if piv is None:
            return False
        inv = 1 / vec[piv]
        vec = [v * inv for v in vec]
        self._rows.append((vec, piv))
        d = self.dim
        self._basis.append(
            RationalMatrix.from_rows([vec[r * d : (r + 1) * d] for r in range(d)])
        )
        return True

    def coords_of(self, m: RationalMatrix) -> tuple[Fraction, ...] | None:
        """Coordinates of m in the reduced basis, or None if outside the span."""
        vec = [c for row in m.entries for c in row]
        coords: list[Fraction] = []
        for rvec, piv in self._rows:
            f = vec[piv]
            coords.append(f)
            if f:
                for k in range(len(vec)):
                    vec[k] -= f * rvec[k]
        if any(vec):
            return None
        return tuple(coords)

    def mat_of(self, coords: Sequence[Rational]) -> RationalMatrix:
        out = RationalMatrix.zeros(self.dim)
        for c, e in zip(coords, self._basis):
            if c:
                out = out + e.scale(Fraction(c))
        return out

    def mult_coeffs(
        self, a: Sequence[Fraction], b: Sequence[Fraction]
    ) -> tuple[Fraction, ...]:
        """Coordinates of the product of two members given in coordinates."""
        out = [Fraction(0)] * self.size
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                if not cb:
                    continue
                t = self._table[(i, j) if i <= j else (j, i)]
                f = ca * cb
                for k, ck in enumerate(t):
                    if ck:
                        out[k] += f * ck
        return tuple(out)

    # -- characters ------------------------------------------------------

    def _init_characters(self) -> None:
        s = self.size
        sep = None
        for t in range(64):
            w = Fraction(1)
            cand = RationalMatrix.zeros(self.dim)
            for e in self._basis:
                cand = cand + e.scale(w)
                w *= t + 1
            mp = self._minpoly_of(cand)
            if len(mp) - 1 == s:
                sep = cand
                self._minpoly = mp
                break
        if sep is None:  # pragma: no cover - generic weights always separate
            raise ValueError("no separating combination found in the algebra")
        self._sep = sep
        roots = isolate_real_roots(self._minpoly)
        if len(roots) != s:  # pragma: no cover - spectra here are always real
            raise ValueError("separating member has unexpected complex spectrum")
        self._roots: list[list[Fraction]] = [[lo, hi] for lo, hi in roots]

        # Power basis change: coordinates -> polynomial in the separating member.
        power = RationalMatrix.identity(self.dim)
        cols = []
        for _ in range(s):
            c = self.coords_of(power)
            assert c is not None
            cols.append(c)
            power = power @ sep
        pm = RationalMatrix.from_rows([[cols[i][r] for i in range(s)] for r in range(s)])
        self._power_inv = invert(pm)

    def _minpoly_of(self, m: RationalMatrix) -> Poly:
        rows: list[tuple[list[Fraction], int, dict[int, Fraction]]] = []
        power = RationalMatrix.identity(self.dim)
        k = 0
        while True:
            coords = self.coords_of(power)
            assert coords is not None
            vec = list(coords)
            combo = {k: Fraction(1)}
            for rvec, piv, cmb in rows:
                f = vec[piv]
                if f:
                    for t in range(len(vec)):
                        vec[t] -= f * rvec[t]
                    for i, c in cmb.items():
                        combo[i] = combo.get(i, Fraction(0)) - f * c
            piv = next((t for t, v in enumerate(vec) if v), None)
            if piv is None:
                out = [Fraction(0)] * (k + 1)
                for i, c in combo.items():
                    out[i] = c
                return poly_normalize(out)
            inv = 1 / vec[piv]
            rows.append(
                ([v * inv for v in vec], piv, {i: c * inv for i, c in combo.items()})
            )
            power = power @ m
            k += 1

    @property
    def char_count(self) -> int:
        return len(self._roots)

    def value_poly_of(self, m: RationalMatrix) -> Poly:
        """Polynomial q with q(gamma_j) = value of m at character j."""
        with self._lock:
            q = self._vpoly.get(m)
        if q is not None:
            return q
        coords = self.coords_of(m)
        if coords is None:
            raise SpaceMismatchError("matrix lies outside the algebra span")
        inv = self._power_inv.entries
        q = poly_normalize(
            [
                sum(inv[i][t] * coords[t] for t in range(self.size))
                for i in range(self.size)
            ]
        )
        with self._lock:
            self._vpoly[m] = q
        return q

    def root_box(self, j: int, width: Fraction) -> tuple[Fraction, Fraction]:
        """Isolating interval of character root j, refined below width."""
        with self._lock:
            lo, hi = self._roots[j]
            if hi - lo > width:
                lo, hi = refine_root(self._minpoly, lo, hi, width)
                self._roots[j][0] = lo
                self._roots[j][1] = hi
        return lo, hi

    def value_interval(
        self, q: Poly, j: int, target: Fraction
    ) -> tuple[Fraction, Fraction]:
        """Enclosure of q(gamma_j), refined until its width is at most target."""
        lo, hi = self.root_box(j, max(target, Fraction(1, 1 << 60)))
        while True:
            vlo, vhi = poly_eval_interval(q, lo, hi)
            if lo == hi or vhi - vlo <= target:
                return vlo, vhi
            lo, hi = self.root_box(j, (hi - lo) / 4)

    def value_sign(self, q: Poly, c: Rational, j: int) -> int:
        """Exact sign of q(gamma_j) - c."""
        c = Fraction(c)
        key = (q, c, j)
        cached = self._cmp_cache.get(key)
        if cached is not None:
            return cached
        lo, hi = self.root_box(j, Fraction(1, 4))
        if lo == hi:
            v = poly_eval(q, lo) - c
            res = 0 if v == 0 else (1 if v > 0 else -1)
        else:
            d = poly_sub(q, (c,))
            if not d:
                res = 0
            else:
                g = poly_gcd(self._minpoly, d)
                if len(g) > 1 and count_roots(sturm_chain(g), lo, hi) >= 1:
                    res = 0
                else:
                    while True:
                        vlo, vhi = poly_eval_interval(d, lo, hi)
                        if vlo > 0:
                            res = 1
                            break
                        if vhi < 0:
                            res = -1
                            break
                        lo, hi = self.root_box(j, (hi - lo) / 4)
        self._cmp_cache[key] = res
        return res


@dataclass(frozen=True)
class HermElement(RieszElement):
    """Member of the algebra with error radius, or a lattice formula."""

    space: "HermSpace"
    matrix: RationalMatrix | None
    err: Fraction
    formula: tuple | None = None

    def __hash__(self) -> int:
        # formula trees nest elements; hash each node once, not per lookup
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.space, self.matrix, self.err, self.formula))
            object.__setattr__(self, "_hash", h)
        return h

    def value_range(
        self, target: Rational = Fraction(1, 1024)
    ) -> list[tuple[Fraction, Fraction]]:
        """Per character enclosures of the element's joint eigenvalues."""
        sp = self.space
        t = Fraction(target)
        out = []
        for j in range(sp.algebra.char_count):
            lo, hi = sp._char_interval(self, j, t)
            out.append((lo, hi))
        return out


class HermSpace(RieszSpace):
    """Riesz space of commuting symmetric matrices under the psd order."""

    def __init__(
        self,
        generators: Iterable | CommutingAlgebra = (),
        dim: int | None = None,
        lattice_tol: Rational = Fraction(1, 1 << 10),
    ) -> None:
        if isinstance(generators, CommutingAlgebra):
            self.algebra = generators
        else:
            self.algebra = CommutingAlgebra(generators, dim=dim)
        self.dim = self.algebra.dim
        self.lattice_tol = Fraction(lattice_tol)
        if self.lattice_tol <= 0:
            raise ValueError("lattice_tol must be positive")
        self._key = (self.dim, self.algebra.generators)
        self._hash = hash(("herm", self._key))
        self._vp_cache: dict[tuple[HermElement, int], Poly] = {}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HermSpace) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return (
            f"HermSpace(dim={self.dim}, generators={len(self.algebra.generators)}, "
            f"basis={self.algebra.size})"
        )

    # -- element construction -------------------------------------------

    def element(self, matrix, err: Rational = 0) -> HermElement:
        m = _as_matrix(matrix)
        e = Fraction(err)
        if e < 0:
            raise ValueError("err must be nonnegative")
        if m.dim != self.dim:
            raise SpaceMismatchError(f"matrix dimension {m.dim}, expected {self.dim}")
        if not m.is_symmetric():
            raise ValueError("matrix must be symmetric")
        if self.algebra.coords_of(m) is None:
            raise SpaceMismatchError("matrix lies outside the generated algebra")
        return HermElement(self, m, e)

    def zero(self) -> HermElement:
        return HermElement(self, RationalMatrix.zeros(self.dim), Fraction(0))

    def unit(self) -> HermElement:
        return HermElement(self, RationalMatrix.identity(self.dim), Fraction(0))

    # -- vector operations ----------------------------------------------

    def add(self, a: HermElement, b: HermElement) -> HermElement:
        self._require(a, b)
        if a.formula is None and b.formula is None:
            return HermElement(self, a.matrix + b.matrix, a.err + b.err)
        return HermElement(self, None, a.err + b.err, ("add", a, b))

    def scale(self, c: Rational, a: HermElement) -> HermElement:
        self._require(a)
        c = Fraction(c)
        if c == 0:
            return self.zero()
        if a.formula is None:
            return HermElement(self, a.matrix.scale(c), abs(c) * a.err)
        return HermElement(self, None, abs(c) * a.err, ("scale", c, a))

    def negate(self, a: HermElement) -> HermElement:
        return self.scale(Fraction(-1), a)

    def multiply(self, a: HermElement, b: HermElement) -> HermElement:
        self._require(a, b)
        if a.formula is not None or b.formula is not None:
            raise TypeError("materialize lattice formulas before multiplying")
        na = a.matrix.row_sum_bound()
        nb = b.matrix.row_sum_bound()
        err = na * b.err + nb * a.err + a.err * b.err
        return HermElement(self, a.matrix @ b.matrix, err)

    # -- lattice operations (formula based, exact through characters) ----

    def join(self, a: HermElement, b: HermElement) -> HermElement:
        self._require(a, b)
        return HermElement(self, None, max(a.err, b.err), ("join", a, b))

    def meet(self, a: HermElement, b: HermElement) -> HermElement:
        self._require(a, b)
        return HermElement(self, None, max(a.err, b.err), ("meet", a, b))

    def in_interval(self, a: HermElement, p: Rational, q: Rational) -> HermElement:
        self._require(a)
        p, q = Fraction(p), Fraction(q)
        if not p < q:
            raise ValueError(f"empty interval ({p}, {q})")
        return HermElement(self, None, a.err, ("ii", a, p, q))

    # -- character evaluation -------------------------------------------

    def _value_poly(self, e: HermElement, j: int) -> Poly:
        """Resolve e at character j to one polynomial; err free elements only."""
        key = (e, j)
        cached = self._vp_cache.get(key)
        if cached is not None:
            return cached
        alg = self.algebra
        if e.formula is None:
            if e.err:
                raise _ErrTainted
            q = alg.value_poly_of(e.matrix)
        else:
            tag = e.formula[0]
            if tag == "add":
                q = poly_add(
                    self._value_poly(e.formula[1], j),
                    self._value_poly(e.formula[2], j),
                )
            elif tag == "scale":
                q = poly_scale(e.formula[1], self._value_poly(e.formula[2], j))
            elif tag == "ii":
                _, b, p, qq = e.formula
                qb = self._value_poly(b, j)
                # depth = min(b - p, qq - b); branch on the sign of 2b - (p + qq)
                if alg.value_sign(poly_scale(Fraction(2), qb), p + qq, j) <= 0:
                    q = poly_sub(qb, (p,))
                else:
                    q = poly_sub((qq,), qb)
            elif tag in ("meet", "join"):
                qa = self._value_poly(e.formula[1], j)
                qb = self._value_poly(e.formula[2], j)
                s = alg.value_sign(poly_sub(qa, qb), 0, j)
                if tag == "meet":
                    q = qa if s <= 0 else qb
                else:
                    q = qb if s <= 0 else qa
            else:  # pragma: no cover - formula tags are internal
                raise AssertionError(f"unknown formula tag {tag!r}")
        self._vp_cache[key] = q
        return q

    def _char_interval(
        self, e: HermElement, j: int, target: Fraction
    ) -> tuple[Fraction, Fraction]:
        """Enclosure of the value of e at character j, err ball included."""
        alg = self.algebra
        if e.formula is None:
            vlo, vhi = alg.value_interval(alg.value_poly_of(e.matrix), j, target)
            return vlo - e.err, vhi + e.err
        tag = e.formula[0]
        if tag == "add":
            alo, ahi = self._char_interval(e.formula[1], j, target / 2)
            blo, bhi = self._char_interval(e.formula[2], j, target / 2)
            return alo + blo, ahi + bhi
        if tag == "scale":
            c = e.formula[1]
            lo, hi = self._char_interval(e.formula[2], j, target / abs(c))
            return (c * lo, c * hi) if c > 0 else (c * hi, c * lo)
        if tag == "ii":
            _, b, p, q = e.formula
            blo, bhi = self._char_interval(b, j, target)
            # depth(x) = min(x - p, q - x) is a concave tent peaking mid interval
            dlo = min(min(blo - p, q - blo), min(bhi - p, q - bhi))
            mid = (p + q) / 2
            if blo <= mid <= bhi:
                dhi = (q - p) / 2
            else:
                dhi = max(min(blo - p, q - blo), min(bhi - p, q - bhi))
            return dlo, dhi
        if tag in ("meet", "join"):
            alo, ahi = self._char_interval(e.formula[1], j, target)
            blo, bhi = self._char_interval(e.formula[2], j, target)
            if tag == "meet":
                return min(alo, blo), min(ahi, bhi)
            return max(alo, blo), max(ahi, bhi)
        raise AssertionError(f"unknown formula tag {tag!r}")  # pragma: no cover

    def _char_sign(self, e: HermElement, j: int) -> int:
        """Exact sign of an err free element at character j."""
        return self.algebra.value_sign(self._value_poly(e, j), 0, j)

    # -- order -----------------------------------------------------------

    def leq(self, a: HermElement, b: HermElement) -> bool | None:
        self._require(a, b)
        if a.formula is None and b.formula is None and a.err == 0 and b.err == 0:
            return psd_check(b.matrix - a.matrix)
        try:
            for j in range(self.algebra.char_count):
                q = poly_sub(self._value_poly(b, j), self._value_poly(a, j))
                if self.algebra.value_sign(q, 0, j) < 0:
                    return False
            return True
        except _ErrTainted:
            pass
        width = Fraction(1, 4)
        floor = Fraction(1, 1 << 40)
        while True:
            pending = False
            for j in range(self.algebra.char_count):
                alo, ahi = self._char_interval(a, j, width)
                blo, bhi = self._char_interval(b, j, width)
                if bhi - alo < 0:
                    return False
                if blo - ahi < 0:
                    pending = True
            if not pending:
                return True
            if width < floor:
                return None
            width = width / 16

    def sup_cut(self, a: HermElement) -> LocatedCut:
        self._require(a)
        nchar = self.algebra.char_count

        def fn(eps: Fraction) -> Fraction:
            if 2 * a.err >= eps:
                raise ToleranceError(f"err {a.err} too coarse for sup query at {eps}")
            target = (eps - 2 * a.err) / 2
            return max(self._char_interval(a, j, target)[1] for j in range(nchar))

        return LocatedCut(fn)

    def unit_bound(self, a: HermElement) -> int:
        self._require(a)
        hi = max(
            self._char_interval(a, j, Fraction(1, 4))[1]
            for j in range(self.algebra.char_count)
        )
        return max(0, math.ceil(hi))

    # -- capability hooks ------------------------------------------------

    def candidate_intervals(
        self,
        b: HermElement,
        grid: Sequence[RatInterval],
        context: HermElement | None = None,
    ) -> list[int]:
        self._require(b)
        if not grid:
            return []
        target = min(iv.width for iv in grid) / 4
        boxes = []
        for j in range(self.algebra.char_count):
            if context is not None:
                _, chi = self._char_interval(context, j, Fraction(1, 8))
                if chi <= 0:
                    continue
            boxes.append(self._char_interval(b, j, target))
        return [
            k
            for k, iv in enumerate(grid)
            if any(vlo < iv.hi and iv.lo < vhi for vlo, vhi in boxes)
        ]

    def interval_sup_upper(self, b: HermElement, iv: RatInterval) -> Fraction | None:
        self._require(b)
        target = iv.width / 4
        best: Fraction | None = None
        for j in range(self.algebra.char_count):
            vlo, vhi = self._char_interval(b, j, target)
            u = min(vhi - iv.lo, iv.hi - vlo)
            if best is None or u > best:
                best = u
        if best is None or best <= 0:
            return None
        return min(best, iv.width / 2)

    def dominance_ceiling(self, x: HermElement, y: HermElement) -> int | None:
        self._require(x, y)
        try:
            signs = [
                (self._char_sign(x, j), self._char_sign(y, j))
                for j in range(self.algebra.char_count)
            ]
        except _ErrTainted:
            raise ToleranceError("dominance search needs err free operands")
        pos = [j for j, (sx, _) in enumerate(signs) if sx > 0]
        if any(signs[j][1] <= 0 for j in pos):
            return None
        if not pos:
            return 1
        bound = Fraction(0)
        for j in pos:
            width = Fraction(1, 8)
            while True:
                _, xhi = self._char_interval(x, j, width)
                ylo, _ = self._char_interval(y, j, width)
                if ylo > 0:
                    bound = max(bound, xhi / ylo)
                    break
                width = width / 16
        return max(1, math.ceil(bound))

    # -- materialization -------------------------------------------------

    def materialize(self, a: HermElement, tol: Rational | None = None) -> HermElement:
        """Collapse a lattice formula to one matrix with certified err.

        Each interval, meet, and join node costs one absolute value, so
        the tolerance is split evenly across the distinct such nodes.
        """
        self._require(a)
        if a.formula is None:
            return a
        tol = Fraction(tol if tol is not None else self.lattice_tol)
        if tol <= 0:
            raise ValueError("tol must be positive")
        seen: set[HermElement] = set()

        def count(e: HermElement) -> int:
            if e.formula is None or e in seen:
                return 0
            seen.add(e)
            kids = [x for x in e.formula[1:] if isinstance(x, HermElement)]
            own = 1 if e.formula[0] in ("ii", "meet", "join") else 0
            return own + sum(count(k) for k in kids)

        budget = tol / max(1, count(a))
        from ..falgebra import abs_element

        memo: dict[HermElement, HermElement] = {}

        def rec(e: HermElement) -> HermElement:
            if e.formula is None:
                return e
            got = memo.get(e)
            if got is not None:
                return got
            tag = e.formula[0]
            if tag == "add":
                out = self.add(rec(e.formula[1]), rec(e.formula[2]))
            elif tag == "scale":
                out = self.scale(e.formula[1], rec(e.formula[2]))
            else:
                if tag == "ii":
                    _, b, p, q = e.formula
                    bm = rec(b)
                    x = self.add(bm, self.scale(-p, self.unit()))
                    y = self.add(self.scale(q, self.unit()), self.negate(bm))
                else:
                    x = rec(e.formula[1])
                    y = rec(e.formula[2])
                s = self.add(x, y)
                d = abs_element(self.add(x, self.negate(y)), budget)
                if tag == "join":
                    out = self.scale(Fraction(1, 2), self.add(s, d))
                else:
                    out = self.scale(Fraction(1, 2), self.add(s, self.negate(d)))
            memo[e] = out
            return out

        return rec(a)

    def join_with_tol(self, a: HermElement, b: HermElement, tol: Rational) -> HermElement:
        return self.materialize(self.join(a, b), tol)

    def meet_with_tol(self, a: HermElement, b: HermElement, tol: Rational) -> HermElement:
        return self.materialize(self.meet(a, b), tol)

    # -- enumeration -----------------------------------------------------

    def dense_element(self, index: int) -> HermElement:
        coords = []
        rest = index
        for _ in range(self.algebra.size - 1):
            rest, k = pair_index(rest)
            coords.append(rational_at(k))
        coords.append(rational_at(rest))
        return HermElement(self, self.algebra.mat_of(coords), Fraction(0))

    # -- helpers ---------------------------------------------------------

    def _require(self, *elems: HermElement) -> None:
        for e in elems:
            if not isinstance(e, HermElement) or e.space != self:
                raise SpaceMismatchError("element belongs to a different space")
