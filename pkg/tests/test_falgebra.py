"""Square roots, squares decompositions, and multiplicative checks."""
from fractions import Fraction as F
import random

import pytest

from rieszspec.exact import RationalMatrix, psd_check, round_dyadic
from rieszspec.falgebra import (
    abs_element,
    abs_pos_join,
    gelfand_check,
    pos_part,
    product_positive,
    sqrt_psd,
    sum_of_squares,
)
from rieszspec.instances import HermSpace
from rieszspec.riesz import ToleranceError, norm_cut
from rieszspec.sampling import rand_diagonal_family

import oracles


def _space(rows):
    return HermSpace([RationalMatrix.from_rows(rows)])


def _elem(space, rows):
    return space.element(RationalMatrix.from_rows(rows))


def _diag(*vals):
    return RationalMatrix.diagonal([F(v) for v in vals])


class TestSqrtPsd:
    def test_four_is_exactly_two(self):
        hs = _space([[4]])
        s, trace = sqrt_psd(_elem(hs, [[4]]), F(1, 1024))
        assert s.matrix.entries == ((F(2),),)
        assert trace.scale_exp == 1
        assert trace.iterations == 1

    def test_diagonal_example(self):
        hs = _space([[1, 0], [0, 4]])
        tol = F(1, 1024)
        s, _ = sqrt_psd(_elem(hs, [[1, 0], [0, 4]]), tol)
        diff = oracles.matsub(s.matrix.entries, _diag(1, 2).entries)
        assert oracles.operator_norm_exact(diff) <= tol
        assert oracles.operator_norm_exact(diff) <= s.err

    def test_quadratic_spectrum_example(self):
        # eigenvalues land on sqrt(2) and 2*sqrt(2) within the err bound
        hs = _space([[5, 3], [3, 5]])
        tol = F(1, 1024)
        s, _ = sqrt_psd(_elem(hs, [[5, 3], [3, 5]]), tol)
        eigs = sorted(
            float(v) for v in oracles.to_sympy(s.matrix.entries).eigenvals()
        )
        targets = (2 ** 0.5, 2 * 2 ** 0.5)
        for got, want in zip(eigs, targets):
            assert abs(got - want) <= float(s.err) + 1e-12

    def test_residual_certificate_holds(self):
        hs = _space([[5, 3], [3, 5]])
        tol = F(1, 256)
        s, trace = sqrt_psd(_elem(hs, [[5, 3], [3, 5]]), tol)
        resid = s.matrix @ s.matrix - hs.algebra.mat_of(
            hs.algebra.coords_of(RationalMatrix.from_rows([[5, 3], [3, 5]]))
        )
        eye = RationalMatrix.identity(2)
        assert oracles.psd_by_minors((eye.scale(tol) - resid).entries)
        assert oracles.psd_by_minors((eye.scale(tol) + resid).entries)
        assert trace.certified_residual == tol

    def test_result_stays_near_psd_and_commutes(self):
        rng = random.Random(51)
        tol = F(1, 1024)
        fam = rand_diagonal_family(rng, 3, 2)
        hs = HermSpace(fam.members)
        for mem in fam.members:
            s, _ = sqrt_psd(hs.element(mem), tol)
            eye = RationalMatrix.identity(3)
            assert psd_check(s.matrix + eye.scale(tol))
            for g in fam.members:
                assert s.matrix @ g == g @ s.matrix

    def test_family_against_exact_roots(self):
        roots_of = {F(1, 4): F(1, 2), F(1): F(1), F(9, 4): F(3, 2),
                    F(4): F(2), F(25, 4): F(5, 2)}
        tol = F(1, 1024)
        for seed in (52, 53, 54):
            rng = random.Random(seed)
            fam = rand_diagonal_family(rng, 3, 1)
            hs = HermSpace(fam.members)
            true = fam.sqrt_of(0, [roots_of[v] for v in fam.eigs[0]])
            s, _ = sqrt_psd(hs.element(fam.members[0]), tol)
            dist = oracles.operator_norm_exact(
                oracles.matsub(s.matrix.entries, true.entries)
            )
            assert dist <= s.err
            assert s.err <= 10 * tol

    def test_majorant_trace_shape(self):
        hs = _space([[5, 3], [3, 5]])
        _, trace = sqrt_psd(_elem(hs, [[5, 3], [3, 5]]), F(1, 256))
        rs = trace.majorant
        assert rs[0] == 0
        assert all(x <= y for x, y in zip(rs, rs[1:]))
        assert all(x <= 1 for x in rs)
        assert len(rs) == trace.iterations + 2
        mu = F(4) ** trace.scale_exp
        assert trace.majorant_bound == 2 * (rs[-1] - rs[-2]) * mu

    def test_scalar_majorant_rate(self):
        # (1 - e/2)^N <= e forces the scalar orbit within e of its limit;
        # rounding the orbit down keeps denominators small and the check
        # conservative, since the true sequence dominates the rounded one
        for e in (F(1, 2), F(1, 4), F(1, 8)):
            n = 0
            p = F(1)
            while p > e:
                p *= 1 - e / 2
                n += 1
            r = F(0)
            for _ in range(n):
                r = round_dyadic((1 + r * r) / 2, 64, "down")
            assert 1 - r <= e

    def test_zero_matrix(self):
        hs = _space([[1, 0], [0, 2]])
        s, trace = sqrt_psd(hs.zero(), F(1, 64))
        assert s.matrix.is_zero()
        assert trace.iterations == 0

    def test_input_validation(self):
        hs = _space([[1]])
        with pytest.raises(ValueError):
            sqrt_psd(_elem(hs, [[-1]]), F(1, 64))
        with pytest.raises(ValueError):
            sqrt_psd(hs.unit(), 0)
        node = hs.join(hs.unit(), hs.zero())
        with pytest.raises(TypeError):
            sqrt_psd(node, F(1, 64))


class TestAbsPosJoin:
    def test_diagonal_abs_and_pos(self):
        hs = _space([[1, 0], [0, -2]])
        a = _elem(hs, [[1, 0], [0, -2]])
        tol = F(1, 256)
        ab = abs_element(a, tol)
        d = oracles.matsub(ab.matrix.entries, _diag(1, 2).entries)
        assert oracles.operator_norm_exact(d) <= ab.err
        p = pos_part(a, tol)
        d = oracles.matsub(p.matrix.entries, _diag(1, 0).entries)
        assert oracles.operator_norm_exact(d) <= p.err
        assert p.err <= tol

    def test_join_of_disjoint_projections(self):
        hs = HermSpace([_diag(1, 0), _diag(0, 1)])
        a, b = hs.element(_diag(1, 0)), hs.element(_diag(0, 1))
        j = abs_pos_join("join", a, b, F(1, 256))
        d = oracles.matsub(j.matrix.entries, _diag(1, 1).entries)
        assert oracles.operator_norm_exact(d) <= j.err
        m = abs_pos_join("meet", a, b, F(1, 256))
        assert oracles.operator_norm_exact(m.matrix.entries) <= m.err

    def test_abs_of_negation_matches(self):
        hs = _space([[2, 1], [1, -1]])
        a = _elem(hs, [[2, 1], [1, -1]])
        tol = F(1, 256)
        p = abs_element(a, tol)
        q = abs_element(hs.negate(a), tol)
        d = oracles.operator_norm_exact(
            oracles.matsub(p.matrix.entries, q.matrix.entries)
        )
        assert d <= 2 * tol

    def test_dispatch_and_default_tol(self):
        hs = _space([[1, 0], [0, -2]])
        a = _elem(hs, [[1, 0], [0, -2]])
        assert abs_pos_join("abs", a).err <= hs.lattice_tol
        with pytest.raises(ValueError):
            abs_pos_join("join", a)
        with pytest.raises(ValueError):
            abs_pos_join("frobnicate", a)


class TestProductPositive:
    def test_diagonal_example(self):
        hs = HermSpace([_diag(1, 2), _diag(3, 4)])
        assert product_positive(hs.element(_diag(1, 2)), hs.element(_diag(3, 4)))

    def test_square_is_positive(self):
        hs = _space([[2, 1], [1, 2]])
        a = _elem(hs, [[2, 1], [1, 2]])
        assert product_positive(a, a)

    def test_rejects_negative_operand(self):
        hs = _space([[2, 1], [1, 2]])
        a = _elem(hs, [[2, 1], [1, 2]])
        with pytest.raises(ValueError):
            product_positive(a, hs.negate(hs.unit()))

    def test_rejects_err_operand(self):
        hs = _space([[1]])
        fuzzy = hs.element(RationalMatrix.identity(1), err=F(1, 8))
        with pytest.raises(ToleranceError):
            product_positive(fuzzy, hs.unit())

    def test_random_psd_pairs(self):
        rng = random.Random(61)
        hits = 0
        for seed in range(10):
            fam = rand_diagonal_family(random.Random(100 + seed), 3, 2)
            hs = HermSpace(fam.members)
            a, b = (hs.element(m) for m in fam.members)
            for x, y in ((a, b), (b, a), (hs.add(a, b), b)):
                assert product_positive(x, y)
                hits += 1
        assert hits == 30


class TestSumOfSquares:
    def test_half_short_prefix(self):
        hs = _space([[F(1, 2)]])
        out = sum_of_squares(_elem(hs, [[F(1, 2)]]), F(3, 16))
        assert [p.matrix.entries[0][0] for p in out.parts] == [F(1, 2), F(1, 4)]
        assert out.remainder.matrix.entries[0][0] == F(3, 16)
        assert F(1, 4) + F(1, 16) + F(3, 16) == F(1, 2)

    def test_half_longer_prefix(self):
        hs = _space([[F(1, 2)]])
        out = sum_of_squares(_elem(hs, [[F(1, 2)]]), F(1, 8))
        got = [p.matrix.entries[0][0] for p in out.parts]
        assert got == [F(1, 2), F(1, 4), F(3, 16), F(39, 256), F(8463, 65536)]
        total = sum(v * v for v in got) + out.remainder.matrix.entries[0][0]
        assert total == F(1, 2)

    def test_unit_is_its_own_square(self):
        hs = _space([[1, 0], [0, 1]])
        out = sum_of_squares(hs.unit(), F(1, 4))
        assert out.steps == 1
        assert out.parts[0].matrix == RationalMatrix.identity(2)
        assert out.remainder.matrix.is_zero()

    def test_zero_stops_immediately(self):
        hs = _space([[1]])
        out = sum_of_squares(hs.zero(), F(1, 4))
        assert out.steps == 0
        assert out.remainder.matrix.is_zero()
        assert out.bound == F(1, 4)

    def test_exact_identity_on_family(self):
        # modest tolerance on purpose: iterate entries square every step
        rng = random.Random(62)
        fam = rand_diagonal_family(
            rng, 3, 1, palette=[F(1, 4), F(1, 2), F(3, 4), F(1)]
        )
        hs = HermSpace(fam.members)
        a = hs.element(fam.members[0])
        out = sum_of_squares(a, F(1, 4))
        total = RationalMatrix.zeros(3)
        for p in out.parts:
            total = total + p.matrix @ p.matrix
        assert total + out.remainder.matrix == a.matrix
        rem = oracles.operator_norm_exact(out.remainder.matrix.entries)
        assert rem <= out.bound

    def test_iterates_decay_like_one_over_n(self):
        hs = _space([[F(1, 2)]])
        out = sum_of_squares(_elem(hs, [[F(1, 2)]]), F(1, 16))
        assert out.steps >= 8
        for n in range(1, len(out.parts)):
            v = out.parts[n].matrix.entries[0][0]
            assert v * v <= F(1, n)
        rem = out.remainder.matrix.entries[0][0]
        assert rem <= out.bound
        assert out.bound <= F(1, 16)

    def test_preconditions(self):
        hs = _space([[2]])
        with pytest.raises(ValueError):
            sum_of_squares(_elem(hs, [[2]]), F(1, 4))
        with pytest.raises(ValueError):
            sum_of_squares(_elem(hs, [[-1]]), F(1, 4))
        with pytest.raises(ValueError):
            sum_of_squares(hs.zero(), 0)
        fuzzy = hs.element(RationalMatrix.from_rows([[F(1, 2)]]), err=F(1, 16))
        with pytest.raises(ToleranceError):
            sum_of_squares(fuzzy, F(1, 4))

    def test_iteration_cap(self):
        hs = _space([[F(1, 2)]])
        with pytest.raises(ToleranceError):
            sum_of_squares(_elem(hs, [[F(1, 2)]]), F(1, 1024), max_iter=3)


class TestBoundedness:
    def test_two_sided_bound_equals_squared_bound(self):
        # -a*I <= A <= a*I exactly when a^2*I - A^2 is psd
        rng = random.Random(63)
        fam = rand_diagonal_family(rng, 3, 2)
        hs = HermSpace(fam.members)
        eye = RationalMatrix.identity(3)
        shift = fam.members[1] - eye.scale(F(3, 2))
        for mat in (fam.members[0], shift, eye.scale(-2)):
            for a in (F(0), F(1), F(2), F(5, 2), F(3)):
                two_sided = psd_check(eye.scale(a) - mat) and psd_check(
                    mat + eye.scale(a)
                )
                squared = psd_check(eye.scale(a * a) - mat @ mat)
                assert two_sided == squared
                assert squared == oracles.psd_by_minors(
                    (eye.scale(a * a) - mat @ mat).entries
                )

    def test_norm_of_square_is_square_of_norm(self):
        rng = random.Random(64)
        fam = rand_diagonal_family(rng, 3, 2)
        hs = HermSpace(fam.members)
        eps = F(1, 64)
        for mem in fam.members:
            exact = oracles.operator_norm_exact(mem.entries)
            sq = oracles.operator_norm_exact((mem @ mem).entries)
            assert sq == exact * exact
            a = hs.scale(F(1, hs.unit_bound(hs.element(mem))), hs.element(mem))
            n1 = norm_cut(a).approx(eps)
            n2 = norm_cut(a.space.multiply(a, a)).approx(eps)
            assert abs(n2 - n1 * n1) <= 3 * eps


class TestGelfand:
    def test_commuting_diagonals_pass(self):
        hs = HermSpace([_diag(1, 2), _diag(3, 4)])
        a, b = hs.element(_diag(1, 2)), hs.element(_diag(3, 4))
        rep = gelfand_check(hs, [a, b], F(1, 8))
        assert rep.ok
        assert rep.pairs == 2
        assert not rep.key_inequality_failures
        assert rep.points >= 2
        assert rep.defect_bound == 2 * F(1, 8) * (1 + 2 + 4)
        assert rep.max_defect <= rep.defect_bound

    def test_unit_factor_is_transparent(self):
        hs = HermSpace([_diag(1, 2), _diag(3, 4)])
        rep = gelfand_check(hs, [hs.unit(), hs.element(_diag(3, 4))], F(1, 8))
        assert rep.ok

    def test_key_inequality_diagonal_example(self):
        # (a - 1/2)^+ /\ b^+ = diag(1/2, 0) sits under 2 * (a b)^+
        hs = HermSpace([_diag(1, 0)])
        a, b = hs.element(_diag(1, 0)), hs.unit()
        lhs = hs.meet(
            hs.join(a - hs.scale(F(1, 2), hs.unit()), hs.zero()),
            hs.join(b, hs.zero()),
        )
        rhs = hs.scale(2, hs.join(hs.multiply(a, b), hs.zero()))
        assert hs.leq(lhs, rhs) is True
        got = hs.materialize(lhs, F(1, 256))
        d = oracles.matsub(got.matrix.entries, _diag(F(1, 2), 0).entries)
        assert oracles.operator_norm_exact(d) <= got.err

    def test_rejects_err_elements(self):
        hs = _space([[1, 0], [0, 2]])
        fuzzy = hs.element(_diag(1, 2), err=F(1, 16))
        with pytest.raises(ToleranceError):
            gelfand_check(hs, [fuzzy, hs.unit()], F(1, 8))
