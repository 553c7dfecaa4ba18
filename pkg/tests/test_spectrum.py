"""Positivity decisions, spectrum points, nets, and the norm cross check."""
from fractions import Fraction as F
import random

import pytest

from rieszspec.instances import HermSpace, PLSpace, QnSpace
from rieszspec.exact import RationalMatrix
from rieszspec.lattice import d_of, precedes
from rieszspec.riesz import MarginCollapseError
from rieszspec.sampling import rand_pl, rand_qn
from rieszspec.spectrum import (
    Below,
    Pos,
    epsilon_net,
    point_new,
    pos_or_below,
    pseudo_dist,
    stone_yosida_check,
    sup_approx,
)

from oracles import qn_sup


def _herm(rows):
    gens = [RationalMatrix.from_rows(rows)]
    return HermSpace(gens)


class TestPosOrBelow:
    def test_positive_coordinate_is_pos(self):
        q2 = QnSpace(2)
        out = pos_or_below(q2, q2.element([1, -1]), F(1, 2))
        assert isinstance(out, Pos)
        assert out.witness >= F(3, 8)
        assert out.witness <= 1

    def test_zero_is_below(self):
        q1 = QnSpace(1)
        out = pos_or_below(q1, q1.element([0]), 1)
        assert isinstance(out, Below)
        assert q1.leq(q1.element([0]), q1.scale(out.bound, q1.unit()))

    def test_small_positive_is_below_for_coarse_r(self):
        q2 = QnSpace(2)
        out = pos_or_below(q2, q2.element([F(1, 8), 0]), F(1, 2))
        assert isinstance(out, Below)

    def test_rejects_nonpositive_r(self):
        q1 = QnSpace(1)
        with pytest.raises(ValueError):
            pos_or_below(q1, q1.unit(), 0)

    def test_trichotomy_sound_on_random_elements(self):
        q3 = QnSpace(3)
        rng = random.Random(11)
        for _ in range(200):
            a = rand_qn(q3, rng)
            r = F(1, 1 << rng.randint(0, 4))
            out = pos_or_below(q3, a, r)
            sup = qn_sup(a.coords)
            if isinstance(out, Pos):
                assert 0 < out.witness <= sup
                assert out.witness > r / 4
            else:
                assert sup <= out.bound <= r / 2
                assert q3.leq(a, q3.scale(out.bound, q3.unit()))

    def test_pos_splits_over_joins(self):
        # a certified join splits: one side must certify at the witness
        q3 = QnSpace(3)
        rng = random.Random(12)
        seen = 0
        for _ in range(300):
            a, b = rand_qn(q3, rng), rand_qn(q3, rng)
            out = pos_or_below(q3, q3.join(a, b), F(1, 2))
            if isinstance(out, Below):
                continue
            seen += 1
            w = out.witness
            sides = [pos_or_below(q3, x, w) for x in (a, b)]
            assert any(isinstance(t, Pos) for t in sides)
        assert seen >= 50

    def test_dominance_transfers_positivity(self):
        # Pos(a) with witness w and [a+] <= n*[b+] forces Pos for b at w/n
        q3 = QnSpace(3)
        rng = random.Random(13)
        seen = 0
        for _ in range(300):
            a, c = rand_qn(q3, rng), rand_qn(q3, rng)
            b = q3.join(a, c)
            out = pos_or_below(q3, a, F(1, 4))
            if isinstance(out, Below):
                continue
            n = precedes(q3, d_of(q3, a).rep, d_of(q3, b).rep)
            if n is None:
                continue
            seen += 1
            t = pos_or_below(q3, b, out.witness / n)
            assert isinstance(t, Pos)
        assert seen >= 50


class TestSupApprox:
    def test_pair_example(self):
        q2 = QnSpace(2)
        s = sup_approx(q2, q2.element([F(1, 3), F(1, 2)]), F(1, 16))
        assert abs(s - F(1, 2)) <= F(1, 16)

    def test_unit_across_instances(self):
        spaces = [QnSpace(3), PLSpace(), _herm([[2, 1], [1, 2]])]
        for sp in spaces:
            s = sup_approx(sp, sp.unit(), F(1, 32))
            assert abs(s - 1) <= F(1, 32)

    def test_herm_example(self):
        hs = _herm([[2, 1], [1, 2]])
        a = hs.element(RationalMatrix.from_rows([[2, 1], [1, 2]]))
        s = sup_approx(hs, a, F(1, 256))
        assert abs(s - 3) <= F(1, 256)

    def test_matches_native_cut_qn(self):
        q3 = QnSpace(3)
        rng = random.Random(21)
        eps = F(1, 32)
        for _ in range(30):
            a = rand_qn(q3, rng)
            s = sup_approx(q3, a, eps)
            t = q3.sup_cut(a).approx(eps)
            assert abs(s - t) <= 2 * eps

    def test_matches_native_cut_pl(self):
        pl = PLSpace()
        rng = random.Random(22)
        eps = F(1, 16)
        for _ in range(8):
            a = rand_pl(pl, rng, max_breaks=6, max_num=4)
            s = sup_approx(pl, a, eps)
            t = pl.sup_cut(a).approx(eps)
            assert abs(s - t) <= 2 * eps

    def test_matches_native_cut_herm(self):
        hs = _herm([[1, F(1, 2)], [F(1, 2), 0]])
        rng = random.Random(23)
        eps = F(1, 64)
        gen = hs.element(RationalMatrix.from_rows([[1, F(1, 2)], [F(1, 2), 0]]))
        elems = [gen, hs.unit(), gen - hs.unit(), hs.join(gen, hs.negate(gen))]
        for a in elems:
            s = sup_approx(hs, a, eps)
            t = hs.sup_cut(a).approx(eps)
            assert abs(s - t) <= 2 * eps

    def test_rejects_nonpositive_eps(self):
        q1 = QnSpace(1)
        with pytest.raises(ValueError):
            sup_approx(q1, q1.unit(), 0)


def _point_from_pos(space, a, eps):
    """The CLI recipe: certify positivity, then pin a into (w/2, ub+1)."""
    out = pos_or_below(space, a, eps)
    assert isinstance(out, Pos)
    hi = F(space.unit_bound(a) + 1)
    return point_new(space, [(a, out.witness / 2, hi)])


class TestPointState:
    def test_line_identity(self):
        q1 = QnSpace(1)
        pt = _point_from_pos(q1, q1.element([1]), F(1, 8))
        assert abs(pt.eval(q1.element([1]), F(1, 8)) - 1) <= F(1, 8)

    def test_projection_example(self):
        # pinning (0,1) positive forces the second coordinate projection
        q2 = QnSpace(2)
        eps = F(1, 16)
        pt = _point_from_pos(q2, q2.element([0, 1]), eps)
        assert abs(pt.eval(q2.element([5, 7]), eps) - 7) <= eps
        assert abs(pt.eval(q2.element([0, 1]), eps) - 1) <= eps
        assert abs(pt.eval(q2.unit(), eps) - 1) <= eps

    def test_three_coordinate_example(self):
        q3 = QnSpace(3)
        eps = F(1, 64)
        pt = _point_from_pos(q3, q3.element([0, 0, 1]), eps)
        assert abs(pt.eval(q3.element([2, 4, 8]), eps) - 8) <= eps

    def test_empty_constraints_rejected(self):
        with pytest.raises(ValueError):
            point_new(QnSpace(2), [])

    def test_contradictory_constraints_collapse(self):
        q2 = QnSpace(2)
        a = q2.element([0, 1])
        with pytest.raises(MarginCollapseError):
            point_new(q2, [(a, F(2, 5), F(3, 5))])

    def test_eval_appends_constraint_and_shrinks_margin(self):
        q2 = QnSpace(2)
        pt = _point_from_pos(q2, q2.element([0, 1]), F(1, 8))
        ncons = len(pt.constraints)
        m0 = pt.margin
        b = q2.element([3, -2])
        pt.eval(b, F(1, 8))
        assert len(pt.constraints) == ncons + 1
        assert pt.constraints[-1][0] == b
        assert 0 < pt.margin <= m0

    def test_eval_is_cached_per_level(self):
        q2 = QnSpace(2)
        pt = _point_from_pos(q2, q2.element([0, 1]), F(1, 8))
        b = q2.element([3, -2])
        v1 = pt.eval(b, F(1, 8))
        ncons = len(pt.constraints)
        v2 = pt.eval(b, F(1, 8))
        assert v1 == v2
        assert len(pt.constraints) == ncons

    def test_refinement_stays_coherent(self):
        q3 = QnSpace(3)
        pt = _point_from_pos(q3, q3.element([0, 0, 1]), F(1, 8))
        b = q3.element([F(5, 3), F(-1, 2), F(7, 4)])
        coarse = pt.eval(b, F(1, 8))
        fine = pt.eval(b, F(1, 64))
        assert abs(coarse - fine) <= F(1, 8) + F(1, 64)

    def test_deterministic_across_fresh_points(self):
        q3 = QnSpace(3)
        rng = random.Random(31)
        probes = [rand_qn(q3, rng) for _ in range(6)]
        runs = []
        for _ in range(2):
            pt = _point_from_pos(q3, q3.element([0, 1, 0]), F(1, 16))
            runs.append([pt.eval(b, F(1, 16)) for b in probes])
        assert runs[0] == runs[1]

    def test_representation_contract(self):
        # additive, homogeneous, join preserving, unital within tolerance
        q3 = QnSpace(3)
        rng = random.Random(32)
        eps = F(1, 32)
        pt = _point_from_pos(q3, q3.element([1, 0, 0]), eps)
        for _ in range(12):
            a, b = rand_qn(q3, rng, max_num=4), rand_qn(q3, rng, max_num=4)
            lam = F(rng.randint(-3, 3), rng.randint(1, 3))
            va = pt.eval(a, eps)
            vb = pt.eval(b, eps)
            assert abs(pt.eval(a + b, eps) - va - vb) <= 4 * eps
            assert abs(pt.eval(q3.scale(lam, a), eps) - lam * va) <= (1 + abs(lam)) * 2 * eps
            vj = pt.eval(q3.join(a, b), eps)
            assert abs(vj - max(va, vb)) <= 4 * eps
        assert abs(pt.eval(q3.unit(), eps) - 1) <= eps

    def test_monotone_within_tolerance(self):
        q3 = QnSpace(3)
        rng = random.Random(33)
        eps = F(1, 32)
        pt = _point_from_pos(q3, q3.element([0, 1, 0]), eps)
        for _ in range(10):
            a = rand_qn(q3, rng, max_num=4)
            b = q3.join(a, rand_qn(q3, rng, max_num=4))
            assert pt.eval(a, eps) <= pt.eval(b, eps) + 2 * eps

    def test_herm_point_reads_a_character(self):
        # diag(1,3) scaled into the ball: values cluster at 1/4 or 3/4
        hs = _herm([[1, 0], [0, 3]])
        a = hs.scale(F(1, 4), hs.element(RationalMatrix.from_rows([[1, 0], [0, 3]])))
        eps = F(1, 32)
        pt = _point_from_pos(hs, a, eps)
        v = pt.eval(a, eps)
        assert min(abs(v - F(1, 4)), abs(v - F(3, 4))) <= eps


class TestPseudoDist:
    def test_empty_family_is_zero(self):
        q2 = QnSpace(2)
        p1 = _point_from_pos(q2, q2.element([1, 0]), F(1, 8))
        p2 = _point_from_pos(q2, q2.element([0, 1]), F(1, 8))
        assert pseudo_dist(p1, p2, [], F(1, 8)) == 0

    def test_same_point_is_small(self):
        q2 = QnSpace(2)
        eps = F(1, 16)
        pt = _point_from_pos(q2, q2.element([0, 1]), eps)
        d = pseudo_dist(pt, pt, [q2.element([1, 0]), q2.unit()], eps)
        assert d <= eps

    def test_separated_projections(self):
        q2 = QnSpace(2)
        eps = F(1, 16)
        p1 = _point_from_pos(q2, q2.element([1, 0]), eps)
        p2 = _point_from_pos(q2, q2.element([0, 1]), eps)
        d = pseudo_dist(p1, p2, [q2.element([1, 0])], eps)
        assert abs(d - 1) <= 2 * eps

    def test_rejects_nonpositive_eps(self):
        q2 = QnSpace(2)
        pt = _point_from_pos(q2, q2.element([0, 1]), F(1, 8))
        with pytest.raises(ValueError):
            pseudo_dist(pt, pt, [q2.unit()], 0)


class TestEpsilonNet:
    def test_projection_values_both_reached(self):
        q2 = QnSpace(2)
        a = q2.element([0, 1])
        net = epsilon_net(q2, [a], F(1, 4))
        assert net.resolution <= F(1, 4)
        evals = [pt.eval(a, net.eps / 4) for pt in net.points]
        assert any(abs(v - 1) <= F(1, 4) for v in evals)
        assert any(abs(v) <= F(1, 4) for v in evals)

    def test_single_representation_line(self):
        q1 = QnSpace(1)
        a = q1.element([1])
        net = epsilon_net(q1, [a], F(1, 4))
        assert len(net.points) >= 1
        for pt in net.points:
            assert abs(pt.eval(a, net.eps / 4) - 1) <= F(1, 4)

    def test_joint_rows_track_actual_coordinates(self):
        # every surviving tuple reads off one true coordinate pair
        q2 = QnSpace(2)
        e1, e2 = q2.element([0, 1]), q2.element([1, 0])
        net = epsilon_net(q2, [e1, e2], F(1, 8))
        table = net.eval_table()
        tol = 2 * net.resolution + net.eps
        targets = [(F(0), F(1)), (F(1), F(0))]
        for row in table:
            assert any(
                abs(row[0] - t0) <= tol and abs(row[1] - t1) <= tol
                for t0, t1 in targets
            )
        for t0, t1 in targets:
            assert any(
                abs(row[0] - t0) <= tol and abs(row[1] - t1) <= tol
                for row in table
            )

    def test_herm_diagonal_characters(self):
        hs = _herm([[1, 0], [0, 3]])
        a = hs.scale(F(1, 4), hs.element(RationalMatrix.from_rows([[1, 0], [0, 3]])))
        net = epsilon_net(hs, [a], F(1, 8))
        evals = [pt.eval(a, net.eps / 4) for pt in net.points]
        assert any(abs(v - F(1, 4)) <= F(1, 8) for v in evals)
        assert any(abs(v - F(3, 4)) <= F(1, 8) for v in evals)

    def test_shrink_info_records_positive_radii(self):
        q2 = QnSpace(2)
        net = epsilon_net(q2, [q2.element([0, 1]), q2.unit()], F(1, 4))
        assert len(net.shrink_info) == 2
        for r, mult in net.shrink_info:
            assert r > 0
            assert mult >= 1

    def test_input_validation(self):
        q2 = QnSpace(2)
        with pytest.raises(ValueError):
            epsilon_net(q2, [], F(1, 4))
        with pytest.raises(ValueError):
            epsilon_net(q2, [q2.unit()], 0)


class TestStoneYosida:
    def test_qn_example(self):
        q2 = QnSpace(2)
        eps = F(1, 16)
        rep = stone_yosida_check(q2, q2.element([1, -3]), eps)
        assert rep.ok
        assert abs(rep.norm_value - 3) <= eps / 2
        assert abs(rep.net_value - 3) <= 2 * eps
        assert rep.bound == 2 * eps
        assert rep.points >= 1

    def test_unit(self):
        q3 = QnSpace(3)
        rep = stone_yosida_check(q3, q3.unit(), F(1, 8))
        assert rep.ok
        assert abs(rep.norm_value - 1) <= F(1, 16)

    def test_herm_example(self):
        hs = _herm([[5, 3], [3, 5]])
        a = hs.element(RationalMatrix.from_rows([[5, 3], [3, 5]]))
        eps = F(1, 16)
        rep = stone_yosida_check(hs, a, eps)
        assert rep.ok
        assert abs(rep.norm_value - 8) <= eps / 2

    def test_pl_element(self):
        pl = PLSpace()
        f = pl.element([(0, 1), (F(1, 2), -1), (1, 0)])
        rep = stone_yosida_check(pl, f, F(1, 4))
        assert rep.ok
        assert abs(rep.norm_value - 1) <= F(1, 8)

    def test_random_qn_elements_agree(self):
        q3 = QnSpace(3)
        rng = random.Random(41)
        for _ in range(8):
            a = rand_qn(q3, rng, max_num=4)
            rep = stone_yosida_check(q3, a, F(1, 8))
            assert rep.ok
            assert abs(rep.norm_value - rep.net_value) < rep.bound
