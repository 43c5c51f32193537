"""The line model of the split quadric, the two isotropic families, the
rank-one adjugate stratification, and two-dimensional fiber modules."""

import random
from fractions import Fraction

import pytest

from conftest import cached_pencil
from quadclif.exactalg import QQ, PolyRing, PrimeField, mat_rank
from quadclif.fiber import FiberError, sample_invertible_points
from quadclif.geometry import GenericityError, curve_points
from quadclif.pencil import InvariantPencil
from quadclif.plucker import (
    A_VARS,
    Z_VARS,
    adjugate_double_line,
    annihilator_line,
    lines_proportional,
    m0_identity_check,
    m0_matrix,
    m0_matrix_symbolic,
    module_line_for,
    module_rep,
    plucker_quadric_poly,
    plucker_transform,
    segre_identity_check,
    segre_point_x,
    segre_points,
    split_quadric_poly,
    transform_identity_check,
    wedge_with_basis,
    segre_y,
)


def diag_blocks(d_plus, d_minus):
    """Pencil whose k-th coordinate matrices are diagonal; d_side[i] lists
    the coefficients of u1, u2, u3 on the i-th diagonal entry."""

    def mats(diags):
        out = []
        for k in range(3):
            rows = [[0] * 3 for _ in range(3)]
            for i in range(3):
                rows[i][i] = diags[i][k]
            out.append(tuple(tuple(r) for r in rows))
        return tuple(out)

    return InvariantPencil(q_plus=mats(d_plus), q_minus=mats(d_minus),
                           seed=0, coeff_bound=1)


# ---------------------------------------------------------------------------
# the coordinate change between the split and Plücker quadrics
# ---------------------------------------------------------------------------

class TestTransform:
    def test_identity(self):
        assert transform_identity_check()

    def test_matrix_invertible(self):
        assert mat_rank([list(r) for r in plucker_transform()]) == 6

    def test_middle_coordinates_carry_the_cross_term(self):
        # x3² - x4² is exactly -z13·z24 under the transform
        zring = PolyRing(QQ, Z_VARS)
        z13 = zring.var("z13")
        z24 = zring.var("z24")
        M = plucker_transform()
        half_diff = (z13 - z24) * M[2][1] * 2  # row normalization check
        assert M[2][1] == Fraction(1, 2) and M[3][4] == Fraction(1, 2)
        x3 = (z13 - z24) * Fraction(1, 2)
        x4 = (z13 + z24) * Fraction(1, 2)
        assert x3 * x3 - x4 * x4 == -(z13 * z24)
        assert half_diff == z13 - z24

    def test_segre_families_in_x_coordinates(self):
        ring = PolyRing(QQ, A_VARS)
        a0, a1, a2, a3 = (ring.var(v) for v in A_VARS)
        zero = ring.zero()
        assert segre_point_x("plus", ring) == (
            a0 * a0, -(a1 * a1), a0 * a1, zero, zero, zero,
        )
        assert segre_point_x("minus", ring) == (
            zero, zero, zero, a2 * a3, a2 * a2, a3 * a3,
        )

    def test_x_images_satisfy_split_quadric(self):
        ring = PolyRing(QQ, A_VARS)
        q = split_quadric_poly()
        for side in ("plus", "minus"):
            px = segre_point_x(side, ring)
            from quadclif.plucker import X_VARS

            assert q.subs(dict(zip(X_VARS, px))).is_zero()


# ---------------------------------------------------------------------------
# the two families and their common plane
# ---------------------------------------------------------------------------

class TestSegre:
    def test_full_symbolic_certificate(self):
        cert = segre_identity_check()
        assert cert.ok, cert.failures

    def test_rational_parameter_instance(self):
        ring = PolyRing(QQ, A_VARS)
        a = (2, 3, 5, 7)
        p_plus, p_minus = segre_points(ring)
        y = segre_y(ring)
        ws = wedge_with_basis(y, ring)
        pv = [[c.eval(a) for c in vec] for vec in ws]
        assert mat_rank(pv) == 3
        for pt in (p_plus, p_minus):
            ptv = [c.eval(a) for c in pt]
            assert any(ptv)
            assert mat_rank(pv + [ptv]) == 3

    def test_degenerate_parameter_instance(self):
        # a1 = a3 = 0: both families hit coordinate points, certificates
        # with nonzero localizing factor still place them in the plane
        ring = PolyRing(QQ, A_VARS)
        a = (1, 0, 1, 0)
        p_plus, p_minus = segre_points(ring)
        y = segre_y(ring)
        ws = wedge_with_basis(y, ring)
        wv = [[c.eval(a) for c in vec] for vec in ws]
        pp = [c.eval(a) for c in p_plus]
        pm = [c.eval(a) for c in p_minus]
        assert pp == [1, 0, 0, 0, 0, 0] and pp == wv[1]
        assert pm == [0, 0, 1, 0, 0, 0] and pm == wv[3]

    def test_points_on_plucker_quadric_numerically(self):
        ring = PolyRing(QQ, A_VARS)
        q = plucker_quadric_poly()
        rng = random.Random(11)
        p_plus, p_minus = segre_points(ring)
        for _ in range(8):
            a = tuple(Fraction(rng.randint(-9, 9)) for _ in range(4))
            for pt in (p_plus, p_minus):
                vals = [c.eval(a) for c in pt]
                assert q.eval(vals) == 0


# ---------------------------------------------------------------------------
# the 6×4 matrix of the even element
# ---------------------------------------------------------------------------

class TestM0:
    def test_symbolic_identities(self):
        assert m0_identity_check()

    def test_frozen_rows(self):
        rows = m0_matrix((2, 3, 5, 7))
        assert [list(map(int, r)) for r in rows] == [
            [2, 0, 0, 3],
            [0, 2, 0, 5],
            [0, 0, 2, 7],
            [0, 7, -5, 0],
            [-7, 0, 3, 0],
            [5, -3, 0, 0],
        ]

    def test_column_relation_recomputed(self):
        a = (Fraction(1, 2), Fraction(-3), Fraction(5, 7), Fraction(2))
        rows = m0_matrix(a)
        for row in rows:
            assert a[1] * row[0] + a[2] * row[1] + a[3] * row[2] - a[0] * row[3] == 0

    def test_rank_three_at_random_parameters(self):
        rng = random.Random(23)
        for _ in range(10):
            a = [rng.randint(-9, 9) for _ in range(4)]
            if not any(a):
                a[0] = 1
            rows = m0_matrix(a)
            assert mat_rank([list(r) for r in rows]) == 3

    def test_symbolic_matrix_shape(self):
        rows, a = m0_matrix_symbolic()
        assert len(rows) == 6 and all(len(r) == 4 for r in rows)
        # wedge rows carry the scalar on the diagonal
        for i in range(3):
            assert rows[i][i] == a[0]

    def test_zero_parameter_rejected(self):
        with pytest.raises(ValueError):
            m0_matrix((0, 0, 0, 0))
        with pytest.raises(ValueError):
            m0_matrix((1, 2, 3))


# ---------------------------------------------------------------------------
# adjugates along the curves
# ---------------------------------------------------------------------------

class TestAdjugate:
    def test_full_rank_off_curve(self):
        P = cached_pencil(42)
        rng = random.Random(5)
        for u in sample_invertible_points(P, rng, 3):
            for side in ("plus", "minus"):
                verdict, x = adjugate_double_line(P, side, u)
                assert verdict == "rank3" and x is None

    def test_double_line_on_curve_mod_p(self):
        P = cached_pencil(42)
        p = 101
        field = PrimeField(p)
        f = P.det_curves().f_plus
        pts = curve_points(f, p)
        assert pts
        for u in pts[:12]:
            verdict, x = adjugate_double_line(P, "plus", u, field)
            assert verdict == "double-line"
            assert any(x)

    def test_stratification_counts_mod_p(self):
        # every projective point is either off the curve with a rank-3
        # adjugate or on it with a certified double line
        P = cached_pencil(42)
        p = 101
        field = PrimeField(p)
        f = P.det_curves().f_minus
        on_curve = set(curve_points(f, p))
        rng = random.Random(17)
        seen_double = 0
        for u in on_curve:
            verdict, _ = adjugate_double_line(P, "minus", u, field)
            assert verdict == "double-line"
            seen_double += 1
        for _ in range(200):
            # normalized representatives match the scan's normal form
            u = (1, rng.randrange(p), rng.randrange(p))
            if u in on_curve:
                continue
            verdict, _ = adjugate_double_line(P, "minus", u, field)
            assert verdict == "rank3"
        assert seen_double == len(on_curve)

    def test_double_line_matches_diagonal_example(self):
        # block diag(2, 3, 0): adjugate is diag(0, 0, 6), the double of
        # the coordinate line
        P = diag_blocks(
            ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
            ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
        )
        verdict, x = adjugate_double_line(P, "plus", (2, 3, 0))
        assert verdict == "double-line"
        assert x[0] == 0 and x[1] == 0 and x[2] != 0

    def test_corank_two_raises(self):
        P = diag_blocks(
            ((1, 0, 0), (1, 0, 0), (0, 0, 1)),
            ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
        )
        # u = (0, 0, 1): plus block diag(0, 0, 1) has corank two
        with pytest.raises(GenericityError):
            adjugate_double_line(P, "plus", (0, 0, 1))


# ---------------------------------------------------------------------------
# two-dimensional modules at split points
# ---------------------------------------------------------------------------

class TestModuleRep:
    def rep_at(self, seed=42, side="plus"):
        P = cached_pencil(seed)
        rng = random.Random(3)
        u = sample_invertible_points(P, rng, 1)[0]
        return P, u, module_rep(P, side, u)

    def test_construction_and_d_scalar(self):
        P, u, rep = self.rep_at()
        uf = tuple(Fraction(c) for c in u)
        fval = P.det_curves().f_plus.eval(uf)
        assert rep.d_scalar * rep.d_scalar == rep.tower.coerce(fval)
        assert rep.d_scalar == rep.tower.sqrt(fval)
        assert len(rep.matrices) == 3

    def test_clifford_relations_recomputed(self):
        P, u, rep = self.rep_at(side="minus")
        tower = rep.tower
        for i in range(3):
            mi = rep.matrices[i]
            assert mi[0][0] + mi[1][1] == tower.zero
            for j in range(3):
                mj = rep.matrices[j]
                anti00 = (
                    mi[0][0] * mj[0][0] + mi[0][1] * mj[1][0]
                    + mj[0][0] * mi[0][0] + mj[0][1] * mi[1][0]
                )
                assert anti00 == tower.coerce(-2 * rep.block[i][j])

    def test_annihilator_roundtrip(self):
        _, _, rep = self.rep_at()
        tower = rep.tower
        lines = [
            (1, 0), (0, 1), (1, 1), (1, -1), (1, 2),
            (2, 1), (1, 3), (3, 1), (2, -3), (1, -2),
        ]
        ws = []
        for m in lines:
            w = annihilator_line(rep, m)
            back = module_line_for(rep, w)
            mt = tuple(tower.coerce(c) for c in m)
            assert lines_proportional(mt, back)
            ws.append(w)
        for i in range(len(ws)):
            for j in range(i + 1, len(ws)):
                assert not lines_proportional(ws[i], ws[j])

    def test_annihilator_rejects_zero(self):
        _, _, rep = self.rep_at()
        with pytest.raises(ValueError):
            annihilator_line(rep, (0, 0))
        with pytest.raises(ValueError):
            module_line_for(rep, (0, 0, 0))
