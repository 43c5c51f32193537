"""Kernel tests: fields, polynomials, determinants, resultants."""

import random
from fractions import Fraction

import pytest

from quadclif.exactalg import (
    QQ,
    QQI,
    GaussianRational,
    PrimeField,
    PolyRing,
    SymMatrix,
    as_univariate,
    bareiss_det,
    gradient,
    identity_matrix,
    is_square_fraction,
    kernel_int_sparse,
    mat_adjugate3,
    mat_det,
    mat_kernel,
    mat_rank,
    mat_solve,
    poly_exact_div,
    squarefree_univariate,
    sylvester_resultant,
)


F101 = PrimeField(101)


def rand_fraction(rng, bound=9):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


# -- fields -----------------------------------------------------------------


def test_prime_field_arithmetic():
    a = F101.coerce(45)
    b = F101.coerce(77)
    assert a + b == 45 + 77
    assert a * b == (45 * 77) % 101
    assert (a / b) * b == a
    assert -a == 101 - 45
    assert bool(F101.zero) is False
    with pytest.raises(ZeroDivisionError):
        a / F101.zero


def test_prime_field_fraction_coercion():
    x = F101.coerce(Fraction(3, 7))
    assert x * 7 == 3


def test_prime_field_sqrt():
    r = F101.sqrt(F101.coerce(4))
    assert r is not None and r * r == 4
    # 101 = 1 mod 4 so -1 is a square
    r = F101.sqrt(F101.coerce(-1))
    assert r is not None and r * r == -1


def test_gaussian_rationals():
    i = QQI.i
    assert i * i == -1
    z = GaussianRational(2, 3)
    w = GaussianRational(Fraction(1, 2), -1)
    assert (z * w) / w == z
    assert z + w - w == z
    assert bool(QQI.zero) is False


def test_field_axioms_random_triples():
    rng = random.Random(7)
    for field, sample in [
        (QQ, lambda: rand_fraction(rng)),
        (F101, lambda: F101.coerce(rng.randrange(101))),
        (QQI, lambda: GaussianRational(rand_fraction(rng), rand_fraction(rng))),
    ]:
        for _ in range(25):
            a, b, c = sample(), sample(), sample()
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            if b:
                assert (a / b) * b == a


def test_is_square_fraction():
    assert is_square_fraction(Fraction(9, 4)) == Fraction(3, 2)
    assert is_square_fraction(Fraction(2)) is None
    assert is_square_fraction(Fraction(-1)) is None
    assert is_square_fraction(Fraction(0)) == 0


# -- polynomials --------------------------------------------------------------


@pytest.fixture
def Ru():
    return PolyRing(QQ, ("u1", "u2", "u3"))


def rand_poly(rng, ring, deg=3, nterms=6):
    items = []
    for _ in range(nterms):
        e = [0] * len(ring.vars)
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(len(ring.vars))] += 1
        items.append((tuple(e), rand_fraction(rng)))
    return ring.from_terms(items)


def test_poly_ring_axioms(Ru):
    rng = random.Random(11)
    for _ in range(20):
        f, g, h = (rand_poly(rng, Ru) for _ in range(3))
        assert (f + g) * h == f * h + g * h
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
        assert f - f == Ru.zero()


def test_poly_eval_matches_structure(Ru):
    u1, u2, u3 = (Ru.var(v) for v in Ru.vars)
    f = u1 * u2 - 3 * u3 ** 2 + 1
    assert f.eval([2, 5, 1]) == 2 * 5 - 3 + 1
    assert f.total_degree() == 2
    assert not f.is_homogeneous()
    assert (u1 * u2 * u3).is_homogeneous()


def test_poly_derivative_and_euler(Ru):
    rng = random.Random(3)
    # Euler identity: sum u_i df/du_i = d*f for homogeneous f
    for d in range(1, 6):
        items = []
        for _ in range(8):
            e = [0, 0, 0]
            for _ in range(d):
                e[rng.randrange(3)] += 1
            items.append((tuple(e), rand_fraction(rng)))
        f = Ru.from_terms(items)
        if f.is_zero():
            continue
        lhs = Ru.zero()
        for v in Ru.vars:
            lhs = lhs + Ru.var(v) * f.derivative(v)
        assert lhs == f * d


def test_poly_subs(Ru):
    u1, u2, u3 = (Ru.var(v) for v in Ru.vars)
    f = u1 ** 2 + u2 * u3
    g = f.subs({"u1": u2, "u2": u3, "u3": u1})
    assert g == u2 ** 2 + u3 * u1


def test_poly_exact_div(Ru):
    rng = random.Random(5)
    for _ in range(15):
        f = rand_poly(rng, Ru)
        g = rand_poly(rng, Ru)
        if g.is_zero():
            continue
        assert poly_exact_div(f * g, g) == f
    u1 = Ru.var("u1")
    with pytest.raises(ValueError):
        poly_exact_div(u1 + 1, u1 * u1)


def test_coeff_of_power(Ru):
    u1, u2, u3 = (Ru.var(v) for v in Ru.vars)
    f = u3 ** 2 * u1 + u3 * u2 + 5
    assert f.coeff_of_power("u3", 2) == u1
    assert f.coeff_of_power("u3", 1) == u2
    assert f.coeff_of_power("u3", 0) == Ru.const(5)


def test_serialization_grlex_order(Ru):
    u1, u2, u3 = (Ru.var(v) for v in Ru.vars)
    f = u2 + u1 ** 2 + u3 + 1
    terms = f.to_json_terms()
    assert terms[0][0] == [2, 0, 0]
    assert terms[-1][0] == [0, 0, 0]
    assert terms[1][0] == [0, 1, 0] and terms[2][0] == [0, 0, 1]


# -- symmetric matrices ---------------------------------------------------------


def test_det3_symbolic():
    ring = PolyRing(QQ, ("a", "b", "c", "d", "e", "f"))
    a, b, c, d, e, f = (ring.var(v) for v in ring.vars)
    M = SymMatrix(ring, [[a, b, c], [b, d, e], [c, e, f]])
    expect = a * d * f + 2 * b * e * c - a * e * e - d * c * c - f * b * b
    assert M.det3() == expect
    assert M.det3() == M.det()


def test_adjugate_identity_rational():
    rng = random.Random(13)
    ring = PolyRing(QQ, ("t",))
    for _ in range(100):
        vals = [[Fraction(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)]
        rows = [[ring.const(vals[min(i, j)][max(i, j)]) for j in range(3)] for i in range(3)]
        M = SymMatrix(ring, rows)
        A = M.adj3()
        P = M.mat_mul(A)
        det = M.det3()
        for i in range(3):
            for j in range(3):
                assert P[i][j] == (det if i == j else ring.zero())


def test_adjugate_vanishes_on_corank_two():
    ring = PolyRing(QQ, ("t",))
    z, o = ring.zero(), ring.one()
    M = SymMatrix(ring, [[o, z, z], [z, z, z], [z, z, z]])
    A = M.adj3()
    assert all(not A[i, j] for i in range(3) for j in range(3))


def test_identity_matrix(Ru):
    I = identity_matrix(Ru, 3)
    assert I.det3() == Ru.one()


# -- resultants -------------------------------------------------------------


def test_bareiss_matches_cofactor_det(Ru):
    rng = random.Random(17)
    for _ in range(10):
        vals = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(i, 3):
                vals[i][j] = vals[j][i] = rand_poly(rng, Ru, deg=1, nterms=2)
        M = SymMatrix(Ru, vals)
        assert bareiss_det([list(r) for r in M.rows], Ru) == M.det()


def test_resultant_degree_and_specialization():
    ring = PolyRing(QQ, ("s", "t"))
    s, t = ring.var("s"), ring.var("t")
    # res_t of (t - s)(t - 2s) and (t - 3s) is product of differences
    f = (t - s) * (t - 2 * s)
    g = t - 3 * s
    r = sylvester_resultant(f, g, "t")
    assert r == (3 * s - s) * (3 * s - 2 * s)


def test_resultant_shared_root_vanishes():
    ring = PolyRing(QQ, ("s", "t"))
    s, t = ring.var("s"), ring.var("t")
    f = (t - s) * (t + 1)
    g = (t - s) * (t - 2)
    assert sylvester_resultant(f, g, "t").is_zero()


def test_resultant_vs_fp_bruteforce():
    # over F_p: res(f,g) = 0 iff f and g share a root, when leading
    # coefficients do not vanish
    p = 11
    Fp = PrimeField(p)
    ring = PolyRing(Fp, ("t",))
    t = ring.var("t")
    rng = random.Random(23)
    for _ in range(40):
        f = ring.one()
        for _ in range(2):
            f = f * (t - rng.randrange(p))
        g = ring.one()
        for _ in range(2):
            g = g * (t - rng.randrange(p))
        r = sylvester_resultant(f, g, "t")
        roots_f = {a for a in range(p) if not f.eval([a])}
        roots_g = {a for a in range(p) if not g.eval([a])}
        assert r.is_zero() == bool(roots_f & roots_g)


def test_resultant_multiplicative_in_first_arg():
    ring = PolyRing(QQ, ("s", "t"))
    s, t = ring.var("s"), ring.var("t")
    f1 = t - s
    f2 = t ** 2 + s ** 2 + 1
    g = t - 2 * s + 1
    lhs = sylvester_resultant(f1 * f2, g, "t")
    rhs = sylvester_resultant(f1, g, "t") * sylvester_resultant(f2, g, "t")
    assert lhs == rhs


def test_squarefree_detection():
    ring = PolyRing(QQ, ("t",))
    t = ring.var("t")
    sf, _ = squarefree_univariate((t - 1) * (t - 2) * (t + 3), "t")
    assert sf
    sf, g = squarefree_univariate((t - 1) ** 2 * (t + 5), "t")
    assert not sf
    assert g.degree_in("t") == 1
    assert not g.eval([1])


def test_as_univariate_rejects_extra_vars(Ru):
    f = Ru.var("u1") + Ru.var("u2")
    with pytest.raises(ValueError):
        as_univariate(f, "u1")


def test_gradient(Ru):
    u1, u2, u3 = (Ru.var(v) for v in Ru.vars)
    f = u1 * u2 * u3
    g = gradient(f)
    assert g == (u2 * u3, u1 * u3, u1 * u2)


# -- numeric linear algebra -----------------------------------------------------


def test_rank_kernel_consistency():
    rng = random.Random(29)
    for _ in range(30):
        nrows, ncols = rng.randint(1, 5), rng.randint(1, 5)
        rows = [[rand_fraction(rng, 3) for _ in range(ncols)] for _ in range(nrows)]
        r = mat_rank(rows)
        ker = mat_kernel(rows, ncols, QQ)
        assert r + len(ker) == ncols
        for v in ker:
            for row in rows:
                assert sum(a * b for a, b in zip(row, v)) == 0


def test_det_and_solve():
    rng = random.Random(31)
    for _ in range(20):
        n = rng.randint(1, 4)
        rows = [[rand_fraction(rng, 4) for _ in range(n)] for _ in range(n)]
        d = mat_det(rows, QQ)
        if not d:
            continue
        x_true = [rand_fraction(rng, 4) for _ in range(n)]
        rhs = [sum(a * b for a, b in zip(row, x_true)) for row in rows]
        x = mat_solve(rows, rhs, QQ)
        assert x == x_true


def test_adjugate3_numeric():
    rng = random.Random(37)
    for _ in range(50):
        m = [[rand_fraction(rng, 4) for _ in range(3)] for _ in range(3)]
        adj = mat_adjugate3(m, QQ)
        d = mat_det(m, QQ)
        prod = [
            [sum(m[i][k] * adj[k][j] for k in range(3)) for j in range(3)]
            for i in range(3)
        ]
        for i in range(3):
            for j in range(3):
                assert prod[i][j] == (d if i == j else 0)


def test_kernel_int_sparse():
    # rows encode x0 + 2 x1 = 0, x2 free
    rows = [{0: 1, 1: 2}]
    basis = kernel_int_sparse(rows, 3)
    assert len(basis) == 2
    for v in basis:
        assert v[0] * 1 + v[1] * 2 == 0
    # random consistency with dense rational kernel
    rng = random.Random(41)
    for _ in range(20):
        nrows, ncols = rng.randint(1, 4), rng.randint(2, 6)
        dense = [[rng.randint(-3, 3) for _ in range(ncols)] for _ in range(nrows)]
        sparse = [{j: r[j] for j in range(ncols) if r[j]} for r in dense]
        b1 = kernel_int_sparse(sparse, ncols)
        b2 = mat_kernel([[Fraction(x) for x in r] for r in dense], ncols, QQ)
        assert len(b1) == len(b2)
        for v in b1:
            for row in dense:
                assert sum(a * b for a, b in zip(row, v)) == 0
