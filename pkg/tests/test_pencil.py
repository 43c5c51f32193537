"""Instance model: block structure, determinant cubics, genericity."""

from fractions import Fraction

import pytest

from quadclif.exactalg import QQ, PolyRing, SymMatrix, mat_rank
from quadclif.pencil import (
    URING,
    InvariantPencil,
    GenerationError,
    generate,
    genericity_check,
    resultant_nine_points,
)


def diag_pencil(minus=None):
    """q_plus[k] = E_kk so f_plus = u1*u2*u3; q_minus defaults to the same."""
    e = lambda k: tuple(
        tuple(1 if i == j == k else 0 for j in range(3)) for i in range(3)
    )
    q = (e(0), e(1), e(2))
    return InvariantPencil(q_plus=q, q_minus=minus if minus is not None else q,
                           seed=0, coeff_bound=1)


def test_validation():
    ok = diag_pencil()
    assert ok.coeff_bound == 1
    with pytest.raises(ValueError):
        InvariantPencil(q_plus=((0,),), q_minus=ok.q_minus, seed=0, coeff_bound=1)
    bad = [[0, 1, 0], [0, 0, 0], [0, 0, 0]]
    with pytest.raises(ValueError):
        InvariantPencil(q_plus=(bad, bad, bad), q_minus=ok.q_minus,
                        seed=0, coeff_bound=1)


def test_diagonal_det_curve():
    P = diag_pencil()
    u1, u2, u3 = (URING.var(v) for v in URING.vars)
    curves = P.det_curves()
    assert curves.f_plus == u1 * u2 * u3
    assert curves.f_plus.is_homogeneous()
    assert curves.f_plus.total_degree() == 3


def test_zero_minus_side_is_degenerate():
    zero = tuple(tuple((0,) * 3 for _ in range(3)) for _ in range(3))
    P = InvariantPencil(q_plus=diag_pencil().q_plus, q_minus=zero,
                        seed=0, coeff_bound=1)
    assert P.det_curves().f_minus.is_zero()
    rep = genericity_check(P)
    assert not rep.all_ok()
    assert any(w["kind"] == "degenerate_determinant" for w in rep.witnesses)


def test_quadric_at_basis_and_linearity(pencil42):
    P = pencil42
    m = P.quadric_at((1, 0, 0))
    for i in range(3):
        for j in range(3):
            assert m[i][j] == P.q_plus[0][i][j]
            assert m[3 + i][3 + j] == P.q_minus[0][i][j]
            assert m[i][3 + j] == 0
    m12 = P.quadric_at((1, 1, 0))
    m2 = P.quadric_at((0, 1, 0))
    for i in range(6):
        for j in range(6):
            assert m12[i][j] == m[i][j] + m2[i][j]
    with pytest.raises(ValueError):
        P.quadric_at((0, 0, 0))


def test_generic_point_rank_at_least_4(pencil42):
    m = pencil42.quadric_at((Fraction(1), Fraction(2), Fraction(5, 3)))
    assert mat_rank([list(r) for r in m]) >= 4


def test_block_det_factorization(pencil42):
    # det of the symbolic 6x6 equals f_plus * f_minus
    P = pencil42
    qp = P.linear_form_matrix("plus")
    qm = P.linear_form_matrix("minus")
    z = URING.zero()
    rows = []
    for i in range(3):
        rows.append([qp[i, j] for j in range(3)] + [z, z, z])
    for i in range(3):
        rows.append([z, z, z] + [qm[i, j] for j in range(3)])
    big = SymMatrix(URING, rows)
    curves = P.det_curves()
    assert big.det() == curves.f_plus * curves.f_minus


def test_generate_deterministic_and_generic(pencil42):
    again = generate(42, 5)
    assert again == pencil42
    rep = genericity_check(pencil42)
    assert rep.all_ok()
    assert rep.witnesses == ()


def test_generate_rejects_zero_bound():
    with pytest.raises(ValueError):
        generate(3, 0)


def test_generate_exhaustion():
    with pytest.raises(GenerationError):
        generate(0, 1, max_attempts=0)


def test_json_roundtrip_and_digest(pencil42):
    d = pencil42.to_json_dict()
    back = InvariantPencil.from_json_dict(d)
    assert back == pencil42
    assert pencil42.canonical_bytes() == back.canonical_bytes()
    assert len(pencil42.digest()) == 64
    with pytest.raises(ValueError):
        InvariantPencil.from_json_dict({"seed": 1})


def test_diagonal_pencil_fails_smoothness():
    rep = genericity_check(diag_pencil())
    assert not rep.e_plus_smooth
    coord_pts = {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    singular = {
        tuple(w["point"])
        for w in rep.witnesses
        if w["kind"] == "e_plus_singular"
    }
    assert singular & coord_pts


def test_equal_sides_fail_transversality(pencil42):
    P = InvariantPencil(q_plus=pencil42.q_plus, q_minus=pencil42.q_plus,
                        seed=0, coeff_bound=pencil42.coeff_bound)
    rep = genericity_check(P)
    assert not rep.transversal
    assert any(w["kind"] in ("tangency", "resultant") for w in rep.witnesses)


def test_resultant_nine_points_generic(pencil42):
    curves = pencil42.det_curves()
    nine, squarefree, deg, _ = resultant_nine_points(curves.f_plus, curves.f_minus)
    assert nine and squarefree and deg == 9


def test_resultant_shared_component():
    ring = URING
    u1, u2, u3 = (ring.var(v) for v in ring.vars)
    f_plus = u3 * (u1 ** 2 + u2 ** 2 + u3 ** 2)
    f_minus = u3 * (u1 ** 2 - u2 ** 2 + u3 ** 2)
    nine, squarefree, deg, notes = resultant_nine_points(f_plus, f_minus)
    assert not nine
    assert any("identically zero" in n for n in notes)


def test_resultant_tangent_pair_not_squarefree():
    # cubics meeting with multiplicity 3 at each common point
    ring = URING
    u1, u2, u3 = (ring.var(v) for v in ring.vars)
    f_plus = u1 ** 3 + u2 ** 3 + u3 ** 3
    f_minus = u1 ** 3 + u2 ** 3 + 2 * u3 ** 3
    nine, squarefree, deg, _ = resultant_nine_points(f_plus, f_minus)
    assert deg == 9
    assert not squarefree
    assert not nine
