"""Isotropic geometry of the split six-dimensional quadric: the
line-Plücker model, the two rational families sweeping it out, rank-one
adjugates along the determinant curves, and the two-dimensional modules
attached to split fibers.

Everything here is either fully symbolic (polynomial identities over Q)
or exact at a chosen base point.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .exactalg import QQ, PolyRing, mat_kernel, mat_rank
from .fiber import (
    FiberError,
    QuadraticTower,
    _Echelon,
    _side_algebra,
    split_full_rank,
)
from .geometry import GenericityError

X_VARS = ("x1", "x2", "x3", "x4", "x5", "x6")
Z_VARS = ("z12", "z13", "z14", "z23", "z24", "z34")
A_VARS = ("a0", "a1", "a2", "a3")

# index pairs behind the z coordinates, in the fixed basis order
Z_PAIRS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))


# ---------------------------------------------------------------------------
# the line-Plücker model of the split quadric
# ---------------------------------------------------------------------------

def split_quadric_poly(ring=None):
    """x1 x2 + x3² - x4² + x5 x6."""
    ring = ring or PolyRing(QQ, X_VARS)
    x = [ring.var(v) for v in X_VARS]
    return x[0] * x[1] + x[2] * x[2] - x[3] * x[3] + x[4] * x[5]


def plucker_quadric_poly(ring=None):
    """z12 z34 - z13 z24 + z14 z23: the image of the wedge square."""
    ring = ring or PolyRing(QQ, Z_VARS)
    z = [ring.var(v) for v in Z_VARS]
    return z[0] * z[5] - z[1] * z[4] + z[2] * z[3]


def plucker_transform():
    """Invertible rational matrix M with x = M z carrying the Plücker
    quadric onto the split form: x3 and x4 are the half sum/difference of
    the two middle coordinates, the rest match up directly."""
    h = Fraction(1, 2)
    return (
        (Fraction(1), Fraction(0), Fraction(0), Fraction(0), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(0), Fraction(0), Fraction(0), Fraction(1)),
        (Fraction(0), h, Fraction(0), Fraction(0), -h, Fraction(0)),
        (Fraction(0), h, Fraction(0), Fraction(0), h, Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(1), Fraction(0), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(0), Fraction(1), Fraction(0), Fraction(0)),
    )


def transform_identity_check():
    """Symbolic proof that the transform matches the two quadrics."""
    zring = PolyRing(QQ, Z_VARS)
    z = [zring.var(v) for v in Z_VARS]
    M = plucker_transform()
    if mat_rank([list(r) for r in M]) != 6:
        return False
    xring = PolyRing(QQ, X_VARS)
    images = []
    for row in M:
        acc = zring.zero()
        for c, zv in zip(row, z):
            if c:
                acc = acc + zv * c
        images.append(acc)
    q = split_quadric_poly(xring)
    transported = q.subs(dict(zip(X_VARS, images)))
    return transported == plucker_quadric_poly(zring)


# ---------------------------------------------------------------------------
# the two Segre families and their common isotropic plane
# ---------------------------------------------------------------------------

def segre_points(ring=None):
    """The two isotropic curves (p₊, p₋) in Plücker coordinates, as
    polynomial 6-vectors in the family parameters a0..a3."""
    ring = ring or PolyRing(QQ, A_VARS)
    a0, a1, a2, a3 = (ring.var(v) for v in A_VARS[:4])
    zero = ring.zero()
    p_plus = (a0 * a0, a0 * a1, zero, zero, -(a0 * a1), -(a1 * a1))
    p_minus = (zero, a2 * a3, a2 * a2, a3 * a3, a2 * a3, zero)
    return p_plus, p_minus


def segre_point_x(side, ring=None):
    """The same families pushed through the transform to x coordinates."""
    ring = ring or PolyRing(QQ, A_VARS)
    p_plus, p_minus = segre_points(ring)
    p = p_plus if side == "plus" else p_minus
    out = []
    for row in plucker_transform():
        acc = ring.zero()
        for c, comp in zip(row, p):
            if c:
                acc = acc + comp * c
        out.append(acc)
    return tuple(out)


def segre_y(ring):
    """The point of the three-space both families of lines pass through."""
    a0, a1, a2, a3 = (ring.var(v) for v in A_VARS[:4])
    return (a0 * a2, a0 * a3, a1 * a3, a1 * a2)


def wedge_with_basis(y, ring):
    """w_j = y ∧ e_j for j = 1..4, in the fixed z ordering: the pencil of
    lines through y, spanning the isotropic plane of the two families."""
    ws = []
    for j in range(1, 5):
        vec = []
        for (k, l) in Z_PAIRS:
            if l == j:
                vec.append(y[k - 1])
            elif k == j:
                vec.append(-y[l - 1])
            else:
                vec.append(ring.zero())
        ws.append(tuple(vec))
    return ws


def _det_poly(rows):
    """Leibniz determinant of a small square matrix of polynomials."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = None
    for j in range(n):
        entry = rows[0][j]
        if not entry.is_zero():
            minor = _det_poly([r[:j] + r[j + 1:] for r in rows[1:]])
            term = entry * minor
            if j % 2:
                term = -term
            acc = term if acc is None else acc + term
    if acc is None:
        return rows[0][0].ring.zero()
    return acc


def poly_residual_hash(polys):
    """Stable digest of a list of residual polynomials; all-zero residuals
    hash to a fixed value, so reports can pin the symbolic outcome."""
    payload = json.dumps([p.to_json_terms() for p in polys],
                         sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass(frozen=True)
class SegreCert:
    ok: bool
    failures: tuple
    residual_sha256: str = ""


def segre_identity_check():
    """All the polynomial identities behind the two families at once:

    * both families land on the Plücker quadric;
    * the localized certificates writing a·p± inside the span of the w_j;
    * every 4×4 minor of (w1 w2 w3 w4 p₊ p₋) vanishes, while some 3×3
      minor of the w's alone is a nonzero polynomial (the span is an
      honest plane through both families);
    * the Plücker quadric vanishes identically on that span.
    """
    ring = PolyRing(QQ, A_VARS)
    a0, a1, a2, a3 = (ring.var(v) for v in A_VARS[:4])
    p_plus, p_minus = segre_points(ring)
    q = plucker_quadric_poly(PolyRing(QQ, Z_VARS))
    y = segre_y(ring)
    ws = wedge_with_basis(y, ring)

    failures = []
    residuals = []

    def eval_quadric(vec):
        return q.subs(dict(zip(Z_VARS, vec)))

    for name, pt in (("plus-family-not-isotropic", p_plus),
                     ("minus-family-not-isotropic", p_minus)):
        r = eval_quadric(pt)
        residuals.append(r)
        if not r.is_zero():
            failures.append(name)

    def scale(vec, c):
        return tuple(x * c for x in vec)

    def vadd(u, v):
        return tuple(x + y_ for x, y_ in zip(u, v))

    certs = [
        ("plus-cert-a2", scale(p_plus, a2), vadd(scale(ws[1], a0), scale(ws[2], a1))),
        ("plus-cert-a3", scale(p_plus, -a3), vadd(scale(ws[0], a0), scale(ws[3], a1))),
        ("minus-cert-a1", scale(p_minus, -a1), vadd(scale(ws[0], a2), scale(ws[1], a3))),
        ("minus-cert-a0", scale(p_minus, a0), vadd(scale(ws[2], a3), scale(ws[3], a2))),
    ]
    for name, lhs, rhs in certs:
        diffs = [x - y_ for x, y_ in zip(lhs, rhs)]
        residuals.extend(diffs)
        if not all(d.is_zero() for d in diffs):
            failures.append(name)

    cols = ws + [list(p_plus), list(p_minus)]
    for ci in combinations(range(6), 4):
        for ri in combinations(range(6), 4):
            d = _det_poly([[cols[c][r] for c in ci] for r in ri])
            residuals.append(d)
            if not d.is_zero():
                failures.append(f"minor-4x4-{ci}-{ri}")
    some_rank3 = False
    for ci in combinations(range(4), 3):
        if some_rank3:
            break
        for ri in combinations(range(6), 3):
            rows = [[cols[c][r] for c in ci] for r in ri]
            if not _det_poly(rows).is_zero():
                some_rank3 = True
                break
    if not some_rank3:
        failures.append("w-span-degenerate")

    big = PolyRing(QQ, A_VARS + ("c1", "c2", "c3", "c4"))
    cs = [big.var(f"c{j}") for j in range(1, 5)]
    embed = {v: big.var(v) for v in A_VARS}
    span = [big.zero()] * 6
    for j, w in enumerate(ws):
        for k, comp in enumerate(w):
            if not comp.is_zero():
                span[k] = span[k] + comp.subs(embed) * cs[j]
    span_res = q.subs(dict(zip(Z_VARS, span)))
    residuals.append(span_res)
    if not span_res.is_zero():
        failures.append("span-not-isotropic")

    return SegreCert(ok=not failures, failures=tuple(failures),
                     residual_sha256=poly_residual_hash(residuals))


# ---------------------------------------------------------------------------
# the 6×4 matrix of an even exterior element acting into the odd part
# ---------------------------------------------------------------------------

def _m0_rows(a, zero):
    """Matrix of v ↦ v·m on the odd basis (v1, v2, v3, v1∧v2∧v3), where
    m = a0 + a1 v2∧v3 + a2 v3∧v1 + a3 v1∧v2; the first three inputs act
    by wedging, the dual three by contraction."""
    a0, a1, a2, a3 = a
    # m on exterior masks (bit k = generator k+1)
    m = {0b000: a0, 0b110: a1, 0b101: -a2, 0b011: a3}
    odd_index = {0b001: 0, 0b010: 1, 0b100: 2, 0b111: 3}

    def wedge(i, mask):
        bit = 1 << i
        if mask & bit:
            return None
        below = bin(mask & (bit - 1)).count("1")
        return mask | bit, -1 if below % 2 else 1

    def contract(i, mask):
        bit = 1 << i
        if not mask & bit:
            return None
        below = bin(mask & (bit - 1)).count("1")
        return mask ^ bit, -1 if below % 2 else 1

    rows = []
    for k in range(6):
        action = wedge if k < 3 else contract
        i = k % 3
        out = {}
        for mask, coeff in m.items():
            hit = action(i, mask)
            if hit is None:
                continue
            tgt, sgn = hit
            val = coeff if sgn > 0 else -coeff
            out[tgt] = out.get(tgt, zero) + val
        row = [zero] * 4
        for tgt, val in out.items():
            row[odd_index[tgt]] = val
        rows.append(tuple(row))
    return tuple(rows)


def m0_matrix(a):
    """The 6×4 matrix at a rational parameter point, with its built-in
    certificates: the columns satisfy one exact linear relation, so every
    4×4 minor vanishes, and the rank is exactly three whenever a ≠ 0."""
    a = tuple(Fraction(x) for x in a)
    if len(a) != 4:
        raise ValueError("four parameters expected")
    if not any(a):
        raise ValueError("the zero parameter point is not allowed")
    rows = _m0_rows(a, Fraction(0))
    a0, a1, a2, a3 = a
    for row in rows:
        if a1 * row[0] + a2 * row[1] + a3 * row[2] - a0 * row[3] != 0:
            raise AssertionError("column relation failed")
    if mat_rank([list(r) for r in rows]) != 3:
        raise AssertionError("rank is not three")
    return rows


def m0_matrix_symbolic(ring=None):
    """The same matrix with polynomial entries, for identity checking."""
    ring = ring or PolyRing(QQ, A_VARS)
    a = tuple(ring.var(v) for v in A_VARS)
    return _m0_rows(a, ring.zero()), a


def m0_identity_check():
    """Symbolically: the column relation, the vanishing of all 4×4
    minors, and cube-of-parameter 3×3 minors witnessing rank three."""
    ring = PolyRing(QQ, A_VARS)
    rows, a = m0_matrix_symbolic(ring)
    a0, a1, a2, a3 = a
    for row in rows:
        rel = row[0] * a1 + row[1] * a2 + row[2] * a3 - row[3] * a0
        if not rel.is_zero():
            return False
    for ri in combinations(range(6), 4):
        rows4 = [list(rows[r]) for r in ri]
        if not _det_poly(rows4).is_zero():
            return False
    cubes = set()
    for ri in combinations(range(6), 3):
        for ci in combinations(range(4), 3):
            d = _det_poly([[rows[r][c] for c in ci] for r in ri])
            for v, av in zip(A_VARS, a):
                if d == av * av * av or d == -(av * av * av):
                    cubes.add(v)
    return cubes == set(A_VARS)


# ---------------------------------------------------------------------------
# adjugates along the determinant curves
# ---------------------------------------------------------------------------

def adjugate_double_line(P, side, u, field=None):
    """Stratify the adjugate of one block at u: full rank away from the
    curve, and on the curve a certified rank-one symmetric matrix (the
    double of the kernel line); corank two or a failed rank-one
    certificate raises GenericityError."""
    if field is None:
        field = QQ
    block = P.block_at(tuple(Fraction(c) for c in u), side)
    m = [[field.coerce(x) for x in row] for row in block]

    def cof(i, j):
        r = [k for k in range(3) if k != i]
        c = [k for k in range(3) if k != j]
        d = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
        return d if (i + j) % 2 == 0 else -d

    adj = [[cof(j, i) for j in range(3)] for i in range(3)]
    det = sum((m[0][k] * adj[k][0] for k in range(3)), field.zero)
    if det:
        return "rank3", None
    if all(not x for row in adj for x in row):
        raise GenericityError(f"corank at least two at {tuple(u)}")
    i0 = next((i for i in range(3) if adj[i][i]), None)
    if i0 is None:
        raise GenericityError("adjugate is not a double line")
    x = tuple(adj[i][i0] for i in range(3))
    piv = adj[i0][i0]
    for i in range(3):
        for j in range(3):
            if adj[i][j] * piv != x[i] * x[j]:
                raise GenericityError("adjugate is not a double line")
    for i in range(3):
        if sum((m[i][k] * x[k] for k in range(3)), field.zero):
            raise GenericityError("double line is not the kernel line")
    return "double-line", x


# ---------------------------------------------------------------------------
# two-dimensional modules over split fibers
# ---------------------------------------------------------------------------

@dataclass
class ModuleRep:
    tower: QuadraticTower
    point: tuple
    matrices: tuple   # action of the three generators, 2×2 over the tower
    d_scalar: object  # the odd central element acts by this scalar
    block: tuple      # the 3×3 rational value of the form at the point


def _mat2_mul(x, y):
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def _mat2_add(x, y):
    return tuple(tuple(a + b for a, b in zip(rx, ry)) for rx, ry in zip(x, y))


W_CANDIDATES = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1))


def module_rep(P, side, u):
    """A two-dimensional module for the block at a point of full rank:
    split the fiber, pick an anisotropic vector w, and cut the split
    corner by the idempotent of v_w/√(-q(w, w)).  The generator matrices
    then satisfy the Clifford relations of the block on the nose and the
    odd central element acts by the square root of the determinant."""
    tower, (C, _), _ = split_full_rank(P, side, u)
    uf = tuple(Fraction(c) for c in u)
    block = P.block_at(uf, side)

    lam = None
    for w in W_CANDIDATES:
        val = -sum(w[i] * block[i][j] * w[j] for i in range(3) for j in range(3))
        if val:
            lam, wvec = Fraction(val), w
            break
    if lam is None:
        raise FiberError("the form vanished on every candidate vector")
    s = tower.sqrt(lam)
    if s is None:
        tower, s = tower.extended(lam)
        C = C.map_field(tower)
    x = C.vzero()
    for wi, g in zip(wvec, C.gens):
        if wi:
            x = C.vadd(x, C.vscale(g, tower.coerce(wi)))
    if C.mul(x, x) != C.scalar_vec(lam):
        raise AssertionError("anisotropic vector square drifted")
    half = tower.one / tower.coerce(2)
    p = C.vscale(C.vadd(C.unit, C.vscale(x, tower.one / s)), half)
    if C.mul(p, p) != p:
        raise AssertionError("module idempotent law failed")

    ech = _Echelon(tower, C.dim)
    for i in range(C.dim):
        ech.add(C.mul(C.basis_vec(i), p))
    if ech.dim() != 2:
        raise FiberError(f"module dimension {ech.dim()} instead of 2")
    basis = ech.basis_vectors()

    def action(vec):
        cols = []
        for b in basis:
            c = ech.coords(C.mul(vec, b))
            if c is None:
                raise AssertionError("module is not stable under the algebra")
            cols.append(c)
        return ((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1]))

    mats = tuple(action(g) for g in C.gens)

    ident = ((tower.one, tower.zero), (tower.zero, tower.one))
    for i in range(3):
        if mats[i][0][0] + mats[i][1][1] != tower.zero:
            raise AssertionError("generator action must be traceless")
        for j in range(3):
            anti = _mat2_add(_mat2_mul(mats[i], mats[j]),
                             _mat2_mul(mats[j], mats[i]))
            want = tuple(
                tuple(tower.coerce(-2 * block[i][j]) * e for e in r) for r in ident
            )
            if anti != want:
                raise AssertionError("Clifford relation failed in the module")

    # the odd central element must act by the split square root
    dres = _side_algebra(P, side)[1]
    r_at = [r.eval(uf) for r in dres.r_coeffs]
    d_mat = _mat2_mul(_mat2_mul(mats[0], mats[1]), mats[2])
    for rv, mat in zip(r_at, mats):
        d_mat = _mat2_add(d_mat, tuple(
            tuple(tower.coerce(rv) * e for e in r) for r in mat
        ))
    fval = P.det_curves()
    fval = (fval.f_plus if side == "plus" else fval.f_minus).eval(uf)
    root = tower.sqrt(fval)
    if root is None:
        raise AssertionError("determinant root left the tower")
    scal = tuple(tuple(root * e for e in r) for r in ident)
    if d_mat not in (scal, tuple(tuple(-root * e for e in r) for r in ident)):
        raise AssertionError("odd central element does not act as ±√det")
    d_scalar = root if d_mat == scal else -root
    return ModuleRep(tower=tower, point=tuple(u), matrices=mats,
                     d_scalar=d_scalar, block=block)


def _apply2(mat, m):
    return (mat[0][0] * m[0] + mat[0][1] * m[1], mat[1][0] * m[0] + mat[1][1] * m[1])


def annihilator_line(rep, m):
    """The unique line of vectors w with ρ(v_w)·m = 0; it is always
    isotropic for the block's form at the base point."""
    tower = rep.tower
    m = tuple(tower.coerce(c) for c in m)
    if not any(m):
        raise ValueError("the zero module vector has no annihilator line")
    images = [_apply2(mat, m) for mat in rep.matrices]
    rows = [[images[j][r] for j in range(3)] for r in range(2)]
    ker = mat_kernel(rows, 3, tower)
    if len(ker) != 1:
        raise FiberError(f"annihilator dimension {len(ker)} instead of 1")
    w = tuple(ker[0])
    q = tower.zero
    for i in range(3):
        for j in range(3):
            q = q + w[i] * tower.coerce(rep.block[i][j]) * w[j]
    if q != tower.zero:
        raise AssertionError("annihilator line is not isotropic")
    return w


def module_line_for(rep, w):
    """Inverse direction: the kernel line of ρ(v_w) for isotropic w."""
    tower = rep.tower
    w = tuple(tower.coerce(c) for c in w)
    if not any(w):
        raise ValueError("w must be nonzero")
    rho = ((tower.zero, tower.zero), (tower.zero, tower.zero))
    for wi, mat in zip(w, rep.matrices):
        rho = _mat2_add(rho, tuple(tuple(wi * e for e in r) for r in mat))
    ker = mat_kernel([list(rho[0]), list(rho[1])], 2, tower)
    if len(ker) != 1:
        raise FiberError(f"kernel dimension {len(ker)} instead of 1")
    m = tuple(ker[0])
    if any(_apply2(rho, m)):
        raise AssertionError("kernel vector fails to be annihilated")
    return m


def lines_proportional(u, v):
    return mat_rank([[a, b] for a, b in zip(u, v)]) <= 1
