"""Finite-dimensional fibers of the Clifford construction at chosen base
points: exact quadratic towers, structure-constant algebras, radical and
center computations, and matrix-algebra certification.

Scalars live in a small tower of quadratic extensions of Q (at most two
square roots, which is all the idempotent constructions need) or in a
prime field.  Everything is exact; no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .clifford import CliffordAlgebra, central_odd
from .exactalg import (
    PrimeField,
    QQ,
    is_square_fraction,
    mat_kernel,
    mat_rank,
    mat_solve,
)


class FiberError(Exception):
    """A fiber construction hit a degenerate input."""


# ---------------------------------------------------------------------------
# quadratic towers
# ---------------------------------------------------------------------------

class TowerElem:
    """Element of Q(sqrt a, sqrt b): coordinates on (1, √a, √b, √ab).

    Basis index bit 0 marks a factor √a, bit 1 a factor √b; products
    combine by xor with rational carry a and/or b on the shared bits.
    """

    __slots__ = ("tower", "c")

    def __init__(self, tower, c):
        self.tower = tower
        self.c = c

    def _coerce(self, other):
        if isinstance(other, TowerElem):
            if other.tower is self.tower or other.tower.radicands == self.tower.radicands:
                return other
            return self.tower.coerce(other)
        return self.tower.coerce(other)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return TowerElem(self.tower, tuple(x + y for x, y in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        return TowerElem(self.tower, tuple(-x for x in self.c))

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return TowerElem(self.tower, tuple(x - y for x, y in zip(self.c, other.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        a = self.tower._a
        b = self.tower._b
        out = [Fraction(0)] * 4
        for i, ci in enumerate(self.c):
            if not ci:
                continue
            for j, cj in enumerate(other.c):
                if not cj:
                    continue
                s = ci * cj
                if i & j & 1:
                    s *= a
                if i & j & 2:
                    s *= b
                out[i ^ j] += s
        return TowerElem(self.tower, tuple(out))

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero")
        t = self.tower
        c = self.c
        conj_b = TowerElem(t, (c[0], c[1], -c[2], -c[3]))
        n = self * conj_b  # lands in Q(√a)
        nc = n.c
        conj_a = TowerElem(t, (nc[0], -nc[1], Fraction(0), Fraction(0)))
        r = (n * conj_a).c
        if r[1] or r[2] or r[3] or not r[0]:
            raise ZeroDivisionError("norm degenerated; tower is not a field")
        return conj_b * conj_a * TowerElem(
            t, (1 / r[0], Fraction(0), Fraction(0), Fraction(0))
        )

    def __truediv__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.c == other.c

    def __bool__(self):
        return any(self.c)

    def __hash__(self):
        return hash((self.tower.radicands, self.c))

    def is_rational(self):
        return not (self.c[1] or self.c[2] or self.c[3])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("element is irrational")
        return self.c[0]

    def __repr__(self):
        rads = self.tower.radicands
        labels = ["", None, None, None]
        if len(rads) >= 1:
            labels[1] = f"*sqrt({rads[0]})"
        if len(rads) >= 2:
            labels[2] = f"*sqrt({rads[1]})"
            labels[3] = f"*sqrt({rads[0] * rads[1]})"
        parts = [f"{c}{labels[k]}" if k else f"{c}"
                 for k, c in enumerate(self.c) if c]
        return " + ".join(parts) if parts else "0"


class QuadraticTower:
    """Q with zero, one, or two adjoined square roots of rationals.

    The stored radicands are constrained so the result is a field: each
    is a non-square, and at level two the product of the two is also a
    non-square (so neither root lies in the subfield generated by the
    other).
    """

    def __init__(self, radicands=()):
        rads = tuple(Fraction(r) for r in radicands)
        if len(rads) > 2:
            raise ValueError("tower depth capped at two")
        for r in rads:
            if r == 0 or is_square_fraction(r) is not None:
                raise ValueError(f"radicand {r} is redundant")
        if len(rads) == 2:
            if is_square_fraction(rads[0] * rads[1]) is not None:
                raise ValueError("second radicand lies in the first extension")
        self.radicands = rads
        self.level = len(rads)
        self._a = rads[0] if self.level >= 1 else Fraction(0)
        self._b = rads[1] if self.level >= 2 else Fraction(0)
        self.zero = TowerElem(self, (Fraction(0),) * 4)
        self.one = TowerElem(self, (Fraction(1), Fraction(0), Fraction(0), Fraction(0)))
        self.name = self.describe()

    def describe(self):
        if self.level == 0:
            return "Q"
        inner = ", ".join(f"sqrt {r}" for r in self.radicands)
        return f"Q({inner})"

    def __repr__(self):
        return f"QuadraticTower({self.radicands})"

    def __eq__(self, other):
        return isinstance(other, QuadraticTower) and self.radicands == other.radicands

    def __hash__(self):
        return hash(self.radicands)

    def make(self, c0, c1=0, c2=0, c3=0):
        return TowerElem(self, (Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3)))

    def coerce(self, x):
        if isinstance(x, TowerElem):
            if x.tower.radicands == self.radicands:
                return TowerElem(self, x.c)
            # embed a shallower tower whose radicands are a prefix of ours
            if x.tower.radicands == self.radicands[: x.tower.level]:
                return TowerElem(self, x.c)
            raise ValueError("element of an incompatible tower")
        if isinstance(x, (int, str, Fraction)):
            return self.make(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def sqrt(self, x):
        """A square root of a RATIONAL tower element if one exists in the
        tower (as c, c√a, c√b, or c√ab), else None."""
        x = self.coerce(x)
        if not x.is_rational():
            return None
        v = x.rational_value()
        if v == 0:
            return self.zero
        s = is_square_fraction(v)
        if s is not None:
            return self.make(s)
        if self.level >= 1:
            s = is_square_fraction(v / self._a)
            if s is not None:
                return self.make(0, s)
        if self.level >= 2:
            s = is_square_fraction(v / self._b)
            if s is not None:
                return self.make(0, 0, s)
            s = is_square_fraction(v / (self._a * self._b))
            if s is not None:
                return self.make(0, 0, 0, s)
        return None

    def extended(self, r):
        """Tower with √r adjoined (r rational).  Returns (tower, √r);
        returns self if √r already exists."""
        r = Fraction(r)
        s = self.sqrt(self.make(r))
        if s is not None:
            return self, s
        new = QuadraticTower(self.radicands + (r,))
        return new, new.sqrt(new.make(r))

    @staticmethod
    def create(radicands):
        """Smallest tower containing √r for every requested rational r,
        together with those square roots.  Square and proportional-by-a-
        square radicands do not grow the tower."""
        rads = [Fraction(r) for r in radicands]
        tower = QuadraticTower(())
        for r in rads:
            tower, _ = tower.extended(r) if r != 0 else (tower, None)
        roots = [tower.sqrt(tower.make(r)) for r in rads]
        if any(s is None for s in roots):
            raise AssertionError("tower construction lost a radicand")
        return tower, roots


def describe_field(field):
    if isinstance(field, QuadraticTower):
        return field.describe()
    if isinstance(field, PrimeField):
        return f"F_{field.p}"
    return getattr(field, "name", repr(field))


def field_sqrt(field, x):
    if isinstance(field, QuadraticTower):
        return field.sqrt(x)
    if isinstance(field, PrimeField):
        return field.sqrt(x)
    return is_square_fraction(Fraction(x))


def _char_ok(field, dim):
    """Trace-form radicals are only trusted in characteristic 0 or > dim."""
    if isinstance(field, PrimeField) and field.p <= dim:
        raise ValueError(f"characteristic {field.p} too small for dimension {dim}")


# ---------------------------------------------------------------------------
# structure-constant algebras
# ---------------------------------------------------------------------------

class FinAlg:
    """Associative unital algebra given by dense structure constants.

    table[i][j] is the coordinate tuple of e_i·e_j.  The unit is always
    verified.  Associativity is verified on all basis triples for
    dimension at most 8; larger constructions built here (tensor products,
    corners, coerced copies) are associative by construction and are
    flagged `assoc` accordingly instead of re-checked, with a full check
    available via check_associativity().
    """

    def __init__(self, field, table, unit, gens=None, tensor_factors=None,
                 check="auto", assoc_note=None):
        self.field = field
        self.dim = len(table)
        for row in table:
            if len(row) != self.dim:
                raise ValueError("structure table is not square")
            for vec in row:
                if len(vec) != self.dim:
                    raise ValueError("structure vector has wrong length")
        self.table = table
        self.unit = tuple(unit)
        self.gens = [tuple(g) for g in gens] if gens is not None else None
        self.tensor_factors = tensor_factors
        self.assoc = None
        self._verify_unit()
        if check is True or (check == "auto" and self.dim <= 8):
            self.check_associativity()
        elif assoc_note:
            self.assoc = assoc_note

    # -- vector helpers ------------------------------------------------------

    def vzero(self):
        return tuple(self.field.zero for _ in range(self.dim))

    def basis_vec(self, i):
        return tuple(self.field.one if k == i else self.field.zero
                     for k in range(self.dim))

    def scalar_vec(self, c):
        c = self.field.coerce(c)
        return tuple(c * x for x in self.unit)

    def vadd(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def vsub(self, x, y):
        return tuple(a - b for a, b in zip(x, y))

    def vscale(self, x, c):
        return tuple(a * c for a in x)

    def mul(self, x, y):
        out = [self.field.zero] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.table[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                s = xi * yj
                for k, t in enumerate(row[j]):
                    if t:
                        out[k] = out[k] + s * t
        return tuple(out)

    # -- verification --------------------------------------------------------

    def _verify_unit(self):
        for i in range(self.dim):
            e = self.basis_vec(i)
            if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                raise ValueError("unit coordinates are wrong")

    def check_associativity(self):
        t = self.table
        for i in range(self.dim):
            for j in range(self.dim):
                ij = t[i][j]
                for k in range(self.dim):
                    left = self.mul(ij, self.basis_vec(k))
                    right = self.mul(self.basis_vec(i), t[j][k])
                    if left != right:
                        raise ValueError(
                            f"associativity fails on basis triple {(i, j, k)}"
                        )
        self.assoc = "checked"
        return True

    # -- base change -----------------------------------------------------------

    def map_field(self, new_field):
        """Base-change the structure constants through new_field.coerce.
        Coercion is a ring embedding, so associativity transfers."""
        conv = new_field.coerce
        table = [
            [tuple(conv(x) for x in vec) for vec in row] for row in self.table
        ]
        unit = tuple(conv(x) for x in self.unit)
        gens = ([tuple(conv(x) for x in g) for g in self.gens]
                if self.gens is not None else None)
        factors = (tuple(f.map_field(new_field) for f in self.tensor_factors)
                   if self.tensor_factors else None)
        note = "inherited" if self.assoc in ("checked", "inherited") else self.assoc
        return FinAlg(new_field, table, unit, gens=gens, tensor_factors=factors,
                      check=False, assoc_note=note)


def tensor_product(A, B):
    """Plain tensor product (the factors commute with each other)."""
    if A.field is not B.field and A.field != B.field:
        raise ValueError("tensor factors live over different fields")
    n, m = A.dim, B.dim
    dim = n * m
    zero = A.field.zero

    def pair(i, j):
        return i * m + j

    table = []
    for i1 in range(n):
        for j1 in range(m):
            row = []
            for i2 in range(n):
                ta = A.table[i1][i2]
                for j2 in range(m):
                    tb = B.table[j1][j2]
                    vec = [zero] * dim
                    for k, ca in enumerate(ta):
                        if not ca:
                            continue
                        for l, cb in enumerate(tb):
                            if cb:
                                vec[pair(k, l)] = ca * cb
                    row.append(tuple(vec))
            table.append(row)

    def embed_left(x):
        vec = [zero] * dim
        for k, c in enumerate(x):
            if c:
                for l, ub in enumerate(B.unit):
                    if ub:
                        vec[pair(k, l)] = c * ub
        return tuple(vec)

    def embed_right(y):
        vec = [zero] * dim
        for l, c in enumerate(y):
            if c:
                for k, ua in enumerate(A.unit):
                    if ua:
                        vec[pair(k, l)] = ua * c
        return tuple(vec)

    unit = embed_left(A.unit)
    gens = None
    if A.gens is not None and B.gens is not None:
        gens = [embed_left(g) for g in A.gens] + [embed_right(g) for g in B.gens]
    return FinAlg(A.field, table, unit, gens=gens, tensor_factors=(A, B),
                  check=False, assoc_note="tensor")


class _Echelon:
    """Reduced row echelon span with coordinate extraction."""

    def __init__(self, field, ncols):
        self.field = field
        self.ncols = ncols
        self.rows = []  # (pivot, vector normalized to 1 at pivot)

    def _reduce(self, v):
        v = list(v)
        coeffs = [self.field.zero] * len(self.rows)
        for idx, (piv, row) in enumerate(self.rows):
            c = v[piv]
            if c:
                coeffs[idx] = c
                for k in range(self.ncols):
                    if row[k]:
                        v[k] = v[k] - c * row[k]
        return v, coeffs

    def add(self, v):
        """Insert v into the span; True if the rank grew."""
        red, _ = self._reduce(v)
        piv = next((k for k, c in enumerate(red) if c), None)
        if piv is None:
            return False
        inv = self.field.one / red[piv]
        norm = [c * inv for c in red]
        # keep it reduced: clear the new pivot from earlier rows
        for idx, (p, row) in enumerate(self.rows):
            c = row[piv]
            if c:
                self.rows[idx] = (p, [x - c * y for x, y in zip(row, norm)])
        self.rows.append((piv, norm))
        self.rows.sort(key=lambda t: t[0])
        return True

    def dim(self):
        return len(self.rows)

    def coords(self, v):
        """Coordinates of v on the echelon rows, or None if v is outside."""
        red, coeffs = self._reduce(v)
        if any(red):
            return None
        return coeffs

    def contains(self, v):
        return self.coords(v) is not None

    def basis_vectors(self):
        return [tuple(row) for _, row in self.rows]

    def pivots(self):
        return [p for p, _ in self.rows]


def corner_algebra(A, e, gens=None):
    """The algebra e·A·e for an idempotent e, on an echelon basis of the
    image.  When e is central this is a quotient of A, so images of
    generators of A still generate the corner."""
    if A.mul(e, e) != e:
        raise ValueError("corner needs an idempotent")
    ech = _Echelon(A.field, A.dim)
    for i in range(A.dim):
        ech.add(A.mul(e, A.mul(A.basis_vec(i), e)))
    basis = ech.basis_vectors()
    m = ech.dim()
    table = []
    for x in basis:
        row = []
        for y in basis:
            coords = ech.coords(A.mul(x, y))
            if coords is None:
                raise ValueError("corner is not multiplicatively closed")
            row.append(tuple(coords))
        table.append(row)
    unit = ech.coords(e)
    if unit is None:
        raise ValueError("idempotent escaped its own corner")
    gvecs = None
    if gens is not None:
        gvecs = []
        for g in gens:
            c = ech.coords(A.mul(e, A.mul(g, e)))
            if c is None:
                raise ValueError("generator image escaped the corner")
            gvecs.append(tuple(c))
    note = "corner" if m > 8 else None
    return FinAlg(A.field, table, tuple(unit), gens=gvecs,
                  check="auto" if m <= 8 else False, assoc_note=note)


# ---------------------------------------------------------------------------
# radical and center
# ---------------------------------------------------------------------------

def gram_matrix(A):
    """Trace form of left multiplication on basis pairs."""
    t = A.table
    n = A.dim
    g = []
    for i in range(n):
        grow = []
        ti = t[i]
        for j in range(n):
            tj = t[j]
            acc = A.field.zero
            for l in range(n):
                til = ti[l]
                for k in range(n):
                    x = til[k]
                    if x:
                        y = tj[k][l]
                        if y:
                            acc = acc + x * y
            grow.append(acc)
        g.append(grow)
    return g


def radical_dim(A):
    """Dimension of the radical via the trace form (char 0 or > dim).
    For declared tensor products the Gram matrix factors as a Kronecker
    product, so its rank is the product of the factor ranks."""
    _char_ok(A.field, A.dim)
    if A.tensor_factors:
        rank = 1
        for f in A.tensor_factors:
            rank *= mat_rank(gram_matrix(f))
        return A.dim - rank
    return A.dim - mat_rank(gram_matrix(A))


def center_basis(A):
    """Kernel of x ↦ [x, probes]; probes are the declared generators when
    available (they generate, so commuting with them is central)."""
    probes = A.gens if A.gens else [A.basis_vec(i) for i in range(A.dim)]
    rows = []
    for v in probes:
        cols = []
        for k in range(A.dim):
            ek = A.basis_vec(k)
            cols.append(A.vsub(A.mul(ek, v), A.mul(v, ek)))
        for r in range(A.dim):
            rows.append([cols[k][r] for k in range(A.dim)])
    return mat_kernel(rows, A.dim, A.field)


def center_dim(A):
    return len(center_basis(A))


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

def certify_matrix_algebra(A, n):
    """Verdict 'M{n}' when A has dimension n², zero radical, and trivial
    center: a form of rank n² that becomes the full matrix algebra after
    any base change splitting it (the certificate is closure-level)."""
    if A.dim != n * n:
        return f"fail:dim-{A.dim}"
    r = radical_dim(A)
    if r:
        return f"fail:radical-{r}"
    c = center_dim(A)
    if c != 1:
        return f"fail:center-{c}"
    return f"M{n}"


@dataclass
class SplitCert:
    verdict: str
    field: object
    corners: tuple = ()


def certify_split_pair(A, n):
    """Certify A ≅ M_n × M_n after at most one rational quadratic base
    change: the center must be 2-dimensional and étale; splitting its
    discriminant yields two central idempotents whose corners must both
    certify as M_n."""
    if A.dim != 2 * n * n:
        return SplitCert(f"fail:dim-{A.dim}", A.field)
    r = radical_dim(A)
    if r:
        return SplitCert(f"fail:radical-{r}", A.field)
    zb = center_basis(A)
    if len(zb) != 2:
        return SplitCert(f"fail:center-{len(zb)}", A.field)
    z = next((tuple(v) for v in zb
              if _independent_of(A, tuple(v), A.unit)), None)
    if z is None:
        return SplitCert("fail:center-degenerate", A.field)
    # z² = α z + β
    cols = [A.unit, z]
    zz = A.mul(z, z)
    sol = mat_solve([[cols[0][k], cols[1][k]] for k in range(A.dim)],
                    list(zz), A.field)
    if sol is None:
        return SplitCert("fail:center-not-quadratic", A.field)
    beta, alpha = sol
    half = A.field.one / A.field.coerce(2)
    w = A.vsub(z, A.vscale(A.unit, alpha * half))
    ww = A.mul(w, w)
    delta = None
    for k in range(A.dim):
        if A.unit[k]:
            delta = ww[k] / A.unit[k]
            break
    if delta is None or A.scalar_vec(delta) != ww:
        return SplitCert("fail:center-not-etale", A.field)
    s = field_sqrt(A.field, delta)
    if s is None:
        # one rational extension attempt
        if isinstance(A.field, QuadraticTower):
            d = A.field.coerce(delta)
            if d.is_rational() and A.field.level < 2:
                tower, s2 = A.field.extended(d.rational_value())
                return certify_split_pair(A.map_field(tower), n)
        return SplitCert("fail:discriminant-not-split", A.field)
    if not s:
        return SplitCert("fail:discriminant-zero", A.field)
    inv = A.field.one / s
    e1 = A.vscale(A.vadd(A.unit, A.vscale(w, inv)), half)
    e2 = A.vsub(A.unit, e1)
    for e in (e1, e2):
        if A.mul(e, e) != e:
            return SplitCert("fail:idempotent", A.field)
    if any(A.mul(e1, e2)):
        return SplitCert("fail:orthogonality", A.field)
    corners = []
    for e in (e1, e2):
        C = corner_algebra(A, e, gens=A.gens)
        v = certify_matrix_algebra(C, n)
        if v != f"M{n}":
            return SplitCert(f"fail:corner-{v}", A.field)
        corners.append(C)
    return SplitCert(f"M{n}xM{n}", A.field, tuple(corners))


def _independent_of(A, v, w):
    return mat_rank([[v[k], w[k]] for k in range(A.dim)]) == 2


# ---------------------------------------------------------------------------
# fibers of the Clifford construction
# ---------------------------------------------------------------------------

def _eval_poly(poly, u, field):
    return field.coerce(poly.eval(u))


def clifford_fiber(alg, u, field, check="auto"):
    """Structure constants of a Clifford algebra at the base point u.
    The generator vectors are recorded so centers stay cheap."""
    n = 1 << alg.ngens
    zero = field.zero
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            vec = [zero] * n
            for mask, poly in alg.mask_mul(i, j):
                vec[mask] = _eval_poly(poly, u, field)
            row.append(tuple(vec))
        table.append(row)
    unit = tuple(field.one if k == 0 else zero for k in range(n))
    gens = []
    for g in range(alg.ngens):
        gens.append(tuple(field.one if k == (1 << g) else zero for k in range(n)))
    note = "clifford" if n > 8 else None
    return FinAlg(field, table, unit, gens=gens, check=check,
                  assoc_note=note)


def eval_element(e, u, field, dim):
    vec = [field.zero] * dim
    for mask, poly in e.coeffs.items():
        vec[mask] = _eval_poly(poly, u, field)
    return tuple(vec)


def _point(u):
    u = tuple(Fraction(c) for c in u)
    if len(u) != 3:
        raise ValueError("base points have three coordinates")
    if not any(u):
        raise ValueError("the zero point is not allowed")
    return u


def _det_value(P, side, u):
    curves = P.det_curves()
    f = curves.f_plus if side == "plus" else curves.f_minus
    return f.eval(u)


_SIDE_CACHE = {}


def _side_algebra(P, side):
    key = (P.digest(), side)
    if key not in _SIDE_CACHE:
        alg = CliffordAlgebra.from_pencil(P, "plus" if side == "plus" else "minus")
        d = central_odd(alg)
        _SIDE_CACHE[key] = (alg, d)
    return _SIDE_CACHE[key]


def side_fiber(P, side, u, field=None):
    """The 8-dimensional fiber of one block at u, with its central odd
    vector and the determinant value.  field=None means exact rationals
    (a trivial tower, so later quadratic extensions can reuse it)."""
    u = _point(u)
    alg, dres = _side_algebra(P, side)
    if field is None:
        field = QuadraticTower(())
    A = clifford_fiber(alg, u, field)
    dvec = eval_element(dres.element, u, field, 8)
    fval = field.coerce(_det_value(P, side, u))
    if A.mul(dvec, dvec) != A.scalar_vec(fval):
        raise AssertionError("central element square drifted from the determinant")
    return A, dvec, fval


def _corner_by_idempotent(A, dvec, s):
    """Corner of the central idempotent (1 + d/s)/2; d must act as s there."""
    half = A.field.one / A.field.coerce(2)
    e = A.vscale(A.vadd(A.unit, A.vscale(dvec, A.field.one / s)), half)
    if A.mul(e, e) != e:
        raise AssertionError("idempotent law failed")
    if A.mul(dvec, e) != A.vscale(e, s):
        raise AssertionError("central element does not act as its square root")
    return corner_algebra(A, e, gens=A.gens), e


def specialize(P, variant, u, y=None, via="tensor", field=None):
    """Fiber of the chosen variant at base point u.

    plus/minus without y: the full 8-dimensional block over Q.
    plus/minus with y (y² = f(u), y ≠ 0): the 4-dimensional corner on
    which the central odd element acts as y.
    ordinary: the 16-dimensional fiber over Q(√f₊(u), √f₋(u)), as a
    tensor product of the two side corners (via="tensor"), or cut from
    the full 64-dimensional algebra by the product idempotent
    (via="corner"; slower, used as a cross-check).
    """
    u = _point(u)
    if variant in ("plus", "minus"):
        A, dvec, fval = side_fiber(P, variant, u, field)
        if y is None:
            return A
        yv = A.field.coerce(y)
        if not yv:
            raise ValueError("the corner needs an invertible y")
        if yv * yv != fval:
            raise ValueError("y² must equal the determinant value at u")
        C, _ = _corner_by_idempotent(A, dvec, yv)
        if C.dim != 4:
            raise AssertionError("side corner has unexpected dimension")
        return C
    if variant != "ordinary":
        raise ValueError(f"unknown variant {variant!r}")

    fp = _det_value(P, "plus", u)
    fm = _det_value(P, "minus", u)
    if field is None:
        if fp == 0 or fm == 0:
            raise FiberError("base point lies on a determinant curve")
        field, (sp, sm) = QuadraticTower.create([fp, fm])
    else:
        sp = field_sqrt(field, field.coerce(fp))
        sm = field_sqrt(field, field.coerce(fm))
        if sp is None or sm is None or not sp or not sm:
            raise FiberError("determinant values are not invertible squares "
                             "in the requested field")

    if via == "tensor":
        corners = []
        for side, s in (("plus", sp), ("minus", sm)):
            A8_Q, dvec_Q, _ = side_fiber(P, side, u)
            A8 = A8_Q.map_field(field) if isinstance(field, QuadraticTower) \
                else clifford_fiber(_side_algebra(P, side)[0], u, field)
            dvec = tuple(field.coerce(x) for x in dvec_Q) \
                if isinstance(field, QuadraticTower) \
                else eval_element(_side_algebra(P, side)[1].element, u, field, 8)
            C, _ = _corner_by_idempotent(A8, dvec, s)
            if C.dim != 4:
                raise AssertionError("side corner has unexpected dimension")
            corners.append(C)
        return tensor_product(corners[0], corners[1])

    if via != "corner":
        raise ValueError(f"unknown construction {via!r}")
    alg = CliffordAlgebra.from_pencil(P, "ordinary")
    A64 = clifford_fiber(alg, u, field, check=False)
    dp, dm = (_side_algebra(P, side)[1].element for side in ("plus", "minus"))
    from .clifford import lift

    dpv = eval_element(lift(dp, alg, "plus"), u, field, 64)
    dmv = eval_element(lift(dm, alg, "minus"), u, field, 64)
    half = field.one / field.coerce(2)
    ep = A64.vscale(A64.vadd(A64.unit, A64.vscale(dpv, field.one / sp)), half)
    em = A64.vscale(A64.vadd(A64.unit, A64.vscale(dmv, field.one / sm)), half)
    e = A64.mul(ep, em)
    if A64.mul(e, e) != e:
        raise AssertionError("product idempotent law failed")
    C = corner_algebra(A64, e, gens=A64.gens)
    if C.dim != 16:
        raise AssertionError("ordinary corner has unexpected dimension")
    return C


def split_full_rank(P, side, u):
    """Over Q(√f(u)) the 8-dimensional block splits into two corners cut
    by the complementary central idempotents (1 ± d/√f(u))/2."""
    u = _point(u)
    fval = _det_value(P, side, u)
    if fval == 0:
        raise FiberError("the block only splits away from its curve")
    tower, (s,) = QuadraticTower.create([fval])
    A_Q, dvec_Q, _ = side_fiber(P, side, u)
    A = A_Q.map_field(tower)
    dvec = tuple(tower.coerce(x) for x in dvec_Q)
    C1, e1 = _corner_by_idempotent(A, dvec, s)
    C2, e2 = _corner_by_idempotent(A, A.vscale(dvec, -A.field.one), s)
    if any(A.mul(e1, e2)) or A.vadd(e1, e2) != A.unit:
        raise AssertionError("idempotents are not complementary")
    return tower, (C1, C2), (e1, e2)


def corank1_quotient(P, side, u, field=None):
    """At a curve point of corank one, the central odd vector squares to
    zero; the quotient by the 4-dimensional two-sided ideal it generates
    is certified as a rank-2 matrix algebra."""
    if field is None:
        field = QuadraticTower(())
    uc = _point(u)
    fval = field.coerce(_det_value(P, side, uc))
    if fval:
        raise FiberError("the quotient only exists on the curve")
    # corank exactly one: the adjugate of the block must survive
    block = P.block_at(uc, side)
    adj = _adjugate3(block, field)
    if all(not x for row in adj for x in row):
        raise FiberError("corank at least two at this point")
    A, dvec, _ = side_fiber(P, side, uc, field)
    if any(A.mul(dvec, dvec)):
        raise AssertionError("central element square must vanish on the curve")
    ideal = _Echelon(field, 8)
    for i in range(8):
        ideal.add(A.mul(dvec, A.basis_vec(i)))
    if ideal.dim() != 4:
        raise FiberError(f"ideal dimension {ideal.dim()} instead of 4")
    for b in ideal.basis_vectors():
        for i in range(8):
            if not ideal.contains(A.mul(A.basis_vec(i), b)):
                raise AssertionError("ideal is not left-stable")
            if not ideal.contains(A.mul(b, A.basis_vec(i))):
                raise AssertionError("ideal is not right-stable")
    pivots = set(ideal.pivots())
    complement = [i for i in range(8) if i not in pivots]

    def project(v):
        red, _ = ideal._reduce(v)
        return tuple(red[i] for i in complement)

    lifts = [A.basis_vec(i) for i in complement]
    table = [[project(A.mul(x, y)) for y in lifts] for x in lifts]
    Q = FinAlg(field, table, project(A.unit),
               gens=[project(g) for g in A.gens])
    verdict = certify_matrix_algebra(Q, 2)
    return Q, verdict


def _adjugate3(rows, field):
    m = [[field.coerce(x) for x in r] for r in rows]

    def cof(i, j):
        r = [k for k in range(3) if k != i]
        c = [k for k in range(3) if k != j]
        d = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
        return d if (i + j) % 2 == 0 else -d

    return [[cof(j, i) for j in range(3)] for i in range(3)]


# ---------------------------------------------------------------------------
# point sampling
# ---------------------------------------------------------------------------

def sample_invertible_points(P, rng, count, bound=9, max_attempts=5000):
    """Integer base points where both determinant cubics are nonzero."""
    curves = P.det_curves()
    seen = set()
    out = []
    for _ in range(max_attempts):
        if len(out) >= count:
            break
        u = tuple(rng.randint(-bound, bound) for _ in range(3))
        if not any(u) or u in seen:
            continue
        seen.add(u)
        uf = tuple(Fraction(c) for c in u)
        if curves.f_plus.eval(uf) and curves.f_minus.eval(uf):
            out.append(u)
    if len(out) < count:
        raise FiberError("could not sample enough invertible points")
    return out


def _divisors(n):
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return out


def _rational_roots(coeffs):
    """Rational roots of Σ coeffs[k] t^k with integer coefficients."""
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if not coeffs:
        return []
    roots = []
    if coeffs[0] == 0:
        roots.append(Fraction(0))
        while coeffs and coeffs[0] == 0:
            coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return roots
    lead = coeffs[-1]
    tail = coeffs[0]
    for num in _divisors(tail):
        for den in _divisors(lead):
            for sgn in (1, -1):
                t = Fraction(sgn * num, den)
                acc = Fraction(0)
                for c in reversed(coeffs):
                    acc = acc * t + c
                if acc == 0:
                    roots.append(t)
    return roots


def rational_curve_point(P, side, rng, tries=200):
    """Search for a rational point of one determinant cubic by
    intersecting with random rational lines and checking for rational
    roots; None if the budget runs out (the cubic is a genus-one curve,
    so rational points can legitimately be absent or hard to hit)."""
    curves = P.det_curves()
    f = curves.f_plus if side == "plus" else curves.f_minus
    for _ in range(tries):
        base = tuple(rng.randint(-4, 4) for _ in range(3))
        dirv = tuple(rng.randint(-4, 4) for _ in range(3))
        if not any(dirv):
            continue
        # restrict to the line base + t·dir: a univariate integer cubic
        coeffs = [0, 0, 0, 0]
        for exps, c in f.terms.items():
            # expand Π (base_i + t dir_i)^{e_i}
            poly_t = [c]
            for i, e in enumerate(exps):
                for _ in range(e):
                    nxt = [0] * (len(poly_t) + 1)
                    for k, a in enumerate(poly_t):
                        nxt[k] += a * base[i]
                        nxt[k + 1] += a * dirv[i]
                    poly_t = nxt
            for k, a in enumerate(poly_t):
                coeffs[k] += a
        if all(c == 0 for c in coeffs):
            continue
        if any(Fraction(c).denominator != 1 for c in coeffs):
            continue
        ints = [int(c) for c in coeffs]
        for t in _rational_roots(ints):
            u = tuple(Fraction(b) + t * d for b, d in zip(base, dirv))
            if not any(u):
                continue
            den_lcm = 1
            for c in u:
                den_lcm = den_lcm * c.denominator // _gcd(den_lcm, c.denominator)
            uz = tuple(int(c * den_lcm) for c in u)
            g = 0
            for c in uz:
                g = _gcd(g, abs(c))
            uz = tuple(c // g for c in uz)
            uf = tuple(Fraction(c) for c in uz)
            if f.eval(uf) != 0:
                continue
            # corank must be exactly one for the quotient construction
            adj = _adjugate3(P.block_at(uf, side), QQ)
            if any(x for row in adj for x in row):
                return uz
    return None


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def curve_points_fp(P, side, p, count):
    """First few curve points over F_p, for the prime-field fallback."""
    from . import geometry

    curves = P.det_curves()
    f = curves.f_plus if side == "plus" else curves.f_minus
    pts = geometry.curve_points(f, p)
    return pts[:count]
