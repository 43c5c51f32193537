"""Clifford algebras of a split quadratic form, over a polynomial base.

Generators are tracked as bitmasks (bit k = generator k present), with
monomials kept in the standard ascending order.  The defining relations are

    v_i v_j + v_j v_i = -2 q(v_i, v_j)     for same-block generators,
    v_i^+ v_j^- = -+ v_j^- v_i^+           (- in the super variant,
                                            + in the ordinary one),

so v_i^2 = -q(v_i, v_i).  The two 3×3 blocks never pair across, which is
why the cross relations carry no quadratic term.  Multiplication reduces
every word to normal form through a memoized right-multiplication-by-
generator table; coefficients live in an arbitrary polynomial ring, so the
same engine serves rational pencils, prime-field specializations, and
fully symbolic block entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .exactalg import QQ, QQI, MultiPoly, PolyRing, kernel_int_sparse, mat_solve

U_VARS = ("u1", "u2", "u3")

VARIANTS = ("super", "ordinary", "plus", "minus")


class CentralElementError(Exception):
    """The central-element ansatz has no (unique) solution."""


def _popcount(m):
    return bin(m).count("1")


class CliffordAlgebra:
    def __init__(self, ring, variant, q_plus=None, q_minus=None):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        self.ring = ring
        self.variant = variant
        if variant in ("super", "ordinary"):
            if q_plus is None or q_minus is None:
                raise ValueError("six-generator variants need both blocks")
            self.ngens = 6
            self.minus_mask = 0b111000
        elif variant == "plus":
            if q_plus is None:
                raise ValueError("plus variant needs q_plus")
            self.ngens = 3
            self.minus_mask = 0
        else:
            if q_minus is None:
                raise ValueError("minus variant needs q_minus")
            self.ngens = 3
            self.minus_mask = 0b111
        for q in (q_plus, q_minus):
            if q is not None and (q.n != 3 or q.ring != ring):
                raise ValueError("blocks must be 3×3 over the algebra's ring")
        self.q_plus = q_plus
        self.q_minus = q_minus
        self.cross_sign = -1 if variant == "super" else 1
        self._gen_cache = {}
        self._mul_cache = {}

    @classmethod
    def from_pencil(cls, P, variant, field=QQ):
        ring = PolyRing(field, U_VARS)
        qp = P.linear_form_matrix("plus", ring) if variant != "minus" else None
        qm = P.linear_form_matrix("minus", ring) if variant != "plus" else None
        return cls(ring, variant, q_plus=qp, q_minus=qm)

    # -- generator bookkeeping ---------------------------------------------------

    def gen_parity(self, j):
        """1 for the generators negated by the involution, else 0."""
        return 1 if (1 << j) & self.minus_mask else 0

    def _same_block(self, i, j):
        return self.gen_parity(i) == self.gen_parity(j)

    def q_of(self, i, j):
        """q(v_i, v_j) as a ring element; zero across blocks."""
        if not self._same_block(i, j):
            return self.ring.zero()
        if self.variant == "minus" or (self.variant in ("super", "ordinary") and i >= 3):
            return self.q_minus[i % 3, j % 3]
        return self.q_plus[i % 3, j % 3]

    def compatible(self, other):
        return (
            self is other
            or (
                isinstance(other, CliffordAlgebra)
                and self.variant == other.variant
                and self.ring == other.ring
                and self.q_plus == other.q_plus
                and self.q_minus == other.q_minus
            )
        )

    # -- normal form engine ----------------------------------------------------

    def _mask_times_gen(self, mask, j):
        """Normal form of e_mask · v_j as a tuple of (mask, coefficient)."""
        key = (mask, j)
        cached = self._gen_cache.get(key)
        if cached is not None:
            return cached
        bit = 1 << j
        if mask == 0 or mask < bit:
            # j is larger than anything present: append
            result = ((mask | bit, self.ring.one()),)
        else:
            top = mask.bit_length() - 1
            if top == j:
                result = ((mask ^ bit, -self.q_of(j, j)),)
            else:
                # peel the top generator: e_mask = e_rest · v_top with top > j
                rest = mask ^ (1 << top)
                swapped = self._mask_times_gen(rest, j)
                if self._same_block(top, j):
                    # v_top v_j = -v_j v_top - 2 q(top, j)
                    result = tuple((m | (1 << top), -c) for m, c in swapped)
                    contraction = self.q_of(top, j) * (-2)
                    if not contraction.is_zero():
                        result = result + ((rest, contraction),)
                else:
                    s = self.cross_sign
                    result = tuple(
                        (m | (1 << top), c if s > 0 else -c) for m, c in swapped
                    )
        self._gen_cache[key] = result
        return result

    def mask_mul(self, ma, mb):
        """Normal form of e_ma · e_mb as a tuple of (mask, coefficient)."""
        key = (ma, mb)
        cached = self._mul_cache.get(key)
        if cached is not None:
            return cached
        acc = {ma: self.ring.one()}
        rem = mb
        while rem:
            j = (rem & -rem).bit_length() - 1
            rem &= rem - 1
            nxt = {}
            for mask, poly in acc.items():
                for mask2, c in self._mask_times_gen(mask, j):
                    term = poly * c
                    cur = nxt.get(mask2)
                    term = term if cur is None else cur + term
                    if term.is_zero():
                        nxt.pop(mask2, None)
                    else:
                        nxt[mask2] = term
            acc = nxt
        result = tuple(sorted(acc.items()))
        self._mul_cache[key] = result
        return result

    # -- element constructors ------------------------------------------------------

    def zero(self):
        return CliffordElement(self, {})

    def one(self):
        return CliffordElement(self, {0: self.ring.one()})

    def gen(self, j):
        if not 0 <= j < self.ngens:
            raise ValueError("generator index out of range")
        return CliffordElement(self, {1 << j: self.ring.one()})

    def from_mask(self, mask, coeff=None):
        if mask >> self.ngens:
            raise ValueError("mask uses generators outside the algebra")
        coeff = self.ring.one() if coeff is None else coeff
        if coeff.is_zero():
            return self.zero()
        return CliffordElement(self, {mask: coeff})

    def basis_product(self, ma, mb):
        return CliffordElement(self, dict(self.mask_mul(ma, mb)))


@dataclass(frozen=True)
class BiDegree:
    parity: int
    weight: int

    def __add__(self, other):
        return BiDegree((self.parity + other.parity) % 2, self.weight + other.weight)


class CliffordElement:
    __slots__ = ("alg", "coeffs")

    def __init__(self, alg, coeffs):
        self.alg = alg
        self.coeffs = coeffs

    def _check(self, other):
        if isinstance(other, CliffordElement):
            if not self.alg.compatible(other.alg):
                raise ValueError("elements live in different algebras")
            return other
        # scalars and base-ring polynomials embed on the empty mask
        if isinstance(other, MultiPoly):
            if other.ring != self.alg.ring:
                raise ValueError("coefficient from a different ring")
            return CliffordElement(self.alg, {} if other.is_zero() else {0: other})
        poly = self.alg.ring.const(other)
        return CliffordElement(self.alg, {} if poly.is_zero() else {0: poly})

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.coeffs)
        for m, p in other.coeffs.items():
            s = out.get(m)
            s = p if s is None else s + p
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return CliffordElement(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return CliffordElement(self.alg, {m: -p for m, p in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        alg = self.alg
        out = {}
        for ma, pa in self.coeffs.items():
            for mb, pb in other.coeffs.items():
                pab = pa * pb
                if pab.is_zero():
                    continue
                for m, c in alg.mask_mul(ma, mb):
                    term = pab * c
                    s = out.get(m)
                    s = term if s is None else s + term
                    if s.is_zero():
                        out.pop(m, None)
                    else:
                        out[m] = s
        return CliffordElement(alg, out)

    def __rmul__(self, other):
        return self._check(other) * self

    def __eq__(self, other):
        if isinstance(other, CliffordElement):
            return self.alg.compatible(other.alg) and self.coeffs == other.coeffs
        try:
            return self == self._check(other)
        except (ValueError, TypeError):
            return NotImplemented

    def __hash__(self):
        return hash((id(self.alg), tuple(sorted(
            (m, tuple(sorted(p.terms.items()))) for m, p in self.coeffs.items()
        ))))

    def is_zero(self):
        return not self.coeffs

    def commutator(self, other):
        return self * other - other * self

    def anticommutator(self, other):
        return self * other + other * self

    def scalar_part(self):
        return self.coeffs.get(0, self.alg.ring.zero())

    def is_scalar(self):
        return all(m == 0 for m in self.coeffs)

    def bidegree(self):
        """Common (parity, weight) if homogeneous, else None.  Generators
        weigh 1 (the negated ones carry parity 1), base variables weigh 2."""
        degs = set()
        for mask, poly in self.coeffs.items():
            pop = _popcount(mask)
            par = _popcount(mask & self.alg.minus_mask) & 1
            for exps in poly.terms:
                degs.add((par, pop + 2 * sum(exps)))
        if len(degs) == 1:
            return BiDegree(*degs.pop())
        return None

    def to_json_terms(self):
        out = []
        for mask in sorted(self.coeffs):
            bits = format(mask, f"0{self.alg.ngens}b")[::-1]
            out.append([bits, self.coeffs[mask].to_json_terms()])
        return out

    def __repr__(self):
        if not self.coeffs:
            return "0"
        names = []
        for j in range(self.alg.ngens):
            if self.alg.ngens == 6:
                names.append(f"v{j % 3 + 1}{'+' if j < 3 else '-'}")
            else:
                names.append(f"v{j + 1}")
        bits = []
        for mask in sorted(self.coeffs):
            word = "".join(names[j] for j in range(self.alg.ngens) if mask >> j & 1)
            p = self.coeffs[mask]
            bits.append(f"({p})" + ("*" + word if word else ""))
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# grading and Veronese dimensions
# ---------------------------------------------------------------------------

def veronese_dims(variant, D):
    """Weight-space dimensions for n = 0..D, counting (generator mask,
    base monomial) basis pairs, plus the even-weight (degree-2 Veronese)
    slice."""
    if D > 12:
        raise ValueError("degree bound capped at 12")
    ngens = 6 if variant in ("super", "ordinary") else 3
    dims = []
    for n in range(D + 1):
        total = 0
        for k in range(min(n, ngens) + 1):
            if (n - k) % 2:
                continue
            total += comb(ngens, k) * comb((n - k) // 2 + 2, 2)
        dims.append(total)
    return dims, dims[0::2]


# ---------------------------------------------------------------------------
# the even-part isomorphism between the super and ordinary variants
# ---------------------------------------------------------------------------

def phi(e, target):
    """Map an even-weight element of the super algebra onto the ordinary
    one.  Basis masks are preserved; each is scaled by i^(m mod 2) where m
    counts its plus-block generators.

    The naive all-real scaling by (-1)^(m(m-1)/2) is NOT multiplicative:
    squaring the mask v1+v1- forces the weight-2 scalar eps to satisfy
    eps^2 = -1, and contracting pairs like (v1+v2+)(v2+v3+) force the
    same-parity masks to share one scalar.  Those two constraints pin the
    map to eps(m) = i^(m mod 2) up to conjugation, so the coefficients
    must contain a square root of -1.
    """
    if e.alg.variant != "super" or target.variant != "ordinary":
        raise ValueError("phi maps the super variant onto the ordinary one")
    if target.ring != e.alg.ring:
        raise ValueError("source and target must share the coefficient ring")
    if e.alg.ring.field is not QQI:
        raise ValueError("phi needs coefficients containing i")
    out = {}
    for mask, poly in e.coeffs.items():
        if _popcount(mask) % 2:
            raise ValueError("phi is defined on even-weight elements only")
        m_plus = _popcount(mask & 0b111)
        scale = QQI.i if m_plus % 2 else QQI.one
        out[mask] = poly * scale
    return CliffordElement(target, out)


def phi_pair(P):
    """(super, ordinary) algebras over Q(i)[u] for the same pencil."""
    a = CliffordAlgebra.from_pencil(P, "super", field=QQI)
    b = CliffordAlgebra.from_pencil(P, "ordinary", field=QQI)
    return a, b


# ---------------------------------------------------------------------------
# the odd central element of a 3-generator block
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CentralOddResult:
    element: CliffordElement
    sign: int
    square: MultiPoly
    det: MultiPoly
    r_coeffs: tuple  # the three coefficient polynomials of the ansatz


def central_odd(alg):
    """Solve [d, v_i] = 0 for d = v1 v2 v3 + r1 v1 + r2 v2 + r3 v3 with the
    r_i drawn from the span of the monomials present in the block; exact
    linear algebra, uniqueness enforced.  Verifies d² is the scalar
    s·det(q) and records the sign s."""
    if alg.ngens != 3:
        raise ValueError("central_odd works on a 3-generator block")
    ring = alg.ring
    q = alg.q_plus if alg.variant == "plus" else alg.q_minus
    monos = sorted({e for i in range(3) for j in range(3)
                    for e in q[i, j].terms})
    if not monos:
        raise CentralElementError("zero block has no central element")
    unknowns = [(j, mexp) for j in range(3) for mexp in monos]

    top = alg.from_mask(0b111)
    gens = [alg.gen(j) for j in range(3)]
    base_comm = [top.commutator(g) for g in gens]
    gen_comm = [[alg.gen(j).commutator(g) for g in gens] for j in range(3)]

    rows_by_key = {}
    rhs_by_key = {}

    def add(key, col, c):
        row = rows_by_key.setdefault(key, {})
        row[col] = row.get(col, Fraction(0)) + c

    for gi in range(3):
        for mask, poly in base_comm[gi].coeffs.items():
            for pexp, c in poly.terms.items():
                key = (gi, mask, pexp)
                rhs_by_key[key] = rhs_by_key.get(key, Fraction(0)) + c
                rows_by_key.setdefault(key, {})
        for col, (j, mexp) in enumerate(unknowns):
            for mask, poly in gen_comm[j][gi].coeffs.items():
                for pexp, c in poly.terms.items():
                    key = (gi, mask, tuple(a + b for a, b in zip(pexp, mexp)))
                    add(key, col, c)
                    rhs_by_key.setdefault(key, Fraction(0))

    keys = sorted(rows_by_key)
    matrix = [[rows_by_key[k].get(col, Fraction(0)) for col in range(len(unknowns))]
              for k in keys]
    rhs = [-rhs_by_key.get(k, Fraction(0)) for k in keys]
    try:
        sol = mat_solve(matrix, rhs, QQ)
    except ValueError as exc:
        raise CentralElementError(f"central ansatz not unique: {exc}") from exc
    if sol is None:
        raise CentralElementError("central ansatz inconsistent")

    r = []
    for j in range(3):
        terms = []
        for col, (jj, mexp) in enumerate(unknowns):
            if jj == j and sol[col]:
                terms.append((mexp, sol[col]))
        r.append(ring.from_terms(terms))
    d = top + sum((r[j] * gens[j] for j in range(3)), alg.zero())
    for g in gens:
        if not d.commutator(g).is_zero():
            raise CentralElementError("solver output fails to commute")
    sq = d * d
    if not sq.is_scalar():
        raise CentralElementError("d² is not scalar")
    square = sq.scalar_part()
    det = q.det3()
    if square == det:
        sign = 1
    elif square == -det:
        sign = -1
    else:
        raise CentralElementError("d² is not ±det(q)")
    return CentralOddResult(element=d, sign=sign, square=square, det=det,
                            r_coeffs=tuple(r))


def central_odd_pencil(P, side, field=QQ):
    alg = CliffordAlgebra.from_pencil(P, "plus" if side == "plus" else "minus",
                                      field=field)
    return central_odd(alg)


@dataclass(frozen=True)
class CentralPair:
    d_plus: CliffordElement
    d_minus: CliffordElement
    squares: tuple
    sign: int


def central_pair(P, field=QQ):
    rp = central_odd_pencil(P, "plus", field)
    rm = central_odd_pencil(P, "minus", field)
    if rp.sign != rm.sign:
        raise CentralElementError("the two blocks realize different signs")
    return CentralPair(d_plus=rp.element, d_minus=rm.element,
                       squares=(rp.square, rm.square), sign=rp.sign)


def lift(e, target, side):
    """Embed a 3-generator element into a 6-generator algebra (the minus
    block shifts its generators up by three)."""
    if target.ngens != 6:
        raise ValueError("lift target must have six generators")
    shift = 0 if side == "plus" else 3
    out = {}
    for mask, poly in e.coeffs.items():
        if poly.ring != target.ring:
            poly = poly.map_field(target.ring)
        out[mask << shift] = poly
    return CliffordElement(target, out)


# ---------------------------------------------------------------------------
# degree-bounded commutant
# ---------------------------------------------------------------------------

def _monomials_of_degree(d):
    out = []
    for a in range(d + 1):
        for b in range(d - a + 1):
            out.append((a, b, d - a - b))
    return sorted(out)


def commutant_basis(alg, D):
    """Per-weight bases of { z : [z, v_j] = 0 for every generator },
    weights 0..D, via an exact integer kernel on (mask, monomial)
    coordinates.  Returns a list indexed by weight."""
    if D > 8:
        raise ValueError("degree bound capped at 8")
    out = []
    for n in range(D + 1):
        unknowns = []
        for mask in range(1 << alg.ngens):
            k = _popcount(mask)
            if k > n or (n - k) % 2:
                continue
            for mexp in _monomials_of_degree((n - k) // 2):
                unknowns.append((mask, mexp))
        rows = {}
        for col, (mask, mexp) in enumerate(unknowns):
            for g in range(alg.ngens):
                gbit = 1 << g
                for m2, poly, sgn in (
                    [(m, p, 1) for m, p in alg.mask_mul(mask, gbit)]
                    + [(m, p, -1) for m, p in alg.mask_mul(gbit, mask)]
                ):
                    for pexp, c in poly.terms.items():
                        if c.denominator != 1:
                            raise ValueError("non-integer structure constant")
                        key = (g, m2, tuple(a + b for a, b in zip(pexp, mexp)))
                        row = rows.setdefault(key, {})
                        v = row.get(col, 0) + sgn * c.numerator
                        if v:
                            row[col] = v
                        else:
                            row.pop(col, None)
        basis = kernel_int_sparse(list(rows.values()), len(unknowns))
        elems = []
        for vec in basis:
            acc = alg.zero()
            for col, v in enumerate(vec):
                if v:
                    mask, mexp = unknowns[col]
                    acc = acc + alg.from_mask(mask, alg.ring.monomial(mexp, v))
            elems.append(acc)
        out.append(elems)
    return out


def commutant_dims(alg, D):
    return [len(b) for b in commutant_basis(alg, D)]


def hilbert_dims_center(D):
    """Weight dimensions of Q[u, y+, y-]/(y±² - f±) with deg u = 2 and
    deg y± = 3: a free Q[u]-module on 1, y+, y-, y+y- of weights 0,3,3,6.
    The independent oracle for the ordinary-variant commutant."""
    def u_count(w):
        if w < 0 or w % 2:
            return 0
        return comb(w // 2 + 2, 2)

    return [u_count(n) + 2 * u_count(n - 3) + u_count(n - 6)
            for n in range(D + 1)]


# ---------------------------------------------------------------------------
# defining relations: homogeneity and the scaling action
# ---------------------------------------------------------------------------

def defining_relations(alg):
    """Each relation is a list of (word, coefficient) terms summing to
    zero; words are tuples of generator indices."""
    rels = []
    one = alg.ring.one()
    for i in range(alg.ngens):
        for j in range(i, alg.ngens):
            if i == j:
                rels.append([((i, i), one), ((), alg.q_of(i, i))])
            elif alg._same_block(i, j):
                rels.append([((i, j), one), ((j, i), one),
                             ((), alg.q_of(i, j) * 2)])
            else:
                rels.append([((i, j), one),
                             ((j, i), one * (-alg.cross_sign))])
    return rels


def term_bidegrees(alg, word, poly):
    par = sum(alg.gen_parity(g) for g in word) % 2
    base = len(word)
    return {((par, base + 2 * sum(e))) for e in poly.terms}


def terms_homogeneous(alg, terms):
    degs = set()
    for word, poly in terms:
        if poly.is_zero():
            continue
        degs |= term_bidegrees(alg, word, poly)
    return len(degs) <= 1


def action_scales_relation(alg, terms, s, lam):
    """Apply the scaling action (generators pick up λ, the negated block
    also picks up s, base variables pick up λ²) and test that the relation
    transforms by one overall scalar."""
    lam = Fraction(lam)
    transformed = []
    for word, poly in terms:
        scale = Fraction(1)
        for g in word:
            scale *= lam * (s if alg.gen_parity(g) else 1)
        newpoly = poly.ring.from_terms(
            [(e, c * scale * lam ** (2 * sum(e))) for e, c in poly.terms.items()]
        )
        transformed.append((word, newpoly))
    mu = None
    for (word, poly), (_, newpoly) in zip(terms, transformed):
        if poly.is_zero():
            if not newpoly.is_zero():
                return False
            continue
        e, c = poly.leading_term()
        ratio = newpoly.terms.get(e)
        if ratio is None:
            return False
        cand = ratio / c
        if mu is None:
            mu = cand
        if newpoly != poly * mu:
            return False
    return True


def equivariance_check(P, variant="ordinary"):
    """True iff every defining relation transforms by a single scalar under
    both components of the scaling action (tested at λ = 2 to separate
    weights)."""
    alg = CliffordAlgebra.from_pencil(P, variant)
    for terms in defining_relations(alg):
        for s in (1, -1):
            if not action_scales_relation(alg, terms, s, 2):
                return False
    return True
