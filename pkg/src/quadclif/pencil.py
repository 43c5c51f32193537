"""Invariant nets of quadrics on a six-dimensional space split as V+ ⊕ V−.

An instance is a pair of pencils of symmetric integer 3×3 matrices
(q_plus[k], q_minus[k] for k = 1..3); the induced 6×6 form at u is the
block-diagonal sum, so its determinant factors as f_plus·f_minus with
f_± = det(Σ uₖ q_±[k]) plane cubics.  Random instances are accepted only
when they pass the genericity suite: smooth cubics, transverse
intersection, nine distinct intersection points (via a squarefree degree-9
resultant), and corank ≤ 1 along the curves.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .exactalg import (
    QQ,
    MultiPoly,
    PolyRing,
    SymMatrix,
    mat_det,
    squarefree_univariate,
    sylvester_resultant,
)
from . import geometry

U_VARS = ("u1", "u2", "u3")
URING = PolyRing(QQ, U_VARS)

DEFAULT_PRIMES = (101, 103, 107)


class GenerationError(Exception):
    """Raised when rejection sampling exhausts its attempt budget."""


def _check_sym3(mats, label):
    if len(mats) != 3:
        raise ValueError(f"{label} must contain exactly 3 matrices")
    for m in mats:
        if len(m) != 3 or any(len(r) != 3 for r in m):
            raise ValueError(f"{label} matrices must be 3×3")
        for i in range(3):
            for j in range(3):
                if not isinstance(m[i][j], int):
                    raise ValueError(f"{label} entries must be integers")
                if m[i][j] != m[j][i]:
                    raise ValueError(f"{label} matrices must be symmetric")


def _freeze(mats):
    return tuple(tuple(tuple(r) for r in m) for m in mats)


@dataclass(frozen=True)
class InvariantPencil:
    """A net of quadrics invariant under the involution fixing V+ and
    negating V−, stored as the two 3×3 blocks of the three coordinate
    forms."""

    q_plus: tuple
    q_minus: tuple
    seed: int
    coeff_bound: int

    def __post_init__(self):
        _check_sym3(self.q_plus, "q_plus")
        _check_sym3(self.q_minus, "q_minus")
        object.__setattr__(self, "q_plus", _freeze(self.q_plus))
        object.__setattr__(self, "q_minus", _freeze(self.q_minus))
        if self.coeff_bound < 0:
            raise ValueError("coeff_bound must be nonnegative")
        b = self.coeff_bound
        for mats in (self.q_plus, self.q_minus):
            for m in mats:
                for r in m:
                    for x in r:
                        if abs(x) > b:
                            raise ValueError("entry exceeds coeff_bound")

    # -- symbolic views ------------------------------------------------------

    def side_mats(self, side):
        if side == "plus":
            return self.q_plus
        if side == "minus":
            return self.q_minus
        raise ValueError("side must be 'plus' or 'minus'")

    def linear_form_matrix(self, side, ring=URING):
        """3×3 symmetric matrix of linear forms Σ uₖ q[k] over `ring`."""
        mats = self.side_mats(side)
        u = [ring.var(v) for v in ring.vars[:3]]
        rows = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = ring.zero()
                for k in range(3):
                    if mats[k][i][j]:
                        acc = acc + u[k] * mats[k][i][j]
                row.append(acc)
            rows.append(row)
        return SymMatrix(ring, rows)

    def block_at(self, u, side):
        """3×3 rational (or field) matrix Σ uₖ q[k] at a point u ≠ 0."""
        if not any(u):
            raise ValueError("u must be nonzero")
        mats = self.side_mats(side)
        return tuple(
            tuple(sum(u[k] * mats[k][i][j] for k in range(3)) for j in range(3))
            for i in range(3)
        )

    def quadric_at(self, u):
        """Block-diagonal 6×6 matrix of the form at u ≠ 0."""
        if len(u) != 3:
            raise ValueError("u must be a 3-vector")
        u = tuple(Fraction(x) for x in u)
        if not any(u):
            raise ValueError("u must be nonzero")
        qp = self.block_at(u, "plus")
        qm = self.block_at(u, "minus")
        zero = Fraction(0)
        rows = []
        for i in range(3):
            rows.append(tuple(qp[i]) + (zero,) * 3)
        for i in range(3):
            rows.append((zero,) * 3 + tuple(qm[i]))
        return tuple(rows)

    def det_curves(self):
        return DetCurves(
            f_plus=self.linear_form_matrix("plus").det3(),
            f_minus=self.linear_form_matrix("minus").det3(),
        )

    # -- persistence -----------------------------------------------------------

    def to_json_dict(self):
        return {
            "seed": self.seed,
            "coeff_bound": self.coeff_bound,
            "q_plus": [[list(r) for r in m] for m in self.q_plus],
            "q_minus": [[list(r) for r in m] for m in self.q_minus],
        }

    def canonical_bytes(self):
        return (
            json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))
            + "\n"
        ).encode()

    def digest(self):
        return hashlib.sha256(self.canonical_bytes()).hexdigest()

    @classmethod
    def from_json_dict(cls, d):
        try:
            return cls(
                q_plus=d["q_plus"],
                q_minus=d["q_minus"],
                seed=int(d["seed"]),
                coeff_bound=int(d["coeff_bound"]),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed instance data: {exc}") from exc


@dataclass(frozen=True)
class DetCurves:
    f_plus: MultiPoly
    f_minus: MultiPoly


@dataclass(frozen=True)
class GenericityReport:
    e_plus_smooth: bool
    e_minus_smooth: bool
    transversal: bool
    nine_points: bool
    rank_ge_4: bool
    witnesses: tuple
    notes: tuple = ()

    def all_ok(self):
        return (
            self.e_plus_smooth
            and self.e_minus_smooth
            and self.transversal
            and self.nine_points
            and self.rank_ge_4
        )


def _derived_rng(*parts):
    h = hashlib.sha256(":".join(str(p) for p in parts).encode()).digest()
    return random.Random(int.from_bytes(h[:8], "big"))


def _random_sym3(rng, bound):
    m = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(i, 3):
            m[i][j] = m[j][i] = rng.randint(-bound, bound)
    return tuple(tuple(r) for r in m)


def generate(seed, coeff_bound, primes=DEFAULT_PRIMES, max_attempts=50):
    """Seeded rejection sampling: draw integer pencils until the genericity
    suite passes.  Deterministic in (seed, coeff_bound)."""
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be >= 1")
    for attempt in range(max_attempts):
        rng = _derived_rng("gen", seed, coeff_bound, attempt)
        P = InvariantPencil(
            q_plus=tuple(_random_sym3(rng, coeff_bound) for _ in range(3)),
            q_minus=tuple(_random_sym3(rng, coeff_bound) for _ in range(3)),
            seed=seed,
            coeff_bound=coeff_bound,
        )
        if genericity_check(P, primes=primes).all_ok():
            return P
    raise GenerationError(
        f"no generic pencil after {max_attempts} attempts "
        f"(seed={seed}, coeff_bound={coeff_bound})"
    )


# -- resultant certificate ----------------------------------------------------


def _coordinate_change(f, mat):
    """f(M·u) for an integer matrix M acting on the column of variables."""
    ring = f.ring
    u = [ring.var(v) for v in ring.vars]
    images = {}
    for i, v in enumerate(ring.vars):
        acc = ring.zero()
        for j in range(3):
            if mat[i][j]:
                acc = acc + u[j] * mat[i][j]
        images[v] = acc
    return f.subs(images)


def _random_gl3(rng):
    while True:
        m = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        if mat_det([[Fraction(x) for x in r] for r in m], QQ):
            return m


def resultant_nine_points(f_plus, f_minus, rng=None):
    """(nine_points, squarefree, degree, notes): eliminates u3 from the two
    cubics and tests the resulting binary form.  A squarefree degree-9
    resultant certifies nine distinct transverse intersection points; the
    projection center is moved by a seeded coordinate change when it is
    unlucky (on a curve, or lined up with two intersection points)."""
    if rng is None:
        rng = _derived_rng("resultant", repr(sorted(f_plus.terms.items())))
    notes = []
    fp, fm = f_plus, f_minus
    for attempt in range(6):
        # Sylvester in u3 sees degree 3 exactly iff f(0,0,1) ≠ 0
        if fp.eval([0, 0, 1]) and fm.eval([0, 0, 1]):
            break
        M = _random_gl3(rng)
        fp, fm = _coordinate_change(f_plus, M), _coordinate_change(f_minus, M)
        notes.append("coordinate change (projection center on a curve)")
    else:
        return False, False, -1, tuple(notes + ["no usable projection center"])
    R = sylvester_resultant(fp, fm, "u3")
    if R.is_zero():
        return False, False, -1, tuple(notes + ["resultant identically zero"])
    deg = R.total_degree()
    # dehomogenize along a direction that is not a root, so no root escapes
    tring = PolyRing(QQ, ("t",))
    t = tring.var("t")
    h = None
    for attempt in range(6):
        a, b = rng.randint(-9, 9), rng.randint(-9, 9)
        c, d = rng.randint(-9, 9), rng.randint(-9, 9)
        if a * d - b * c == 0:
            continue
        cand = R.subs({"u1": a * t + tring.const(b), "u2": c * t + tring.const(d),
                       "u3": tring.zero()})
        if cand.degree_in("t") == deg:
            h = cand
            break
    if h is None:
        return False, False, deg, tuple(notes + ["no faithful dehomogenization"])
    squarefree, _ = squarefree_univariate(h, "t")
    return (deg == 9 and squarefree), squarefree, deg, tuple(notes)


def genericity_check(P, primes=DEFAULT_PRIMES, do_resultant=True):
    """Run the full genericity suite and collect violation witnesses."""
    if not primes:
        raise ValueError("primes must be nonempty")
    for p in primes:
        if p < 17:
            raise ValueError("primes must be >= 17")
    curves = P.det_curves()
    witnesses = []
    notes = []

    if curves.f_plus.is_zero() or curves.f_minus.is_zero():
        witnesses.append({"kind": "degenerate_determinant", "prime": None, "point": None})
        return GenericityReport(False, False, False, False, False,
                                tuple(witnesses), ("a determinant cubic vanishes identically",))

    smooth = {"plus": True, "minus": True}
    transversal_scans = True
    rank_ok = True
    for p in primes:
        for side, f in (("plus", curves.f_plus), ("minus", curves.f_minus)):
            try:
                bad = geometry.ff_scan_smooth(f, p)
            except geometry.ScanError:
                smooth[side] = False
                witnesses.append({"kind": f"e_{side}_vanishes_mod_p", "prime": p, "point": None})
                continue
            if bad:
                smooth[side] = False
                for pt in bad:
                    witnesses.append({"kind": f"e_{side}_singular", "prime": p, "point": list(pt)})
        try:
            tang = geometry.ff_scan_transversal(curves.f_plus, curves.f_minus, p)
        except geometry.ScanError:
            tang = None
            transversal_scans = False
        if tang:
            transversal_scans = False
            for pt in tang:
                witnesses.append({"kind": "tangency", "prime": p, "point": list(pt)})
        try:
            mc = geometry.ff_scan_corank(P, p)
        except (geometry.GenericityError, geometry.ScanError):
            mc = 3
        if mc != 1:
            rank_ok = False
            witnesses.append({"kind": "corank", "prime": p, "point": None, "value": mc})

    nine = False
    squarefree = False
    if do_resultant:
        rng = _derived_rng("resultant", P.seed, P.coeff_bound, P.digest())
        nine, squarefree, deg, rnotes = resultant_nine_points(
            curves.f_plus, curves.f_minus, rng
        )
        notes.extend(rnotes)
        if not nine:
            witnesses.append({"kind": "resultant", "prime": None, "point": None,
                              "degree": deg, "squarefree": squarefree})
        if squarefree and not transversal_scans:
            # a squarefree resultant over Q can coexist with a mod-p tangency
            # only through bad reduction; record it rather than hide it
            notes.append("squarefree resultant but a scan found a tangency (bad reduction)")

    transversal = transversal_scans and (squarefree or not do_resultant)
    return GenericityReport(
        e_plus_smooth=smooth["plus"],
        e_minus_smooth=smooth["minus"],
        transversal=transversal,
        nine_points=nine,
        rank_ge_4=rank_ok,
        witnesses=tuple(witnesses),
        notes=tuple(notes),
    )


def load_instance(path):
    with open(path, "rb") as fh:
        data = json.loads(fh.read().decode())
    return InvariantPencil.from_json_dict(data)


def save_instance(P, path):
    payload = P.canonical_bytes()
    with open(path, "wb") as fh:
        fh.write(payload)
    return hashlib.sha256(payload).hexdigest()
