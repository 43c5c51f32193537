"""Named verification checks with a fixed id vocabulary.

Each check id names one verified claim about an instance (or, for the
model-quadric identities and the stabilizer tables, no instance at all).
Results carry JSON-ready witnesses and are deterministic for a given
(instance, flags) pair; only the timing field varies between runs.
Finite-field sweeps are labeled "randomized" in their witnesses: they
certify a Zariski-open condition at several primes, they are not proofs
over Q.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from . import geometry
from .clifford import (
    CliffordAlgebra,
    central_odd_pencil,
    central_pair,
    commutant_dims,
    defining_relations,
    equivariance_check,
    hilbert_dims_center,
    lift,
    phi,
    phi_pair,
    terms_homogeneous,
)
from .exactalg import PrimeField
from .fiber import (
    certify_matrix_algebra,
    certify_split_pair,
    corank1_quotient,
    curve_points_fp,
    describe_field,
    rational_curve_point,
    sample_invertible_points,
    side_fiber,
    specialize,
)
from .pencil import DEFAULT_PRIMES, _derived_rng, genericity_check
from .plucker import (
    adjugate_double_line,
    annihilator_line,
    lines_proportional,
    m0_identity_check,
    m0_matrix,
    m0_matrix_symbolic,
    module_line_for,
    module_rep,
    poly_residual_hash,
    segre_identity_check,
    transform_identity_check,
)

CHECK_ORDER = (
    "prop2.2-smoothness",
    "prop2.2-transversality",
    "def2.1-rank4",
    "prop2.5-nine-points",
    "prop3.5-grading",
    "prop3.19-equivariance",
    "prop3.9-phi",
    "prop3.12-dplus-square",
    "prop3.12-dminus-square",
    "prop3.13-center",
    "prop3.17-azumaya-m4",
    "prop3.18-split-m2",
    "prop3.18-corank1-m2",
    "prop2.3-stabilizers",
    "prop2.8-stabilizers",
    "prop4.2-adjugate-double-line",
    "prop4.3-singular-locus",
    "prop4.7-annihilator",
    "prop4.8-m0-matrix",
    "prop4.9-segre",
)

INSTANCE_FREE = frozenset({
    "prop2.3-stabilizers",
    "prop2.8-stabilizers",
    "prop4.8-m0-matrix",
    "prop4.9-segre",
})


@dataclass
class CheckResult:
    id: str
    status: str  # pass | fail | skipped
    witnesses: list
    seconds: float

    def to_json_dict(self):
        return {
            "id": self.id,
            "status": self.status,
            "witnesses": self.witnesses,
            "seconds": round(self.seconds, 6),
        }


def _plain(x):
    """Flatten witnesses to plain JSON types with deterministic text."""
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return str(x)


class CheckContext:
    """Shared state for one verification run: the instance, the flag
    values, and caches so expensive artifacts (genericity scans, the
    sampled fiber points) are computed once per run."""

    def __init__(self, P=None, primes=DEFAULT_PRIMES, points=20, max_degree=6):
        self.P = P
        self.primes = tuple(int(p) for p in primes)
        self.points = int(points)
        self.max_degree = int(max_degree)
        if not self.primes or any(p < 17 for p in self.primes):
            raise ValueError("primes must be >= 17")
        if self.points < 1:
            raise ValueError("points must be >= 1")
        if not 1 <= self.max_degree <= 8:
            raise ValueError("max-degree must be between 1 and 8")
        self._cache = {}

    def rng(self, label):
        tag = self.P.digest() if self.P is not None else "no-instance"
        return _derived_rng("check", tag, label)

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def genericity(self):
        return self.cached(
            "genericity", lambda: genericity_check(self.P, primes=self.primes)
        )

    def fiber_points(self):
        """Off-curve base points shared by the fiber-level checks."""
        return self.cached(
            "fiber-points",
            lambda: sample_invertible_points(
                self.P, self.rng("fiber-points"), self.points
            ),
        )

    def curve_points_mod(self, side, p):
        f = self.P.det_curves()
        f = f.f_plus if side == "plus" else f.f_minus
        return self.cached(
            ("curve", side, p), lambda: geometry.curve_points(f, p)
        )


# ---------------------------------------------------------------------------
# genericity block
# ---------------------------------------------------------------------------

def _check_smoothness(ctx):
    rep = ctx.genericity()
    ok = rep.e_plus_smooth and rep.e_minus_smooth
    wit = [w for w in rep.witnesses
           if "singular" in w["kind"] or "vanishes" in w["kind"]
           or w["kind"] == "degenerate_determinant"]
    wit.append({"primes": list(ctx.primes), "certificate": "randomized"})
    return ok, wit


def _check_transversality(ctx):
    rep = ctx.genericity()
    wit = [w for w in rep.witnesses if w["kind"] in ("tangency", "resultant")]
    wit.append({"primes": list(ctx.primes), "certificate": "randomized",
                "notes": list(rep.notes)})
    return rep.transversal, wit


def _check_rank4(ctx):
    rep = ctx.genericity()
    wit = [w for w in rep.witnesses if w["kind"] == "corank"]
    wit.append({"primes": list(ctx.primes), "max_corank_allowed": 1,
                "certificate": "randomized"})
    return rep.rank_ge_4, wit


def _check_nine_points(ctx):
    rep = ctx.genericity()
    wit = [w for w in rep.witnesses if w["kind"] == "resultant"]
    wit.append({"certificate": "exact resultant", "notes": list(rep.notes)})
    return rep.nine_points, wit


# ---------------------------------------------------------------------------
# graded-algebra block
# ---------------------------------------------------------------------------

def _check_grading(ctx):
    wit = []
    ok = True
    for variant in ("ordinary", "super"):
        alg = CliffordAlgebra.from_pencil(ctx.P, variant)
        rels = defining_relations(alg)
        bad = sum(0 if terms_homogeneous(alg, r) else 1 for r in rels)
        wit.append({"variant": variant, "relations": len(rels),
                    "inhomogeneous": bad})
        ok = ok and bad == 0
    return ok, wit


def _check_equivariance(ctx):
    wit = []
    ok = True
    for variant in ("ordinary", "super"):
        good = equivariance_check(ctx.P, variant)
        wit.append({"variant": variant, "single_scalar": good,
                    "tested_at": {"lambda": 2, "s": [1, -1]}})
        ok = ok and good
    return ok, wit


def _check_phi(ctx):
    sup, ordn = phi_pair(ctx.P)
    even = [m for m in range(64) if bin(m).count("1") % 2 == 0]
    bad_pairs = []
    for ma in even:
        a = sup.from_mask(ma)
        fa = phi(a, ordn)
        for mb in even:
            b = sup.from_mask(mb)
            if phi(a * b, ordn) != fa * phi(b, ordn):
                bad_pairs.append([ma, mb])
    pair = central_pair(ctx.P)
    sup6 = CliffordAlgebra.from_pencil(ctx.P, "super")
    ord6 = CliffordAlgebra.from_pencil(ctx.P, "ordinary")
    dps, dms = lift(pair.d_plus, sup6, "plus"), lift(pair.d_minus, sup6, "minus")
    dpo, dmo = lift(pair.d_plus, ord6, "plus"), lift(pair.d_minus, ord6, "minus")
    anti = (dps * dms + dms * dps).is_zero()
    comm = (dpo * dmo - dmo * dpo).is_zero()
    wit = [{"pairs": len(even) ** 2, "failing_pairs": bad_pairs[:8],
            "scales": ["1", "i"],
            "super_pair_anticommutes": anti,
            "ordinary_pair_commutes": comm}]
    return not bad_pairs and anti and comm, wit


def _d_square_check(ctx, side):
    res = central_odd_pencil(ctx.P, side)
    curves = ctx.P.det_curves()
    f = curves.f_plus if side == "plus" else curves.f_minus
    ok = res.sign == 1 and res.square == f
    wit = [{"side": side, "sign": res.sign,
            "square_equals_determinant_cubic": res.square == f,
            "solution": "unique monic"}]
    return ok, wit


def _check_dplus_square(ctx):
    return _d_square_check(ctx, "plus")


def _check_dminus_square(ctx):
    return _d_square_check(ctx, "minus")


def _check_center(ctx):
    alg = CliffordAlgebra.from_pencil(ctx.P, "ordinary")
    D = min(ctx.max_degree, 6)
    dims = commutant_dims(alg, D)
    oracle = hilbert_dims_center(D)
    wit = [{"weights": f"0..{D}", "commutant_dims": dims,
            "free_module_oracle": oracle}]
    return dims == oracle, wit


# ---------------------------------------------------------------------------
# fiber block
# ---------------------------------------------------------------------------

def _check_azumaya_m4(ctx):
    wit = []
    ok = True
    for u in ctx.fiber_points():
        A = specialize(ctx.P, "ordinary", u)
        verdict = certify_matrix_algebra(A, 4)
        ok = ok and verdict == "M4"
        wit.append({"point": list(u), "field": describe_field(A.field),
                    "verdict": verdict})
    return ok, wit


def _check_split_m2(ctx):
    wit = []
    ok = True
    for u in ctx.fiber_points():
        for side in ("plus", "minus"):
            A, _, _ = side_fiber(ctx.P, side, u)
            cert = certify_split_pair(A, 2)
            ok = ok and cert.verdict == "M2xM2"
            wit.append({"point": list(u), "side": side,
                        "field": describe_field(cert.field),
                        "verdict": cert.verdict})
    return ok, wit


def _check_corank1_m2(ctx):
    wit = []
    ok = True
    total = 0
    for side in ("plus", "minus"):
        pts = []
        rat = rational_curve_point(ctx.P, side, ctx.rng(f"corank1-{side}"))
        if rat is not None:
            pts.append((rat, None))
        else:
            wit.append({"side": side,
                        "note": "no rational curve point found; "
                                "finite-field fallback"})
        p = ctx.primes[0]
        for u in curve_points_fp(ctx.P, side, p, 3 - len(pts)):
            pts.append((u, p))
        for u, p in pts:
            field = None if p is None else PrimeField(p)
            Q, verdict = corank1_quotient(ctx.P, side, u, field)
            ok = ok and verdict == "M2" and Q.dim == 4
            total += 1
            entry = {"side": side, "point": list(u),
                     "field": "Q" if p is None else f"F_{p}",
                     "verdict": verdict}
            if p is not None:
                entry["certificate"] = "randomized"
            wit.append(entry)
    wit.append({"corank1_points": total, "required": 5})
    return ok and total >= 5, wit


# ---------------------------------------------------------------------------
# stabilizer tables
# ---------------------------------------------------------------------------

def _stabilizer_check(group):
    def run(ctx):
        wit = []
        ok = True
        for yp in (False, True):
            for ym in (False, True):
                closed = geometry.stabilizer(yp, ym, group)
                brute = geometry.stabilizer_bruteforce(yp, ym, group)
                match = (closed.subgroup == brute.subgroup
                         and closed.elements == brute.elements)
                ok = ok and match
                wit.append({"y_plus_zero": yp, "y_minus_zero": ym,
                            "subgroup": closed.subgroup,
                            "elements": [list(e) if isinstance(e, tuple) else e
                                         for e in closed.elements],
                            "matches_bruteforce": match})
        return ok, wit

    return run


# ---------------------------------------------------------------------------
# section-4 geometry block
# ---------------------------------------------------------------------------

def _adjugate_scan(ctx, side, p):
    """Exhaustive stratification of the adjugate over ℙ²(F_p): rank 3 off
    the curve, a certified rank-one double line on it."""
    coeffs = geometry._entry_coeffs(ctx.P.side_mats(side))
    rank3 = 0
    double = 0
    for pt in geometry.proj_points(p):
        m = geometry._block_mod(coeffs, pt, p)
        adj = geometry.adj3_mod(m, p)
        det = geometry.det3_mod(m, p, adj)
        if det:
            rank3 += 1
            continue
        if geometry.rank3_mod(adj, p) != 1:
            return None, list(pt)
        double += 1
    return {"rank3": rank3, "double_line": double}, None


def _check_adjugate(ctx):
    p = ctx.primes[0]
    wit = []
    ok = True
    for u in ctx.fiber_points()[:3]:
        for side in ("plus", "minus"):
            verdict, _ = adjugate_double_line(ctx.P, side, u)
            ok = ok and verdict == "rank3"
            wit.append({"point": list(u), "side": side, "field": "Q",
                        "verdict": verdict})
    for side in ("plus", "minus"):
        counts, violation = _adjugate_scan(ctx, side, p)
        if counts is None:
            ok = False
            wit.append({"side": side, "prime": p, "violation_at": violation,
                        "certificate": "randomized"})
            continue
        curve = len(ctx.curve_points_mod(side, p))
        agrees = counts["double_line"] == curve
        ok = ok and agrees
        wit.append({"side": side, "prime": p,
                    "points_scanned": p * p + p + 1,
                    "rank3": counts["rank3"],
                    "double_lines": counts["double_line"],
                    "curve_points": curve,
                    "certificate": "randomized"})
    return ok, wit


def _check_singular_locus(ctx):
    wit = []
    ok = True
    for side in ("plus", "minus"):
        for p in ctx.primes:
            try:
                found = geometry.singular_locus_C(ctx.P, side, p)
            except geometry.GenericityError as exc:
                ok = False
                wit.append({"side": side, "prime": p, "error": str(exc)})
                continue
            curve = len(ctx.curve_points_mod(side, p))
            agrees = len(found) == curve
            ok = ok and agrees
            wit.append({"side": side, "prime": p,
                        "singular_points": len(found),
                        "curve_points": curve,
                        "one_per_degenerate_fiber": agrees,
                        "certificate": "randomized"})
    return ok, wit


_ANNIHILATOR_LINES = (
    (1, 0), (0, 1), (1, 1), (1, -1), (1, 2),
    (2, 1), (1, 3), (3, 1), (2, -3), (1, -2),
)


def _check_annihilator(ctx):
    u = ctx.fiber_points()[0]
    wit = []
    ok = True
    for side in ("plus", "minus"):
        rep = module_rep(ctx.P, side, u)
        ws = []
        good = True
        for m in _ANNIHILATOR_LINES:
            w = annihilator_line(rep, m)
            back = module_line_for(rep, w)
            mt = tuple(rep.tower.coerce(c) for c in m)
            good = good and lines_proportional(mt, back)
            ws.append(w)
        inj = all(
            not lines_proportional(ws[i], ws[j])
            for i in range(len(ws))
            for j in range(i + 1, len(ws))
        )
        ok = ok and good and inj
        wit.append({"side": side, "point": list(u),
                    "field": rep.tower.describe(),
                    "lines": len(_ANNIHILATOR_LINES),
                    "round_trip": good, "injective": inj})
    return ok, wit


def _check_m0(ctx):
    symbolic = m0_identity_check()
    rows, a = m0_matrix_symbolic()
    residuals = [
        row[0] * a[1] + row[1] * a[2] + row[2] * a[3] - row[3] * a[0]
        for row in rows
    ]
    rng = _derived_rng("check", "m0", "instances")
    sampled = 0
    ok = symbolic
    for _ in range(5):
        vals = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(4)]
        if not any(vals):
            vals[0] = Fraction(1)
        try:
            m0_matrix(vals)
            sampled += 1
        except (AssertionError, ValueError):
            ok = False
    wit = [{"symbolic_rank3_and_relation": symbolic,
            "relation_residual_sha256": poly_residual_hash(residuals),
            "random_instances": sampled}]
    return ok, wit


def _check_segre(ctx):
    cert = segre_identity_check()
    transform = transform_identity_check()
    wit = [{"transform_identity": transform,
            "failures": list(cert.failures),
            "residual_sha256": cert.residual_sha256}]
    return cert.ok and transform, wit


_CHECK_FUNCS = {
    "prop2.2-smoothness": _check_smoothness,
    "prop2.2-transversality": _check_transversality,
    "def2.1-rank4": _check_rank4,
    "prop2.5-nine-points": _check_nine_points,
    "prop3.5-grading": _check_grading,
    "prop3.19-equivariance": _check_equivariance,
    "prop3.9-phi": _check_phi,
    "prop3.12-dplus-square": _check_dplus_square,
    "prop3.12-dminus-square": _check_dminus_square,
    "prop3.13-center": _check_center,
    "prop3.17-azumaya-m4": _check_azumaya_m4,
    "prop3.18-split-m2": _check_split_m2,
    "prop3.18-corank1-m2": _check_corank1_m2,
    "prop2.3-stabilizers": _stabilizer_check("Clambda"),
    "prop2.8-stabilizers": _stabilizer_check("G"),
    "prop4.2-adjugate-double-line": _check_adjugate,
    "prop4.3-singular-locus": _check_singular_locus,
    "prop4.7-annihilator": _check_annihilator,
    "prop4.8-m0-matrix": _check_m0,
    "prop4.9-segre": _check_segre,
}

assert tuple(_CHECK_FUNCS) == CHECK_ORDER


class UnknownCheckError(ValueError):
    pass


def run_single(ctx, check_id):
    if check_id not in _CHECK_FUNCS:
        raise UnknownCheckError(f"unknown check id: {check_id}")
    if ctx.P is None and check_id not in INSTANCE_FREE:
        raise ValueError(f"check {check_id} requires an instance")
    start = time.perf_counter()
    try:
        ok, witnesses = _CHECK_FUNCS[check_id](ctx)
        status = "pass" if ok else "fail"
    except Exception as exc:  # a crashed check is a failed check
        status = "fail"
        witnesses = [{"error": f"{type(exc).__name__}: {exc}"}]
    return CheckResult(
        id=check_id,
        status=status,
        witnesses=_plain(witnesses),
        seconds=time.perf_counter() - start,
    )


def run_all(ctx, ids=None):
    if ids is None:
        ids = CHECK_ORDER
    else:
        unknown = [i for i in ids if i not in _CHECK_FUNCS]
        if unknown:
            raise UnknownCheckError(f"unknown check id: {unknown[0]}")
        ids = tuple(i for i in CHECK_ORDER if i in set(ids))
    return [run_single(ctx, cid) for cid in ids]
