"""Finite-field certificates for the determinant curves, plus the
group-action stabilizer tables.

The scans are exhaustive over the p²+p+1 points of the projective plane
(a counter enforces this) with polynomial evaluation compiled to integer
arithmetic mod p.  Gradients are only evaluated on curve points, which is
enough: a singular point of the curve satisfies f = 0 by definition.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction


class ScanError(Exception):
    """A scan precondition failed (e.g. the curve vanishes mod p)."""


class GenericityError(Exception):
    """The instance violates a genericity assumption (corank ≥ 2)."""


def worker_count():
    """Worker count for sharded scans, from QUADCLIF_WORKERS (default 1)."""
    try:
        n = int(os.environ.get("QUADCLIF_WORKERS", "1"))
    except ValueError:
        return 1
    return max(1, min(n, 64))


# ---------------------------------------------------------------------------
# point enumeration and compiled evaluation
# ---------------------------------------------------------------------------

def proj_points(p):
    """Normalized representatives of P²(F_p): exactly p²+p+1 points."""
    for a in range(p):
        for b in range(p):
            yield (1, a, b)
    for c in range(p):
        yield (0, 1, c)
    yield (0, 0, 1)


def _reduce_coeff(c, p):
    c = Fraction(c)
    den = c.denominator % p
    if den == 0:
        raise ScanError(f"coefficient denominator divisible by {p}")
    return c.numerator * pow(den, p - 2, p) % p


def compile_poly(f, p):
    """Term list [(exps, coeff mod p)] with zero terms dropped; ScanError
    if the whole polynomial vanishes mod p."""
    terms = []
    for e, c in sorted(f.terms.items()):
        r = _reduce_coeff(c, p)
        if r:
            terms.append((e, r))
    if not terms:
        raise ScanError(f"polynomial vanishes identically mod {p}")
    return terms


def eval_compiled(terms, pt, p):
    acc = 0
    x, y, z = pt
    # power tables up to the small degrees that occur here
    px = (1, x, x * x % p, x * x % p * x % p)
    py = (1, y, y * y % p, y * y % p * y % p)
    pz = (1, z, z * z % p, z * z % p * z % p)
    for (e1, e2, e3), c in terms:
        acc += c * px[e1] % p * py[e2] % p * pz[e3]
    return acc % p


def _zero_set(compiled, p, workers=None):
    """All points of P²(F_p) where the compiled polynomial vanishes, in
    enumeration order; asserts the sweep visited every point.

    On the affine charts the polynomial is collapsed to a dense univariate
    in the last coordinate (degree ≤ 3 here), so the inner loop is a Horner
    evaluation instead of a term-by-term one.
    """
    if workers is None:
        workers = worker_count()
    deg3 = max(sum(e) for e, _ in compiled)
    if deg3 > 3:
        raise ScanError("sweep supports degree <= 3 only")

    def sweep_chart1(a_range):
        out = []
        visited = 0
        for a in a_range:
            pa = (1, a, a * a % p, a * a % p * a % p)
            dense = [0, 0, 0, 0]
            for (e1, e2, e3), c in compiled:
                dense[e3] += c * pa[e2]
            d3, d2, d1, d0 = (dense[3] % p, dense[2] % p,
                              dense[1] % p, dense[0] % p)
            for b in range(p):
                visited += 1
                if (((d3 * b + d2) * b + d1) * b + d0) % p == 0:
                    out.append((1, a, b))
        return out, visited

    zeros = []
    visited = 0
    if workers > 1:
        chunk = (p + workers - 1) // workers
        ranges = [range(i, min(i + chunk, p)) for i in range(0, p, chunk)]
        with ThreadPoolExecutor(max_workers=workers) as ex:
            for part, seen in ex.map(sweep_chart1, ranges):
                zeros.extend(part)
                visited += seen
    else:
        part, seen = sweep_chart1(range(p))
        zeros.extend(part)
        visited += seen
    dense = [0, 0, 0, 0]
    for (e1, e2, e3), c in compiled:
        if e1 == 0:
            dense[e3] += c
    d3, d2, d1, d0 = (dense[3] % p, dense[2] % p, dense[1] % p, dense[0] % p)
    for cc in range(p):
        visited += 1
        if (((d3 * cc + d2) * cc + d1) * cc + d0) % p == 0:
            zeros.append((0, 1, cc))
    visited += 1
    if eval_compiled(compiled, (0, 0, 1), p) == 0:
        zeros.append((0, 0, 1))
    assert visited == p * p + p + 1, "projective sweep missed points"
    return zeros


def curve_points(f, p, workers=None):
    return _zero_set(compile_poly(f, p), p, workers)


# ---------------------------------------------------------------------------
# smoothness / transversality scans
# ---------------------------------------------------------------------------

def ff_scan_smooth(f, p, workers=None):
    """Points of {f = 0} ⊂ P²(F_p) where the gradient also vanishes.
    An empty list certifies smoothness of the reduction mod p."""
    compiled = compile_poly(f, p)
    grads = [compile_poly(g, p) if not g.is_zero() else [] for g in
             (f.derivative(v) for v in f.ring.vars)]
    bad = []
    for pt in _zero_set(compiled, p, workers):
        if all((not g) or eval_compiled(g, pt, p) == 0 for g in grads):
            bad.append(pt)
    return bad


def ff_scan_transversal(f_plus, f_minus, p, workers=None):
    """Common points of the two curves where the 2×3 gradient matrix has
    rank ≤ 1.  Empty list = transverse intersection mod p."""
    cp = compile_poly(f_plus, p)
    cm = compile_poly(f_minus, p)
    gp = [compile_poly(g, p) if not g.is_zero() else [] for g in
          (f_plus.derivative(v) for v in f_plus.ring.vars)]
    gm = [compile_poly(g, p) if not g.is_zero() else [] for g in
          (f_minus.derivative(v) for v in f_minus.ring.vars)]
    bad = []
    for pt in _zero_set(cp, p, workers):
        if eval_compiled(cm, pt, p) != 0:
            continue
        a = [eval_compiled(g, pt, p) if g else 0 for g in gp]
        b = [eval_compiled(g, pt, p) if g else 0 for g in gm]
        minors = (
            a[0] * b[1] - a[1] * b[0],
            a[0] * b[2] - a[2] * b[0],
            a[1] * b[2] - a[2] * b[1],
        )
        if all(m % p == 0 for m in minors):
            bad.append(pt)
    return bad


# ---------------------------------------------------------------------------
# corank scans via the adjugate
# ---------------------------------------------------------------------------

def _entry_coeffs(mats):
    """For each (i,j), the integer coefficient triple of the linear form."""
    return tuple(
        tuple((mats[0][i][j], mats[1][i][j], mats[2][i][j]) for j in range(3))
        for i in range(3)
    )


def _block_mod(coeffs, pt, p):
    x, y, z = pt
    return [
        [(c[0] * x + c[1] * y + c[2] * z) % p for c in row]
        for row in coeffs
    ]


def adj3_mod(m, p):
    """Adjugate of a 3×3 integer matrix mod p (so m·adj = det·I)."""
    def cof(i, j):
        r = [k for k in range(3) if k != i]
        c = [k for k in range(3) if k != j]
        d = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
        return d % p if (i + j) % 2 == 0 else -d % p

    return [[cof(j, i) for j in range(3)] for i in range(3)]


def det3_mod(m, p, adj=None):
    if adj is None:
        adj = adj3_mod(m, p)
    return (m[0][0] * adj[0][0] + m[0][1] * adj[1][0] + m[0][2] * adj[2][0]) % p


def rank3_mod(m, p):
    m = [row[:] for row in m]
    rank = 0
    for col in range(3):
        piv = next((i for i in range(rank, 3) if m[i][col] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], p - 2, p)
        for i in range(rank + 1, 3):
            if m[i][col] % p:
                f = m[i][col] * inv % p
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def ff_scan_corank(P, p):
    """Max corank of the 3×3 blocks along E±(F_p).  Value 1 certifies that
    the 6×6 forms keep rank ≥ 4 along the scanned locus.  Corank only
    exceeds 0 where the block determinant vanishes, so the sweep visits the
    curve points delivered by the exhaustive determinant scan."""
    max_corank = 0
    for side in ("plus", "minus"):
        f = P.linear_form_matrix(side).det3()
        coeffs = _entry_coeffs(P.side_mats(side))
        for pt in curve_points(f, p):
            m = _block_mod(coeffs, pt, p)
            adj = adj3_mod(m, p)
            assert det3_mod(m, p, adj) == 0, "curve scan and block eval disagree"
            if any(any(x % p for x in row) for row in adj):
                corank = 1
            else:
                corank = 3 - rank3_mod(m, p)
            if corank > max_corank:
                max_corank = corank
    return max_corank


# ---------------------------------------------------------------------------
# singular locus of the conic fibration
# ---------------------------------------------------------------------------

def singular_locus_C(P, side, p):
    """Singular points of the fibration {y² = f(u), q_u(x) = 0} over F_p.

    The 2×7 Jacobian in (u, y, x) has rows (−∇f, 2y, 0) and (x^T q_k x, 0,
    2 q_u x).  Off the curve, q_u is invertible so no fiber point is
    singular; with y ≠ 0 a rank drop would force q_u x = 0 with x ≠ 0,
    contradicting det q_u = y² ≠ 0.  So the sweep only needs u ∈ E(F_p) and
    the kernel direction x₀ of q_u; the Jacobian rank ≤ 1 condition is then
    re-verified honestly at each returned point.
    """
    f = P.linear_form_matrix(side).det3()
    grads = [compile_poly(g, p) if not g.is_zero() else [] for g in
             (f.derivative(v) for v in f.ring.vars)]
    coeffs = _entry_coeffs(P.side_mats(side))
    found = []
    for u in curve_points(f, p):
        m = _block_mod(coeffs, u, p)
        adj = adj3_mod(m, p)
        col = next(
            ([adj[0][j], adj[1][j], adj[2][j]] for j in range(3)
             if any(adj[i][j] % p for i in range(3))),
            None,
        )
        if col is None:
            raise GenericityError(f"corank >= 2 at {u} mod {p}")
        # normalize the kernel direction
        lead = next(c for c in col if c % p)
        inv = pow(lead, p - 2, p)
        x0 = tuple(c * inv % p for c in col)
        # kernel membership: columns of the adjugate lie in ker(q_u)
        for i in range(3):
            assert sum(m[i][j] * x0[j] for j in range(3)) % p == 0
        # Jacobian rank <= 1: (x0^T q_k x0)_k proportional to grad f(u)
        g = [eval_compiled(gg, u, p) if gg else 0 for gg in grads]
        qk = [P.side_mats(side)[k] for k in range(3)]
        s = [
            sum(x0[i] * qk[k][i][j] * x0[j] for i in range(3) for j in range(3)) % p
            for k in range(3)
        ]
        minors = (g[0] * s[1] - g[1] * s[0],
                  g[0] * s[2] - g[2] * s[0],
                  g[1] * s[2] - g[2] * s[1])
        if any(mi % p for mi in minors):
            raise GenericityError(
                f"Jacobian rank 2 at curve point {u} mod {p}: "
                "kernel direction not aligned with grad f"
            )
        found.append((u, x0))
    return found


# ---------------------------------------------------------------------------
# stabilizer tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StabilizerDescriptor:
    group: str  # "Clambda" or "G"
    y_plus_zero: bool
    y_minus_zero: bool
    subgroup: str  # trivial | Z2_lambda | Z2_s | Z2xZ2
    elements: tuple


def _act_G(s, lam, point):
    u, yp, ym = point
    return (
        tuple(lam * lam * c for c in u),
        lam ** 3 * yp,
        s * lam ** 3 * ym,
    )


_G_LABELS = {
    frozenset({(1, 1)}): "trivial",
    frozenset({(1, 1), (-1, -1)}): "Z2_lambda",
    frozenset({(1, 1), (-1, 1)}): "Z2_s",
    frozenset({(1, 1), (1, -1)}): "Z2_lambda",
    frozenset({(1, 1), (1, -1), (-1, 1), (-1, -1)}): "Z2xZ2",
}


def stabilizer(y_plus_zero, y_minus_zero, group):
    """Closed-form stabilizer table.  The scaling action is
    (s, λ)·(u, y₊, y₋) = (λ²u, λ³y₊, sλ³y₋) with λ forced to ±1 by
    λ²u = u, u ≠ 0; the Cλ case is the s = 1 slice."""
    if group == "Clambda":
        if y_plus_zero and y_minus_zero:
            return StabilizerDescriptor(group, y_plus_zero, y_minus_zero,
                                        "Z2_lambda", (1, -1))
        return StabilizerDescriptor(group, y_plus_zero, y_minus_zero,
                                    "trivial", (1,))
    if group == "G":
        if y_plus_zero and y_minus_zero:
            elems = ((1, 1), (1, -1), (-1, 1), (-1, -1))
            label = "Z2xZ2"
        elif y_plus_zero:
            # y₋ ≠ 0 needs sλ³ = 1, so the nontrivial element is (−1,−1)
            elems = ((1, 1), (-1, -1))
            label = "Z2_lambda"
        elif y_minus_zero:
            # y₊ ≠ 0 needs λ = 1; s is free
            elems = ((1, 1), (-1, 1))
            label = "Z2_s"
        else:
            elems = ((1, 1),)
            label = "trivial"
        return StabilizerDescriptor(group, y_plus_zero, y_minus_zero, label, elems)
    raise ValueError("group must be 'Clambda' or 'G'")


def stabilizer_bruteforce(y_plus_zero, y_minus_zero, group,
                          sample=None):
    """Enumerate (s, λ) ∈ {±1}² on a rational sample point and keep the
    fixers; the authoritative companion to the closed-form table."""
    if sample is None:
        sample = ((Fraction(1), Fraction(2), Fraction(3)),
                  Fraction(0) if y_plus_zero else Fraction(5),
                  Fraction(0) if y_minus_zero else Fraction(7))
    u, yp, ym = sample
    if not any(u):
        raise ValueError("sample must have u != 0")
    if (yp == 0) != y_plus_zero or (ym == 0) != y_minus_zero:
        raise ValueError("sample does not realize the requested case")
    if group == "Clambda":
        fixers = tuple(
            lam for lam in (1, -1)
            if _act_G(1, lam, sample) == sample
        )
        label = "trivial" if fixers == (1,) else "Z2_lambda"
        return StabilizerDescriptor(group, y_plus_zero, y_minus_zero, label, fixers)
    if group == "G":
        fixers = tuple(
            (s, lam)
            for s in (1, -1)
            for lam in (1, -1)
            if _act_G(s, lam, sample) == sample
        )
        fixers = tuple(sorted(fixers, reverse=True))
        label = _G_LABELS[frozenset(fixers)]
        return StabilizerDescriptor(group, y_plus_zero, y_minus_zero, label, fixers)
    raise ValueError("group must be 'Clambda' or 'G'")
