"""Projection degree, projection stabilizer, Galois decision, classification.

A line ell cut out by forms F0, F1 projects the embedded curve to P^1 via
P -> (F0(P) : F1(P)).  The line is Galois exactly when the subgroup of
curve automorphisms fixing that map has order equal to the projection
degree (deck-group order equals extension degree for separable covers).

Stabilizer membership reduces to small polynomial identities on the conic
parameter t.  Writing b(t) for a form restricted to (t : 0 : 1 : t^2) and
a(t) for its pullback under the matrix action cleared of denominators,
an automorphism (M, e) fixes the projection iff

  - line through the vertex (no form involves Y):   a_G b_H = a_H b_G,
    with e then unconstrained beyond e^((q+1)/2) = det M;
  - line inside {Y = 0} (basis Y, G):               a_G = e b_G;
  - anything else (basis G without Y, H with Y=1):  a_G = e b_G and
                                                    a_H = e b_H.

All three follow from clearing (c x + d)^2 in F_i(phi sigma) F_j(phi) and
comparing coefficients; the products have y-degree at most 2 < (q+1)/2, so
no reduction modulo the curve equation is ever needed for q >= 5.
"""

from __future__ import annotations

from .autgroup import CurveAutomorphism, GroupIsoClass, identify_structure
from .curve import INF, CurvePoint
from .field import FieldElem, FieldError
from .polyring import Poly

CASES = ("I", "II-b", "II-c", "III-d", "III-e", "III-f", "IV")
NON_GALOIS = "NonGalois"

MODE_VERTEX = "vertex"
MODE_YPLANE = "yplane"
MODE_GENERIC = "generic"


class LineVerdict:
    """Measured classification data for one line."""

    __slots__ = ("line", "case", "degree", "stabilizer_order", "group",
                 "galois", "witnesses")

    def __init__(self, line, case, degree, stabilizer_order, group, galois, witnesses):
        self.line = line
        self.case = case
        self.degree = degree
        self.stabilizer_order = stabilizer_order
        self.group = group
        self.galois = galois
        self.witnesses = witnesses

    def __repr__(self):
        grp = f", group {self.group.label()}" if self.group else ""
        return (f"<{self.line}: {self.case}, degree {self.degree}, "
                f"stabilizer {self.stabilizer_order}{grp}>")


def expected_by_case(q):
    """Degree and group isomorphism class each case must exhibit."""
    from .field import factorize

    p = next(iter(factorize(q)))
    n = 0
    qq = q
    while qq > 1:
        qq //= p
        n += 1
    h = (q + 1) // 2
    return {
        "I": (h, GroupIsoClass.cyclic(h)),
        "II-b": (q + 1, GroupIsoClass.cyclic(q + 1)),
        "II-c": (q + 1, GroupIsoClass.abelian_invariant_factors((h, 2))),
        "III-d": (q - 1, GroupIsoClass.dihedral_of_order(q - 1)),
        "III-e": (q, GroupIsoClass.elementary_abelian(p, n)),
        "III-f": (q + 1, GroupIsoClass.dihedral_of_order(q + 1)),
        "IV": (q + 1, GroupIsoClass.cyclic(q + 1)),
    }


# ---------------------------------------------------------------------------
# pencil reduction
# ---------------------------------------------------------------------------

def pencil_reduction(line):
    """Mode plus reduced form basis for the stabilizer conditions.

    Returns (mode, G, H, level) with G, H packed 4-vectors at the working
    level: for MODE_VERTEX both are Y-free; for MODE_YPLANE G is Y-free and
    H is the form Y itself; for MODE_GENERIC G is Y-free and H has Y=1.
    """
    tower = line.tower
    lvl = tower.level_containing(max(line.level.exp, 2))
    r0, r1 = (tuple(v for v in row) for row in line.dual_forms())
    y0, y1 = r0[1], r1[1]
    if y0 == 0 and y1 == 0:
        return MODE_VERTEX, r0, r1, lvl
    hsrc, gsrc = (r0, r1) if y0 else (r1, r0)
    inv = lvl.inv(hsrc[1])
    H = tuple(lvl.mul(inv, v) for v in hsrc)
    mu = gsrc[1]
    G = tuple(lvl.sub(v, lvl.mul(mu, w)) for v, w in zip(gsrc, H))
    gx, gz, gw = G[0], G[2], G[3]
    hx, hz, hw = H[0], H[2], H[3]
    cross = (lvl.sub(lvl.mul(gx, hz), lvl.mul(gz, hx)),
             lvl.sub(lvl.mul(gx, hw), lvl.mul(gw, hx)),
             lvl.sub(lvl.mul(gz, hw), lvl.mul(gw, hz)))
    if not any(cross):
        return MODE_YPLANE, G, (0, 1, 0, 0), lvl
    return MODE_GENERIC, G, H, lvl


def _quad(form):
    """(c0, c1, c2) of hZ + hX t + hW t^2 from an XZW-bearing 4-vector."""
    return (form[2], form[0], form[3])


def _apply_tm(lvl, m, form):
    """Pullback quadratic of a form under the conic action of M = (a,b,c,d).

    Returns coefficients of hX(at+b)(ct+d) + hZ(ct+d)^2 + hW(at+b)^2.
    """
    a, b, c, d = m
    hx, hz, hw = form[0], form[2], form[3]
    mul = lvl.mul
    add = lvl.add
    c0 = add(add(mul(hx, mul(b, d)), mul(hz, mul(d, d))), mul(hw, mul(b, b)))
    mid = add(mul(a, d), mul(b, c))
    c1 = add(add(mul(hx, mid), mul(hz, mul(2 % lvl.tower.p, mul(c, d)))),
             mul(hw, mul(2 % lvl.tower.p, mul(a, b))))
    c2 = add(add(mul(hx, mul(a, c)), mul(hz, mul(c, c))), mul(hw, mul(a, a)))
    return (c0, c1, c2)


def _cross5(lvl, a0, b1, a1, b0):
    """Coefficients of a0*b1 - a1*b0 for quadratic coefficient triples."""
    out = []
    for k in range(5):
        acc = 0
        for i in range(max(0, k - 2), min(2, k) + 1):
            j = k - i
            acc = lvl.add(acc, lvl.sub(lvl.mul(a0[i], b1[j]), lvl.mul(a1[i], b0[j])))
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# stabilizer
# ---------------------------------------------------------------------------

def fiber_group(curve, line, assert_closed=True):
    """All automorphisms fixing the projection from the line.

    Uses the mode-reduced identities over PGL(2, q) representatives; the
    result is asserted closed under composition.
    """
    from .tables import pgl_data

    tower = curve.tower
    pd = pgl_data(tower)
    mode, G, H, lvl = pencil_reduction(line)
    bG = _quad(G)
    out = []
    if mode == MODE_VERTEX:
        bH = _quad(H)
        for a, b, c, d, det in pd.mats:
            aG = _apply_tm(lvl, (a, b, c, d), G)
            aH = _apply_tm(lvl, (a, b, c, d), H)
            if any(_cross5(lvl, aG, bH, aH, bG)):
                continue
            for e in pd.e_by_det[det]:
                out.append(CurveAutomorphism(tower, (a, b, c, d), e))
    else:
        k = next(i for i, v in enumerate(bG) if v)
        invb = lvl.inv(bG[k])
        bH = _quad(H) if mode == MODE_GENERIC else None
        size2 = tower.level(2).size
        for a, b, c, d, det in pd.mats:
            aG = _apply_tm(lvl, (a, b, c, d), G)
            e = lvl.mul(aG[k], invb)
            if e >= size2 or e not in pd.e_by_det[det]:
                continue
            if any(lvl.sub(aG[i], lvl.mul(e, bG[i])) for i in range(3)):
                continue
            if mode == MODE_GENERIC:
                aH = _apply_tm(lvl, (a, b, c, d), H)
                if any(lvl.sub(aH[i], lvl.mul(e, bH[i])) for i in range(3)):
                    continue
            out.append(CurveAutomorphism(tower, (a, b, c, d), e))
    if assert_closed:
        keys = {g.key() for g in out}
        for g in out:
            for h_ in out:
                if g.compose(h_).key() not in keys:
                    raise AssertionError(f"stabilizer of {line} not closed")
    return out


def fiber_group_bruteforce(curve, line, aut_group):
    """Oracle twin of fiber_group: direct polynomial identity over all of Aut.

    Clears (c x + d)^2 denominators and compares every coefficient of
    F0(phi sigma) F1(phi) - F1(phi sigma) F0(phi) in x and y.
    """
    tower = curve.tower
    lvl = tower.level_containing(max(line.level.exp, 2))
    f0, f1 = line.dual_forms()
    out = []
    for sigma in aut_group:
        a, b, c, d = sigma.m
        e = sigma.e
        coeffs = {}

        def acc(i, j, v):
            if v:
                coeffs[(i, j)] = lvl.add(coeffs.get((i, j), 0), v)

        aa = [_apply_tm(lvl, (a, b, c, d), f) for f in (f0, f1)]
        bb = [_quad(f) for f in (f0, f1)]
        ya = [lvl.mul(e, f[1]) for f in (f0, f1)]   # y-part of cleared pullback
        yb = [f[1] for f in (f0, f1)]
        # (a0 + ya0 y)(b1 + yb1 y) - (a1 + ya1 y)(b0 + yb0 y)
        for i in range(3):
            for j in range(3):
                acc(i + j, 0, lvl.sub(lvl.mul(aa[0][i], bb[1][j]),
                                      lvl.mul(aa[1][i], bb[0][j])))
        for i in range(3):
            acc(i, 1, lvl.sub(lvl.mul(aa[0][i], yb[1]), lvl.mul(aa[1][i], yb[0])))
            acc(i, 1, lvl.sub(lvl.mul(ya[0], bb[1][i]), lvl.mul(ya[1], bb[0][i])))
        acc(0, 2, lvl.sub(lvl.mul(ya[0], yb[1]), lvl.mul(ya[1], yb[0])))
        if not any(coeffs.values()):
            out.append(sigma)
    return out


# ---------------------------------------------------------------------------
# projection degree
# ---------------------------------------------------------------------------

def projection_degree(curve, line, max_exp=None):
    """Degree of the projection from the line: q+1 minus the base mass.

    The base mass at the infinite point comes from the valuation table; at
    affine base points from exact local expansions; the conjugate bundle of
    (q+1)/2 points over a non-rational x0 on a vertex line contributes
    (q+1)/2 times the minimal root multiplicity, since x - x0 is a local
    parameter wherever y != 0.
    """
    tower = curve.tower
    q = curve.q
    f0, f1 = line.dual_forms()
    lvl = tower.level_containing(max(line.level.exp, 2))
    felems = [[FieldElem(lvl, v) for v in f] for f in (f0, f1)]
    minf = min(curve.section_order_at(f, CurvePoint.infinity()) for f in felems)

    def base_at(pt):
        return min(curve.section_order_at(f, pt) for f in felems)

    affine = 0
    mode, G, H, wl = pencil_reduction(line)
    if mode == MODE_VERTEX:
        g0 = Poly(wl, _quad(G))
        g1 = Poly(wl, _quad(H))
        com = g0.gcd(g1)
        if com.degree == 1:
            x0 = FieldElem(wl, wl.neg(com.coeffs[0]))
            v = x0.frobenius() - x0
            if not v:
                affine = base_at(CurvePoint(x0, tower.zero()))
            else:
                m0 = _root_mult(g0, x0.lift(wl.exp))
                m1 = _root_mult(g1, x0.lift(wl.exp))
                affine = curve.h * min(m0, m1)
    elif mode == MODE_YPLANE:
        g = Poly(wl, _quad(G))
        for r in g.lift(wl).roots_here():
            x0 = FieldElem(wl, r)
            if x0.frobenius() == x0:
                affine += base_at(CurvePoint(x0, tower.zero()))
    else:
        g = Poly(wl, _quad(G))
        if g.degree >= 1:
            for rv, rlvl, _m in g.roots_with_levels(max_exp=max_exp):
                x0 = FieldElem(rlvl, rv)
                bH = _quad(H)
                y0 = -(FieldElem(rlvl, Poly(rlvl, [c for c in bH]).eval(rv)))
                pt = CurvePoint(x0, y0)
                if curve.on_curve(pt):
                    affine += base_at(pt)
    deg = (q + 1) - minf - affine
    if deg < 1:
        raise AssertionError(f"projection degree {deg} < 1 for {line}")
    return deg


def _root_mult(poly, r):
    m = 0
    lin = Poly(poly.level, (poly.level.neg(r), 1))
    while True:
        quo, rem = poly.divmod(lin)
        if not rem.is_zero():
            return m
        poly = quo
        m += 1
        if poly.degree < 0:
            return m


# ---------------------------------------------------------------------------
# geometric classification
# ---------------------------------------------------------------------------

def _is_square_lvl1(tower, v):
    lvl1 = tower.level(1)
    if v == 0:
        return True
    return lvl1.pow(v, (lvl1.size - 1) // 2) == 1


def classify_line(curve, line):
    """Geometric case label and witnesses; no group computation.

    Decision tree: through the vertex (meets the conic -> I; rational ->
    II-b or II-c by tangent-pencil discriminant), inside {Y=0} (rational ->
    III-d/e/f by conic intersection type; level-2 tangent -> IV), otherwise
    no case applies.
    """
    tower = curve.tower
    mode, G, H, lvl = pencil_reduction(line)
    wit = {}
    if mode == MODE_VERTEX:
        gx, gz, gw = G[0], G[2], G[3]
        hx, hz, hw = H[0], H[2], H[3]
        mul, sub = lvl.mul, lvl.sub
        # common zero of the two XZW forms, as a point of the plane {Y=0}
        sx = sub(mul(gz, hw), mul(gw, hz))
        sz = sub(mul(gw, hx), mul(gx, hw))
        sw = sub(mul(gx, hz), mul(gz, hx))
        from .projspace import ProjPoint

        S = ProjPoint(tower, [FieldElem(lvl, sx), tower.zero(),
                              FieldElem(lvl, sz), FieldElem(lvl, sw)])
        wit["meets_Y_plane_at"] = S
        delta = sub(mul(S.coords[0], S.coords[0]), mul(S.coords[2], S.coords[3]))
        if delta == 0:
            wit["conic_point"] = S
            return "I", wit
        if not line.is_rational_over(1):
            return NON_GALOIS, wit
        # S and delta are rational here; square delta <=> two rational tangents
        if _is_square_lvl1(tower, delta):
            ts = _tangency_params(curve, S)
            wit["tangency_points"] = [curve.conic_point(t) for t in ts]
            return "II-b", wit
        ts = _tangency_params(curve, S, exp=2)
        wit["tangency_points"] = [curve.conic_point(t) for t in ts]
        return "II-c", wit
    if mode == MODE_YPLANE:
        s, pp, r = G[3], G[0], G[2]   # s t^2 + pp t + r on the conic
        mul, sub = lvl.mul, lvl.sub
        disc = sub(mul(pp, pp), mul(4 % tower.p, mul(s, r)))
        rational = line.is_rational_over(1)
        if rational:
            if disc == 0:
                t0 = _double_root(curve, lvl, s, pp)
                wit["tangent_point"] = curve.conic_point(t0)
                return "III-e", wit
            if _is_square_lvl1(tower, disc):
                ts = _conic_meet_params(curve, lvl, s, pp, r, exp=1)
                wit["secant_points"] = [curve.conic_point(t) for t in ts]
                return "III-d", wit
            ts = _conic_meet_params(curve, lvl, s, pp, r, exp=2)
            wit["conjugate_points"] = [curve.conic_point(t) for t in ts]
            return "III-f", wit
        if disc == 0 and line.level.exp <= 2 and line.is_rational_over(2):
            t0 = _double_root(curve, lvl, s, pp)
            if t0 is not INF and t0.exp == 2:
                wit["tangent_point"] = curve.conic_point(t0)
                return "IV", wit
        return NON_GALOIS, wit
    return NON_GALOIS, wit


def _double_root(curve, lvl, s, pp):
    if s == 0:
        return INF
    tower = curve.tower
    val = lvl.neg(lvl.div(pp, lvl.mul(2 % tower.p, s)))
    return FieldElem(lvl, val)


def _conic_meet_params(curve, lvl, s, pp, r, exp):
    """Roots of s t^2 + pp t + r including INF when s = 0, over GF(q^exp)."""
    tower = curve.tower
    out = []
    if s == 0:
        out.append(INF)
        if pp:
            out.append(FieldElem(lvl, lvl.neg(lvl.div(r, pp))))
        return out
    target = tower.level_containing(max(lvl.exp, exp))
    poly = Poly(target, (r, pp, s))
    for rv in poly.roots_here():
        out.append(FieldElem(target, rv))
    return out


def _tangency_params(curve, S, exp=1):
    """Conic parameters whose tangent lines pass through the plane point S."""
    tower = curve.tower
    lvl = tower.level_containing(max(S.level.exp, exp))
    sx, _, sz, sw = (FieldElem(S.level, c).lift(lvl.exp) for c in S.coords)
    # tangent at t contains S iff sw - 2 t sx + t^2 sz = 0; t = INF iff sz = 0
    out = []
    if sz == 0:
        out.append(INF)
        if sx:
            out.append(FieldElem(lvl, lvl.div(sw, lvl.mul(2 % tower.p, sx))))
        return out
    poly = Poly(lvl, (sw, lvl.neg(lvl.mul(2 % tower.p, sx)), sz))
    for rv in poly.roots_here():
        out.append(FieldElem(lvl, rv))
    return out


# ---------------------------------------------------------------------------
# the Galois decision
# ---------------------------------------------------------------------------

def is_galois(curve, line, max_exp=None):
    """Measured verdict: stabilizer, degree when needed, case, group class.

    The fast path returns immediately when the stabilizer is trivial, since
    every projection here has degree at least 2.
    """
    stab = fiber_group(curve, line, assert_closed=False)
    case, wit = classify_line(curve, line)
    if len(stab) == 1:
        # degree >= 2 always, so a trivial stabilizer settles the question
        return LineVerdict(line, case, None, 1, None, False, wit)
    deg = projection_degree(curve, line, max_exp)
    galois = deg == len(stab)
    group = identify_structure(stab) if galois else None
    return LineVerdict(line, case, deg, len(stab), group, galois, wit)


# ---------------------------------------------------------------------------
# fiber transitivity verification
# ---------------------------------------------------------------------------

def verify_fiber_transitivity(curve, line, stab, sample_points):
    """Check the stabilizer is transitive on the fibers through sample points.

    For each sampled curve point P (off the base locus) the orbit under the
    stabilizer must keep the projection value constant, and the sum of local
    ramification orders over the orbit must equal the projection degree;
    the fiber has total mass deg, so the orbit then exhausts it.
    Returns the number of fibers verified.
    """
    tower = curve.tower
    f0, f1 = line.dual_forms()
    deg = projection_degree(curve, line)
    done = 0
    for pt in sample_points:
        if pt.infinite:
            continue
        lvl = tower.level_containing(max(pt.level_exp, line.level.exp, 2))
        fe = [[FieldElem(lvl, v) for v in f] for f in (f0, f1)]
        s0 = _eval_section(fe[0], pt)
        s1 = _eval_section(fe[1], pt)
        if not s0 and not s1:
            continue  # base point, no fiber
        orbit = {pt}
        frontier = [pt]
        while frontier:
            cur = frontier.pop()
            for g in stab:
                img = g.apply(curve, cur)
                if img not in orbit:
                    orbit.add(img)
                    frontier.append(img)
        if any(op.infinite for op in orbit):
            continue  # the special fiber through the infinite point
        lam0, lam1 = s0, s1
        hform = [lam1 * a - lam0 * b for a, b in zip(fe[0], fe[1])]
        mass = 0
        for op in orbit:
            t0 = _eval_section(fe[0], op)
            t1 = _eval_section(fe[1], op)
            if t0 * lam1 != t1 * lam0:
                raise AssertionError("orbit left the fiber")
            mass += curve.section_order_at(hform, op) - \
                min(curve.section_order_at(fe[0], op), curve.section_order_at(fe[1], op))
        if mass != deg:
            raise AssertionError(
                f"fiber mass {mass} != degree {deg} on {line} at {pt}")
        done += 1
    return done


def _eval_section(form, pt):
    x, y = pt.x, pt.y
    return form[0] * x + form[1] * y + form[2] + form[3] * x * x
