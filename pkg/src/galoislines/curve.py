"""The curve y^((q+1)/2) = x^q - x, its space model and divisor machinery.

The embedding into P^3 is P = (x, y) -> (x : y : 1 : x^2) with the single
point at infinity mapping to (0:0:0:1).  The images of the points with
y = 0, together with (0:0:0:1), are the rational points of the conic
{Y = 0, X^2 = ZW}, and all tangent lines of the curve at those points pass
through the vertex (0:1:0:0).

Multiplicity computations never approximate.  At affine points they use
exact truncated power series in the local parameter s = y - y0: the curve
polynomial F = y^((q+1)/2) - x^q + x has dF/dx = 1 identically, so the
lifting x <- x^q - (y0+s)^((q+1)/2) raises the error valuation by a factor
of q per step and converges unconditionally.  At the point at infinity the
valuation table ord(x) = -(q+1)/2, ord(y) = -q, ord(x^2) = -(q+1) has
pairwise distinct values, so a minimum over present monomials is exact.
"""

from __future__ import annotations

from .field import FieldElem, FieldError, nth_roots
from .polyring import Poly
from .projspace import LineP3, PlaneP3, ProjPoint

INF = None  # conic parameter value for the point (0:0:0:1)


class CurvePoint:
    """An affine point (x, y) on the curve, or the point at infinity."""

    __slots__ = ("x", "y", "infinite")

    def __init__(self, x=None, y=None, infinite=False):
        self.x = x
        self.y = y
        self.infinite = infinite

    @classmethod
    def infinity(cls):
        return cls(infinite=True)

    @property
    def level_exp(self):
        if self.infinite:
            return 1
        return max(self.x.exp, self.y.exp)

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.infinite or other.infinite:
            return self.infinite and other.infinite
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.infinite:
            return hash("inf")
        return hash((self.x, self.y))

    def __repr__(self):
        if self.infinite:
            return "inf"
        return f"({self.x},{self.y})"


class SectionDivisor:
    """A finite formal sum of curve points with positive multiplicities."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = {p: m for p, m in entries.items() if m > 0}

    @property
    def degree(self):
        return sum(self.entries.values())

    def multiplicity(self, p):
        return self.entries.get(p, 0)

    def __eq__(self, other):
        return isinstance(other, SectionDivisor) and self.entries == other.entries

    def __repr__(self):
        parts = sorted(f"({p})^{m}" for p, m in self.entries.items())
        return " + ".join(parts) if parts else "0"


class DivisorIncomplete(RuntimeError):
    """Zeros of a section fall beyond the allowed tower level."""


# -- truncated power series helpers (lists of packed ints, one level) --------

def _ser_trim(c, n):
    return list(c[:n + 1]) + [0] * (n + 1 - len(c))


def _ser_add(lv, a, b):
    return [lv.add(x, y) for x, y in zip(a, b)]


def _ser_sub(lv, a, b):
    return [lv.sub(x, y) for x, y in zip(a, b)]


def _ser_mul(lv, a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a):
        if x == 0 or i > n:
            continue
        for j, y in enumerate(b):
            if i + j > n:
                break
            if y:
                out[i + j] = lv.add(out[i + j], lv.mul(x, y))
    return out


def _ser_pow(lv, a, k, n):
    r = [1] + [0] * n
    a = list(a)
    while k:
        if k & 1:
            r = _ser_mul(lv, r, a, n)
        a = _ser_mul(lv, a, a, n)
        k >>= 1
    return r


class EmbeddedCurve:
    """The curve over a fixed tower, with its conic and divisor operations."""

    def __init__(self, tower):
        self.tower = tower
        self.q = tower.q
        self.h = (tower.q + 1) // 2  # y-exponent in the defining equation
        self.genus = (tower.q - 1) ** 2 // 4
        self.vertex = ProjPoint(tower, [tower.e(0), tower.e(1), tower.e(0), tower.e(0)])
        self.y_plane = PlaneP3(tower, [tower.e(0), tower.e(1), tower.e(0), tower.e(0)])
        self._points_cache = {}
        q = self.q
        self.inf_vals = (-(q + 1) // 2, -q, 0, -(q + 1))  # valuations of X,Y,Z,W at infinity

    # -- points --

    def on_curve(self, pt):
        if pt.infinite:
            return True
        return pt.y ** self.h == pt.x.frobenius() - pt.x

    def point(self, x, y):
        p = CurvePoint(x, y)
        if not self.on_curve(p):
            raise FieldError(f"({x},{y}) is not on the curve")
        return p

    def curve_points(self, exp):
        """All points over GF(q^exp), plus the point at infinity."""
        if exp in self._points_cache:
            return self._points_cache[exp]
        if exp > 4:
            raise FieldError("point enumeration is guarded at level 4")
        tower = self.tower
        lvl = tower.level(exp)
        out = [CurvePoint.infinity()]
        for xv in range(lvl.size):
            x = FieldElem(lvl, xv)
            v = x.frobenius() - x
            if not v:
                out.append(CurvePoint(x, tower.zero()))
            else:
                for y in nth_roots(v, self.h, exp):
                    out.append(CurvePoint(x, y))
        self._points_cache[exp] = out
        return out

    def phi(self, pt):
        """The degree-(q+1) embedding (x : y : 1 : x^2); infinity -> (0:0:0:1)."""
        t = self.tower
        if pt.infinite:
            return ProjPoint(t, [t.e(0), t.e(0), t.e(0), t.e(1)])
        return ProjPoint(t, [pt.x, pt.y, t.one(), pt.x * pt.x])

    # -- the conic --

    def conic_point(self, tparam):
        """Parametrization t -> (t : 0 : 1 : t^2), INF -> (0:0:0:1)."""
        t = self.tower
        if tparam is INF:
            return ProjPoint(t, [t.e(0), t.e(0), t.e(0), t.e(1)])
        return ProjPoint(t, [tparam, t.zero(), t.one(), tparam * tparam])

    def conic_param(self, pt):
        """Inverse of conic_point; raises if the point is off the conic."""
        if not self.on_conic(pt):
            raise FieldError(f"{pt} is not on the conic")
        lvl = pt.level
        X, _, Z, _ = pt.coords
        if Z == 0:
            return INF
        return FieldElem(lvl, lvl.div(X, Z))

    def on_conic(self, pt):
        lvl = pt.level
        X, Y, Z, W = pt.coords
        return Y == 0 and lvl.mul(X, X) == lvl.mul(Z, W)

    def conic_points(self, exp):
        """The q^exp + 1 rational points of the conic at the given level."""
        out = [self.conic_point(INF)]
        for t in self.tower.elements(exp):
            out.append(self.conic_point(t))
        return out

    def conic_tangent(self, pt):
        """Tangent line of the conic at one of its points, inside {Y=0}."""
        t = self.conic_param(pt)
        tw = self.tower
        if t is INF:
            return LineP3.from_forms(tw, [tw.e(0), tw.e(1), tw.e(0), tw.e(0)],
                                     [tw.e(0), tw.e(0), tw.e(1), tw.e(0)])
        # {Y = 0, W - 2tX + t^2 Z = 0}
        return LineP3.from_forms(tw, [tw.e(0), tw.e(1), tw.e(0), tw.e(0)],
                                 [-(t + t), tw.e(0), t * t, tw.e(1)])

    # -- local expansions --

    def local_expansion(self, pt, order):
        """Coefficients of x(s), s = y - y0, at an affine point; exact.

        F(x(s), y0 + s) = 0 modulo s^(order+1).
        """
        if pt.infinite:
            raise FieldError("expansion at infinity uses the valuation table")
        lvl = self.tower.level_containing(pt.level_exp)
        n = order
        x0 = pt.x.lift(lvl.exp)
        y0 = pt.y.lift(lvl.exp)
        yh = _ser_pow(lvl, _ser_trim([y0, 1], n), self.h, n)
        X = _ser_trim([x0], n)
        qq = self.q
        steps = 1
        bound = 1
        while bound <= n:
            bound *= qq
            steps += 1
        for _ in range(steps):
            X = _ser_sub(lvl, _ser_pow(lvl, X, qq, n), yh)
        return [FieldElem(lvl, c) for c in X]

    def _section_series(self, form, pt, order):
        """Series of the form pulled back through phi at an affine point."""
        lvl = self.tower.level_containing(max(pt.level_exp, max(c.exp for c in form)))
        n = order
        hx, hy, hz, hw = (c.lift(lvl.exp) for c in form)
        xs = [c.lift(lvl.exp) for c in self.local_expansion(pt, n)]
        out = [0] * (n + 1)
        if hw:
            out = _ser_add(lvl, out, [lvl.mul(hw, c) for c in _ser_mul(lvl, xs, xs, n)])
        if hx:
            out = _ser_add(lvl, out, [lvl.mul(hx, c) for c in xs])
        if hy:
            ys = _ser_trim([pt.y.lift(lvl.exp), 1], n)
            out = _ser_add(lvl, out, [lvl.mul(hy, c) for c in ys])
        if hz:
            out[0] = lvl.add(out[0], hz)
        return out

    def section_order_at(self, form, pt):
        """Vanishing order at a curve point of the section cut by a form.

        form is a length-4 sequence of FieldElem (X, Y, Z, W coefficients).
        At the infinite point the order is (q+1) plus the minimum valuation
        of the present monomials; at affine points it is the valuation of
        the pulled-back series.
        """
        q = self.q
        if pt.infinite:
            vals = [v for c, v in zip(form, self.inf_vals) if c]
            return (q + 1) + min(vals)
        ser = self._section_series(form, pt, q + 2)
        for i, c in enumerate(ser):
            if c:
                return i
        raise FieldError("section vanishes to impossible order")

    # -- hyperplane sections --

    def hyperplane_section(self, plane, max_exp=None, require_complete=True):
        """The divisor cut on the embedded curve by a plane; total degree q+1.

        Zeros are located by factoring the eliminated univariate polynomial;
        tower levels are extended on demand.  If max_exp forbids a needed
        level, DivisorIncomplete is raised (or with require_complete=False a
        partial divisor is returned).
        """
        tower = self.tower
        q = self.q
        lvlH = plane.level
        form = [FieldElem(lvlH, c) for c in plane.form]
        hx, hy, hz, hw = form
        entries = {}
        minf = self.section_order_at(form, CurvePoint.infinity())
        if minf > 0:
            entries[CurvePoint.infinity()] = minf

        def record(x, y):
            pt = CurvePoint(x, y)
            entries[pt] = self.section_order_at(form, pt)

        try:
            if hy:
                # y = r(x); zeros of the section <-> roots of r(x)^h - x^q + x
                rx = Poly(lvlH, (lvlH.neg(hz.lift(lvlH.exp)),
                                 lvlH.neg(hx.lift(lvlH.exp)),
                                 lvlH.neg(hw.lift(lvlH.exp)))).scale(
                                     lvlH.inv(hy.lift(lvlH.exp)))
                acc = Poly(lvlH, (1,))
                for _ in range(self.h):
                    acc = acc * rx
                R = acc - Poly(lvlH, (0,) * q + (1,)) + Poly(lvlH, (0, 1))
                for rv, rlvl, _m in R.roots_with_levels(max_exp=max_exp):
                    x = FieldElem(rlvl, rv)
                    y = FieldElem(rlvl, rx.lift(rlvl).eval(rv))
                    record(x, y)
            else:
                # the section hw x^2 + hx x + hz does not involve y
                g = Poly(lvlH, (hz.lift(lvlH.exp), hx.lift(lvlH.exp), hw.lift(lvlH.exp)))
                if g.is_zero():
                    raise FieldError("zero form")
                for rv, rlvl, _m in g.roots_with_levels(max_exp=max_exp):
                    x = FieldElem(rlvl, rv)
                    v = x.frobenius() - x
                    if not v:
                        record(x, self.tower.zero())
                    else:
                        f = Poly(rlvl, (rlvl.neg(v.lift(rlvl.exp)),)
                                 + (0,) * (self.h - 1) + (1,))
                        for yv, ylvl, _ in f.roots_with_levels(max_exp=max_exp):
                            record(x, FieldElem(ylvl, yv))
        except FieldError as ex:
            raise DivisorIncomplete(str(ex)) from None
        div = SectionDivisor(entries)
        if require_complete and div.degree != q + 1:
            raise DivisorIncomplete(
                f"section degree {div.degree} != {q + 1} for {plane}")
        return div

    # -- tangents and contact planes --

    def curve_tangent(self, pt):
        """Tangent line of the embedded curve at a point of the curve."""
        tw = self.tower
        if pt.infinite:
            return LineP3.from_forms(tw, [tw.e(1), tw.e(0), tw.e(0), tw.e(0)],
                                     [tw.e(0), tw.e(0), tw.e(1), tw.e(0)])
        xs = self.local_expansion(pt, 1)
        x0, x1 = xs[0], xs[1]
        p0 = self.phi(pt)
        lvl = self.tower.level_containing(pt.level_exp)
        direction = [x1, tw.one(), tw.zero(), (x0 + x0) * x1]
        return LineP3(tw, [[FieldElem(p0.level, c) for c in p0.coords], direction])

    def weierstrass_points(self):
        """The q+1 points whose images are the rational conic points."""
        out = [CurvePoint.infinity()]
        for a in self.tower.elements(1):
            out.append(CurvePoint(a, self.tower.zero()))
        return out

    def contact_plane(self, pt):
        """The plane meeting the curve at a Weierstrass point with order q+1."""
        tw = self.tower
        if pt.infinite:
            return PlaneP3(tw, [tw.e(0), tw.e(0), tw.e(1), tw.e(0)])
        a = pt.x
        return PlaneP3(tw, [-(a + a), tw.e(0), a * a, tw.e(1)])


def embedded_curve(tower):
    return EmbeddedCurve(tower)
