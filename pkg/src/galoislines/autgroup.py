"""The full automorphism group of the curve, as matrix/scaling pairs.

Every automorphism acts by

    (x, y)  ->  ((a x + b) / (c x + d),  e y / (c x + d)^2)

with [[a, b], [c, d]] an invertible matrix over GF(q), canonicalized so its
first nonzero entry is 1, and e in GF(q^2) satisfying e^((q+1)/2) = ad - bc.
That scaling relation is exactly what curve preservation requires:

    M(x)^q - M(x) = det(M) (x^q - x) / ((c x + d)(c x^q + d))

for matrices over GF(q), while (e y / (c x + d)^2)^((q+1)/2) produces the
same right-hand side precisely when e^((q+1)/2) = det M.  Replacing M by
lambda*M multiplies e by lambda^2, so fixing M's representative pins e.

The group has one pair for each of the q(q-1)(q+1) canonical matrices and
each of the (q+1)/2 admissible scalings, giving order q(q-1)(q+1)^2/2.  The
restriction to the conic plane forgets e; its kernel is the (q+1)/2 maps
(x, y) -> (x, zeta y), and its image is all of PGL(2, q), so no automorphism
lies outside this family: the embedding is cut out by the unique complete
linear system of degree q+1, every automorphism therefore acts linearly on
P^3 preserving the rational conic points, and the count above meets the
resulting upper bound.  A closure oracle re-checks exactness in tests.
"""

from __future__ import annotations

import math

from .curve import INF, CurvePoint
from .field import FieldElem, FieldError, factorize
from .polyring import Poly


class CurveAutomorphism:
    """A canonical pair (M, e): Moebius action on x plus a y-scaling."""

    __slots__ = ("tower", "m", "e")

    def __init__(self, tower, m, e):
        self.tower = tower
        self.m = m      # (a, b, c, d) packed level-1 values, canonical
        self.e = e      # packed level-2 value

    @classmethod
    def from_action(cls, tower, matrix, yscale):
        """Canonicalize a matrix over any level with its raw y-scaling.

        The matrix may be given over GF(q^2) as long as it is a scalar
        multiple of a GF(q) matrix; (lambda M, e) acts as (M, e / lambda^2).
        """
        ents = [v if isinstance(v, FieldElem) else tower.e(v) for v in matrix]
        lam = next((v for v in ents if v), None)
        if lam is None:
            raise FieldError("zero matrix")
        ents = [v / lam for v in ents]
        for v in ents:
            if v.exp != 1:
                raise FieldError("matrix is not projectively defined over GF(q)")
        if not isinstance(yscale, FieldElem):
            yscale = tower.e(yscale)
        e = yscale / (lam * lam)
        if e.exp > 2:
            raise FieldError("y-scaling outside GF(q^2)")
        a, b, c, d = (v.val for v in ents)
        lvl1 = tower.level(1)
        det = lvl1.sub(lvl1.mul(a, d), lvl1.mul(b, c))
        if det == 0:
            raise FieldError("singular matrix")
        lvl2 = tower.level(2)
        if lvl2.pow(e.lift(2), (tower.q + 1) // 2) != det:
            raise FieldError("y-scaling incompatible with the determinant")
        return cls(tower, (a, b, c, d), e.lift(2))

    @classmethod
    def identity(cls, tower):
        return cls(tower, (1, 0, 0, 1), 1)

    # -- structure --

    @property
    def det(self):
        lvl1 = self.tower.level(1)
        a, b, c, d = self.m
        return lvl1.sub(lvl1.mul(a, d), lvl1.mul(b, c))

    def key(self):
        return (self.m, self.e)

    def is_identity(self):
        return self.m == (1, 0, 0, 1) and self.e == 1

    def is_kernel_map(self):
        """True for the maps (x, y) -> (x, zeta y)."""
        return self.m == (1, 0, 0, 1)

    def __eq__(self, other):
        return (isinstance(other, CurveAutomorphism)
                and self.tower is other.tower and self.key() == other.key())

    def __hash__(self):
        return hash((id(self.tower), self.key()))

    def __repr__(self):
        t = self.tower
        a, b, c, d = (t.element_str(v, 1) for v in self.m)
        return f"[[{a},{b}],[{c},{d}]]; {t.element_str(self.e, 2)}"

    # -- group law --

    def compose(self, other):
        """self after other, as actions on points."""
        lvl1 = self.tower.level(1)
        lvl2 = self.tower.level(2)
        a1, b1, c1, d1 = self.m
        a2, b2, c2, d2 = other.m
        m3 = (lvl1.add(lvl1.mul(a1, a2), lvl1.mul(b1, c2)),
              lvl1.add(lvl1.mul(a1, b2), lvl1.mul(b1, d2)),
              lvl1.add(lvl1.mul(c1, a2), lvl1.mul(d1, c2)),
              lvl1.add(lvl1.mul(c1, b2), lvl1.mul(d1, d2)))
        e3 = lvl2.mul(self.e, other.e)
        lam = next(v for v in m3 if v)
        if lam != 1:
            inv = lvl1.inv(lam)
            m3 = tuple(lvl1.mul(inv, v) for v in m3)
            e3 = lvl2.div(e3, lvl1.mul(lam, lam))
        return CurveAutomorphism(self.tower, m3, e3)

    def inverse(self):
        lvl1 = self.tower.level(1)
        lvl2 = self.tower.level(2)
        a, b, c, d = self.m
        m3 = (d, lvl1.neg(b), lvl1.neg(c), a)
        det = self.det
        e3 = lvl2.div(lvl1.mul(det, det), self.e)
        lam = next(v for v in m3 if v)
        if lam != 1:
            inv = lvl1.inv(lam)
            m3 = tuple(lvl1.mul(inv, v) for v in m3)
            e3 = lvl2.div(e3, lvl1.mul(lam, lam))
        return CurveAutomorphism(self.tower, m3, e3)

    def order(self):
        g = self
        n = 1
        while not g.is_identity():
            g = g.compose(self)
            n += 1
            if n > 4 * (self.tower.q + 1) ** 2:
                raise RuntimeError("order runaway; element not in a finite group?")
        return n

    # -- actions --

    def apply(self, curve, pt):
        """Image of a curve point; pole bookkeeping is table-driven."""
        t = self.tower
        a, b, c, d = (t.e(v) for v in self.m)
        e = t.e(self.e, 2)
        if pt.infinite:
            if not c:
                return CurvePoint.infinity()
            return CurvePoint(a / c, t.zero())
        den = c * pt.x + d
        if not den:
            if pt.y:
                raise FieldError("pole hit at a point with nonzero y")
            return CurvePoint.infinity()
        x2 = (a * pt.x + b) / den
        y2 = e * pt.y / (den * den)
        img = CurvePoint(x2, y2)
        if not curve.on_curve(img):
            raise FieldError(f"automorphism image {img} left the curve")
        return img

    def apply_conic_param(self, tparam):
        """Moebius action on the conic parameter (INF for (0:0:0:1))."""
        t = self.tower
        a, b, c, d = (t.e(v) for v in self.m)
        if tparam is INF:
            if not c:
                return INF
            return a / c
        den = c * tparam + d
        if not den:
            return INF
        return (a * tparam + b) / den

    def apply_conic(self, curve, pt):
        """Image of a conic point via the degree-2 homogeneous action."""
        return curve.conic_point(self.apply_conic_param(curve.conic_param(pt)))

    def restrict_to_conic(self):
        """The matrix class acting on the conic (forgets the y-scaling)."""
        return self.m

    # -- verification --

    def verify_preserves_curve(self, curve):
        """Symbolic curve preservation: coefficient-level identity check.

        Checks (a x^q + b)(c x + d) - (a x + b)(c x^q + d) = det (x^q - x)
        as polynomials over GF(q) (the q-th power expansion is exact in
        characteristic p), together with e^((q+1)/2) = det M.
        """
        t = self.tower
        lvl1 = t.level(1)
        lvl2 = t.level(2)
        q = t.q
        a, b, c, d = self.m
        pab = Poly(lvl1, (b, a))
        pcd = Poly(lvl1, (d, c))
        pabq = _poly_pow(pab, q)
        pcdq = _poly_pow(pcd, q)
        lhs = pabq * pcd - pab * pcdq
        det = self.det
        xq_minus_x = Poly(lvl1, (0, lvl1.neg(1)) + (0,) * (q - 2) + (1,))
        rhs = xq_minus_x.scale(det)
        if lhs != rhs:
            return False
        return lvl2.pow(self.e, (q + 1) // 2) == det


def _poly_pow(p, k):
    r = Poly(p.level, (1,))
    while k:
        if k & 1:
            r = r * p
        p = p * p
        k >>= 1
    return r


class AutGroup:
    """The complete automorphism group for one tower."""

    def __init__(self, tower, elements):
        self.tower = tower
        self.elements = elements
        self.index = {g.key(): i for i, g in enumerate(elements)}
        self.order = len(elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return self.order

    def contains(self, g):
        return g.key() in self.index

    def kernel_maps(self):
        return [g for g in self.elements if g.is_kernel_map()]

    def image_order_on_conic(self):
        return len({g.m for g in self.elements})

    def element_order_census(self):
        census = {}
        for g in self.elements:
            census[g.order()] = census.get(g.order(), 0) + 1
        return dict(sorted(census.items()))

    def closure_check(self, chunk=512):
        """Exhaustive composition table check: no products leave the group.

        Returns the number of products checked; raises on any escape.
        """
        import numpy as np

        from .tables import fast_tables

        ft = fast_tables(self.tower)
        lvl1 = self.tower.level(1)
        K = lvl1.size
        S2 = ft.Q
        MUL1 = np.empty((K, K), dtype=np.int64)
        ADD1 = np.empty((K, K), dtype=np.int64)
        for i in range(K):
            MUL1[i] = [lvl1.mul(i, j) for j in range(K)]
            ADD1[i] = [lvl1.add(i, j) for j in range(K)]
        INV1 = np.array([0] + [lvl1.inv(i) for i in range(1, K)], dtype=np.int64)
        MUL2 = ft.MUL.astype(np.int64)
        INV2 = ft.INV.astype(np.int64)

        A = np.array([g.m[0] for g in self.elements], dtype=np.int64)
        B = np.array([g.m[1] for g in self.elements], dtype=np.int64)
        C = np.array([g.m[2] for g in self.elements], dtype=np.int64)
        D = np.array([g.m[3] for g in self.elements], dtype=np.int64)
        E = np.array([g.e for g in self.elements], dtype=np.int64)

        member = np.zeros(K**4 * S2, dtype=bool)
        keys = (((A * K + B) * K + C) * K + D) * S2 + E
        member[keys] = True

        checked = 0
        n = self.order
        for i in range(n):
            a1, b1, c1, d1, e1 = int(A[i]), int(B[i]), int(C[i]), int(D[i]), int(E[i])
            a3 = ADD1[MUL1[a1, A], MUL1[b1, C]]
            b3 = ADD1[MUL1[a1, B], MUL1[b1, D]]
            c3 = ADD1[MUL1[c1, A], MUL1[d1, C]]
            d3 = ADD1[MUL1[c1, B], MUL1[d1, D]]
            e3 = MUL2[e1, E]
            lam = a3.copy()
            for arr in (b3, c3, d3):
                lam = np.where(lam == 0, arr, lam)
            il = INV1[lam]
            a3, b3, c3, d3 = (MUL1[il, v] for v in (a3, b3, c3, d3))
            e3 = MUL2[e3, INV2[MUL1[lam, lam]]]
            k3 = (((a3 * K + b3) * K + c3) * K + d3) * S2 + e3
            if not member[k3].all():
                bad = int(np.flatnonzero(~member[k3])[0])
                raise AssertionError(
                    f"closure escape: {self.elements[i]} o {self.elements[bad]}")
            checked += n
        return checked


def build_full_group(tower, verify=True):
    """All automorphisms: every canonical matrix with every admissible e.

    Order q(q-1)(q+1)^2/2.  With verify=True each element passes the
    symbolic curve-preservation check (a failed check is an internal error).
    """
    from .tables import pgl_data

    q = tower.q
    pd = pgl_data(tower)
    curve = None
    out = []
    for a, b, c, d, det in pd.mats:
        for e in pd.e_by_det[det]:
            out.append(CurveAutomorphism(tower, (a, b, c, d), e))
    grp = AutGroup(tower, out)
    expect = q * (q - 1) * (q + 1) ** 2 // 2
    if grp.order != expect:
        raise AssertionError(f"group order {grp.order} != {expect}")
    if verify:
        from .curve import EmbeddedCurve

        curve = EmbeddedCurve(tower)
        for g in out:
            if not g.verify_preserves_curve(curve):
                raise AssertionError(f"constructed automorphism fails preservation: {g}")
    return grp


# ---------------------------------------------------------------------------
# abstract isomorphism classes
# ---------------------------------------------------------------------------

class GroupIsoClass:
    """Isomorphism class of the small groups occurring here.

    Comparison is isomorphism-aware: abelian classes normalize to invariant
    factors (so Cyclic(6) == C3 x C2 and DihedralOfOrder(4) == (2, 2)), and
    non-abelian dihedral classes normalize to their order.
    """

    __slots__ = ("kind", "params")

    def __init__(self, kind, params):
        self.kind = kind
        self.params = tuple(params)

    @classmethod
    def cyclic(cls, n):
        return cls("cyclic", (n,))

    @classmethod
    def dihedral_of_order(cls, n):
        if n % 2:
            raise ValueError("dihedral groups here have even order")
        return cls("dihedral", (n,))

    @classmethod
    def elementary_abelian(cls, p, k):
        return cls("elementary", (p, k))

    @classmethod
    def abelian_invariant_factors(cls, factors):
        return cls("abelian", tuple(factors))

    @classmethod
    def unrecognized(cls, order_census):
        return cls("unrecognized", tuple(sorted(order_census.items())))

    def normalized(self):
        if self.kind == "cyclic":
            n = self.params[0]
            return ("ab", (n,) if n > 1 else ())
        if self.kind == "elementary":
            p, k = self.params
            return ("ab", (p,) * k)
        if self.kind == "abelian":
            return ("ab", _invariant_factor_chain(self.params))
        if self.kind == "dihedral":
            n = self.params[0]
            if n == 2:
                return ("ab", (2,))
            if n == 4:
                return ("ab", (2, 2))
            return ("dih", n)
        return ("raw", self.params)

    def __eq__(self, other):
        return isinstance(other, GroupIsoClass) and self.normalized() == other.normalized()

    def __hash__(self):
        return hash(self.normalized())

    def label(self):
        tag, data = self.normalized()
        if tag == "ab":
            if not data:
                return "C1"
            return " x ".join(f"C{d}" for d in data)
        if tag == "dih":
            return f"D(order {data})"
        return f"unrecognized{data}"

    def __repr__(self):
        return self.label()


def _invariant_factor_chain(orders):
    """Canonical invariant factors of a product of cyclic groups."""
    primes = {}
    for n in orders:
        for p, k in factorize(n).items():
            primes.setdefault(p, []).append(p**k)
    for p in primes:
        primes[p].sort(reverse=True)
    depth = max((len(v) for v in primes.values()), default=0)
    chain = []
    for i in range(depth):
        d = 1
        for p, powers in primes.items():
            if i < len(powers):
                d *= powers[i]
        chain.append(d)
    chain.reverse()
    return tuple(c for c in chain if c > 1)


def identify_structure(elements):
    """Isomorphism class of a closed collection of automorphisms.

    Abelian groups resolve to invariant factors through their order census;
    non-abelian groups are only ever labelled dihedral after an explicit
    generator check.  Anything else is reported unrecognized, never guessed.
    """
    n = len(elements)
    index = {g.key() for g in elements}
    if len(index) != n:
        raise ValueError("repeated elements")
    for g in elements:
        if not g.inverse().key() in index:
            raise ValueError("collection not closed under inversion")
    table = {}
    for g in elements:
        for h in elements:
            k = g.compose(h).key()
            if k not in index:
                raise ValueError("collection not closed under composition")
            table[(g.key(), h.key())] = k

    orders = {}
    for g in elements:
        orders[g.order()] = orders.get(g.order(), 0) + 1

    abelian = all(table[(g.key(), h.key())] == table[(h.key(), g.key())]
                  for g in elements for h in elements)
    if abelian:
        chain = _match_abelian(n, elements)
        if chain is not None:
            if len(chain) == 1:
                return GroupIsoClass.cyclic(chain[0])
            from .field import is_prime

            if all(c == chain[0] for c in chain) and is_prime(chain[0]):
                return GroupIsoClass.elementary_abelian(chain[0], len(chain))
            return GroupIsoClass.abelian_invariant_factors(chain)
        return GroupIsoClass.unrecognized(orders)

    # dihedral: a cyclic half plus inverting involutions outside it
    half = n // 2
    if n % 2 == 0:
        for c in elements:
            if c.order() != half:
                continue
            powers = {c.key()}
            g = c
            for _ in range(half - 1):
                g = g.compose(c)
                powers.add(g.key())
            if len(powers) != half:
                continue
            outs = [g for g in elements if g.key() not in powers]
            cinv = c.inverse()
            if all(s.order() == 2 and s.compose(c).compose(s).key() == cinv.key()
                   for s in outs):
                return GroupIsoClass.dihedral_of_order(n)
    return GroupIsoClass.unrecognized(orders)


def _match_abelian(n, elements):
    """Invariant factor chain matching the order census, or None.

    For an abelian group the census #(x with x^m = 1) = prod gcd(d_i, m)
    determines the invariant factors d_1 | d_2 | ... uniquely.
    """
    counts = {}
    for g in elements:
        o = g.order()
        counts[o] = counts.get(o, 0) + 1
    divisors = [d for d in range(1, n + 1) if n % d == 0]

    def census_matches(chain):
        for m in divisors:
            expect = 1
            for d in chain:
                expect *= math.gcd(d, m)
            have = sum(c for o, c in counts.items() if m % o == 0)
            if expect != have:
                return False
        return True

    def chains(total, min_d):
        if total == 1:
            yield ()
            return
        for d in divisors:
            if d < 2 or total % d or d < min_d or d % min_d:
                continue
            for rest in chains(total // d, d):
                yield (d,) + rest

    for chain in chains(n, 1):
        if census_matches(chain):
            return chain
    return None
