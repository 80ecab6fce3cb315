"""Univariate polynomials over a tower level, with factorization utilities.

Coefficients are packed integers of one Level; all arithmetic is exact.
Degrees occurring in this project are tiny (at most q+1), so schoolbook
algorithms are used throughout.  Equal-degree splitting is randomized but
deterministically seeded, so results are reproducible across runs.
"""

from __future__ import annotations

import random


class Poly:
    """Dense univariate polynomial, low coefficients first, over one Level."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level, coeffs):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.level = level
        self.coeffs = tuple(c)

    @classmethod
    def x(cls, level):
        return cls(level, (0, 1))

    @classmethod
    def const(cls, level, c):
        return cls(level, (c,))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, Poly) and self.level is other.level and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.level.exp, self.coeffs))

    def lift(self, level):
        """Same polynomial with coefficients viewed in a larger chain level."""
        if level is self.level:
            return self
        if level.exp % self.level.exp:
            raise ValueError("target level does not contain coefficient level")
        return Poly(level, self.coeffs)

    # -- arithmetic --

    def __add__(self, other):
        lv = self.level
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly(lv, tuple(lv.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0)
                              for i in range(n)))

    def __sub__(self, other):
        lv = self.level
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly(lv, tuple(lv.sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0)
                              for i in range(n)))

    def __neg__(self):
        lv = self.level
        return Poly(lv, tuple(lv.neg(c) for c in self.coeffs))

    def __mul__(self, other):
        lv = self.level
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(lv, ())
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = lv.add(out[i + j], lv.mul(x, y))
        return Poly(lv, out)

    def scale(self, c):
        lv = self.level
        return Poly(lv, tuple(lv.mul(c, x) for x in self.coeffs))

    def divmod(self, other):
        lv = self.level
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        b = other.coeffs
        q = [0] * max(0, len(a) - len(b) + 1)
        binv = lv.inv(b[-1])
        while len(a) >= len(b):
            c = lv.mul(a[-1], binv)
            d = len(a) - len(b)
            q[d] = c
            for i, y in enumerate(b):
                a[d + i] = lv.sub(a[d + i], lv.mul(c, y))
            while a and a[-1] == 0:
                a.pop()
            if not a:
                break
        return Poly(lv, q), Poly(lv, a)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self):
        if self.is_zero() or self.coeffs[-1] == 1:
            return self
        return self.scale(self.level.inv(self.coeffs[-1]))

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def powmod(self, k, modulus):
        r = Poly(self.level, (1,))
        a = self % modulus
        while k:
            if k & 1:
                r = (r * a) % modulus
            a = (a * a) % modulus
            k >>= 1
        return r

    def derivative(self):
        lv = self.level
        p = lv.tower.p
        return Poly(lv, [lv.mul(self.coeffs[i], i % p) for i in range(1, len(self.coeffs))])

    def eval(self, x):
        lv = self.level
        acc = 0
        for c in reversed(self.coeffs):
            acc = lv.add(lv.mul(acc, x), c)
        return acc

    def __repr__(self):
        lv = self.level
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            cs = lv.tower.element_str(c, lv.exp)
            terms.append(cs if i == 0 else f"({cs})*x^{i}")
        return " + ".join(terms) if terms else "0"

    # -- factorization --

    def _pth_root(self):
        """For f with zero derivative, the g with g(x)^p = f(x)."""
        lv = self.level
        p = lv.tower.p
        root = []
        for i in range(0, len(self.coeffs), p):
            c = self.coeffs[i]
            root.append(lv.pow(c, lv.size // p) if c else 0)
        return Poly(lv, root)

    def squarefree_decomposition(self):
        """List of (monic squarefree factor, multiplicity), characteristic-p aware."""
        out = []

        def sf(f, mult):
            if f.degree <= 0:
                return
            d = f.derivative()
            if d.is_zero():
                sf(f._pth_root().monic(), mult * self.level.tower.p)
                return
            g = f.gcd(d)
            h = (f // g).monic()
            i = 1
            while h.degree > 0:
                hn = h.gcd(g)
                piece = (h // hn).monic()
                if piece.degree > 0:
                    out.append((piece, mult * i))
                g = (g // hn).monic()
                h = hn
                i += 1
            if g.degree > 0:
                sf(g, mult)

        sf(self.monic(), 1)
        return out

    def distinct_degree_factorization(self):
        """List of (product of irreducibles, degree); input must be squarefree monic."""
        lv = self.level
        S = lv.size
        f = self.monic()
        out = []
        x = Poly.x(lv)
        h = x
        d = 0
        while f.degree > 0 and f.degree > 2 * d + 1:
            d += 1
            h = h.powmod(S, f)
            g = f.gcd(h - x)
            if g.degree > 0:
                out.append((g, d))
                f = (f // g).monic()
                h = h % f
        if f.degree > 0:
            out.append((f, f.degree))
        return out

    def equal_degree_split(self, d, rng):
        """Cantor-Zassenhaus split of a squarefree product of degree-d factors."""
        lv = self.level
        f = self.monic()
        if f.degree == d:
            return [f]
        S = lv.size
        exponent = (S**d - 1) // 2
        while True:
            r = Poly(lv, [rng.randrange(S) for _ in range(f.degree)] + [1])
            g = f.gcd(r)
            if not 0 < g.degree < f.degree:
                h = r.powmod(exponent, f) - Poly(lv, (1,))
                g = f.gcd(h)
                if not 0 < g.degree < f.degree:
                    continue
            return g.equal_degree_split(d, rng) + \
                ((f // g).monic()).equal_degree_split(d, rng)

    def factor(self, seed=0):
        """Complete factorization: list of (irreducible monic factor, multiplicity)."""
        if self.degree < 1:
            return []
        rng = random.Random(str((seed, self.level.exp, self.coeffs)))
        out = []
        for sq, mult in self.squarefree_decomposition():
            for prod, d in sq.distinct_degree_factorization():
                for irr in prod.equal_degree_split(d, rng):
                    out.append((irr, mult))
        out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
        return out

    def roots_here(self):
        """Roots lying in the coefficient level itself (no multiplicities)."""
        lv = self.level
        if self.degree < 1:
            return []
        if self.degree == 1:
            c0, c1 = self.coeffs
            return [lv.neg(lv.div(c0, c1))]
        if self.degree == 2:
            c0, c1, c2 = self.coeffs
            disc = lv.sub(lv.mul(c1, c1), lv.mul(4 % lv.tower.p, lv.mul(c0, c2)))
            inv2a = lv.inv(lv.mul(2 % lv.tower.p, c2))
            out = []
            for s in sqrts_in_level(lv, disc):
                out.append(lv.mul(lv.add(lv.neg(c1), s), inv2a))
            return sorted(set(out))
        if lv.size <= 4096:
            return [x for x in range(lv.size) if self.eval(x) == 0]
        x = Poly.x(lv)
        lin = self.monic().gcd(x.powmod(lv.size, self.monic()) - x)
        if lin.degree <= 0:
            return []
        rng = random.Random(str((17, lv.exp, self.coeffs)))
        return sorted(lv.neg(fac.coeffs[0]) for fac in lin.equal_degree_split(1, rng))

    def roots_with_levels(self, max_exp=None, seed=0):
        """All roots over the algebraic closure, located in tower levels.

        Returns a list of (packed root, Level, multiplicity).  An irreducible
        factor of degree d has its roots in GF(q^(exp*d)); the containing
        chain level is built on demand.  Raises FieldError when a root field
        would exceed max_exp.
        """
        tower = self.level.tower
        if 1 <= self.degree <= 2:
            return self._roots_quadratic(max_exp)
        out = []
        for irr, mult in self.factor(seed):
            need = self.level.exp * irr.degree
            if max_exp is not None and need > max_exp:
                from .field import FieldError

                raise FieldError(
                    f"root field GF(q^{need}) beyond the allowed level {max_exp}")
            lvl = tower.level_containing(need)
            for r in irr.lift(lvl).roots_here():
                out.append((r, lvl, mult))
        return out

    def _roots_quadratic(self, max_exp):
        """Fast path for degree <= 2: quadratic formula, lifting once if needed."""
        lv = self.level
        tower = lv.tower
        if self.degree == 1:
            return [(self.roots_here()[0], lv, 1)]
        c0, c1, c2 = self.coeffs
        disc = lv.sub(lv.mul(c1, c1), lv.mul(4 % tower.p, lv.mul(c0, c2)))
        if disc == 0:
            r = lv.mul(lv.neg(c1), lv.inv(lv.mul(2 % tower.p, c2)))
            return [(r, lv, 2)]
        if sqrts_in_level(lv, disc):
            return [(r, lv, 1) for r in self.roots_here()]
        need = 2 * lv.exp
        if max_exp is not None and need > max_exp:
            from .field import FieldError

            raise FieldError(
                f"root field GF(q^{need}) beyond the allowed level {max_exp}")
        big = tower.level_containing(need)
        return [(r, big, 1) for r in self.lift(big).roots_here()]


def sqrts_in_level(level, v):
    """Square roots of a packed value inside its own level."""
    if v == 0:
        return [0]
    lt = level._log_table
    if lt is not None:
        lg = lt[v]
        n1 = level.size - 1
        if lg % 2:
            return []
        r = level._exp_table[lg // 2]
        return sorted({r, level.neg(r)})
    # generic fallback for levels without log tables
    if level.pow(v, (level.size - 1) // 2) != 1:
        return []
    f = Poly(level, (level.neg(v), 0, 1))
    rng = random.Random(str((23, level.exp, v)))
    return sorted(level.neg(fac.coeffs[0]) for fac in f.equal_degree_split(1, rng))


def lagrange_interpolate(level, points):
    """Unique polynomial of degree < len(points) through the (x, y) pairs."""
    xs = [x for x, _ in points]
    result = Poly(level, ())
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        num = Poly(level, (yi,))
        den = 1
        for j, xj in enumerate(xs):
            if j == i:
                continue
            num = num * Poly(level, (level.neg(xj), 1))
            den = level.mul(den, level.sub(xi, xj))
        result = result + num.scale(level.inv(den))
    return result
