"""Exact arithmetic in a tower of finite fields.

The tower is GF(p) <= GF(q) < GF(q^2) < GF(q^4) < ... with q = p^n, p an odd
prime and q >= 5.  Levels are indexed by the exponent ``ell``: the level-ell
field is GF(q^ell).  Consecutive chain levels are genuine extensions (each
built by an irreducible modulus over the level below), so Frobenius over q
and subfield membership are structural questions, not searches.

Elements are packed integers.  An element of a level is a polynomial in that
level's generator with coefficients one level down, encoded in mixed radix
by the size of the level below.  With this packing the embedding of a chain
level into any bigger chain level is numerically the identity, and the
canonical form of an element is its value at the smallest chain level whose
range contains it.

Multiplication uses discrete-log tables whenever a level has at most 2^16
elements (true for every level we enumerate in practice) and generic
polynomial arithmetic above that, so arbitrary auxiliary levels remain
available for root finding.
"""

from __future__ import annotations

import math

TABLE_LIMIT = 1 << 16

# Modulus policy: binomials x^d - s scanned by ascending packed s, then a
# deterministically seeded search.  The binomial scan reproduces the classical
# least-non-residue modulus for quadratic stages, e.g. u^2 = 2 over GF(5).
_MODULUS_SEARCH_SEED = 0x5EED


class FieldError(ValueError):
    pass


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n):
    """Prime factorization as a dict prime -> exponent (trial division)."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class _PrimeOps:
    """GF(p) arithmetic on plain ints, the base of the tower."""

    __slots__ = ("size", "p")

    def __init__(self, p):
        self.size = p
        self.p = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def pow(self, a, k):
        if k < 0:
            return pow(self.inv(a), -k, self.p)
        return pow(a, k, self.p)


# ---------------------------------------------------------------------------
# polynomial helpers over an ops object (coefficient lists, low degree first)
# ---------------------------------------------------------------------------

def _p_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _p_add(ops, a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out[i] = ops.add(x, y)
    return _p_trim(out)


def _p_sub(ops, a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out[i] = ops.sub(x, y)
    return _p_trim(out)


def _p_mul(ops, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = ops.add(out[i + j], ops.mul(x, y))
    return _p_trim(out)


def _p_divmod(ops, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    binv = ops.inv(b[-1])
    while len(a) >= len(b):
        c = ops.mul(a[-1], binv)
        d = len(a) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            a[d + i] = ops.sub(a[d + i], ops.mul(c, y))
        _p_trim(a)
        if not a:
            break
    return _p_trim(q), a


def _p_mod(ops, a, b):
    return _p_divmod(ops, a, b)[1]


def _p_gcd(ops, a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _p_mod(ops, a, b)
    if a:
        inv = ops.inv(a[-1])
        a = [ops.mul(c, inv) for c in a]
    return a


def _p_powmod(ops, a, k, m):
    r = [1]
    a = _p_mod(ops, list(a), m)
    while k:
        if k & 1:
            r = _p_mod(ops, _p_mul(ops, r, a), m)
        a = _p_mod(ops, _p_mul(ops, a, a), m)
        k >>= 1
    return r


def _p_compose_mod(ops, g, h, m):
    """g(h(x)) mod m by Horner."""
    out = []
    for c in reversed(g):
        out = _p_mul(ops, out, h)
        out = _p_add(ops, out, [c])
        out = _p_mod(ops, out, m)
    return out


def _p_is_irreducible(ops, f):
    """Monic f irreducible over the field described by ops (size S):
    x^(S^d) == x mod f, plus gcd(x^(S^(d/r)) - x, f) trivial for primes r|d."""
    d = len(f) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    S = ops.size
    xq = _p_powmod(ops, [0, 1], S, f)
    pows = {1: xq}
    cur = xq
    for i in range(2, d + 1):
        cur = _p_compose_mod(ops, cur, xq, f)
        pows[i] = cur
    if _p_sub(ops, pows[d], [0, 1]):
        return False
    for r in factorize(d):
        g = _p_gcd(ops, _p_sub(ops, pows[d // r], [0, 1]), f)
        if len(g) - 1 > 0:
            return False
    return True


def _find_modulus(ops, deg, rng_seed=_MODULUS_SEARCH_SEED):
    """Deterministic irreducible monic modulus of the given degree over ops.

    Binomials x^deg - s are scanned by ascending packed s; if no binomial is
    irreducible a deterministically seeded random search runs instead.
    Returns the low coefficients (length deg, monic leading 1 implied).
    """
    S = ops.size
    for s in range(1, S):
        f = [ops.neg(s)] + [0] * (deg - 1) + [1]
        if _p_is_irreducible(ops, f):
            return f[:-1]
    import random

    rng = random.Random(str((rng_seed, S, deg)))
    for _ in range(20000):
        f = [rng.randrange(S) for _ in range(deg)] + [1]
        if _p_is_irreducible(ops, f):
            return f[:-1]
    raise FieldError(f"no irreducible modulus of degree {deg} over field of size {S}")


# ---------------------------------------------------------------------------
# tower levels
# ---------------------------------------------------------------------------

class Level:
    """The field GF(q^exp) with elements encoded as packed ints 0..size-1."""

    def __init__(self, tower, exp, base, deg, modulus, gen_symbol):
        self.tower = tower
        self.exp = exp
        self.base = base          # ops object one step down (Level or _PrimeOps)
        self.deg = deg            # extension degree over base
        self.modulus = tuple(modulus)  # low coeffs of the monic modulus, len deg
        self.gen_symbol = gen_symbol
        self.size = base.size ** deg
        # ancestor exponents up from GF(q); packing is the identity along it
        self.path = (base.path if isinstance(base, Level) else ()) + (exp,)
        self.generator = None
        self._exp_table = None
        self._log_table = None
        self._frob_table = None
        self._add_table = None
        self._neg_table = None
        # reduction rows: x^k mod modulus for k = deg .. 2*deg-2
        red = []
        if deg > 1:
            row = [base.neg(c) for c in modulus]
            red.append(tuple(row))
            for _ in range(deg - 2):
                row = self._shift_reduce(row)
                red.append(tuple(row))
        self._red = red
        if self.size <= TABLE_LIMIT:
            self._build_tables()
        if self.size <= 1024:
            self._add_table = [[self._add_generic(a, b) for b in range(self.size)]
                               for a in range(self.size)]
        self._neg_table = [self._neg_generic(a) for a in range(self.size)] \
            if self.size <= TABLE_LIMIT else None

    # -- packing --

    def unpack(self, a):
        s = self.base.size
        return tuple((a // s**i) % s for i in range(self.deg))

    def pack(self, digs):
        s = self.base.size
        v = 0
        for i, d in enumerate(digs):
            v += d * s**i
        return v

    def _shift_reduce(self, row):
        """row * x mod modulus, row given as deg coefficients over base."""
        base = self.base
        carry = row[-1]
        out = [0] + list(row[:-1])
        if carry:
            for i, m in enumerate(self.modulus):
                out[i] = base.sub(out[i], base.mul(carry, m))
        return out

    # -- ring ops on packed ints --

    def _add_generic(self, a, b):
        if self.deg == 1:
            return self.base.add(a, b)
        base = self.base
        S = base.size
        out = 0
        mult = 1
        for _ in range(self.deg):
            out += base.add(a % S, b % S) * mult
            a //= S
            b //= S
            mult *= S
        return out

    def _neg_generic(self, a):
        if self.deg == 1:
            return self.base.neg(a)
        base = self.base
        S = base.size
        out = 0
        mult = 1
        for _ in range(self.deg):
            out += base.neg(a % S) * mult
            a //= S
            mult *= S
        return out

    def add(self, a, b):
        t = self._add_table
        if t is not None:
            return t[a][b]
        return self._add_generic(a, b)

    def neg(self, a):
        t = self._neg_table
        if t is not None:
            return t[a]
        return self._neg_generic(a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def _mul_generic(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.deg == 1:
            return self.base.mul(a, b)
        base = self.base
        da = self.unpack(a)
        db = self.unpack(b)
        n = self.deg
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(da):
            if x == 0:
                continue
            for j, y in enumerate(db):
                if y:
                    prod[i + j] = base.add(prod[i + j], base.mul(x, y))
        out = list(prod[:n])
        for k in range(n, 2 * n - 1):
            c = prod[k]
            if c:
                row = self._red[k - n]
                for i in range(n):
                    if row[i]:
                        out[i] = base.add(out[i], base.mul(c, row[i]))
        return self.pack(out)

    def mul(self, a, b):
        if self._log_table is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp_table[(self._log_table[a] + self._log_table[b]) % (self.size - 1)]
        return self._mul_generic(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self._log_table is not None:
            return self._exp_table[(-self._log_table[a]) % (self.size - 1)]
        return self._pow_generic(a, self.size - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def _pow_generic(self, a, k):
        if k < 0:
            a = self.inv(a)
            k = -k
        r = 1
        while k:
            if k & 1:
                r = self._mul_generic(r, a)
            a = self._mul_generic(a, a)
            k >>= 1
        return r

    def pow(self, a, k):
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError("inverse of 0")
            return 0
        if self._log_table is not None:
            return self._exp_table[(self._log_table[a] * k) % (self.size - 1)]
        return self._pow_generic(a, k)

    def frob(self, a, t=1):
        """a^(q^t): the t-fold Frobenius over the base GF(q)."""
        t %= self.exp
        if t == 0:
            return a
        if t == 1 and self._frob_table is not None:
            return self._frob_table[a]
        return self.pow(a, pow(self.tower.q, t))

    def elements(self):
        return range(self.size)

    # -- tables --

    def _build_tables(self):
        n1 = self.size - 1
        fac = factorize(n1)
        g = None
        for cand in range(2, self.size):
            if all(self._pow_generic(cand, n1 // r) != 1 for r in fac):
                g = cand
                break
        exp_t = [0] * n1
        log_t = [-1] * self.size
        v = 1
        for i in range(n1):
            exp_t[i] = v
            log_t[v] = i
            v = self._mul_generic(v, g)
        self._exp_table = exp_t
        self._log_table = log_t
        self.generator = g
        q = self.tower.q
        ft = [0] * self.size
        for a in range(1, self.size):
            ft[a] = exp_t[(log_t[a] * q) % n1]
        self._frob_table = ft

    # -- misc --

    def modulus_str(self):
        if self.deg == 1:
            return "prime"
        terms = [f"{self.gen_symbol}^{self.deg}"]
        for i in range(self.deg - 1, -1, -1):
            c = self.modulus[i]
            if c == 0:
                continue
            coef = self.tower.element_str(c, self._base_exp())
            mono = f"{self.gen_symbol}^{i}" if i > 1 else (self.gen_symbol if i == 1 else "")
            if mono:
                terms.append(f"({coef})*{mono}")
            else:
                terms.append(f"({coef})")
        return "+".join(terms)

    def _base_exp(self):
        return self.base.exp if isinstance(self.base, Level) else 0

    def __repr__(self):
        return f"GF({self.tower.p}^{self.tower.n * self.exp})"


# ---------------------------------------------------------------------------
# the tower / field descriptor
# ---------------------------------------------------------------------------

class Tower:
    """A trunk GF(q) < GF(q^2) < GF(q^4) < ... of explicitly built fields,
    with auxiliary branch levels grown over trunk fields on demand.

    Packed-integer embedding is the identity along each level's ancestor
    path, so trunk values index straight into any branch they divide into.
    """

    def __init__(self, p, n, max_exp=2):
        if not is_prime(p):
            raise FieldError(f"p = {p} is not prime")
        if p == 2:
            raise FieldError("even characteristic is not supported")
        q = p**n
        if q < 5:
            raise FieldError(f"q = {q} < 5 is not supported")
        self.p = p
        self.n = n
        self.q = q
        base = _PrimeOps(p)
        if n == 1:
            lvl1 = Level(self, 1, base, 1, (), "a")
        else:
            lvl1 = Level(self, 1, base, n, _find_modulus(base, n), "a")
        self.levels = {1: lvl1}
        self.chain = [1]
        e = 1
        while e < max_exp:
            e *= 2
            self._extend_trunk(e)

    def _gen_symbol(self, exp):
        return {1: "a", 2: "u", 4: "w"}.get(exp, f"v{exp}")

    def _extend_trunk(self, exp):
        top = self.chain[-1]
        if exp % top != 0 or exp <= top:
            raise FieldError(f"cannot extend trunk {self.chain} to level {exp}")
        sub = self.levels[top]
        lvl = Level(self, exp, sub, exp // top, _find_modulus(sub, exp // top),
                    self._gen_symbol(exp))
        self.levels[exp] = lvl
        self.chain.append(exp)
        return lvl

    def _build_branch(self, exp):
        if exp > 64:
            raise FieldError(f"refusing to build tower level {exp} (> 64)")
        base_exp = max(e for e in self.chain if exp % e == 0)
        sub = self.levels[base_exp]
        lvl = Level(self, exp, sub, exp // base_exp,
                    _find_modulus(sub, exp // base_exp), self._gen_symbol(exp))
        self.levels[exp] = lvl
        return lvl

    def level(self, exp):
        try:
            return self.levels[exp]
        except KeyError:
            raise FieldError(
                f"level {exp} not built (existing: {sorted(self.levels)})") from None

    def level_containing(self, exp, build=True):
        """Smallest existing level containing GF(q^exp); built if absent.

        New levels grow directly over the largest trunk field dividing
        them, so every trunk value embeds into every branch it divides.
        """
        candidates = [e for e in sorted(self.levels) if e % exp == 0]
        if candidates:
            return self.levels[candidates[0]]
        if not build:
            raise FieldError(f"no tower level contains GF(q^{exp})")
        return self._build_branch(exp)

    # -- element constructors --

    def e(self, val, exp=1):
        """FieldElem from a packed value; plain ints reduce mod p at level 1."""
        lvl = self.level(exp)
        if exp == 1 and not 0 <= val < lvl.size:
            val %= self.p
        if not 0 <= val < lvl.size:
            raise FieldError(f"packed value {val} out of range for level {exp}")
        return FieldElem(lvl, val)

    def zero(self, exp=1):
        return FieldElem(self.level(exp), 0)

    def one(self, exp=1):
        return FieldElem(self.level(exp), 1)

    def gen(self, exp):
        """The generator adjoined at a chain level (packed value base.size)."""
        lvl = self.level(exp)
        if lvl.deg == 1:
            raise FieldError("trivial stage has no generator")
        return FieldElem(lvl, lvl.base.size)

    def elements(self, exp):
        lvl = self.level(exp)
        return (FieldElem(lvl, v) for v in range(lvl.size))

    # -- canonical representation --

    def min_exp(self, val, exp):
        """Exponent of the smallest chain level containing this packed value."""
        for e in self.chain:
            if e >= exp:
                return exp
            if val < self.levels[e].size:
                return e
        return exp

    def element_str(self, val, exp):
        if exp == 0:
            return str(val)
        lvl = self.levels[exp]
        if lvl.deg == 1 and not isinstance(lvl.base, Level):
            return str(val)
        digs = lvl.unpack(val)
        base_exp = lvl._base_exp()
        terms = []
        for i, d in enumerate(digs):
            if d == 0:
                continue
            cs = self.element_str(d, base_exp) if base_exp else str(d)
            if i == 0:
                terms.append(cs)
            else:
                mono = lvl.gen_symbol if i == 1 else f"{lvl.gen_symbol}^{i}"
                if cs == "1":
                    terms.append(mono)
                else:
                    cs_p = f"({cs})" if ("+" in cs or "*" in cs) else cs
                    terms.append(f"{cs_p}{mono}")
        return "+".join(terms) if terms else "0"

    def descriptor(self):
        """Text form of the field data, embedded in reports."""
        parts = [f"{self.p}^{self.n}"]
        for e in self.chain:
            lvl = self.levels[e]
            if lvl.deg > 1:
                parts.append(f"L{e}:{lvl.modulus_str()}")
        return " / ".join(parts)

    def __repr__(self):
        return f"Tower(q={self.q}, chain={self.chain})"


class FieldElem:
    """An element of a tower level, normalized to its smallest chain level."""

    __slots__ = ("level", "val")

    def __init__(self, level, val):
        tower = level.tower
        e = tower.min_exp(val, level.exp)
        if e != level.exp:
            level = tower.levels[e]
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "val", val)

    def __setattr__(self, *a):
        raise AttributeError("FieldElem is immutable")

    @property
    def tower(self):
        return self.level.tower

    @property
    def exp(self):
        return self.level.exp

    def _common(self, other):
        if isinstance(other, int):
            other = self.tower.e(other % self.tower.p, 1)
        if not isinstance(other, FieldElem):
            raise TypeError(f"cannot coerce {other!r} to a field element")
        if other.tower is not self.tower:
            raise FieldError("elements from different towers")
        la, lb = self.level, other.level
        lvl = la if la.exp >= lb.exp else lb
        return lvl, self.val, other.val

    def __add__(self, other):
        lvl, a, b = self._common(other)
        return FieldElem(lvl, lvl.add(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        lvl, a, b = self._common(other)
        return FieldElem(lvl, lvl.sub(a, b))

    def __rsub__(self, other):
        lvl, a, b = self._common(other)
        return FieldElem(lvl, lvl.sub(b, a))

    def __mul__(self, other):
        lvl, a, b = self._common(other)
        return FieldElem(lvl, lvl.mul(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        lvl, a, b = self._common(other)
        return FieldElem(lvl, lvl.div(a, b))

    def __rtruediv__(self, other):
        lvl, a, b = self._common(other)
        return FieldElem(lvl, lvl.div(b, a))

    def __neg__(self):
        return FieldElem(self.level, self.level.neg(self.val))

    def __pow__(self, k):
        return FieldElem(self.level, self.level.pow(self.val, k))

    def inv(self):
        return FieldElem(self.level, self.level.inv(self.val))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.exp == 1 and self.val == other % self.tower.p
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.tower is other.tower and self.val == other.val

    def __hash__(self):
        return hash((id(self.tower), self.val))

    def __bool__(self):
        return self.val != 0

    def frobenius(self, power=1):
        """self^(q^power)."""
        return FieldElem(self.level, self.level.frob(self.val, power))

    def is_in_subfield(self, exp):
        """True iff the element lies in GF(q^exp): a^(q^exp) == a."""
        if exp % self.exp == 0:
            return True
        return self.level.pow(self.val, pow(self.tower.q, exp)) == self.val

    def order(self):
        """Multiplicative order."""
        if self.val == 0:
            raise FieldError("order of zero")
        lvl = self.level
        n1 = lvl.size - 1
        o = n1
        for r in factorize(n1):
            while o % r == 0 and lvl.pow(self.val, o // r) == 1:
                o //= r
        return o

    def lift(self, exp):
        """Packed value of this element viewed at chain level exp."""
        lvl = self.tower.level(exp)
        if exp % self.exp:
            raise FieldError(f"GF(q^{self.exp}) does not embed in GF(q^{exp})")
        if self.val >= lvl.size:
            raise FieldError("value out of range for requested level")
        return self.val

    def __repr__(self):
        return self.tower.element_str(self.val, self.exp)


# ---------------------------------------------------------------------------

def make_tower(p, n, m):
    """Build the tower with chain levels 1, 2, 4, ... covering GF(q^m).

    Rejects even characteristic, non-prime p and q < 5.
    """
    boundary = 1
    while boundary < m:
        boundary *= 2
    return Tower(p, n, boundary)


def nth_roots(a, n, exp=None):
    """All solutions of z^n = a at the given (or a's own) tower level.

    The solution set has size 0 or gcd(n, q^exp - 1) for a != 0, and is {0}
    for a = 0.
    """
    if n <= 0:
        raise FieldError("root index must be positive")
    tower = a.tower
    lvl = tower.level(exp) if exp is not None else a.level
    if lvl.exp % a.exp != 0:
        raise FieldError("requested level does not contain the element")
    if a.val == 0:
        return {tower.zero()}
    n1 = lvl.size - 1
    if lvl._log_table is None:
        from .polyring import Poly

        f = Poly(lvl, (lvl.neg(a.val),) + (0,) * (n - 1) + (1,))
        return {FieldElem(lvl, r) for r in f.roots_here()}
    d = math.gcd(n, n1)
    la = lvl._log_table[a.val]
    if la % d:
        return set()
    step = n1 // d
    k0 = (la // d) * pow(n // d, -1, step) % step if step > 1 else 0
    return {FieldElem(lvl, lvl._exp_table[(k0 + j * step) % n1]) for j in range(d)}


def sqrt_elements(a, exp=None):
    return nth_roots(a, 2, exp)
