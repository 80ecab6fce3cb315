import random

from galoislines.polyring import Poly, lagrange_interpolate, sqrts_in_level


def test_divmod_and_gcd(tower5):
    lvl = tower5.level(2)
    rng = random.Random(4)
    for _ in range(60):
        a = Poly(lvl, [rng.randrange(25) for _ in range(6)])
        b = Poly(lvl, [rng.randrange(25) for _ in range(3)])
        if b.is_zero():
            continue
        q, r = a.divmod(b)
        assert q * b + r == a
        assert r.degree < b.degree or r.is_zero()
        g = a.gcd(b)
        if not g.is_zero():
            assert (a % g).is_zero() and (b % g).is_zero()


def test_factor_reassembles(tower5):
    lvl = tower5.level(2)
    rng = random.Random(5)
    for _ in range(30):
        f = Poly(lvl, [rng.randrange(25) for _ in range(rng.randrange(2, 8))])
        if f.degree < 1:
            continue
        prod = Poly(lvl, (f.coeffs[-1],))
        for irr, m in f.factor():
            for _ in range(m):
                prod = prod * irr
        assert prod == f


def test_char_p_squarefree(tower5):
    lvl = tower5.level(1)
    x = Poly.x(lvl)
    one = Poly(lvl, (1,))
    f = (x + one) * (x + one) * (x + one) * (x + one) * (x + one)  # (x+1)^5
    dec = f.squarefree_decomposition()
    assert dec == [(x + one, 5)]


def test_roots_with_levels_locates_conjugates(tower5):
    lvl1 = tower5.level(1)
    f = Poly(lvl1, (1, 1, 1))  # x^2 + x + 1, irreducible over GF(5)
    roots = f.roots_with_levels()
    assert len(roots) == 2
    assert all(lvl.exp == 2 for _r, lvl, _m in roots)
    for r, lvl, _m in roots:
        assert f.lift(lvl).eval(r) == 0


def test_sqrts_match_scan(tower5):
    for exp in (1, 2, 4):
        lvl = tower5.level(exp)
        rng = random.Random(6)
        for v in rng.sample(range(lvl.size), min(40, lvl.size)):
            rs = sqrts_in_level(lvl, v)
            scan = sorted(x for x in range(lvl.size) if lvl.mul(x, x) == v)
            assert rs == scan


def test_lagrange(tower5):
    lvl = tower5.level(2)
    pts = [(v, lvl.mul(v, lvl.add(v, 3))) for v in range(7)]
    f = lagrange_interpolate(lvl, pts)
    assert f.degree <= 2
    for x, y in pts:
        assert f.eval(x) == y
