import itertools
import math
import random

import pytest

from galoislines.field import FieldError, factorize, make_tower, nth_roots


def test_tower_5_1_2_modulus_is_least_nonresidue():
    T = make_tower(5, 1, 2)
    u = T.gen(2)
    # binomial scan picks x^2 - 2, the least non-residue of GF(5)
    assert u * u == T.e(2)
    assert "u^2+(3)" in T.descriptor()


def test_tower_admits_q9():
    T = make_tower(3, 2, 1)
    assert T.q == 9
    assert T.level(1).size == 9


@pytest.mark.parametrize("p,n", [(2, 3), (3, 1), (9, 1), (15, 1)])
def test_tower_rejections(p, n):
    with pytest.raises(FieldError):
        make_tower(p, n, 1)


def test_field_axioms_exhaustive_gf5_gf25(tower5):
    for exp in (1, 2):
        lvl = tower5.level(exp)
        elems = range(lvl.size)
        for a, b in itertools.product(elems, repeat=2):
            assert lvl.add(a, b) == lvl.add(b, a)
            assert lvl.mul(a, b) == lvl.mul(b, a)
        sample = random.Random(0).sample(
            list(itertools.product(elems, repeat=3)), 500) \
            if lvl.size > 5 else list(itertools.product(elems, repeat=3))
        for a, b, c in sample:
            assert lvl.mul(a, lvl.mul(b, c)) == lvl.mul(lvl.mul(a, b), c)
            assert lvl.add(a, lvl.add(b, c)) == lvl.add(lvl.add(a, b), c)
            assert lvl.mul(a, lvl.add(b, c)) == lvl.add(lvl.mul(a, b), lvl.mul(a, c))
        for a in elems:
            if a:
                assert lvl.mul(a, lvl.inv(a)) == 1
            assert lvl.add(a, lvl.neg(a)) == 0


def test_field_axioms_random_level4(tower5):
    lvl = tower5.level(4)
    rng = random.Random(1)
    for _ in range(200):
        a, b, c = (rng.randrange(lvl.size) for _ in range(3))
        assert lvl.mul(a, lvl.add(b, c)) == lvl.add(lvl.mul(a, b), lvl.mul(a, c))
        assert lvl.mul(a, lvl.mul(b, c)) == lvl.mul(lvl.mul(a, b), c)


def test_frobenius_fixes_prime_field(tower5):
    for a in tower5.elements(1):
        assert a.frobenius() == a


def test_frobenius_on_gf25(tower5):
    u = tower5.gen(2)
    assert u.frobenius() == 4 * u
    assert u ** 5 == 4 * u
    for a in tower5.elements(2):
        assert a.frobenius().frobenius() == a


def test_frobenius_is_homomorphism_exhaustive(tower5):
    lvl = tower5.level(2)
    for av in range(lvl.size):
        for bv in range(lvl.size):
            a, b = tower5.e(av, 2), tower5.e(bv, 2)
            assert (a + b).frobenius() == a.frobenius() + b.frobenius()
            assert (a * b).frobenius() == a.frobenius() * b.frobenius()


def test_nth_roots_examples(tower5):
    ones = nth_roots(tower5.one(), 3, 2)
    assert len(ones) == 3
    assert all((z ** 3) == tower5.one() for z in ones)
    # 2 = -(u - u^5)^2 has three cube roots since 2^8 = 1 in GF(25)
    u = tower5.gen(2)
    assert -(u - u ** 5) ** 2 == tower5.e(2)
    roots2 = nth_roots(tower5.e(2), 3, 2)
    assert len(roots2) == 3
    assert nth_roots(tower5.zero(), 7, 2) == {tower5.zero()}


def test_nth_roots_count_exhaustive_gf25(tower5):
    lvl = tower5.level(2)
    for av in range(1, lvl.size):
        a = tower5.e(av, 2)
        for n in range(1, 9):
            roots = nth_roots(a, n, 2)
            scan = {v for v in range(lvl.size) if lvl.pow(v, n) == av}
            assert {r.val for r in roots} == scan
            assert len(roots) in (0, math.gcd(n, lvl.size - 1))


def test_orders(tower5):
    assert tower5.one().order() == 1
    lvl2 = tower5.level(2)
    gen = tower5.e(lvl2.generator, 2)
    assert gen.order() == 24
    orders = {tower5.e(v, 2).order() for v in range(1, 25)}
    assert max(orders) == 24


def test_subfield_membership(tower5):
    u = tower5.gen(2)
    assert not u.is_in_subfield(1)
    assert (u * u).is_in_subfield(1)
    w = tower5.gen(4)
    assert not w.is_in_subfield(2)
    assert (w * w).is_in_subfield(2)
    for a in tower5.elements(2):
        assert a.is_in_subfield(2)
        assert a.is_in_subfield(1) == (a.frobenius() == a)


def test_packed_embedding_is_identity(tower5):
    # chain packing: GF(25) values are literally GF(625) values
    lvl4 = tower5.level(4)
    for v in range(25):
        a2 = tower5.e(v, 2)
        a4 = tower5.e(v, 4) if v < lvl4.size else None
        assert a2.lift(4) == v
        assert a4 == a2


def test_element_normalization(tower5):
    # elements constructed at high level collapse to their minimal level
    a = tower5.e(3, 4)
    assert a.exp == 1
    b = tower5.e(7, 4)
    assert b.exp == 2


def test_descriptor_mentions_all_moduli(tower9):
    d = tower9.descriptor()
    assert d.startswith("3^2")
    assert "L1:" in d and "L2:" in d and "L4:" in d
