import random

import pytest

from galoislines.curve import CurvePoint, DivisorIncomplete
from galoislines.field import FieldElem
from galoislines.projspace import PlaneP3, ProjPoint


def test_point_counts_level1(curve5, curve7):
    assert len(curve5.curve_points(1)) == 6
    assert len(curve7.curve_points(1)) == 8
    for p in curve5.curve_points(1):
        if not p.infinite:
            assert p.y == curve5.tower.zero()


def test_point_count_level2_maximal(curve5):
    assert len(curve5.curve_points(2)) == 66


@pytest.mark.parametrize("qname", ["curve5", "curve7", "curve9"])
def test_maximality_cross_check(qname, request):
    curve = request.getfixturevalue(qname)
    q = curve.q
    assert curve.genus == (q - 1) ** 2 // 4
    assert len(curve.curve_points(2)) == q * q + 1 + 2 * curve.genus * q


def test_points_satisfy_equation_exhaustive(curve5):
    for exp in (1, 2, 4):
        for p in curve5.curve_points(exp):
            assert curve5.on_curve(p)


def test_phi_injective(curve5):
    for exp in (1, 2, 4):
        pts = curve5.curve_points(exp)
        assert len({curve5.phi(p) for p in pts}) == len(pts)


def test_phi_examples(curve5):
    t = curve5.tower
    e = t.e
    assert curve5.phi(CurvePoint(e(0), e(0))) == ProjPoint(t, [e(0), e(0), e(1), e(0)])
    assert curve5.phi(CurvePoint.infinity()) == ProjPoint(t, [e(0), e(0), e(0), e(1)])
    assert curve5.phi(CurvePoint(e(2), e(0))) == ProjPoint(t, [e(2), e(0), e(1), e(4)])


def test_conic_counts_and_identification(curve5):
    t = curve5.tower
    assert len(curve5.conic_points(2)) == 26
    rational_conic = set(curve5.conic_points(1))
    images = {curve5.phi(p) for p in curve5.curve_points(2)}
    in_plane = {p for p in images if curve5.y_plane.contains(p)}
    assert in_plane == rational_conic
    weier = {curve5.phi(p) for p in curve5.weierstrass_points()}
    assert weier == rational_conic


def test_conic_tangents(curve5):
    t = curve5.tower
    e = t.e
    R = ProjPoint(t, [e(2), e(0), e(1), e(4)])
    tl = curve5.conic_tangent(R)
    # {Y = 0, W - 4X + 4Z = 0}
    from galoislines.projspace import LineP3

    assert tl == LineP3.from_forms(t, [e(0), e(1), e(0), e(0)],
                                   [e(1), e(0), e(4), e(1)])
    inf_t = curve5.conic_tangent(ProjPoint(t, [e(0), e(0), e(0), e(1)]))
    assert inf_t == LineP3.from_forms(t, [e(0), e(1), e(0), e(0)],
                                      [e(0), e(0), e(1), e(0)])
    # tangency: meets the conic only at R (double contact)
    for pt in curve5.conic_points(2):
        if tl.contains(pt):
            assert pt == R


def test_curve_tangents_pass_through_vertex(curve5):
    t = curve5.tower
    e = t.e
    from galoislines.projspace import LineP3

    assert curve5.curve_tangent(CurvePoint.infinity()) == \
        LineP3.from_forms(t, [e(1), e(0), e(0), e(0)], [e(0), e(0), e(1), e(0)])
    assert curve5.curve_tangent(CurvePoint(e(0), e(0))) == \
        LineP3.from_forms(t, [e(1), e(0), e(0), e(0)], [e(0), e(0), e(0), e(1)])
    for p in curve5.weierstrass_points():
        assert curve5.curve_tangent(p).contains(curve5.vertex)


def test_curve_tangent_contact_order(curve5):
    # at any point the tangent's two forms both vanish to order >= 2,
    # and the minimum of the section orders is >= 2 (intersection mult.)
    rng = random.Random(3)
    pts = [p for p in curve5.curve_points(2) if not p.infinite]
    for p in rng.sample(pts, 8):
        tl = curve5.curve_tangent(p)
        f0, f1 = tl.dual_forms()
        lvl = tl.level
        orders = [curve5.section_order_at([FieldElem(lvl, v) for v in f], p)
                  for f in (f0, f1)]
        assert min(orders) >= 2


def test_local_expansion_at_origin(curve5):
    t = curve5.tower
    xs = curve5.local_expansion(CurvePoint(t.e(0), t.e(0)), 15)
    nz = {i: c for i, c in enumerate(xs) if c}
    assert nz == {3: t.e(4), 15: t.e(4)}


def test_local_expansion_leading_coefficient(curve5):
    # dx/dy = -((q+1)/2) y0^((q-1)/2) at points with y0 != 0
    t = curve5.tower
    pts = [p for p in curve5.curve_points(2) if not p.infinite and p.y]
    for p in pts[:12]:
        xs = curve5.local_expansion(p, 2)
        assert xs[0] == p.x
        assert xs[1] == -(t.e(3) * p.y ** 2)


def test_local_expansion_order_zero(curve5):
    t = curve5.tower
    p = CurvePoint(t.e(1), t.e(0))
    assert curve5.local_expansion(p, 0) == [p.x]


def test_local_expansion_satisfies_equation(curve5):
    # F(x(s), y0+s) = 0 mod s^(n+1), checked by brute series arithmetic
    from galoislines.curve import _ser_mul, _ser_pow, _ser_sub, _ser_trim

    t = curve5.tower
    pts = [p for p in curve5.curve_points(2) if not p.infinite]
    rng = random.Random(1)
    n = 9
    for p in rng.sample(pts, 10):
        lvl = t.level_containing(p.level_exp)
        xs = [c.lift(lvl.exp) for c in curve5.local_expansion(p, n)]
        ys = _ser_trim([p.y.lift(lvl.exp), 1], n)
        F = _ser_sub(lvl, _ser_pow(lvl, ys, 3, n),
                     _ser_sub(lvl, _ser_pow(lvl, xs, 5, n), xs))
        assert all(c == 0 for c in F)


def test_hyperplane_section_examples(curve5):
    t = curve5.tower
    e = t.e
    inf = CurvePoint.infinity()
    P0 = CurvePoint(e(0), e(0))
    dz = curve5.hyperplane_section(PlaneP3(t, [e(0), e(0), e(1), e(0)]))
    assert dz.entries == {inf: 6}
    dcontact = curve5.hyperplane_section(curve5.contact_plane(P0))
    assert dcontact.entries == {P0: 6}
    dy = curve5.hyperplane_section(PlaneP3(t, [e(0), e(1), e(0), e(0)]))
    expected = {CurvePoint(e(a), e(0)): 1 for a in range(5)}
    expected[inf] = 1
    assert dy.entries == expected


def test_hyperplane_section_random_total_degree(curve5):
    rng = random.Random(7)
    q = curve5.q
    for exp in (1, 2):
        lvl = curve5.tower.level(exp)
        done = 0
        while done < 50:
            form = [rng.randrange(lvl.size) for _ in range(4)]
            if not any(form):
                continue
            plane = PlaneP3(curve5.tower, [FieldElem(lvl, v) for v in form])
            div = curve5.hyperplane_section(plane)
            assert div.degree == q + 1
            done += 1


def test_hyperplane_section_respects_level_cap(curve5):
    t = curve5.tower
    e = t.e
    # y = 1 on the curve forces x^5 - x = 1, irreducible over GF(5):
    # zeros live at level 5, beyond a cap of 4
    plane = PlaneP3(t, [e(0), e(1), e(0), e(4)])
    rng = random.Random(0)
    found = False
    for _ in range(40):
        form = [rng.randrange(5) for _ in range(4)]
        if not any(form):
            continue
        plane = PlaneP3(t, [e(v) for v in form])
        try:
            div = curve5.hyperplane_section(plane, max_exp=4)
            assert div.degree == curve5.q + 1
        except DivisorIncomplete:
            found = True
            partial = curve5.hyperplane_section(plane, max_exp=4,
                                                require_complete=False)
            assert partial.degree < curve5.q + 1
    assert found, "expected at least one section with zeros beyond level 4"


def test_divisor_repr_sorted(curve5):
    t = curve5.tower
    e = t.e
    dy = curve5.hyperplane_section(PlaneP3(t, [e(0), e(1), e(0), e(0)]))
    s = repr(dy)
    assert s == " + ".join(sorted(s.split(" + ")))
