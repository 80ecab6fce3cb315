import random

import pytest

from galoislines.field import FieldElem
from galoislines.projspace import (BudgetError, GeometryError, LineP3, PlaneP3,
                                   ProjPoint, enumerate_lines,
                                   enumerate_lines_in_plane,
                                   enumerate_lines_through, incidence,
                                   line_count)


def _pt(tower, *vals):
    return ProjPoint(tower, [tower.e(v) for v in vals])


def test_line_through_coordinate_axes(tower5):
    ln = LineP3.through(_pt(tower5, 0, 1, 0, 0), _pt(tower5, 0, 0, 0, 1))
    e = tower5.e
    assert ln == LineP3.from_forms(tower5, [e(1), e(0), e(0), e(0)],
                                   [e(0), e(0), e(1), e(0)])


def test_from_forms_zw(tower5):
    e = tower5.e
    ln = LineP3.from_forms(tower5, [e(0), e(0), e(1), e(0)], [e(0), e(0), e(0), e(1)])
    assert ln.contains(_pt(tower5, 1, 0, 0, 0))
    assert ln.contains(_pt(tower5, 0, 1, 0, 0))


def test_conjugate_pair_line(tower5):
    # the line {Y = 0, W - 2Z = 0} carries the conic points with t^2 = 2
    e = tower5.e
    u = tower5.gen(2)
    ln = LineP3.from_forms(tower5, [e(0), e(1), e(0), e(0)],
                           [e(0), e(0), e(3), e(1)])
    R = ProjPoint(tower5, [u, e(0), e(1), u * u])
    Rq = ProjPoint(tower5, [-u, e(0), e(1), u * u])
    assert ln.contains(R) and ln.contains(Rq)
    assert ln == LineP3.through(R, Rq)
    assert ln.is_rational_over(1)


def test_degenerate_inputs_rejected(tower5):
    P = _pt(tower5, 1, 2, 3, 4)
    with pytest.raises(GeometryError):
        LineP3.through(P, P)
    e = tower5.e
    with pytest.raises(GeometryError):
        LineP3.from_forms(tower5, [e(1), e(0), e(0), e(0)],
                          [e(2), e(0), e(0), e(0)])
    with pytest.raises(GeometryError):
        ProjPoint(tower5, [e(0), e(0), e(0), e(0)])


def test_incidence_examples(tower5):
    e = tower5.e
    xz = LineP3.from_forms(tower5, [e(1), e(0), e(0), e(0)], [e(0), e(0), e(1), e(0)])
    vertex = _pt(tower5, 0, 1, 0, 0)
    assert incidence(vertex, xz)
    yplane = PlaneP3(tower5, [e(0), e(1), e(0), e(0)])
    assert not incidence(xz, yplane)
    zw = LineP3.from_forms(tower5, [e(0), e(0), e(1), e(0)], [e(0), e(0), e(0), e(1)])
    assert zw.meet_plane(yplane) == _pt(tower5, 1, 0, 0, 0)


def test_rationality(tower5):
    e = tower5.e
    u = tower5.gen(2)
    xz = LineP3.from_forms(tower5, [e(1), e(0), e(0), e(0)], [e(0), e(0), e(1), e(0)])
    assert xz.is_rational_over(1)
    w2z = LineP3.from_forms(tower5, [e(0), e(1), e(0), e(0)], [e(0), e(0), e(3), e(1)])
    assert w2z.is_rational_over(1)
    tang = LineP3.from_forms(tower5, [e(0), e(1), e(0), e(0)],
                             [-(u + u), e(0), u * u, e(1)])
    assert not tang.is_rational_over(1)
    assert tang.is_rational_over(2)
    # the minimal storage level equals the field of definition
    assert xz.level.exp == 1 and tang.level.exp == 2


def test_canonicality_random_pairs(tower5):
    rng = random.Random(42)
    lvl = tower5.level(2)
    done = 0
    while done < 1000:
        a = [rng.randrange(25) for _ in range(4)]
        b = [rng.randrange(25) for _ in range(4)]
        if not any(a) or not any(b):
            continue
        P = ProjPoint(tower5, [FieldElem(lvl, v) for v in a])
        Q = ProjPoint(tower5, [FieldElem(lvl, v) for v in b])
        if P == Q:
            continue
        l1 = LineP3.through(P, Q)
        assert l1 == LineP3.through(Q, P)
        f0, f1 = l1.dual_forms()
        l2 = LineP3.from_forms(tower5, [FieldElem(l1.level, v) for v in f0],
                               [FieldElem(l1.level, v) for v in f1])
        assert l2 == l1
        done += 1


def test_enumeration_counts_level1(tower5):
    lines = list(enumerate_lines(tower5, 1))
    assert len(lines) == line_count(5) == 806
    assert len({ln.basis for ln in lines}) == 806
    assert all(ln.is_rational_over(1) for ln in lines)


def test_enumeration_count_level2_matches_formula(tower5):
    n = sum(1 for _ in enumerate_lines(tower5, 2))
    assert n == line_count(25) == 407526


def test_enumeration_guard(tower5):
    with pytest.raises(BudgetError):
        next(enumerate_lines(tower5, 4))


def test_lines_through_point(tower5):
    vertex = _pt(tower5, 0, 1, 0, 0)
    lines = list(enumerate_lines_through(tower5, vertex, 1))
    assert len(lines) == 31
    assert all(ln.contains(vertex) for ln in lines)


def test_lines_in_plane(tower5):
    e = tower5.e
    yplane = PlaneP3(tower5, [e(0), e(1), e(0), e(0)])
    lines = list(enumerate_lines_in_plane(tower5, yplane, 1))
    assert len(lines) == 31
    assert all(ln.in_plane(yplane) for ln in lines)


def test_frobenius_permutes_lines(tower5):
    rng = random.Random(9)
    lvl = tower5.level(2)
    seen = set()
    for _ in range(300):
        rows = [[FieldElem(lvl, rng.randrange(25)) for _ in range(4)]
                for _ in range(2)]
        try:
            ln = LineP3(tower5, rows)
        except GeometryError:
            continue
        img = ln.frobenius()
        assert img.frobenius() == ln
        assert (img == ln) == ln.is_rational_over(1)
        seen.add(ln.basis)


def test_rational_line_count_in_level2_ambient(tower5):
    # GF(5)-rational lines of P^3(GF(25)) are exactly the level-1 lines
    import numpy as np

    from galoislines.sweep import _build_cell_rows, _cell_sizes

    total = 0
    for cid, size in enumerate(_cell_sizes(25)):
        H0, H1 = _build_cell_rows(25, cid, 0, size)
        total += int((((H0 < 5).all(axis=1)) & ((H1 < 5).all(axis=1))).sum())
    assert total == 806
