"""Points, lines and planes of P^3 (and P^2, P^1) over tower levels.

Projective points are normalized so the first nonzero coordinate is 1.
Lines in P^3 are identified by the unique reduced row echelon basis of
their 2-dimensional coordinate space, which makes set equality, Frobenius
stability and duplicate-free enumeration purely representational.
"""

from __future__ import annotations

import itertools

from .field import FieldElem, FieldError

ENUM_GUARD = 128  # largest field size admitted for full-space line enumeration


class GeometryError(ValueError):
    pass


class BudgetError(RuntimeError):
    pass


def _common_level(tower, rows):
    exp = 1
    for row in rows:
        for c in row:
            e = c.exp if isinstance(c, FieldElem) else 1
            if e > exp:
                exp = e
    return tower.level_containing(exp)


def _as_vals(level, row):
    out = []
    for c in row:
        if isinstance(c, FieldElem):
            out.append(c.lift(level.exp))
        else:
            out.append(c % level.tower.p)
    return tuple(out)


def rref(level, rows):
    """Reduced row echelon form over the level; returns tuple of row tuples."""
    m = [list(r) for r in rows]
    nr, nc = len(m), len(m[0])
    piv = 0
    pivots = []
    for col in range(nc):
        sel = None
        for r in range(piv, nr):
            if m[r][col]:
                sel = r
                break
        if sel is None:
            continue
        m[piv], m[sel] = m[sel], m[piv]
        inv = level.inv(m[piv][col])
        m[piv] = [level.mul(inv, x) for x in m[piv]]
        for r in range(nr):
            if r != piv and m[r][col]:
                c = m[r][col]
                m[r] = [level.sub(x, level.mul(c, y)) for x, y in zip(m[r], m[piv])]
        pivots.append(col)
        piv += 1
        if piv == nr:
            break
    return tuple(tuple(r) for r in m[:piv]), pivots


class ProjPoint:
    """A point of P^1, P^2 or P^3, normalized (first nonzero coordinate 1)."""

    __slots__ = ("tower", "level", "coords")

    def __init__(self, tower, coords):
        level = _common_level(tower, [coords])
        vals = _as_vals(level, coords)
        lead = next((v for v in vals if v), None)
        if lead is None:
            raise GeometryError("all coordinates zero")
        if lead != 1:
            inv = level.inv(lead)
            vals = tuple(level.mul(inv, v) for v in vals)
        # store at the smallest chain level containing every coordinate
        exp = max(tower.min_exp(v, level.exp) for v in vals)
        self.tower = tower
        self.level = tower.level_containing(exp)
        self.coords = vals

    @property
    def dim(self):
        return len(self.coords) - 1

    def elem(self, i):
        return FieldElem(self.level, self.coords[i])

    def frobenius(self, power=1):
        lvl = self.level
        return ProjPoint(self.tower, [FieldElem(lvl, lvl.frob(c, power)) for c in self.coords])

    def is_rational_over(self, exp):
        q = self.tower.q
        lvl = self.level
        return all(lvl.pow(c, pow(q, exp)) == c for c in self.coords)

    def __eq__(self, other):
        return (isinstance(other, ProjPoint) and self.tower is other.tower
                and self.coords == other.coords)

    def __hash__(self):
        return hash((id(self.tower), self.coords))

    def __repr__(self):
        names = [self.tower.element_str(c, self.level.exp) for c in self.coords]
        return "(" + ":".join(names) + ")"


_VARS4 = ("X", "Y", "Z", "W")


def form_str(tower, coeffs, level=None):
    """Render a linear form in X, Y, Z, W with canonical coefficient strings."""
    if level is None:
        level = _common_level(tower, [coeffs])
    vals = _as_vals(level, coeffs)
    terms = []
    for c, v in zip(vals, _VARS4):
        if c == 0:
            continue
        if c == 1:
            terms.append(v)
        else:
            cs = tower.element_str(c, level.exp)
            cs = f"({cs})" if "+" in cs else cs
            terms.append(f"{cs}*{v}")
    return " + ".join(terms) if terms else "0"


class PlaneP3:
    """A plane of P^3 given by one normalized linear form in X, Y, Z, W."""

    __slots__ = ("tower", "level", "form")

    def __init__(self, tower, form):
        level = _common_level(tower, [form])
        vals = _as_vals(level, form)
        lead = next((v for v in vals if v), None)
        if lead is None:
            raise GeometryError("zero form")
        if lead != 1:
            inv = level.inv(lead)
            vals = tuple(level.mul(inv, v) for v in vals)
        exp = max(tower.min_exp(v, level.exp) for v in vals)
        self.tower = tower
        self.level = tower.level_containing(exp)
        self.form = vals

    def contains(self, pt):
        lvl = self.tower.level_containing(max(self.level.exp, pt.level.exp))
        acc = 0
        for f, c in zip(self.form, pt.coords):
            acc = lvl.add(acc, lvl.mul(f, c))
        return acc == 0

    def is_rational_over(self, exp):
        q = self.tower.q
        lvl = self.level
        return all(lvl.pow(c, pow(q, exp)) == c for c in self.form)

    def __eq__(self, other):
        return (isinstance(other, PlaneP3) and self.tower is other.tower
                and self.form == other.form)

    def __hash__(self):
        return hash((id(self.tower), self.form))

    def __repr__(self):
        return "{" + form_str(self.tower, [FieldElem(self.level, c) for c in self.form]) + " = 0}"


class LineP3:
    """A line of P^3: canonical RREF point basis plus canonical dual forms."""

    __slots__ = ("tower", "level", "basis", "_forms")

    def __init__(self, tower, rows, _from_rref=False):
        level = _common_level(tower, rows)
        m = [_as_vals(level, r) for r in rows]
        if not _from_rref:
            m, _ = rref(level, m)
        if len(m) != 2:
            raise GeometryError("points do not span a line")
        exp = max(tower.min_exp(v, level.exp) for row in m for v in row)
        self.tower = tower
        self.level = tower.level_containing(exp)
        self.basis = tuple(tuple(row) for row in m)
        self._forms = None

    # -- constructors --

    @classmethod
    def through(cls, p, q):
        if p == q:
            raise GeometryError("equal points do not determine a line")
        rows = [[FieldElem(p.level, c) for c in p.coords],
                [FieldElem(q.level, c) for c in q.coords]]
        return cls(p.tower, rows)

    @classmethod
    def from_forms(cls, tower, f0, f1):
        """Line as the common zero locus of two independent linear forms."""
        level = _common_level(tower, [f0, f1])
        rows, _ = rref(level, [_as_vals(level, f0), _as_vals(level, f1)])
        if len(rows) != 2:
            raise GeometryError("dependent forms do not cut out a line")
        ns = _nullspace(level, rows)
        return cls(tower, [[FieldElem(level, v) for v in vec] for vec in ns])

    # -- structure --

    def dual_forms(self):
        """Canonical RREF basis of the forms vanishing on the line."""
        if self._forms is None:
            lvl = self.level
            ns = _nullspace(lvl, self.basis)
            forms, _ = rref(lvl, ns)
            self._forms = tuple(tuple(r) for r in forms)
        return self._forms

    def points(self, exp=None):
        """All points of the line over GF(q^exp) (default: the line's level)."""
        lvl = self.level if exp is None else self.tower.level_containing(exp)
        a, b = self.basis
        out = [ProjPoint(self.tower, [FieldElem(lvl, v) for v in a])]
        for t in range(lvl.size):
            row = [lvl.add(lvl.mul(t, x), y) for x, y in zip(a, b)]
            out.append(ProjPoint(self.tower, [FieldElem(lvl, v) for v in row]))
        return out

    def contains(self, pt):
        lvl = self.tower.level_containing(max(self.level.exp, pt.level.exp))
        rows, _ = rref(lvl, [self.basis[0], self.basis[1], pt.coords])
        return len(rows) == 2

    def frobenius(self, power=1):
        lvl = self.level
        rows = [[FieldElem(lvl, lvl.frob(c, power)) for c in row] for row in self.basis]
        return LineP3(self.tower, rows)

    def is_rational_over(self, exp):
        """True iff the line as a set is fixed by the q^exp Frobenius."""
        q = self.tower.q
        lvl = self.level
        rows = [[lvl.pow(c, pow(q, exp)) for c in row] for row in self.basis]
        img, _ = rref(lvl, rows)
        return tuple(tuple(r) for r in img) == self.basis

    def in_plane(self, plane):
        p0 = ProjPoint(self.tower, [FieldElem(self.level, v) for v in self.basis[0]])
        p1 = ProjPoint(self.tower, [FieldElem(self.level, v) for v in self.basis[1]])
        return plane.contains(p0) and plane.contains(p1)

    def meet_plane(self, plane):
        """The unique intersection point with a plane not containing the line."""
        if self.in_plane(plane):
            raise GeometryError("line lies in the plane")
        lvl = self.tower.level_containing(max(self.level.exp, plane.level.exp))
        a, b = self.basis
        f = plane.form
        fa = 0
        fb = 0
        for i in range(4):
            fa = lvl.add(fa, lvl.mul(f[i], a[i]))
            fb = lvl.add(fb, lvl.mul(f[i], b[i]))
        # point s*a + t*b with s*fa + t*fb = 0
        if fa == 0:
            coords = a
        elif fb == 0:
            coords = b
        else:
            t = lvl.neg(lvl.div(fa, fb))
            coords = tuple(lvl.add(x, lvl.mul(t, y)) for x, y in zip(a, b))
        return ProjPoint(self.tower, [FieldElem(lvl, c) for c in coords])

    def __eq__(self, other):
        return (isinstance(other, LineP3) and self.tower is other.tower
                and self.basis == other.basis)

    def __hash__(self):
        return hash((id(self.tower), self.basis))

    def __repr__(self):
        f0, f1 = self.dual_forms()
        lvl = self.level
        return (form_str(self.tower, [FieldElem(lvl, c) for c in f0]) + "; "
                + form_str(self.tower, [FieldElem(lvl, c) for c in f1]))


def _nullspace(level, rows):
    """Basis of the annihilator of the row space (rows in RREF, 2 x 4)."""
    rows, pivots = rref(level, rows)
    nc = 4
    free = [c for c in range(nc) if c not in pivots]
    out = []
    for fc in free:
        vec = [0] * nc
        vec[fc] = 1
        for r, pc in zip(rows, pivots):
            vec[pc] = level.neg(r[fc])
        out.append(tuple(vec))
    return out


def incidence(a, b):
    """Incidence across the supported type pairs.

    point/line, point/plane, line/plane membership return bool;
    (line, plane) with the line not contained returns the meet point via
    LineP3.meet_plane, so use that directly when a point is wanted.
    """
    if isinstance(a, ProjPoint) and isinstance(b, LineP3):
        return b.contains(a)
    if isinstance(a, LineP3) and isinstance(b, ProjPoint):
        return a.contains(b)
    if isinstance(a, ProjPoint) and isinstance(b, PlaneP3):
        return b.contains(a)
    if isinstance(a, PlaneP3) and isinstance(b, ProjPoint):
        return a.contains(b)
    if isinstance(a, LineP3) and isinstance(b, PlaneP3):
        return a.in_plane(b)
    if isinstance(a, PlaneP3) and isinstance(b, LineP3):
        return b.in_plane(a)
    raise TypeError(f"unsupported incidence pair: {type(a)}, {type(b)}")


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def line_count(Q):
    """Number of lines of P^3 over a field with Q elements."""
    return (Q * Q + 1) * (Q * Q + Q + 1)


def rref_cells():
    """The six echelon shapes of a 2x4 rank-2 RREF matrix.

    Each cell is (pivot columns, free positions) where free positions are
    (row, col) slots that range over the whole field.
    """
    cells = []
    for j1, j2 in itertools.combinations(range(4), 2):
        free = []
        for c in range(j1 + 1, 4):
            if c != j2:
                free.append((0, c))
        for c in range(j2 + 1, 4):
            free.append((1, c))
        cells.append(((j1, j2), tuple(free)))
    return cells


def enumerate_lines(tower, exp, force=False):
    """Every line of P^3 over GF(q^exp) exactly once, as canonical LineP3."""
    lvl = tower.level(exp)
    if lvl.size > ENUM_GUARD and not force:
        raise BudgetError(
            f"field size {lvl.size} exceeds the full-space enumeration guard {ENUM_GUARD}")
    for (j1, j2), free in rref_cells():
        base = [[0, 0, 0, 0], [0, 0, 0, 0]]
        base[0][j1] = 1
        base[1][j2] = 1
        for vals in itertools.product(range(lvl.size), repeat=len(free)):
            rows = [list(base[0]), list(base[1])]
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            # cells generate matrices already in RREF; skip re-reduction
            ln = LineP3.__new__(LineP3)
            exp2 = max(tower.min_exp(v, exp) for row in rows for v in row)
            ln.tower = tower
            ln.level = tower.level_containing(exp2)
            ln.basis = (tuple(rows[0]), tuple(rows[1]))
            ln._forms = None
            yield ln


def enumerate_points(tower, exp, dim=3):
    """Every point of P^dim over GF(q^exp), normalized, exactly once."""
    lvl = tower.level(exp)
    n = dim + 1
    for lead in range(n):
        for rest in itertools.product(range(lvl.size), repeat=n - lead - 1):
            coords = [0] * lead + [1] + list(rest)
            yield ProjPoint(tower, [FieldElem(lvl, c) for c in coords])


def enumerate_lines_through(tower, point, exp):
    """Every line over GF(q^exp) through the given point, exactly once."""
    lvl = tower.level(exp)
    pc = [FieldElem(point.level, c).lift(lvl.exp) for c in point.coords]
    seen = set()
    for other in enumerate_points(tower, exp, dim=3):
        oc = [FieldElem(other.level, c).lift(lvl.exp) for c in other.coords]
        if tuple(oc) == tuple(pc):
            continue
        ln = LineP3(tower, [[FieldElem(lvl, v) for v in pc], [FieldElem(lvl, v) for v in oc]])
        if ln.basis not in seen:
            seen.add(ln.basis)
            yield ln


def enumerate_lines_in_plane(tower, plane, exp):
    """Every line over GF(q^exp) inside the given plane, exactly once."""
    lvl = tower.level(exp)
    pts = [pt for pt in enumerate_points(tower, exp, dim=3) if plane.contains(pt)]
    seen = set()
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            ln = LineP3.through(pts[i], pts[j])
            if ln.basis not in seen:
                seen.add(ln.basis)
                yield ln
