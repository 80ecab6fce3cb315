"""Numpy lookup-table bundles for bulk exact arithmetic.

Levels 1 and 2 of a tower are small (at most a few hundred elements), so
full multiplication and addition tables fit comfortably and turn bulk field
arithmetic into integer gathers.  Chain packing makes the embedding of
level 1 into level 2 the numeric identity, so level-1 values index level-2
tables directly.
"""

from __future__ import annotations

import numpy as np


class FastTables:
    """Vectorized arithmetic tables for levels 1 and 2 of one tower."""

    def __init__(self, tower):
        self.tower = tower
        q = tower.q
        self.q = q
        self.h = (q + 1) // 2
        lvl1 = tower.level(1)
        lvl2 = tower.level(2)
        self.lvl1 = lvl1
        self.lvl2 = lvl2
        Q = lvl2.size
        self.Q = Q

        idx = np.arange(Q, dtype=np.int32)
        self.MUL = np.empty((Q, Q), dtype=np.int32)
        self.ADD = np.empty((Q, Q), dtype=np.int32)
        for a in range(Q):
            self.MUL[a] = [lvl2.mul(a, b) for b in range(Q)]
            self.ADD[a] = [lvl2.add(a, b) for b in range(Q)]
        self.NEG = np.array([lvl2.neg(a) for a in range(Q)], dtype=np.int32)
        self.INV = np.array([0] + [lvl2.inv(a) for a in range(1, Q)], dtype=np.int32)
        self.FROB = np.array([lvl2.frob(a) for a in range(Q)], dtype=np.int32)
        self.POWH = np.array([lvl2.pow(a, self.h) for a in range(Q)], dtype=np.int32)
        sq1 = {lvl1.mul(a, a) for a in range(lvl1.size)}
        self.IS_SQUARE1 = np.array([a in sq1 for a in range(lvl1.size)], dtype=bool)
        del idx

    # -- vector helpers (arrays of packed level-2 values) --

    def mul(self, a, b):
        return self.MUL[a, b]

    def add(self, a, b):
        return self.ADD[a, b]

    def sub(self, a, b):
        return self.ADD[a, self.NEG[b]]

    def dot3(self, u, v):
        """Pointwise 3-vector dot product: sum_i u[..., i] * v[..., i]."""
        acc = self.MUL[u[..., 0], v[..., 0]]
        acc = self.ADD[acc, self.MUL[u[..., 1], v[..., 1]]]
        acc = self.ADD[acc, self.MUL[u[..., 2], v[..., 2]]]
        return acc


class PGLData:
    """Canonical PGL(2, q) representatives plus per-matrix pencil actions.

    For a matrix M = [[a, b], [c, d]] over GF(q), TM is the 3x3 matrix (over
    level 2, packed) sending the coefficient vector (hX, hZ, hW) of a form
    restricted to the conic plane to the coefficients (c0, c1, c2) of

        hX (a t + b)(c t + d) + hZ (c t + d)^2 + hW (a t + b)^2,

    the pullback of the form under the conic action of M, cleared of its
    denominator.  E_BY_DET lists the y-scalings e with e^((q+1)/2) = det M.
    """

    def __init__(self, tables):
        tw = tables.tower
        lvl1 = tables.lvl1
        lvl2 = tables.lvl2
        q1 = lvl1.size
        mats = []
        for a in range(q1):
            for b in range(q1):
                for c in range(q1):
                    for d in range(q1):
                        quad = (a, b, c, d)
                        lead = next((v for v in quad if v), 0)
                        if lead != 1:
                            continue
                        det = lvl1.sub(lvl1.mul(a, d), lvl1.mul(b, c))
                        if det == 0:
                            continue
                        mats.append((a, b, c, d, det))
        self.mats = mats
        order = q1 * (q1 * q1 - 1)
        assert len(mats) == order, (len(mats), order)

        h = tables.h
        e_by_det = {}
        for e in range(1, lvl2.size):
            d = lvl2.pow(e, h)
            if d < q1:
                e_by_det.setdefault(d, []).append(e)
        self.e_by_det = {d: tuple(v) for d, v in e_by_det.items()}
        for a, b, c, d, det in mats[:5]:
            assert len(self.e_by_det[det]) == h

        tm = np.empty((len(mats), 3, 3), dtype=np.int32)
        m2 = lvl2.mul
        a2 = lvl2.add
        for i, (a, b, c, d, det) in enumerate(mats):
            # rows: images of hX, hZ, hW; columns: coefficients of 1, t, t^2
            tm[i, 0] = (m2(b, d), a2(m2(a, d), m2(b, c)), m2(a, c))
            tm[i, 1] = (m2(d, d), a2(m2(c, d), m2(c, d)), m2(c, c))
            tm[i, 2] = (m2(b, b), a2(m2(a, b), m2(a, b)), m2(a, a))
        self.TM = tm
        self.DET = np.array([m[4] for m in mats], dtype=np.int32)


_CACHE = {}


def fast_tables(tower):
    key = id(tower)
    if key not in _CACHE:
        _CACHE[key] = FastTables(tower)
    return _CACHE[key]


_PGL_CACHE = {}


def pgl_data(tower):
    key = id(tower)
    if key not in _PGL_CACHE:
        _PGL_CACHE[key] = PGLData(fast_tables(tower))
    return _PGL_CACHE[key]
