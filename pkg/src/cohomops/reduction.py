"""Algebraic reduction of cochain complexes by elimination of unit pairs.

Eliminating a pair ``(b, a)`` with ``δb = u·a + ...`` and ``u`` a unit is a
chain homotopy equivalence.  We record every step so that the projection
``f``, the inclusion ``g`` and the homotopy ``h`` (``1 - g f = δh + hδ``)
can be applied to cochain vectors of the original complex afterwards.
Transposes of ``f`` and ``g`` act on chains and give the homology side.

Vectors passed in and out are dicts ``{cell: value}`` on one degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass
class ReductionConfig:
    """Pivot heuristics.  ``thresholds`` are the fill-cost limits tried in
    order; ``None`` means unlimited."""

    thresholds: tuple = (0, 1, 4, 16, 64, 256, None)


class CochainReduction:
    def __init__(self, K, p: int = 0, window: Optional[tuple[int, int]] = None,
                 config: Optional[ReductionConfig] = None):
        self.K = K
        self.p = p
        lo, hi = window if window is not None else (0, K.dim)
        self.lo, self.hi = max(lo, 0), min(hi, K.dim)
        self.config = config or ReductionConfig()
        # col[k][b] = coboundary of b in C^{k+1};  row[k][a] = {b : a in col[k][b]}
        self.col: dict[int, dict] = {}
        self.row: dict[int, dict] = {}
        self.alive: dict[int, set] = {}
        for d in range(self.lo, self.hi + 1):
            self.alive[d] = set(range(K.count(d)))
        for k in range(self.lo, self.hi):
            self._build(k)
        self.steps: list = []
        self._reduce()
        self.residual_cells = {d: sorted(self.alive[d]) for d in self.alive}
        self.position = {d: {c: i for i, c in enumerate(cells)} for d, cells in self.residual_cells.items()}

    # -- construction --------------------------------------------------------
    def _red(self, v):
        return v % self.p if self.p else v

    def _build(self, k: int):
        F = self.K.faces[k + 1]
        col: dict = {}
        for i in range(k + 2):
            sgn = -1 if i % 2 else 1
            for s, b in enumerate(F[:, i].tolist()):
                d = col.get(b)
                if d is None:
                    d = col[b] = {}
                d[s] = d.get(s, 0) + sgn
        row: dict = {}
        for b, d in col.items():
            for a in [a for a, v in d.items() if self._red(v) == 0]:
                del d[a]
            if self.p:
                for a in d:
                    d[a] %= self.p
            for a in d:
                row.setdefault(a, set()).add(b)
        for b in range(self.K.count(k)):
            col.setdefault(b, {})
        self.col[k] = col
        self.row[k] = row

    def _is_unit(self, v) -> bool:
        return v in (1, -1) if not self.p else v % self.p != 0

    def _inv(self, u):
        return u if not self.p else pow(u, -1, self.p)

    def _eliminate(self, k: int, b: int, a: int):
        col, row = self.col[k], self.row[k]
        dB = col[b]
        u = dB[a]
        uinv = self._inv(u)
        rowA = {x: col[x][a] for x in row[a] if x != b}
        dBrest = {y: v for y, v in dB.items() if y != a}
        for x, ca in rowA.items():
            c = self._red(ca * uinv)
            dx = col[x]
            del dx[a]
            for y, v in dBrest.items():
                nv = self._red(dx.get(y, 0) - c * v)
                if nv:
                    if y not in dx:
                        row[y].add(x)
                    dx[y] = nv
                elif y in dx:
                    del dx[y]
                    row[y].discard(x)
        for y in dB:
            row[y].discard(b)
        del col[b]
        del row[a]
        if k - 1 in self.col:
            colp, rowp = self.col[k - 1], self.row[k - 1]
            for z in rowp.pop(b, ()):
                del colp[z][b]
        if k + 1 in self.col:
            coln, rown = self.col[k + 1], self.row[k + 1]
            for z in coln.pop(a):
                rown[z].discard(a)
        self.alive[k].discard(b)
        self.alive[k + 1].discard(a)
        self.steps.append((k, b, a, u, rowA, dBrest))

    def _reduce(self):
        for thr in self.config.thresholds:
            changed = True
            while changed:
                changed = False
                for k in sorted(self.col):
                    col, row = self.col[k], self.row[k]
                    for b in list(col):
                        dB = col.get(b)
                        if not dB:
                            continue
                        best = None
                        for a, v in dB.items():
                            if self._is_unit(v):
                                n = len(row[a])
                                if best is None or n < best[0]:
                                    best = (n, a)
                        if best is None:
                            continue
                        cost = (best[0] - 1) * (len(dB) - 1)
                        if thr is None or cost <= thr:
                            self._eliminate(k, b, best[1])
                            changed = True

    # -- residual complex ----------------------------------------------------
    def residual_matrix(self, k: int) -> list[list[int]]:
        """Dense matrix of the residual δ_k : C'^k -> C'^{k+1} (rows = C'^{k+1})."""
        rows = self.residual_cells.get(k + 1, [])
        cols = self.residual_cells.get(k, [])
        M = [[0] * len(cols) for _ in rows]
        if k in self.col:
            pos = self.position[k + 1]
            for j, b in enumerate(cols):
                for a, v in self.col[k][b].items():
                    M[pos[a]][j] = v
        return M

    # -- chain equivalence data ---------------------------------------------
    def f(self, d: int, c: dict) -> dict:
        c = {x: v for x, v in c.items() if v}
        for k, b, a, u, rowA, dB in self.steps:
            if k + 1 == d:
                t = c.pop(a, 0)
                if t:
                    t = self._red(t * self._inv(u))
                    for y, v in dB.items():
                        nv = self._red(c.get(y, 0) - t * v)
                        if nv:
                            c[y] = nv
                        else:
                            c.pop(y, None)
            elif k == d:
                c.pop(b, None)
        return c

    def g(self, d: int, c: dict) -> dict:
        c = {x: v for x, v in c.items() if v}
        for k, b, a, u, rowA, dB in reversed(self.steps):
            if k == d:
                s = sum(ca * c[x] for x, ca in rowA.items() if x in c)
                s = self._red(-s * self._inv(u))
                if s:
                    c[b] = s
        return c

    def h(self, d: int, c: dict) -> dict:
        """Homotopy C^d -> C^{d-1}."""
        c = {x: v for x, v in c.items() if v}
        ts = []
        for j, (k, b, a, u, rowA, dB) in enumerate(self.steps):
            if k + 1 == d:
                t = c.pop(a, 0)
                if t:
                    t = self._red(t * self._inv(u))
                    ts.append((j, t))
                    for y, v in dB.items():
                        nv = self._red(c.get(y, 0) - t * v)
                        if nv:
                            c[y] = nv
                        else:
                            c.pop(y, None)
            elif k == d:
                c.pop(b, None)
        S: dict = {}
        tmap = dict(ts)
        for j in range(len(self.steps) - 1, -1, -1):
            k, b, a, u, rowA, dB = self.steps[j]
            if k != d - 1:
                continue
            if S:
                s = sum(ca * S[x] for x, ca in rowA.items() if x in S)
                s = self._red(-s * self._inv(u))
                if s:
                    S[b] = s
            t = tmap.get(j)
            if t:
                nv = self._red(S.get(b, 0) + t)
                if nv:
                    S[b] = nv
                else:
                    S.pop(b, None)
        return S

    def f_transpose(self, d: int, z: dict) -> dict:
        """Chain map from reduced chains to original chains (adjoint of ``f``)."""
        z = {x: v for x, v in z.items() if v}
        for k, b, a, u, rowA, dB in reversed(self.steps):
            if k + 1 == d:
                s = sum(v * z[y] for y, v in dB.items() if y in z)
                s = self._red(-s * self._inv(u))
                if s:
                    z[a] = s
        return z

    def g_transpose(self, d: int, z: dict) -> dict:
        """Chain map from original chains to reduced chains (adjoint of ``g``)."""
        z = {x: v for x, v in z.items() if v}
        for k, b, a, u, rowA, dB in self.steps:
            if k == d:
                t = z.pop(b, 0)
                if t:
                    t = self._red(t * self._inv(u))
                    for x, ca in rowA.items():
                        nv = self._red(z.get(x, 0) - t * ca)
                        if nv:
                            z[x] = nv
                        else:
                            z.pop(x, None)
            elif k + 1 == d:
                z.pop(a, None)
        return z

    # -- vector helpers --------------------------------------------------------
    def to_residual(self, d: int, c: dict) -> list[int]:
        pos = self.position.get(d, {})
        out = [0] * len(pos)
        for x, v in c.items():
            out[pos[x]] = v
        return out

    def from_residual(self, d: int, vec) -> dict:
        cells = self.residual_cells.get(d, [])
        return {cells[i]: int(v) for i, v in enumerate(vec) if v}


def to_dict(vec) -> dict:
    arr = np.asarray(vec)
    nz = np.nonzero(arr)[0]
    return {int(i): int(arr[i]) for i in nz}


def to_array(c: dict, n: int) -> np.ndarray:
    big = any(abs(v) >= 2 ** 62 for v in c.values())
    out = np.zeros(n, dtype=object if big else np.int64)
    for x, v in c.items():
        out[x] = v
    return out
