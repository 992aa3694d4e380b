"""Finite Δ-complexes (semi-simplicial sets), simplicial complexes and maps.

A :class:`DeltaComplex` stores, for every degree ``p >= 1``, an integer array
``faces[p]`` of shape ``(n_p, p + 1)`` whose entry ``[s, i]`` is the index of
the ``i``-th face of cell ``s`` (the face opposite its ``i``-th vertex).  The
vertex order of every cell is therefore part of the data, which is what the
Alexander-Whitney style formulas downstream depend on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .linalg import IntegerMatrix


class ComplexError(ValueError):
    """Malformed complex or map."""


class ActionNotFree(ComplexError):
    def __init__(self, element, simplex):
        self.element = element
        self.simplex = simplex
        super().__init__(f"group element {element} maps simplex {simplex} to itself")


def _as_face_array(rows, p: int) -> np.ndarray:
    arr = np.asarray(rows, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, p + 1), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != p + 1:
        raise ComplexError(f"degree {p}: expected {p + 1} faces per cell, got shape {arr.shape}")
    return arr


class DeltaComplex:
    """Immutable finite Δ-complex.

    ``counts[p]`` is the number of ``p``-cells; ``faces[p]`` (``p >= 1``) the
    face table.  Construction validates face ranges and the simplicial
    identities ``d_i d_j = d_{j-1} d_i`` for ``i < j``.
    """

    def __init__(self, n_vertices: int, faces: Sequence, labels: Optional[Sequence] = None,
                 name: str = "", validate: bool = True):
        self.faces: list[np.ndarray] = [np.zeros((int(n_vertices), 0), dtype=np.int64)]
        for p, rows in enumerate(faces, start=1):
            self.faces.append(_as_face_array(rows, p))
        while len(self.faces) > 1 and len(self.faces[-1]) == 0:
            self.faces.pop()
        self.counts = [len(f) for f in self.faces]
        self.labels = list(labels) if labels is not None else None
        self.name = name
        self.meta: dict = {}
        self._subface_cache: dict = {}
        self._vertex_cache: dict = {}
        if validate:
            self.validate()

    # -- basic structure -------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.counts) - 1 if self.counts[0] else -1

    def count(self, p: int) -> int:
        return self.counts[p] if 0 <= p < len(self.counts) else 0

    def n_cells(self) -> int:
        return sum(self.counts)

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * n for p, n in enumerate(self.counts))

    def __repr__(self):
        nm = f" {self.name!r}" if self.name else ""
        return f"<DeltaComplex{nm} dim={self.dim} f={self.counts}>"

    def validate(self):
        for p in range(1, len(self.faces)):
            f = self.faces[p]
            lo = self.counts[p - 1]
            if f.size and (f.min() < 0 or f.max() >= lo):
                bad = np.argwhere((f < 0) | (f >= lo))[0]
                raise ComplexError(
                    f"degree {p} cell {bad[0]}: face {bad[1]} refers to missing ({p - 1})-cell {f[bad[0], bad[1]]}")
            if p >= 2:
                g = self.faces[p - 1]
                for j in range(p + 1):
                    for i in range(j):
                        lhs = g[f[:, j], i]
                        rhs = g[f[:, i], j - 1]
                        if not np.array_equal(lhs, rhs):
                            s = int(np.argmax(lhs != rhs))
                            raise ComplexError(
                                f"degree {p} cell {s}: simplicial identity d_{i} d_{j} = d_{j - 1} d_{i} fails")

    # -- faces and vertices ------------------------------------------------
    def subface(self, p: int, keep: tuple) -> np.ndarray:
        """Index of the sub-cell spanned by local vertices ``keep`` for every ``p``-cell."""
        key = (p, keep)
        hit = self._subface_cache.get(key)
        if hit is not None:
            return hit
        idx = np.arange(self.count(p), dtype=np.int64)
        q = p
        for v in range(p, -1, -1):
            if v not in keep:
                idx = self.faces[q][idx, v]
                q -= 1
        self._subface_cache[key] = idx
        return idx

    def vertices(self, p: int) -> np.ndarray:
        """Array ``(n_p, p + 1)`` of the vertices of each ``p``-cell, in order."""
        hit = self._vertex_cache.get(p)
        if hit is not None:
            return hit
        if p == 0:
            out = np.arange(self.counts[0], dtype=np.int64)[:, None]
        else:
            prev = self.vertices(p - 1)
            f = self.faces[p]
            out = np.concatenate([prev[f[:, p]], prev[f[:, 0]][:, -1:]], axis=1)
        self._vertex_cache[p] = out
        return out

    def is_simplicial(self) -> bool:
        for p in range(1, self.dim + 1):
            v = self.vertices(p)
            if np.any(np.diff(v, axis=1) <= 0):
                return False
            if len({tuple(r) for r in v.tolist()}) != len(v):
                return False
        return True

    def to_simplicial(self) -> "SimplicialComplex":
        if not self.is_simplicial():
            raise ComplexError("complex is not simplicial (repeated or unordered vertices)")
        facets = set()
        covered = set()
        for p in range(self.dim, -1, -1):
            for row in self.vertices(p).tolist():
                t = tuple(row)
                if t not in covered:
                    facets.add(t)
                for r in range(1, len(t) + 1):
                    covered.update(itertools.combinations(t, r))
        return SimplicialComplex(sorted(facets), labels=self.labels, n_vertices=self.counts[0])

    # -- chain level ---------------------------------------------------------
    def coboundary(self, p: int, c: np.ndarray) -> np.ndarray:
        """δ of a ``p``-cochain (values on ``p``-cells) as a ``(p+1)``-cochain."""
        c = np.asarray(c)
        if p + 1 > self.dim:
            return np.zeros(0, dtype=c.dtype)
        f = self.faces[p + 1]
        out = np.zeros(len(f), dtype=c.dtype)
        for i in range(p + 2):
            if i % 2:
                out -= c[f[:, i]]
            else:
                out += c[f[:, i]]
        return out

    def boundary(self, p: int, x: np.ndarray) -> np.ndarray:
        """∂ of a ``p``-chain."""
        x = np.asarray(x)
        if p == 0:
            return np.zeros(0, dtype=x.dtype)
        f = self.faces[p]
        out = np.zeros(self.counts[p - 1], dtype=x.dtype)
        for i in range(p + 1):
            np.add.at(out, f[:, i], x if i % 2 == 0 else -x)
        return out

    def boundary_matrix(self, p: int) -> IntegerMatrix:
        rows = self.count(p - 1)
        cols = self.count(p)
        ent: dict = {}
        if p >= 1:
            for s, fs in enumerate(self.faces[p].tolist()):
                for i, t in enumerate(fs):
                    ent[(t, s)] = ent.get((t, s), 0) + (-1) ** i
        return IntegerMatrix(rows, cols, ent)

    def boundary_matrices(self) -> list[IntegerMatrix]:
        """``[∂_1, ..., ∂_dim]``; ``∂_p`` has shape ``(n_{p-1}, n_p)``."""
        return [self.boundary_matrix(p) for p in range(1, self.dim + 1)]

    # -- serialisation -------------------------------------------------------
    def to_json(self) -> dict:
        cells = [[[] for _ in range(self.counts[0])]]
        cells += [self.faces[p].tolist() for p in range(1, len(self.faces))]
        d = {"format": "delta", "cells": cells}
        if self.labels is not None:
            d["labels"] = [str(x) for x in self.labels]
        if self.name:
            d["name"] = self.name
        return d


@dataclass(frozen=True)
class SimplicialComplex:
    """Abstract simplicial complex given by its facets (sorted vertex tuples)."""

    facets: tuple
    labels: Optional[tuple] = None
    n_vertices: int = 0

    def __init__(self, facets, labels=None, n_vertices: Optional[int] = None):
        fs = []
        for f in facets:
            t = tuple(sorted(int(v) for v in f))
            if len(set(t)) != len(t):
                raise ComplexError(f"facet {f} repeats a vertex")
            fs.append(t)
        if len(set(fs)) != len(fs):
            raise ComplexError("facets are not distinct")
        nv = max((max(f) for f in fs if f), default=-1) + 1
        if n_vertices is not None:
            if n_vertices < nv:
                raise ComplexError("vertex index out of range")
            nv = n_vertices
        object.__setattr__(self, "facets", tuple(fs))
        object.__setattr__(self, "labels", tuple(labels) if labels is not None else None)
        object.__setattr__(self, "n_vertices", nv)

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def simplices(self) -> list[list[tuple]]:
        """All simplices by dimension, each list sorted lexicographically."""
        by_dim: list[set] = [set() for _ in range(self.dim + 1)]
        for f in self.facets:
            for r in range(1, len(f) + 1):
                for s in itertools.combinations(f, r):
                    by_dim[r - 1].add(s)
        by_dim[0] |= {(v,) for v in range(self.n_vertices)}
        return [sorted(s) for s in by_dim]

    def to_delta(self, name: str = "") -> DeltaComplex:
        simp = self.simplices()
        index = [{s: i for i, s in enumerate(level)} for level in simp]
        faces = []
        for p in range(1, len(simp)):
            rows = [[index[p - 1][s[:i] + s[i + 1:]] for i in range(p + 1)] for s in simp[p]]
            faces.append(rows)
        K = DeltaComplex(len(simp[0]), faces, labels=self.labels, name=name, validate=False)
        K.meta["simplices"] = simp
        K.meta["index"] = index
        return K

    def to_json(self) -> dict:
        labels = list(self.labels) if self.labels is not None else list(range(self.n_vertices))
        return {"format": "simplicial", "vertices": [str(x) for x in labels],
                "facets": [list(f) for f in self.facets]}


# ---------------------------------------------------------------------------
# maps


class DeltaMap:
    """Cellular map sending every cell to a cell of the same dimension or to a
    degenerate simplex (encoded as ``-1``).  This is the normalized-chain
    model of an order-preserving simplicial map."""

    def __init__(self, source: DeltaComplex, target: DeltaComplex, cell_map: Sequence, validate: bool = True):
        self.source = source
        self.target = target
        self.cell_map = [np.asarray(m, dtype=np.int64) for m in cell_map]
        if validate:
            self.validate()

    def validate(self):
        S, T = self.source, self.target
        if len(self.cell_map) != S.dim + 1:
            raise ComplexError("cell map must cover every degree of the source")
        for p in range(S.dim + 1):
            m = self.cell_map[p]
            if len(m) != S.count(p):
                raise ComplexError(f"degree {p}: cell map has wrong length")
            if p == 0 and np.any(m < 0):
                raise ComplexError("vertices cannot map to degenerate simplices")
            if np.any(m >= T.count(p)):
                raise ComplexError(f"degree {p}: image out of range")
            if p > T.dim:
                if np.any(m >= 0):
                    raise ComplexError(f"degree {p}: target has no cells in this degree")
                continue
            if p >= 1:
                ok = m >= 0
                src = np.nonzero(ok)[0]
                for i in range(p + 1):
                    lhs = self.cell_map[p - 1][S.faces[p][src, i]]
                    rhs = T.faces[p][m[src], i]
                    if not np.array_equal(lhs, rhs):
                        s = int(src[np.argmax(lhs != rhs)])
                        raise ComplexError(f"degree {p} cell {s}: map does not commute with face {i}")

    def pullback(self, p: int, c: np.ndarray) -> np.ndarray:
        c = np.asarray(c)
        m = self.cell_map[p] if p < len(self.cell_map) else np.zeros(0, dtype=np.int64)
        out = np.zeros(len(m), dtype=c.dtype)
        ok = m >= 0
        out[ok] = c[m[ok]]
        return out

    def pushforward(self, p: int, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        out = np.zeros(self.target.count(p), dtype=x.dtype)
        m = self.cell_map[p]
        ok = m >= 0
        np.add.at(out, m[ok], x[ok])
        return out

    def compose(self, other: "DeltaMap") -> "DeltaMap":
        """``other ∘ self``."""
        maps = []
        for p, m in enumerate(self.cell_map):
            o = other.cell_map[p]
            out = np.full(len(m), -1, dtype=np.int64)
            ok = m >= 0
            out[ok] = o[m[ok]]
            maps.append(out)
        return DeltaMap(self.source, other.target, maps, validate=False)


@dataclass
class SimplicialMap:
    """Vertex map between simplicial complexes."""

    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: tuple

    def __post_init__(self):
        self.vertex_map = tuple(int(v) for v in self.vertex_map)
        if len(self.vertex_map) != self.source.n_vertices:
            raise ComplexError("vertex map length mismatch")
        tsimp = set()
        for f in self.target.facets:
            for r in range(1, len(f) + 1):
                tsimp.update(itertools.combinations(f, r))
        for f in self.source.facets:
            img = tuple(sorted(set(self.vertex_map[v] for v in f)))
            if img not in tsimp:
                raise ComplexError(f"image of facet {f} is not a simplex of the target")

    def is_monotone(self) -> bool:
        for f in self.source.facets:
            img = [self.vertex_map[v] for v in f]
            if any(a > b for a, b in zip(img, img[1:])):
                return False
        return True

    def is_automorphism(self) -> bool:
        if self.source.n_vertices != self.target.n_vertices or len(set(self.vertex_map)) != len(self.vertex_map):
            return False
        img = {tuple(sorted(self.vertex_map[v] for v in f)) for f in self.source.facets}
        return img == set(self.target.facets)

    def to_delta(self, source: Optional[DeltaComplex] = None, target: Optional[DeltaComplex] = None) -> DeltaMap:
        if not self.is_monotone():
            raise ComplexError("simplicial map is not monotone on every simplex; subdivide first")
        S = source or self.source.to_delta()
        T = target or self.target.to_delta()
        sidx, tidx = S.meta["simplices"], T.meta["index"]
        maps = []
        for p, level in enumerate(sidx):
            out = np.full(len(level), -1, dtype=np.int64)
            for i, s in enumerate(level):
                img = tuple(self.vertex_map[v] for v in s)
                if len(set(img)) == len(img):
                    out[i] = tidx[p][img]
            maps.append(out)
        return DeltaMap(S, T, maps)


def identity_map(K: DeltaComplex) -> DeltaMap:
    return DeltaMap(K, K, [np.arange(n, dtype=np.int64) for n in K.counts], validate=False)


# ---------------------------------------------------------------------------
# constructions


def point() -> DeltaComplex:
    return DeltaComplex(1, [], name="point")


def simplex(n: int) -> DeltaComplex:
    return SimplicialComplex([tuple(range(n + 1))]).to_delta(name=f"simplex({n})")


def delta_circle() -> DeltaComplex:
    """One vertex, one loop edge."""
    return DeltaComplex(1, [[[0, 0]]], name="circle")


def polygon(m: int) -> SimplicialComplex:
    if m < 3:
        raise ComplexError("a simplicial polygon needs at least 3 vertices")
    return SimplicialComplex([tuple(sorted((i, (i + 1) % m))) for i in range(m)])


def _staircase_paths(p: int, q: int):
    """Monotone lattice paths (0,0)->(p,q) taking steps A=(1,0), B=(0,1), D=(1,1)."""
    out = []

    def rec(a, b, steps):
        if a == p and b == q:
            out.append(tuple(steps))
            return
        if a < p:
            rec(a + 1, b, steps + ["A"])
        if b < q:
            rec(a, b + 1, steps + ["B"])
        if a < p and b < q:
            rec(a + 1, b + 1, steps + ["D"])

    rec(0, 0, [])
    return out


def _path_points(path):
    pts = [(0, 0)]
    for s in path:
        a, b = pts[-1]
        pts.append((a + (s != "B"), b + (s != "A")))
    return pts


def _points_to_path(pts):
    steps = []
    for (a0, b0), (a1, b1) in zip(pts, pts[1:]):
        steps.append("D" if (a1 > a0 and b1 > b0) else ("A" if a1 > a0 else "B"))
    return tuple(steps)


def product(K: DeltaComplex, L: DeltaComplex) -> DeltaComplex:
    """Cartesian product triangulated by staircase paths (Eilenberg-Zilber).

    A cell is a triple (σ, τ, path) with σ ∈ K_p, τ ∈ L_q and a strictly
    increasing lattice path through [0,p]×[0,q] hitting every row and column.
    """
    nK, nL = K.counts, L.counts
    dim = K.dim + L.dim
    blocks: list[list[tuple]] = [[] for _ in range(dim + 1)]
    offset: dict = {}
    for r in range(dim + 1):
        pos = 0
        for p in range(min(r, K.dim) + 1):
            for q in range(min(r, L.dim) + 1):
                if p + q < r or max(p, q) > r:
                    continue
                for path in _staircase_paths(p, q):
                    if len(path) != r:
                        continue
                    offset[(p, q, path)] = pos
                    blocks[r].append((p, q, path, pos))
                    pos += nK[p] * nL[q]
    faces = []
    for r in range(1, dim + 1):
        total = sum(nK[p] * nL[q] for p, q, _, _ in blocks[r])
        F = np.zeros((total, r + 1), dtype=np.int64)
        for p, q, path, pos in blocks[r]:
            n = nK[p] * nL[q]
            if n == 0:
                continue
            pts = _path_points(path)
            sig = np.repeat(np.arange(nK[p], dtype=np.int64), nL[q])
            tau = np.tile(np.arange(nL[q], dtype=np.int64), nK[p])
            for k in range(r + 1):
                rest = pts[:k] + pts[k + 1:]
                a_k, b_k = pts[k]
                s2, t2 = sig, tau
                p2, q2 = p, q
                if all(pt[0] != a_k for pt in rest):
                    s2 = K.faces[p][sig, a_k]
                    p2 -= 1
                    rest = [(a - (a > a_k), b) for a, b in rest]
                if all(pt[1] != b_k for pt in rest):
                    t2 = L.faces[q][tau, b_k]
                    q2 -= 1
                    rest = [(a, b - (b > b_k)) for a, b in rest]
                off = offset[(p2, q2, _points_to_path(rest))]
                F[pos:pos + n, k] = off + s2 * nL[q2] + t2
        faces.append(F)
    P = DeltaComplex(nK[0] * nL[0], faces, name=f"{K.name or 'K'}x{L.name or 'L'}", validate=False)
    P.meta["product"] = {"factors": (K, L), "blocks": blocks, "offset": offset}
    return P


def projections(P: DeltaComplex) -> tuple[DeltaMap, DeltaMap]:
    """The two coordinate projections of a complex built by :func:`product`."""
    info = P.meta.get("product")
    if info is None:
        raise ComplexError("not a product complex")
    K, L = info["factors"]
    mk, ml = [], []
    for r, blocks in enumerate(info["blocks"]):
        a = np.full(P.count(r), -1, dtype=np.int64)
        b = np.full(P.count(r), -1, dtype=np.int64)
        for p, q, path, pos in blocks:
            n = K.count(p) * L.count(q)
            if n == 0:
                continue
            sig = np.repeat(np.arange(K.count(p), dtype=np.int64), L.count(q))
            tau = np.tile(np.arange(L.count(q), dtype=np.int64), K.count(p))
            if "B" not in path:
                a[pos:pos + n] = sig
            if "A" not in path:
                b[pos:pos + n] = tau
        mk.append(a)
        ml.append(b)
    return DeltaMap(P, K, mk, validate=False), DeltaMap(P, L, ml, validate=False)


def shuffle_sign(path) -> int:
    """Sign of the (p,q)-shuffle encoded by an A/B path."""
    inv = 0
    bs = 0
    for s in path:
        if s == "B":
            bs += 1
        else:
            inv += bs
    return -1 if inv % 2 else 1


def quotient_cells(K: DeltaComplex, rep: Sequence[np.ndarray], name: str = "") -> tuple[DeltaComplex, DeltaMap]:
    """Identify cells ``s ~ rep[p][s]``; representatives must satisfy ``rep[rep] == rep``
    and be compatible with faces.  Returns the quotient and the quotient map."""
    rep = [np.asarray(r, dtype=np.int64) for r in rep]
    new_id = []
    for p, r in enumerate(rep):
        if not np.array_equal(r[r], r):
            raise ComplexError(f"degree {p}: representative map is not idempotent")
        keep = np.nonzero(r == np.arange(len(r)))[0]
        ids = np.full(len(r), -1, dtype=np.int64)
        ids[keep] = np.arange(len(keep))
        new_id.append(ids[r])
    faces = []
    for p in range(1, len(rep)):
        keep = np.nonzero(rep[p] == np.arange(len(rep[p])))[0]
        F = new_id[p - 1][K.faces[p][keep]]
        G = new_id[p - 1][K.faces[p]]
        if not np.array_equal(F[new_id[p]], G):
            raise ComplexError(f"degree {p}: identification is not compatible with faces")
        faces.append(F)
    labels = None
    if K.labels is not None:
        keep0 = np.nonzero(rep[0] == np.arange(len(rep[0])))[0]
        labels = [K.labels[i] for i in keep0]
    Q = DeltaComplex(int((rep[0] == np.arange(len(rep[0]))).sum()), faces, labels=labels, name=name)
    return Q, DeltaMap(K, Q, new_id, validate=False)


def mapping_torus(K: DeltaComplex, f: DeltaMap) -> DeltaComplex:
    """``K × [0,1] / (x,1) ~ (f(x),0)`` for a nondegenerate cellular self-map ``f``."""
    if isinstance(f, SimplicialMap):
        f = f.to_delta(K, K)
    if f.source.counts != K.counts or f.target.counts != K.counts:
        raise ComplexError("mapping torus needs a self-map of K")
    if any(np.any(m < 0) for m in f.cell_map):
        raise ComplexError("self-map must be nondegenerate (monotone and injective on simplices)")
    I = simplex(1)
    P = product(K, I)
    info = P.meta["product"]
    rep = [np.arange(n, dtype=np.int64) for n in P.counts]
    for p in range(K.dim + 1):
        path = ("A",) * p
        pos = info["offset"][(p, 0, path)]
        # block layout: index = pos + σ·2 + t, where t ∈ {0, 1} is the vertex of I
        sig = np.arange(K.count(p))
        rep[p][pos + 2 * sig + 1] = pos + 2 * f.cell_map[p][sig]
    M, _ = quotient_cells(P, rep, name=f"T({K.name or 'K'})")
    return M


def join_with_points(K: DeltaComplex, n_points: int = 2) -> DeltaComplex:
    """Ordered join ``K * {c_1..c_m}`` (suspension for two points)."""
    cells: dict = {}
    layers: list[list] = [[] for _ in range(K.dim + 2)]
    for p in range(K.dim + 1):
        for s in range(K.count(p)):
            cells[("K", p, s)] = len(layers[p])
            layers[p].append(("K", p, s))
    for c in range(n_points):
        cells[("c", c)] = len(layers[0])
        layers[0].append(("c", c))
    for c in range(n_points):
        for p in range(K.dim + 1):
            for s in range(K.count(p)):
                cells[("J", p, s, c)] = len(layers[p + 1])
                layers[p + 1].append(("J", p, s, c))
    faces = []
    for r in range(1, K.dim + 2):
        rows = []
        for cell in layers[r]:
            if cell[0] == "K":
                rows.append([cells[("K", r - 1, int(t))] for t in K.faces[r][cell[2]]])
            else:
                _, p, s, c = cell
                row = []
                for i in range(p + 1):
                    if p == 0:
                        row.append(cells[("c", c)])
                    else:
                        row.append(cells[("J", p - 1, int(K.faces[p][s, i]), c)])
                row.append(cells[("K", p, s)])
                rows.append(row)
        faces.append(rows)
    return DeltaComplex(len(layers[0]), faces, name=f"S({K.name})")


def suspension(K: DeltaComplex) -> DeltaComplex:
    return join_with_points(K, 2)


# ---------------------------------------------------------------------------
# subdivision and group quotients


def barycentric_subdivision(K):
    """Barycentric subdivision.

    For a :class:`SimplicialComplex` the result is the simplicial complex of
    chains of simplices (vertices ordered by dimension, then lexicographically).
    For a general :class:`DeltaComplex` the result is the Δ-complex of flags
    ``(c, S_0 ⊂ ... ⊂ S_k = all vertices of c)``.
    """
    if isinstance(K, SimplicialComplex):
        simp = [s for level in K.simplices() for s in level]
        vid = {s: i for i, s in enumerate(simp)}
        facets = []

        def chains(top):
            if len(top) == 1:
                return [[top]]
            out = []
            for i in range(len(top)):
                sub = top[:i] + top[i + 1:]
                for ch in chains(sub):
                    out.append(ch + [top])
            return out

        for f in K.facets:
            for ch in chains(f):
                facets.append(tuple(vid[s] for s in ch))
        labels = ["".join(str(K.labels[v]) if K.labels else str(v) for v in s) for s in simp]
        return SimplicialComplex(facets, labels=labels, n_vertices=len(simp))
    return _delta_subdivision(K)


def _delta_subdivision(K: DeltaComplex) -> DeltaComplex:
    layers: list[list] = [[] for _ in range(K.dim + 1)]
    index: dict = {}

    def flags(n):
        full = (1 << (n + 1)) - 1
        out = []

        def rec(chain):
            first = chain[0]
            out.append(tuple(chain))
            sub = first
            # proper nonempty subsets of `first`
            s = (sub - 1) & first
            while s:
                rec([s] + chain)
                s = (s - 1) & first

        rec([full])
        return out

    flag_cache = {n: flags(n) for n in range(K.dim + 1)}
    for d in range(K.dim + 1):
        for c in range(K.count(d)):
            for fl in flag_cache[d]:
                k = len(fl) - 1
                index[(d, c, fl)] = len(layers[k])
                layers[k].append((d, c, fl))

    def local(mask):
        return [i for i in range(mask.bit_length()) if mask >> i & 1]

    def restrict(fl, within):
        pos = {v: i for i, v in enumerate(local(within))}
        out = []
        for m in fl:
            nm = 0
            for v in local(m):
                nm |= 1 << pos[v]
            out.append(nm)
        return tuple(out)

    faces = []
    for k in range(1, K.dim + 1):
        rows = []
        for d, c, fl in layers[k]:
            row = []
            for j in range(k + 1):
                if j < k:
                    row.append(index[(d, c, fl[:j] + fl[j + 1:])])
                else:
                    sub = fl[k - 1]
                    keep = tuple(local(sub))
                    c2 = int(K.subface(d, keep)[c])
                    row.append(index[(len(keep) - 1, c2, restrict(fl[:k], sub))])
            rows.append(row)
        faces.append(rows)
    return DeltaComplex(len(layers[0]), faces, name=f"sd({K.name})")


def _group_closure(gens: list[tuple]) -> list[tuple]:
    n = len(gens[0]) if gens else 0
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = tuple(h[g[i]] for i in range(n))
                if gh not in seen:
                    seen.add(gh)
                    nxt.append(gh)
        frontier = nxt
    return sorted(seen)


def quotient_by_free_action(K: SimplicialComplex, generators: Sequence, return_map: bool = False):
    """Orbit complex ``|K|/G`` of a free simplicial group action.

    ``generators`` are :class:`SimplicialMap` automorphisms (or raw vertex
    permutations).  The complex is subdivided barycentrically (at most twice)
    until every non-identity element moves every simplex off itself and
    preserves vertex orders; the orbit Δ-complex is then formed.
    """
    gens = []
    for g in generators:
        if isinstance(g, SimplicialMap):
            if not g.is_automorphism():
                raise ComplexError("generator is not a simplicial automorphism")
            gens.append(g.vertex_map)
        else:
            g = tuple(int(v) for v in g)
            if not SimplicialMap(K, K, g).is_automorphism():
                raise ComplexError("generator is not a simplicial automorphism")
            gens.append(g)
    if not gens:
        gens = [tuple(range(K.n_vertices))]
    group = _group_closure(gens)
    ident = tuple(range(K.n_vertices))
    nontrivial = [g for g in group if g != ident]

    all_simplices = [s for level in K.simplices() for s in level]
    for g in nontrivial:
        for s in all_simplices:
            if tuple(sorted(g[v] for v in s)) == s:
                raise ActionNotFree(g, s)

    current, action, rounds = K, group, 0
    while True:
        simp = [s for level in current.simplices() for s in level]
        good = True
        for g in action:
            if g == tuple(range(current.n_vertices)):
                continue
            for s in simp:
                img = [g[v] for v in s]
                if set(img) & set(s) or any(a > b for a, b in zip(img, img[1:])):
                    good = False
                    break
            if not good:
                break
        if good:
            break
        if rounds == 2:
            raise ComplexError("action still not order-preserving after two subdivisions")
        sd = barycentric_subdivision(current)
        old = [s for level in current.simplices() for s in level]
        vid = {s: i for i, s in enumerate(old)}
        action = [tuple(vid[tuple(sorted(g[v] for v in s))] for s in old) for g in action]
        current, rounds = sd, rounds + 1

    D = current.to_delta()
    index = D.meta["index"]
    rep = []
    for p, level in enumerate(D.meta["simplices"]):
        r = np.arange(len(level), dtype=np.int64)
        for i, s in enumerate(level):
            r[i] = min(index[p][tuple(g[v] for v in s)] for g in action)
        rep.append(r)
    Q, qmap = quotient_cells(D, rep, name="quotient")
    if D.euler_characteristic() != Q.euler_characteristic() * len(group):
        raise ComplexError("Euler characteristic check failed for orbit complex")
    Q.meta["cover"] = D
    Q.meta["group_order"] = len(group)
    Q.meta["subdivisions"] = rounds
    if return_map:
        return Q, qmap
    return Q


# ---------------------------------------------------------------------------
# JSON


def complex_from_json(d: dict):
    """Parse the simplicial or delta JSON form; raises :class:`ComplexError`
    with the offending position on malformed input."""
    fmt = d.get("format")
    if fmt == "simplicial":
        verts = d.get("vertices", [])
        for k, f in enumerate(d.get("facets", [])):
            for j, v in enumerate(f):
                if not isinstance(v, int) or not 0 <= v < len(verts):
                    raise ComplexError(f"facets[{k}][{j}]: vertex index {v!r} out of range")
        return SimplicialComplex(d["facets"], labels=verts, n_vertices=len(verts)).to_delta(name=d.get("name", ""))
    if fmt == "delta":
        cells = d.get("cells")
        if not isinstance(cells, list) or not cells:
            raise ComplexError("delta form needs a nonempty 'cells' list")
        n0 = len(cells[0])
        faces = []
        for p in range(1, len(cells)):
            for k, fs in enumerate(cells[p]):
                if not isinstance(fs, list) or len(fs) != p + 1:
                    raise ComplexError(f"cells[{p}][{k}]: expected {p + 1} faces")
                lo = len(cells[p - 1])
                for j, t in enumerate(fs):
                    if not isinstance(t, int) or not 0 <= t < lo:
                        raise ComplexError(f"cells[{p}][{k}][{j}]: face id {t!r} out of range")
            faces.append(cells[p])
        return DeltaComplex(n0, faces, labels=d.get("labels"), name=d.get("name", ""))
    raise ComplexError(f"unknown complex format {fmt!r}")
