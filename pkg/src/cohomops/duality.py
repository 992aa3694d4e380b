"""Fundamental classes, cap products, Poincaré duals and characteristic classes.

Cap product convention (back face):
``[v0 ... vn] ⌢ φ = φ(v_{n-k} ... v_n) · [v0 ... v_{n-k}]`` for ``deg φ = k``,
so that ``<a ∪ φ, z> = <a, z ⌢ φ>`` with the front-face cup product.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cohomology import (CohomologyClass, RingMismatch, cohomology, homology,
                         homology_coordinates, parse_ring, reduce_coefficients)
from .linalg import NoSolution, solve_linear
from .steenrod import bockstein, cup, sq

MOD2_ONLY = "Mod2Only"


class NotPseudomanifold(ValueError):
    def __init__(self, cell, reason: str):
        self.cell = cell
        super().__init__(f"not a closed pseudomanifold: {reason} (cell {cell})")


class NotOrientable(ValueError):
    def __init__(self, cycle):
        self.cycle = cycle
        super().__init__(f"no coherent orientation; inconsistent loop of facets {cycle}")


class DegeneratePairing(ValueError):
    pass


class DualityFailure(ValueError):
    def __init__(self, message, certificate=None):
        self.certificate = certificate
        super().__init__(message)


@dataclass(eq=False)
class Chain:
    complex: object
    degree: int
    p: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.p:
            self.values = np.mod(self.values, self.p)


@dataclass(eq=False)
class FundamentalClass:
    """Top-dimensional cycle with ±1 (Z) or 1 (Z/2) on every facet.

    ``orientation`` is the per-facet sign vector over Z, or ``MOD2_ONLY``.
    """

    complex: object
    p: int
    cycle: np.ndarray
    orientation: object

    @property
    def degree(self) -> int:
        return self.complex.dim

    def chain(self) -> Chain:
        return Chain(self.complex, self.degree, self.p, self.cycle)


def _ridge_incidences(K):
    n = K.dim
    F = K.faces[n]
    inc: list[list] = [[] for _ in range(K.count(n - 1))]
    for i in range(n + 1):
        for s, r in enumerate(F[:, i].tolist()):
            inc[r].append((s, i))
    return inc


def check_closed_pseudomanifold(K):
    """Raise :class:`NotPseudomanifold` unless every ridge has exactly two
    facet incidences, every cell lies in a facet and the dual graph is connected."""
    n = K.dim
    if n < 1:
        raise NotPseudomanifold(None, "dimension must be at least 1")
    inc = K.meta.get("_ridges")
    if inc is None:
        inc = K.meta["_ridges"] = _ridge_incidences(K)
    for r, lst in enumerate(inc):
        if len(lst) != 2:
            raise NotPseudomanifold((n - 1, r), f"ridge lies in {len(lst)} facet incidences")
    for d in range(n - 1, -1, -1):
        hit = np.zeros(K.count(d), dtype=bool)
        src = K.faces[d + 1]
        hit[src.ravel()] = True
        if not hit.all():
            raise NotPseudomanifold((d, int(np.argmin(hit))), "cell is not a face of any facet")
    seen = np.zeros(K.count(n), dtype=bool)
    seen[0] = True
    queue = deque([0])
    F = K.faces[n]
    while queue:
        s = queue.popleft()
        for r in F[s].tolist():
            for t, _ in inc[r]:
                if not seen[t]:
                    seen[t] = True
                    queue.append(t)
    if not seen.all():
        raise NotPseudomanifold((n, int(np.argmin(seen))), "dual graph is disconnected")


def fundamental_class(K, ring=0) -> FundamentalClass:
    p = parse_ring(ring)
    cache = K.meta.setdefault("_fundamental", {})
    if p in cache:
        hit = cache[p]
        if isinstance(hit, Exception):
            raise hit
        return hit
    check_closed_pseudomanifold(K)
    n = K.dim
    N = K.count(n)
    if p == 2:
        fc = FundamentalClass(K, 2, np.ones(N, dtype=np.int64), MOD2_ONLY)
        cache[p] = fc
        return fc
    inc = K.meta["_ridges"]
    F = K.faces[n]
    sign = np.zeros(N, dtype=np.int64)
    parent = np.full(N, -1, dtype=np.int64)
    sign[0] = 1
    queue = deque([0])
    try:
        while queue:
            s = queue.popleft()
            for i, r in enumerate(F[s].tolist()):
                (s1, i1), (s2, i2) = inc[r]
                if (s1, i1) == (s, i):
                    t, j = s2, i2
                else:
                    t, j = s1, i1
                # ε_s (-1)^i + ε_t (-1)^j = 0
                want = -sign[s] * (-1) ** i * (-1) ** j
                if sign[t] == 0:
                    sign[t] = want
                    parent[t] = s
                    queue.append(t)
                elif sign[t] != want:
                    raise NotOrientable(_loop(parent, s, t))
    except NotOrientable as e:
        cache[p] = e
        raise
    cycle = sign if p == 0 else np.mod(sign, p)
    fc = FundamentalClass(K, p, cycle, sign.copy())
    cache[p] = fc
    return fc


def _loop(parent, s, t):
    """Facets from ``s`` up the BFS tree to the common ancestor and down to ``t``."""
    def path(x):
        out = [int(x)]
        while parent[x] >= 0:
            x = parent[x]
            out.append(int(x))
        return out
    ps, pt = path(s), path(t)
    on_t = set(pt)
    i = next(i for i, x in enumerate(ps) if x in on_t)
    j = pt.index(ps[i])
    return ps[:i + 1] + pt[:j][::-1]


def is_orientable(K) -> bool:
    try:
        fundamental_class(K, 0)
        return True
    except NotOrientable:
        return False


def cap_values(K, z: np.ndarray, n: int, phi: np.ndarray, k: int) -> np.ndarray:
    """``z ⌢ φ`` for an ``n``-chain ``z`` and ``k``-cochain ``φ`` (raw vectors)."""
    if k > n:
        raise ValueError("cochain degree exceeds chain degree")
    front = K.subface(n, tuple(range(n - k + 1)))
    back = K.subface(n, tuple(range(n - k, n + 1)))
    coef = np.asarray(z) * np.asarray(phi)[back]
    out = np.zeros(K.count(n - k), dtype=coef.dtype)
    np.add.at(out, front, coef)
    return out


def cap(phi, z) -> Chain:
    """Cap product of a class (or cochain) with a chain or fundamental class."""
    if isinstance(z, FundamentalClass):
        z = z.chain()
    if phi.complex is not z.complex:
        raise ValueError("cochain and chain live on different complexes")
    if phi.p and z.p and phi.p != z.p:
        raise RingMismatch("ring mismatch in cap product")
    p = phi.p or z.p
    if phi.degree > z.degree:
        raise ValueError("cochain degree exceeds chain degree")
    vals = cap_values(z.complex, z.values, z.degree, phi.cochain, phi.degree)
    return Chain(z.complex, z.degree - phi.degree, p, vals)


def evaluate(phi, z) -> int:
    """Kronecker pairing ``<φ, z>``."""
    v = int(np.dot(np.asarray(phi.cochain, dtype=object), np.asarray(z.values, dtype=object)))
    p = phi.p or z.p
    return v % p if p else v


def poincare_dual(alpha: Chain, mu: FundamentalClass) -> CohomologyClass:
    """The class ``φ`` of degree ``n - k`` with ``[μ ⌢ φ] = [α]``."""
    K = mu.complex
    p = mu.p
    if alpha.complex is not K:
        raise ValueError("class and fundamental class live on different complexes")
    n, k = K.dim, alpha.degree
    H = homology(K, p, k)
    target = homology_coordinates(K, p, k, alpha.values)
    G = cohomology(K, p, n - k)
    cols = [homology_coordinates(K, p, k, cap_values(K, mu.cycle, n, b, n - k)) for b in G.basis]
    orders = [p] * H.free_rank if p else H.torsion + [0] * H.free_rank
    rows = len(target)
    A = [[cols[j][i] for j in range(len(cols))] for i in range(rows)]
    if p:
        sol = solve_linear(A, target, p) if rows else []
    else:
        # torsion rows hold modulo their order: add slack columns t_i e_i
        slack = [[orders[i] if (i == r and orders[i]) else 0 for r in range(rows)] for i in range(rows)]
        Aext = [A[i] + slack[i] for i in range(rows)]
        sol = solve_linear(Aext, target) if rows else []
    if isinstance(sol, NoSolution):
        raise DualityFailure("no Poincaré dual: cap with the fundamental class does not hit the class", sol)
    x = list(sol)[:len(G.basis)]
    x = [int(v) % o if o else int(v) for v, o in zip(x, G.orders)]
    return G.element(x)


# ---------------------------------------------------------------------------
# characteristic classes


@dataclass
class CharClassBundle:
    """Wu classes ``v[k]``, Stiefel-Whitney classes ``w[k]`` (index = degree,
    index 0 the unit), integral ``W3`` and the Spin^c verdict."""

    v: list
    w: list
    W3: CohomologyClass
    spin_c: bool
    orientable: bool
    W3_certificate: object = field(default=None, repr=False)


def _pair2(c, mu2) -> int:
    return int(np.dot(np.asarray(c, dtype=np.int64) & 1, mu2.cycle & 1)) % 2


def _zero(K, d, p):
    return CohomologyClass(K, d, p, np.zeros(K.count(d), dtype=np.int64))


def wu_classes(K) -> list:
    mu2 = fundamental_class(K, 2)
    n = K.dim
    v = [CohomologyClass(K, 0, 2, np.ones(K.count(0), dtype=np.int64))]
    for k in range(1, n // 2 + 1):
        Gk = cohomology(K, 2, k)
        Gc = cohomology(K, 2, n - k)
        if Gk.rank != Gc.rank:
            raise DegeneratePairing(f"dim H^{k} = {Gk.rank} but dim H^{n - k} = {Gc.rank}")
        if Gk.rank == 0:
            v.append(_zero(K, k, 2))
            continue
        e = Gk.generators()
        x = Gc.generators()
        P = [[_pair2(cup(ei, xj).cochain, mu2) for ei in e] for xj in x]   # P[j][i]
        rhs = [_pair2(sq(k, xj).cochain, mu2) for xj in x]
        from .linalg import smith_normal_form
        if smith_normal_form(P, p=2, track=False).rank != len(e):
            raise DegeneratePairing(f"mod-2 pairing H^{k} x H^{n - k} is degenerate")
        c = solve_linear(P, rhs, 2)
        cochain = np.zeros(K.count(k), dtype=np.int64)
        for ci, ei in zip(c, e):
            if ci:
                cochain = cochain + ei.cochain
        v.append(CohomologyClass(K, k, 2, cochain))
    return v


def wu_and_sw_classes(K) -> CharClassBundle:
    cache = K.meta.setdefault("_charclasses", {})
    if "bundle" in cache:
        return cache["bundle"]
    n = K.dim
    v = wu_classes(K)
    w = []
    for m in range(n + 1):
        acc = np.zeros(K.count(m), dtype=np.int64)
        for i in range(0, min(m, len(v) - 1) + 1):
            if m - i <= i:
                acc = acc + sq(m - i, v[i]).cochain
        w.append(CohomologyClass(K, m, 2, acc))
    if n >= 3:
        W3 = bockstein(w[2], "integral")
    else:
        W3 = _zero(K, 3, 0)
    from .cohomology import is_coboundary
    cert = is_coboundary(W3.cochain, K, 0, 3)
    orientable = is_orientable(K)
    # Spin^c needs an orientation as well as W3 = 0
    b = CharClassBundle(v=v, w=w, W3=W3, spin_c=orientable and bool(cert.is_coboundary),
                        orientable=orientable, W3_certificate=cert)
    cache["bundle"] = b
    return b


def spinc_obstruction(K):
    b = wu_and_sw_classes(K)
    return b.W3, b.spin_c
