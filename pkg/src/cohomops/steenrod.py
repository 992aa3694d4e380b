"""Cup and cup-i products, Steenrod squares, Bockstein operators and Sq³̄.

Cochains are numpy vectors indexed by the cells of one degree.  Face
selection uses :meth:`DeltaComplex.subface`, so every formula is a handful
of vectorised gathers over the cells of the target degree.

Conventions: the cup product is the Alexander-Whitney front-face/back-face
product; the integral Bockstein of a mod-``p`` cocycle ``c`` is
``δ(c̃)/p`` where ``c̃`` is the lift with entries in ``[0, p)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cohomology import CohomologyClass, RingMismatch, reduce_coefficients


@dataclass(eq=False)
class Cochain:
    """A cochain that need not be a cocycle."""

    complex: object
    degree: int
    p: int
    cochain: np.ndarray

    def __post_init__(self):
        self.cochain = np.asarray(self.cochain)
        if self.p:
            self.cochain = np.mod(self.cochain, self.p)


def _pair(a, b):
    if a.complex is not b.complex:
        raise ValueError("cochains live on different complexes")
    if a.p != b.p:
        raise RingMismatch(f"ring mismatch: Z/{a.p} vs Z/{b.p}" if a.p and b.p else "ring mismatch")


def _wrap(like_a, like_b, K, degree, p, values):
    if isinstance(like_a, CohomologyClass) and isinstance(like_b, CohomologyClass):
        return CohomologyClass(K, degree, p, values)
    return Cochain(K, degree, p, values)


def cup_cochains(K, a: np.ndarray, p: int, b: np.ndarray, q: int, mod: int = 0) -> np.ndarray:
    n = p + q
    if n > K.dim:
        return np.zeros(0, dtype=np.int64)
    front = K.subface(n, tuple(range(p + 1)))
    back = K.subface(n, tuple(range(p, n + 1)))
    out = np.asarray(a)[front] * np.asarray(b)[back]
    return np.mod(out, mod) if mod else out


def cup(a, b):
    """Alexander-Whitney cup product of two classes (or cochains)."""
    _pair(a, b)
    K = a.complex
    vals = cup_cochains(K, a.cochain, a.degree, b.cochain, b.degree, a.p)
    return _wrap(a, b, K, a.degree + b.degree, a.p, vals)


@lru_cache(maxsize=None)
def cup_i_terms(p: int, q: int, i: int) -> tuple:
    """Pairs ``(front_keep, back_keep)`` of local vertex sets for ``∪_i`` of
    a ``p``-cochain with a ``q``-cochain on an ``(p+q-i)``-simplex.

    For ``U = {u_1 < ... < u_{n-i}} ⊆ {0..n}`` put ``u_j`` into ``U⁰`` when
    ``u_j + j`` is even and into ``U¹`` otherwise; the term is
    ``a(d_{U⁰} σ) · b(d_{U¹} σ)``.  For ``i = 0`` this is Alexander-Whitney.
    """
    n = p + q - i
    terms = []
    for U in itertools.combinations(range(n + 1), n - i):
        U0 = {u for j, u in enumerate(U, start=1) if (u + j) % 2 == 0}
        U1 = set(U) - U0
        front = tuple(v for v in range(n + 1) if v not in U0)
        back = tuple(v for v in range(n + 1) if v not in U1)
        if len(front) == p + 1 and len(back) == q + 1:
            terms.append((front, back))
    return tuple(terms)


def cup_i_cochains(K, a: np.ndarray, p: int, b: np.ndarray, q: int, i: int) -> np.ndarray:
    """Mod-2 ``a ∪_i b`` as a ``(p+q-i)``-cochain (0/1 entries)."""
    if i < 0:
        raise ValueError("cup-i index must be non-negative")
    n = p + q - i
    if n > K.dim:
        return np.zeros(0, dtype=np.int64)
    if n < 0:
        raise ValueError("cup-i index too large")
    a2 = np.asarray(a) & 1
    b2 = np.asarray(b) & 1
    out = np.zeros(K.count(n), dtype=np.int64)
    for front, back in cup_i_terms(p, q, i):
        out ^= a2[K.subface(n, front)] & b2[K.subface(n, back)]
    return out


def cup_i(a, b, i: int):
    """Mod-2 cup-``i`` product at cochain level."""
    _pair(a, b)
    if a.p != 2:
        raise RingMismatch("cup-i products are defined here with Z/2 coefficients")
    if i < 0 or i > min(a.degree, b.degree):
        raise ValueError(f"cup-i index {i} out of range 0..{min(a.degree, b.degree)}")
    K = a.complex
    vals = cup_i_cochains(K, a.cochain, a.degree, b.cochain, b.degree, i)
    return _wrap(a, b, K, a.degree + b.degree - i, 2, vals)


def sq(k: int, x) -> CohomologyClass:
    """``Sq^k x = x ∪_{n-k} x`` for ``x`` of degree ``n``."""
    if k < 0:
        raise ValueError("Sq^k needs k >= 0")
    if x.p != 2:
        raise RingMismatch("Steenrod squares act on Z/2 classes")
    n = x.degree
    K = x.complex
    if k > n:
        vals = np.zeros(K.count(n + k), dtype=np.int64)
    else:
        vals = cup_i_cochains(K, x.cochain, n, x.cochain, n, n - k)
    return _wrap(x, x, K, n + k, 2, vals)


def total_sq(x) -> list:
    """``[Sq^0 x, ..., Sq^n x]``."""
    return [sq(k, x) for k in range(x.degree + 1)]


def bockstein(x, kind: str = "integral"):
    """Bockstein of a mod-``p`` class.

    ``integral``: ``H^k(Z/p) -> H^{k+1}(Z)``, the class of ``δ(c̃)/p``.
    ``mod_p``: that class reduced mod ``p``.
    """
    p = x.p
    if not p:
        raise RingMismatch("Bockstein needs a Z/p class")
    K = x.complex
    lift = np.mod(np.asarray(x.cochain, dtype=np.int64), p)
    d = K.coboundary(x.degree, lift) if x.degree < K.dim else np.zeros(0, dtype=np.int64)
    if np.any(d % p):
        raise ValueError("input is not a mod-p cocycle")
    vals = d // p
    if kind in ("integral", "z"):
        return _wrap(x, x, K, x.degree + 1, 0, vals)
    if kind in ("mod_p", "modp"):
        return _wrap(x, x, K, x.degree + 1, p, np.mod(vals, p))
    raise ValueError(f"unknown Bockstein kind {kind!r}")


def sq3_bar(x) -> CohomologyClass:
    """Integral Steenrod square: integral Bockstein of ``Sq²`` of the mod-2 reduction."""
    if x.p != 0:
        raise RingMismatch("Sq3-bar acts on integral classes")
    return bockstein(sq(2, reduce_coefficients(x, 2)), "integral")


# -- maps and products ---------------------------------------------------------

def pullback(f, x):
    """Pull a class (or cochain) back along a :class:`DeltaMap`."""
    if f.target is not x.complex:
        raise ValueError("class does not live on the map's target")
    vals = f.pullback(x.degree, x.cochain)
    cls = CohomologyClass if isinstance(x, CohomologyClass) else Cochain
    return cls(f.source, x.degree, x.p, vals)


def cross(P, a, b):
    """Cross product ``a × b = π₁*a ∪ π₂*b`` on a product complex ``P``."""
    from .complexes import projections
    pk, pl = P.meta.get("_projections") or P.meta.setdefault("_projections", projections(P))
    if pk.target is not a.complex or pl.target is not b.complex:
        raise ValueError("classes do not live on the factors of this product")
    return cup(pullback(pk, a), pullback(pl, b))
