"""Cohomology and homology groups with Z or Z/p coefficients.

Groups are computed by reducing the cochain complex (see
:mod:`cohomops.reduction`) and running a Smith normal form on the small
residual complex.  Every answer can be pulled back to the original cells:
representative cocycles, coordinates of arbitrary cocycles, primitives of
coboundaries, and mod-``e`` cycles that witness non-triviality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .linalg import identity, matmul, matvec, smith_normal_form
from .reduction import CochainReduction, to_array, to_dict


class NotACocycle(ValueError):
    pass


class RingMismatch(ValueError):
    pass


def ring_name(p: int) -> str:
    return "Z" if p == 0 else f"Z/{p}"


def parse_ring(r) -> int:
    """``'z'``, ``'z2'``, ``'Z/3'``, ``0``, ``5`` ... -> modulus (0 for Z)."""
    if isinstance(r, (int, np.integer)):
        return int(r)
    s = str(r).strip().lower().replace("/", "").replace("_", "")
    if s in ("z", "zz", "int", "integer", "integral"):
        return 0
    if s.startswith("z") and s[1:].isdigit():
        return int(s[1:])
    raise ValueError(f"unknown coefficient ring {r!r}")


def _reduce(arr, p: int):
    return np.mod(arr, p) if p else arr


# Above this many cells a query for one degree reduces only the window
# of degrees it needs instead of the whole complex.
WINDOW_THRESHOLD = 2_000_000


@dataclass
class Certificate:
    """Result of a coboundary test.

    ``is_coboundary`` true: ``primitive`` is a cochain ``y`` with ``δy = c``.
    False: ``witness`` is a chain ``z`` with ``∂z ≡ 0`` and
    ``<c, z> ≢ 0 (mod modulus)``; ``modulus`` 0 means an integral cycle.
    """

    is_coboundary: bool
    primitive: Optional[np.ndarray] = None
    witness: Optional[np.ndarray] = None
    modulus: int = 0

    def __bool__(self):
        return self.is_coboundary


class _SmallGroup:
    """``ker A / im B`` for dense ``B: C^{d-1} -> C^d`` and ``A: C^d -> C^{d+1}``.

    ``B`` has ``n`` rows, ``A`` has ``n`` columns; either may have no
    columns/rows.
    """

    def __init__(self, B, A, n: int, p: int):
        self.n, self.p = n, p
        if A and n:
            sa = smith_normal_form(A, p=p)
            r = sa.rank
            self.K = [row[r:] for row in sa.V]
            self.L = [list(row) for row in sa.V_inv[r:]]
        else:
            self.K = identity(n)
            self.L = identity(n)
        self.m = m = len(self.L)
        self.ncols = ncols = len(B[0]) if B else 0
        M = matmul(self.L, B, p) if (m and ncols) else [[0] * ncols for _ in range(m)]
        if m:
            sm = smith_normal_form(M, p=p)
            self.UM, self.UM_inv, self.VM = sm.U, sm.U_inv, sm.V
            self.e = list(sm.divisors)
        else:
            self.UM = self.UM_inv = self.VM = []
            self.e = []
        s = len(self.e)
        if p:
            self.torsion = []
            self.slots = list(range(s, m))
        else:
            self.torsion = [d for d in self.e if d > 1]
            self.slots = [i for i in range(s) if self.e[i] > 1] + list(range(s, m))
        self.free_rank = m - s

    def q(self, c):
        if not self.m:
            return []
        return matvec(self.UM, matvec(self.L, c, self.p), self.p)

    def coordinates(self, c) -> list[int]:
        q = self.q(c)
        out = []
        for i in self.slots:
            if i < len(self.e):
                out.append(q[i] % self.e[i])
            else:
                out.append(q[i] % self.p if self.p else q[i])
        return out

    def generators(self) -> list[list[int]]:
        if not self.m:
            return []
        KU = matmul(self.K, self.UM_inv, self.p)
        return [[row[i] for row in KU] for i in self.slots]

    def test(self, c):
        """``(True, y)`` with ``B y = c``, or ``(False, (w, modulus))`` where
        ``w B ≡ 0`` and ``w c ≢ 0`` modulo ``modulus``."""
        q = self.q(c)
        s = len(self.e)
        for i, v in enumerate(q):
            if i < s:
                if not self.p and v % self.e[i]:
                    return False, (_row_times(self.UM[i], self.L), self.e[i])
            elif v % self.p if self.p else v:
                return False, (_row_times(self.UM[i], self.L, self.p), self.p)
        y = [0] * self.ncols
        for i in range(s):
            y[i] = (q[i] * pow(self.e[i], -1, self.p)) % self.p if self.p else q[i] // self.e[i]
        return True, (matvec(self.VM, y, self.p) if self.ncols else [])


def _row_times(w, L, p: int = 0):
    n = len(L[0]) if L else 0
    out = [sum(w[i] * L[i][j] for i in range(len(w)) if w[i]) for j in range(n)]
    return [v % p for v in out] if p else out


class CohomologyGroup:
    """``H^degree(K; ring)`` with an explicit basis of representative cocycles.

    ``torsion`` lists the orders of the cyclic torsion summands (divisibility
    ordered); ``basis`` holds one representative per summand, torsion first,
    then free.  :meth:`coordinates` expresses any cocycle in that basis.
    """

    def __init__(self, K, p: int, degree: int, engine: "_Engine"):
        self.complex = K
        self.p = p
        self.degree = degree
        self._eng = engine
        self._small = engine.small_group(degree)
        self.free_rank = self._small.free_rank
        self.torsion = list(self._small.torsion)
        self._basis = None

    @property
    def ring(self) -> str:
        return ring_name(self.p)

    @property
    def rank(self) -> int:
        """Number of cyclic summands (Z/p: the dimension)."""
        return len(self.torsion) + self.free_rank

    @property
    def orders(self) -> list[int]:
        """Order of each basis element (0 = infinite)."""
        if self.p:
            return [self.p] * self.free_rank
        return self.torsion + [0] * self.free_rank

    @property
    def basis(self) -> list[np.ndarray]:
        if self._basis is None:
            self._basis = [self._eng.lift(self.degree, g) for g in self._small.generators()]
        return self._basis

    def coordinates(self, c) -> list[int]:
        c = np.asarray(c)
        self._eng.check_cocycle(self.degree, c)
        return self._small.coordinates(self._eng.project(self.degree, c))

    def element(self, coords) -> "CohomologyClass":
        coords = [int(x) for x in coords]
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(coords)}")
        rep = np.zeros(self.complex.count(self.degree), dtype=np.int64)
        for x, b in zip(coords, self.basis):
            if x:
                rep = rep + x * b
        return CohomologyClass(self.complex, self.degree, self.p, _reduce(rep, self.p))

    def zero(self) -> "CohomologyClass":
        return CohomologyClass(self.complex, self.degree, self.p,
                               np.zeros(self.complex.count(self.degree), dtype=np.int64))

    def generators(self) -> list["CohomologyClass"]:
        return [CohomologyClass(self.complex, self.degree, self.p, b) for b in self.basis]

    def is_coboundary(self, c) -> Certificate:
        return self._eng.is_coboundary(self.degree, np.asarray(c))

    def describe(self) -> str:
        return describe_group(self.free_rank, self.torsion, self.p)

    def __repr__(self):
        return f"H^{self.degree}(-; {self.ring}) = {self.describe()}"


def describe_group(free: int, torsion: list[int], p: int = 0) -> str:
    base = "Z" if p == 0 else f"Z/{p}"
    parts = [f"Z/{t}" for t in torsion]
    if free:
        parts.append(base if free == 1 else (f"Z^{free}" if p == 0 else f"({base})^{free}"))
    return " + ".join(parts) if parts else "0"


@dataclass(eq=False)
class CohomologyClass:
    """A cohomology class given by a representative cocycle."""

    complex: object
    degree: int
    p: int
    cochain: np.ndarray
    _coords: Optional[list] = field(default=None, repr=False)

    def __post_init__(self):
        self.cochain = _reduce(np.asarray(self.cochain), self.p)
        if len(self.cochain) != self.complex.count(self.degree):
            raise ValueError("cochain length does not match the number of cells")

    @property
    def ring(self) -> str:
        return ring_name(self.p)

    @property
    def group(self) -> CohomologyGroup:
        return cohomology(self.complex, self.p, self.degree)

    @property
    def coordinates(self) -> list[int]:
        if self._coords is None:
            self._coords = self.group.coordinates(self.cochain)
        return self._coords

    def is_zero(self) -> bool:
        return is_coboundary(self.cochain, self.complex, self.p, self.degree).is_coboundary

    def equals(self, other: "CohomologyClass") -> bool:
        self._compatible(other)
        return (self - other).is_zero()

    def _compatible(self, other):
        if other.complex is not self.complex:
            raise ValueError("classes live on different complexes")
        if other.p != self.p:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if other.degree != self.degree:
            raise ValueError("degree mismatch")

    def __add__(self, other):
        self._compatible(other)
        return CohomologyClass(self.complex, self.degree, self.p, self.cochain + other.cochain)

    def __sub__(self, other):
        self._compatible(other)
        return CohomologyClass(self.complex, self.degree, self.p, self.cochain - other.cochain)

    def __neg__(self):
        return CohomologyClass(self.complex, self.degree, self.p, -self.cochain)

    def __rmul__(self, n: int):
        return CohomologyClass(self.complex, self.degree, self.p, int(n) * self.cochain)

    def to_spec(self) -> str:
        return class_spec(self.p, self.degree, self.coordinates)


def class_spec(p: int, degree: int, coords) -> str:
    ring = "z" if p == 0 else f"z{p}"
    return f"{ring}:{degree}:" + ",".join(str(int(x)) for x in coords)


# ---------------------------------------------------------------------------
# engine


class _Engine:
    """Per (complex, ring, window) reduction plus cached small groups."""

    def __init__(self, K, p: int, window=None):
        self.K, self.p = K, p
        self.red = CochainReduction(K, p, window=window)
        self._small: dict = {}

    def small_group(self, d: int) -> _SmallGroup:
        g = self._small.get(d)
        if g is None:
            B = self.red.residual_matrix(d - 1) if d >= 1 else []
            A = self.red.residual_matrix(d) if d < self.K.dim else []
            n = len(self.red.residual_cells.get(d, []))
            if d < 1:
                B = []
            g = self._small[d] = _SmallGroup(B, A, n, self.p)
        return g

    def check_cocycle(self, d: int, c):
        if len(c) != self.K.count(d):
            raise ValueError("cochain length does not match the number of cells")
        if d < self.K.dim:
            dc = _reduce(self.K.coboundary(d, c), self.p)
            if np.any(dc != 0):
                raise NotACocycle(f"cochain is not a cocycle (nonzero on {int(np.count_nonzero(dc))} cells)")

    def project(self, d: int, c) -> list[int]:
        return self.red.to_residual(d, self.red.f(d, to_dict(c)))

    def lift(self, d: int, vec) -> np.ndarray:
        return _reduce(to_array(self.red.g(d, self.red.from_residual(d, vec)), self.K.count(d)), self.p)

    def is_coboundary(self, d: int, c) -> Certificate:
        self.check_cocycle(d, c)
        c = _reduce(c, self.p)
        small = self.small_group(d)
        ok, data = small.test(self.project(d, c))
        if ok:
            y = self.red.g(d - 1, self.red.from_residual(d - 1, data)) if d >= 1 else {}
            hc = self.red.h(d, to_dict(c)) if d >= 1 else {}
            for x, v in hc.items():
                y[x] = y.get(x, 0) + v
            prim = _reduce(to_array(y, self.K.count(d - 1)), self.p) if d >= 1 else np.zeros(0, dtype=np.int64)
            return Certificate(True, primitive=prim)
        w, mod = data
        z = self.red.f_transpose(d, self.red.from_residual(d, w))
        zz = to_array(z, self.K.count(d))
        if mod:
            zz = np.mod(zz, mod)
        return Certificate(False, witness=zz, modulus=mod)


def _engine(K, p: int, degree: Optional[int] = None):
    cache = K.meta.setdefault("_engines", {})
    if K.n_cells() <= WINDOW_THRESHOLD or degree is None or degree > K.dim:
        key = (p, None)
        if key not in cache:
            cache[key] = _Engine(K, p)
        return cache[key]
    key = (p, degree)
    if key not in cache:
        cache[key] = _Engine(K, p, window=(degree - 1, degree + 1))
    return cache[key]


def cohomology(K, ring=0, degree: int = 0):
    """``H^degree(K; ring)``; cached per complex."""
    p = parse_ring(ring)
    if degree < 0:
        raise ValueError(f"negative degree {degree}")
    cache = K.meta.setdefault("_groups", {})
    key = (p, degree)
    if key not in cache:
        cache[key] = CohomologyGroup(K, p, degree, _engine(K, p, degree))
    return cache[key]


def is_coboundary(c, K, ring=0, degree: int = 0) -> Certificate:
    """Decide whether the cocycle ``c`` is a coboundary, with certificate."""
    p = parse_ring(ring)
    c = np.asarray(c)
    if len(c) != K.count(degree):
        raise ValueError("cochain length does not match the number of cells")
    return cohomology(K, p, degree).is_coboundary(c)


def cohomology_class(K, ring, degree: int, cochain) -> CohomologyClass:
    p = parse_ring(ring)
    c = _reduce(np.asarray(cochain), p)
    if len(c) != K.count(degree):
        raise ValueError(f"cochain has {len(c)} entries, expected {K.count(degree)}")
    if degree < K.dim:
        dc = _reduce(K.coboundary(degree, c), p)
        if np.any(dc != 0):
            raise NotACocycle("cochain is not a cocycle")
    return CohomologyClass(K, degree, p, c)


def reduce_coefficients(x: CohomologyClass, p: int) -> CohomologyClass:
    """Coefficient reduction Z -> Z/p (or Z/pq -> Z/q for divisible moduli)."""
    if x.p and x.p % p:
        raise RingMismatch(f"cannot reduce {x.ring} classes mod {p}")
    return CohomologyClass(x.complex, x.degree, p, np.mod(x.cochain, p))


def unit_class(K, ring=0) -> CohomologyClass:
    return CohomologyClass(K, 0, parse_ring(ring), np.ones(K.count(0), dtype=np.int64))


def random_cocycle(K, ring, degree: int, rng, coboundary_noise: bool = True) -> np.ndarray:
    """Random combination of basis cocycles plus a random coboundary."""
    p = parse_ring(ring)
    G = cohomology(K, p, degree)
    c = np.zeros(K.count(degree), dtype=np.int64)
    for b, o in zip(G.basis, G.orders):
        c = c + int(rng.integers(-3, 4) if o == 0 else rng.integers(0, o)) * b
    if coboundary_noise and degree >= 1:
        y = rng.integers(-2, 3, K.count(degree - 1))
        c = c + K.coboundary(degree - 1, y)
    return _reduce(c, p)


# ---------------------------------------------------------------------------
# homology


@dataclass
class HomologyGroup:
    degree: int
    p: int
    free_rank: int
    torsion: list
    basis: list  # representative cycles, torsion first

    def describe(self) -> str:
        return describe_group(self.free_rank, self.torsion, self.p)

    def __repr__(self):
        return f"H_{self.degree}(-; {ring_name(self.p)}) = {self.describe()}"


def homology(K, ring=0, degree: int = 0) -> HomologyGroup:
    """``H_degree(K; ring)`` with representative cycles on the original cells."""
    p = parse_ring(ring)
    cache = K.meta.setdefault("_homology", {})
    key = (p, degree)
    if key in cache:
        return cache[key]
    eng = _engine(K, p, degree)
    R = eng.red
    n = len(R.residual_cells.get(degree, []))
    # residual chain boundary is the transpose of the residual coboundary
    Bd = _transpose(R.residual_matrix(degree - 1), n) if degree >= 1 else []
    Bd1 = _transpose(R.residual_matrix(degree), len(R.residual_cells.get(degree + 1, []))) if degree < K.dim else []
    small = _SmallGroup(Bd1, Bd, n, p)
    basis = []
    for g in small.generators():
        z = R.f_transpose(degree, R.from_residual(degree, g))
        basis.append(_reduce(to_array(z, K.count(degree)), p))
    H = HomologyGroup(degree, p, small.free_rank, list(small.torsion), basis)
    H._small = small
    H._red = R
    cache[key] = H
    return H


def homology_coordinates(K, ring, degree: int, z) -> list[int]:
    """Coordinates of the cycle ``z`` in the basis of :func:`homology`."""
    H = homology(K, ring, degree)
    z = np.asarray(z)
    if degree >= 1 and np.any(_reduce(K.boundary(degree, z), H.p) != 0):
        raise ValueError("chain is not a cycle")
    zr = H._red.g_transpose(degree, to_dict(z))
    return H._small.coordinates(H._red.to_residual(degree, zr))


def is_boundary(z, K, ring=0, degree: int = 0) -> bool:
    H = homology(K, ring, degree)
    return all(c == 0 for c in homology_coordinates(K, ring, degree, z))


def _transpose(M, ncols_if_empty: int):
    if not M:
        return [[] for _ in range(ncols_if_empty)]
    return [list(r) for r in zip(*M)]


def homology_summary(K, ring=0) -> list[tuple[int, list]]:
    return [(homology(K, ring, d).free_rank, homology(K, ring, d).torsion) for d in range(K.dim + 1)]
