"""Exact integer and prime-field linear algebra.

Matrices are plain lists of rows of Python ints.  Everything here is exact;
there is no floating point anywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

Matrix = list[list[int]]


@dataclass
class IntegerMatrix:
    """Sparse integer matrix, entries keyed by ``(row, col)``."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), v in list(self.entries.items()):
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            if v == 0:
                del self.entries[(i, j)]

    @classmethod
    def from_dense(cls, a: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntegerMatrix":
        rows = len(a)
        if cols is None:
            cols = len(a[0]) if rows else 0
        ent = {(i, j): int(v) for i, row in enumerate(a) for j, v in enumerate(row) if v}
        return cls(rows, cols, ent)

    def dense(self) -> Matrix:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict[tuple[int, int], int] = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + v * w
        return IntegerMatrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not self.entries

    def rank(self) -> int:
        return smith_normal_form(self.dense(), track=False).rank


def _as_dense(a) -> Matrix:
    if isinstance(a, IntegerMatrix):
        return a.dense()
    return [[int(v) for v in row] for row in a]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix, p: int = 0) -> Matrix:
    n = len(b[0]) if b else 0
    bt = list(zip(*b)) if b else []
    out = []
    for row in a:
        r = [sum(x * y for x, y in zip(row, col) if x) for col in bt] if bt else [0] * n
        if p:
            r = [v % p for v in r]
        out.append(r)
    return out


def matvec(a: Matrix, x: Sequence[int], p: int = 0) -> list[int]:
    out = [sum(v * w for v, w in zip(row, x) if v) for row in a]
    return [v % p for v in out] if p else out


def determinant(a: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular (invertible over Z_p when ``p``)."""

    U: Optional[Matrix]
    D: Matrix
    V: Optional[Matrix]
    U_inv: Optional[Matrix]
    V_inv: Optional[Matrix]
    divisors: list[int]
    p: int = 0

    @property
    def rank(self) -> int:
        return len(self.divisors)


def _inverse_mod(a: int, p: int) -> int:
    return pow(a, -1, p)


def smith_normal_form(a, p: int = 0, track: bool = True) -> SmithDecomposition:
    """Smith normal form over Z (``p == 0``) or over the field Z_p.

    Pivots are chosen as the nonzero entry of least absolute value (first in
    row-major order on ties), which keeps entry growth down and makes the
    result deterministic.
    """
    A = _as_dense(a)
    m = len(A)
    n = len(A[0]) if m else (a.cols if isinstance(a, IntegerMatrix) else 0)
    if p:
        A = [[v % p for v in row] for row in A]
    U = identity(m) if track else None
    Ui = identity(m) if track else None
    V = identity(n) if track else None
    Vi = identity(n) if track else None

    def red(v):
        return v % p if p else v

    def row_add(i, j, c):  # row_i += c * row_j
        Ai, Aj = A[i], A[j]
        for k in range(n):
            if Aj[k]:
                Ai[k] = red(Ai[k] + c * Aj[k])
        if track:
            Ui_, Uj = U[i], U[j]
            for k in range(m):
                if Uj[k]:
                    Ui_[k] = red(Ui_[k] + c * Uj[k])
            for row in Ui:
                if row[i]:
                    row[j] = red(row[j] - c * row[i])

    def col_add(j, i, c):  # col_j += c * col_i
        for row in A:
            if row[i]:
                row[j] = red(row[j] + c * row[i])
        if track:
            for row in V:
                if row[i]:
                    row[j] = red(row[j] + c * row[i])
            Vi_, Vj = Vi[i], Vi[j]
            for k in range(n):
                if Vj[k]:
                    Vi_[k] = red(Vi_[k] - c * Vj[k])

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        if track:
            U[i], U[j] = U[j], U[i]
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_scale(i, c, cinv):  # unit scaling
        A[i] = [red(v * c) for v in A[i]]
        if track:
            U[i] = [red(v * c) for v in U[i]]
            for row in Ui:
                row[i] = red(row[i] * cinv)

    divisors: list[int] = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            piv = A[t][t]
            if p:
                if piv != 1:
                    inv = _inverse_mod(piv, p)
                    row_scale(t, inv, piv)
                piv = 1
            done = True
            for i in range(t + 1, m):
                v = A[i][t]
                if v:
                    q = v // piv if not p else v
                    row_add(i, t, -q)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                v = A[t][j]
                if v:
                    q = v // piv if not p else v
                    col_add(j, t, -q)
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest remainder in row/column t onto the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    row_swap(i, t)
                if j != t:
                    col_swap(j, t)
                continue
            if not p:
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % piv:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is not None:
                    row_add(t, bad, 1)
                    continue
            break
        if A[t][t] < 0:
            row_scale(t, -1, -1)
        divisors.append(A[t][t])
        t += 1
    return SmithDecomposition(U, A, V, Ui, Vi, divisors, p)


@dataclass
class NoSolution:
    """Certificate that ``A x = b`` has no solution over the ring.

    ``functional`` is a row vector ``w`` with ``w @ A == 0 (mod modulus)`` and
    ``w @ b != 0 (mod modulus)``; ``modulus`` is 0 for an exact relation.
    """

    functional: list[int]
    modulus: int

    def __bool__(self):
        return False

    def check(self, A: Matrix, b: Sequence[int], p: int = 0) -> bool:
        mod = self.modulus
        w = self.functional
        cols = len(A[0]) if A else 0
        wa = [sum(w[i] * A[i][j] for i in range(len(A))) for j in range(cols)]
        wb = sum(x * y for x, y in zip(w, b))
        if p:
            mod = p if mod in (0, p) else mod
        if mod:
            return all(v % mod == 0 for v in wa) and wb % mod != 0
        return all(v == 0 for v in wa) and wb != 0


def solve_linear(A, b: Sequence[int], p: int = 0):
    """Solve ``A x = b`` over Z (``p == 0``) or Z_p.

    Returns a solution list, or a falsy :class:`NoSolution` carrying a
    divisibility witness.
    """
    M = _as_dense(A)
    m = len(M)
    n = len(M[0]) if m else (A.cols if isinstance(A, IntegerMatrix) else 0)
    if len(b) != m:
        raise ValueError("dimension mismatch")
    snf = smith_normal_form(M, p=p)
    ub = matvec(snf.U, b, p)
    y = [0] * n
    for i, d in enumerate(snf.divisors):
        v = ub[i]
        if p:
            y[i] = v * _inverse_mod(d, p) % p
        elif v % d:
            return NoSolution(list(snf.U[i]), d)
        else:
            y[i] = v // d
    for i in range(snf.rank, m):
        if ub[i] % p if p else ub[i]:
            return NoSolution(list(snf.U[i]), p)
    return matvec(snf.V, y, p)


def kernel_basis(a, p: int = 0) -> Matrix:
    """Columns spanning the (saturated) kernel, returned as a list of vectors."""
    M = _as_dense(a)
    snf = smith_normal_form(M, p=p)
    n = len(snf.V)
    return [[snf.V[i][j] for i in range(n)] for j in range(snf.rank, n)]
