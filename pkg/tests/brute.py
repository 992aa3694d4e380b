"""Cell-by-cell reference evaluation of cochain operations.

Deliberately independent of ``cohomops.steenrod``: faces are found by
walking the face arrays one deletion at a time, and ``∪_i`` uses Steenrod's
interval-cut formula rather than the subset formula of the engine.  The two
cup-i products agree only up to coboundaries, so comparisons are made at
class level or through pairings with cycles.
"""

import itertools
from functools import lru_cache


def face(K, d, cell, keep):
    """The face of a ``d``-cell spanned by the sorted local vertices ``keep``."""
    c = int(cell)
    drop = [v for v in range(d + 1) if v not in keep]
    for v in reversed(drop):
        c = int(K.faces[d][c][v])
        d -= 1
    return c


@lru_cache(maxsize=None)
def interval_terms(p, q, i):
    """``(u_vertices, v_vertices)`` pairs of Steenrod's formula for ``∪_i`` on an ``n``-simplex."""
    n = p + q - i
    terms = []
    for js in itertools.combinations(range(n + 1), i + 1):
        cuts = (0,) + js + (n,)
        u, v = [], []
        for k in range(len(cuts) - 1):
            seg = range(cuts[k], cuts[k + 1] + 1)
            (u if k % 2 == 0 else v).extend(seg)
        u, v = sorted(set(u)), sorted(set(v))
        if len(u) == p + 1 and len(v) == q + 1:
            terms.append((tuple(u), tuple(v)))
    return tuple(terms)


def cup_i_at(K, a, p, b, q, i, cell):
    n = p + q - i
    total = 0
    for u, v in interval_terms(p, q, i):
        total += int(a[face(K, n, cell, u)]) * int(b[face(K, n, cell, v)])
    return total % 2


def sq_at(K, x, n, k, cell):
    return cup_i_at(K, x, n, x, n, n - k, cell)


def coboundary_at(K, c, d, cell):
    return sum((-1) ** i * int(c[int(K.faces[d + 1][cell][i])]) for i in range(d + 2))


def boundary(K, z, d):
    out = [0] * K.count(d - 1)
    for s, val in enumerate(z):
        if val:
            for i in range(d + 1):
                out[int(K.faces[d][s][i])] += (-1) ** i * int(val)
    return out


def sq3bar_on_cells(K, phi, n, cells):
    """Values of ``β̄ Sq² μ₂ φ`` on the given ``(n+3)``-cells."""
    x = [int(v) % 2 for v in phi]
    memo = {}

    def s(cell):
        if cell not in memo:
            memo[cell] = sq_at(K, x, n, 2, cell)
        return memo[cell]

    out = {}
    for t in cells:
        total = sum((-1) ** i * s(int(K.faces[n + 3][t][i])) for i in range(n + 4))
        assert total % 2 == 0
        out[int(t)] = total // 2
    return out


def cup_at(K, a, p, b, q, cell):
    """Integral Alexander-Whitney product on one ``(p+q)``-cell."""
    n = p + q
    return int(a[face(K, n, cell, tuple(range(p + 1)))]) * int(b[face(K, n, cell, tuple(range(p, n + 1)))])
