"""Seeded randomized property checks run by ``cohomops selftest``."""

from __future__ import annotations

import numpy as np

from .cohomology import CohomologyClass, cohomology, is_coboundary, random_cocycle, reduce_coefficients
from .linalg import matmul, smith_normal_form
from .spaces import klein, lens, moore, rp, torus
from .steenrod import bockstein, cup, cup_i_cochains, sq


def _spaces():
    return [rp(2), rp(3), torus(), klein(), lens(3, 1), moore(2, 2)]


def cup_i_identity(K, rng, trials):
    """δ(a ∪_i b) = a ∪_{i-1} b + b ∪_{i-1} a + δa ∪_i b + a ∪_i δb (mod 2)."""
    fails = n = 0
    for _ in range(trials):
        p = int(rng.integers(0, K.dim + 1))
        q = int(rng.integers(0, K.dim + 1))
        i = int(rng.integers(0, min(p, q) + 1))
        if p + q - i + 1 > K.dim:
            continue
        a = rng.integers(0, 2, K.count(p))
        b = rng.integers(0, 2, K.count(q))
        m = p + q - i
        lhs = K.coboundary(m, cup_i_cochains(K, a, p, b, q, i)) & 1
        rhs = np.zeros(K.count(m + 1), dtype=np.int64)
        if i >= 1:
            rhs ^= cup_i_cochains(K, a, p, b, q, i - 1) ^ cup_i_cochains(K, b, q, a, p, i - 1)
        if p < K.dim:
            rhs ^= cup_i_cochains(K, K.coboundary(p, a) & 1, p + 1, b, q, i)
        if q < K.dim:
            rhs ^= cup_i_cochains(K, a, p, K.coboundary(q, b) & 1, q + 1, i)
        n += 1
        fails += int(np.any(lhs != rhs))
    return n, fails


def square_axioms(K, rng, trials):
    fails = n = 0
    for _ in range(trials):
        d = int(rng.integers(0, K.dim + 1))
        if cohomology(K, 2, d).rank == 0:
            continue
        x = CohomologyClass(K, d, 2, random_cocycle(K, 2, d, rng))
        n += 1
        ok = (sq(0, x) - x).is_zero()
        if 2 * d <= K.dim:
            ok &= (sq(d, x) - cup(x, x)).is_zero()
        if d + 1 <= K.dim and d >= 1:
            # Sq^1 = mod-2 Bockstein
            ok &= (sq(1, x) - bockstein(x, "mod_p")).is_zero()
        fails += int(not ok)
    return n, fails


def bockstein_relations(K, rng, trials):
    fails = n = 0
    for _ in range(trials):
        d = int(rng.integers(0, K.dim))
        if cohomology(K, 2, d).rank == 0:
            continue
        x = CohomologyClass(K, d, 2, random_cocycle(K, 2, d, rng))
        b = bockstein(x, "integral")
        n += 1
        ok = bool(is_coboundary(2 * b.cochain, K, 0, d + 1))
        ok &= (reduce_coefficients(b, 2) - sq(1, x)).is_zero()
        fails += int(not ok)
    return n, fails


def smith_recomposition(rng, trials):
    fails = 0
    for _ in range(trials):
        r, c = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        A = rng.integers(-9, 10, (r, c)).tolist()
        S = smith_normal_form(A)
        ok = matmul(matmul(S.U, A), S.V) == S.D
        divs = S.divisors
        ok &= all(divs[k + 1] % divs[k] == 0 for k in range(len(divs) - 1))
        fails += int(not ok)
    return trials, fails


def run_selftest(seed: int = 0, trials: int = 20) -> list[dict]:
    rng = np.random.default_rng(seed)
    results = []
    checks = [("cup_i coboundary identity", cup_i_identity), ("Steenrod square axioms", square_axioms),
              ("Bockstein relations", bockstein_relations)]
    spaces = _spaces()
    for name, fn in checks:
        tot = bad = 0
        for K in spaces:
            n, f = fn(K, rng, trials)
            tot, bad = tot + n, bad + f
        results.append({"name": name, "instances": tot, "failures": bad})
    n, f = smith_recomposition(rng, trials * 5)
    results.append({"name": "Smith normal form recomposition", "instances": n, "failures": f})
    return results
