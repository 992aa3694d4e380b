import itertools
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohomops.linalg import (NoSolution, determinant, identity, kernel_basis, matmul, matvec,
                             smith_normal_form, solve_linear)


def matrices(max_rows=6, max_cols=6, lo=-9, hi=9):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                               min_size=r, max_size=r)))


def determinantal_divisors(A):
    """gcd of all k x k minors, k = 1..min(m, n) -- an oracle independent of elimination."""
    m, n = len(A), len(A[0])
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, determinant([[A[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        out.append(g)
    return out


def test_known_snf():
    S = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert S.divisors == [2, 6, 12]


def test_zero_and_empty():
    S = smith_normal_form([[0, 0], [0, 0]])
    assert S.rank == 0
    assert matmul(matmul(S.U, [[0, 0], [0, 0]]), S.V) == S.D


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_recomposition_and_divisibility(A):
    S = smith_normal_form(A)
    assert matmul(matmul(S.U, A), S.V) == S.D
    assert matmul(S.U, S.U_inv) == identity(len(A))
    assert matmul(S.V, S.V_inv) == identity(len(A[0]))
    d = S.divisors
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))


@settings(max_examples=80, deadline=None)
@given(matrices(4, 4))
def test_divisors_match_minor_gcds(A):
    dk = determinantal_divisors(A)
    S = smith_normal_form(A)
    prods = list(itertools.accumulate(S.divisors, lambda a, b: a * b))
    assert prods == dk


@settings(max_examples=80, deadline=None)
@given(matrices(5, 5), st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_matches_numpy_over_prime_field(A, p):
    S = smith_normal_form(A, p=p)
    assert matmul(matmul(S.U, A, p), S.V, p) == [[v % p for v in r] for r in S.D]
    # oracle: Gaussian elimination on a numpy copy
    M = np.array(A, dtype=np.int64) % p
    r = 0
    for c in range(M.shape[1]):
        piv = next((i for i in range(r, M.shape[0]) if M[i, c]), None)
        if piv is None:
            continue
        M[[r, piv]] = M[[piv, r]]
        M[r] = M[r] * pow(int(M[r, c]), -1, p) % p
        for i in range(M.shape[0]):
            if i != r and M[i, c]:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        r += 1
    assert S.rank == r


@settings(max_examples=80, deadline=None)
@given(matrices(4, 4, -4, 4), st.lists(st.integers(-6, 6), min_size=4, max_size=4))
def test_solve_over_z(A, b):
    b = b[:len(A)]
    sol = solve_linear(A, b)
    if isinstance(sol, NoSolution):
        assert sol.check(A, b)
    else:
        assert matvec(A, sol) == b


@settings(max_examples=80, deadline=None)
@given(matrices(4, 4, 0, 4), st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_solve_mod5_against_enumeration(A, b):
    b = b[:len(A)]
    n = len(A[0])
    sol = solve_linear(A, b, 5)
    exists = any(matvec(A, list(x), 5) == [v % 5 for v in b] for x in itertools.product(range(5), repeat=n))
    assert exists == (not isinstance(sol, NoSolution))
    if exists:
        assert matvec(A, sol, 5) == [v % 5 for v in b]
    else:
        assert sol.check(A, b, 5)


@settings(max_examples=60, deadline=None)
@given(matrices(5, 5, -5, 5))
def test_kernel_basis(A):
    for v in kernel_basis(A):
        assert matvec(A, v) == [0] * len(A)
    S = smith_normal_form(A)
    assert len(kernel_basis(A)) == len(A[0]) - S.rank


def test_nosolution_is_falsy_and_checks():
    A, b = [[2, 0], [0, 2]], [1, 0]
    sol = solve_linear(A, b)
    assert isinstance(sol, NoSolution) and not sol
    assert sol.check(A, b)
    assert sol.modulus == 2


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_linear([[1, 2]], [1, 2])


def test_small_examples():
    S = smith_normal_form([[2, 0], [0, 3]])
    assert S.D == [[1, 0], [0, 6]]
    assert smith_normal_form([[1]]).D == [[1]]
    Z = smith_normal_form([[0, 0, 0], [0, 0, 0]])
    assert Z.U == identity(2) and Z.V == identity(3)
    assert isinstance(solve_linear([[2]], [3]), NoSolution)
    assert solve_linear([[2]], [3], 5) == [4]
    assert solve_linear(identity(3), [4, -1, 7]) == [4, -1, 7]


def _random_unimodular(rng, n):
    M = identity(n)
    for _ in range(3 * n):
        i, j = rng.choice(n, 2, replace=False) if n > 1 else (0, 0)
        if i == j:
            continue
        k = int(rng.integers(-2, 3))
        M = [[M[r][c] + (k * M[j][c] if r == i else 0) for c in range(n)] for r in range(n)]
    return M


@settings(max_examples=60, deadline=None)
@given(matrices(5, 5), st.integers(0, 2 ** 32 - 1))
def test_divisors_invariant_under_unimodular_change(A, seed):
    rng = np.random.default_rng(seed)
    P = _random_unimodular(rng, len(A))
    Q = _random_unimodular(rng, len(A[0]))
    assert abs(determinant(P)) == 1 and abs(determinant(Q)) == 1
    assert smith_normal_form(matmul(matmul(P, A), Q)).divisors == smith_normal_form(A).divisors
