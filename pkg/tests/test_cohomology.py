import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohomops.cohomology import (CohomologyClass, NotACocycle, RingMismatch, cohomology, cohomology_class,
                                 homology, homology_coordinates, is_boundary, is_coboundary, parse_ring,
                                 random_cocycle, reduce_coefficients, unit_class)
from cohomops.complexes import polygon, product
from cohomops.spaces import klein, lens, moore, rp, sphere, torus

from oracle import betti, uct_mod_p

SPACES = {
    "rp2": lambda: rp(2), "rp3": lambda: rp(3), "rp4": lambda: rp(4), "torus": torus, "klein": klein,
    "lens31": lambda: lens(3, 1), "lens52": lambda: lens(5, 2), "moore22": lambda: moore(2, 2),
    "moore41": lambda: moore(4, 1), "s3": lambda: sphere(3),
    "klein_x_rp2": lambda: product(klein(), rp(2)),
}
_cache = {}


def space(name):
    if name not in _cache:
        _cache[name] = SPACES[name]()
    return _cache[name]


def test_examples():
    assert cohomology(rp(2), "z", 2).describe() == "Z/2"
    assert cohomology(torus(), "z", 1).describe() == "Z^2"
    for n in (1, 2, 3, 4):
        S = sphere(n)
        for k in range(n + 1):
            assert cohomology(S, 0, k).describe() == ("Z" if k in (0, n) else "0")


def test_degree_above_dimension_is_zero():
    assert cohomology(rp(2), 0, 5).rank == 0


@pytest.mark.parametrize("name", sorted(SPACES))
def test_universal_coefficients(name):
    K = space(name)
    free = [homology(K, 0, k).free_rank for k in range(K.dim + 1)]
    tors = [homology(K, 0, k).torsion for k in range(K.dim + 1)]
    # integral homology vs independent rank computations
    assert free == betti(K)
    for p in (2, 3, 5):
        assert uct_mod_p(free, tors, p) == betti(K, p)
        assert [cohomology(K, p, k).rank for k in range(K.dim + 1)] == betti(K, p)
    for k in range(K.dim + 1):
        G = cohomology(K, 0, k)
        assert G.free_rank == free[k]
        assert G.torsion == (tors[k - 1] if k >= 1 else [])


@pytest.mark.parametrize("name", sorted(SPACES))
@pytest.mark.parametrize("ring", [0, 2, 3])
def test_basis_cocycles(name, ring):
    K = space(name)
    for k in range(K.dim + 1):
        G = cohomology(K, ring, k)
        for i, b in enumerate(G.basis):
            d = K.coboundary(k, b) if k < K.dim else np.zeros(0)
            assert not np.any(d % ring if ring else d)
            e = [0] * G.rank
            e[i] = 1
            assert G.coordinates(b) == e


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(SPACES)), st.sampled_from([0, 2, 3, 5]), st.integers(0, 2 ** 31))
def test_reassembly_and_certificates(name, ring, seed):
    K = space(name)
    rng = np.random.default_rng(seed)
    k = int(rng.integers(0, K.dim + 1))
    G = cohomology(K, ring, k)
    c = random_cocycle(K, ring, k, rng)
    coords = G.coordinates(c)
    diff = c - G.element(coords).cochain
    cert = is_coboundary(diff, K, ring, k)
    assert cert.is_coboundary
    if k >= 1:
        delta = K.coboundary(k - 1, cert.primitive)
        assert np.array_equal(delta % ring if ring else delta, diff % ring if ring else diff)
    cert = is_coboundary(c, K, ring, k)
    assert cert.is_coboundary == (not any(coords))
    if not cert.is_coboundary:
        z, m = np.asarray(cert.witness, dtype=object), cert.modulus
        if k >= 1:
            dz = K.boundary(k, z)
            assert all(v % m == 0 for v in dz) if m else not any(dz)
        pairing = int(np.dot(np.asarray(c, dtype=object), z))
        assert (pairing % m != 0) if m else pairing != 0


def test_is_coboundary_examples():
    C = polygon(4).to_delta()
    assert is_coboundary(np.zeros(C.count(1), dtype=np.int64), C, 0, 1).is_coboundary
    gen = cohomology(C, 0, 1).basis[0]
    assert not is_coboundary(gen, C, 0, 1)
    y = np.arange(C.count(0))
    assert is_coboundary(C.coboundary(0, y), C, 0, 1)
    with pytest.raises(NotACocycle):
        is_coboundary(np.ones(rp(2).count(1), dtype=np.int64), rp(2), 0, 1)


def test_reduce_coefficients():
    K = rp(2)
    g = cohomology(K, 0, 2).generators()[0]
    m = reduce_coefficients(g, 2)
    assert m.coordinates == [1]
    assert reduce_coefficients(cohomology(K, 0, 2).zero(), 2).is_zero()
    T = torus()
    x = cohomology(T, 0, 1).element([3, -1])
    assert reduce_coefficients(2 * x, 2).is_zero()
    with pytest.raises(RingMismatch):
        reduce_coefficients(reduce_coefficients(x, 3), 2)


def test_class_arithmetic():
    T = torus()
    G = cohomology(T, 0, 1)
    a, b = G.generators()
    assert (a + b).coordinates == [1, 1]
    assert (a - a).is_zero()
    assert (3 * a).coordinates == [3, 0]
    assert a.equals(a + CohomologyClass(T, 1, 0, T.coboundary(0, np.array([5]))))
    assert a.to_spec() == "z:1:1,0"


def test_torsion_coordinates_are_reduced():
    L = lens(5, 1)
    g = cohomology(L, 0, 2).generators()[0]
    assert (6 * g).coordinates == [1]


def test_homology_basis_and_coordinates():
    for K in (rp(3), torus(), lens(3, 1), product(klein(), polygon(3).to_delta())):
        for k in range(K.dim + 1):
            H = homology(K, 0, k)
            for i, z in enumerate(H.basis):
                if k >= 1:
                    assert not np.any(K.boundary(k, z))
                e = [0] * len(H.basis)
                e[i] = 1
                assert homology_coordinates(K, 0, k, z) == e
            if k >= 1 and k < K.dim:
                x = np.random.default_rng(k).integers(-3, 4, K.count(k + 1))
                assert is_boundary(K.boundary(k + 1, x), K, 0, k)


def test_parse_ring_and_helpers():
    assert parse_ring("z") == 0 and parse_ring("Z/3") == 3 and parse_ring("z2") == 2 and parse_ring(5) == 5
    with pytest.raises(ValueError):
        parse_ring("q")
    u = unit_class(rp(2), 2)
    assert u.coordinates == [1]
    with pytest.raises(ValueError):
        cohomology_class(rp(2), 2, 1, np.ones(3))
