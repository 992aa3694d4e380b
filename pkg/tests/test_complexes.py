import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohomops.cohomology import homology
from cohomops.complexes import (ActionNotFree, ComplexError, DeltaComplex, SimplicialComplex, SimplicialMap,
                                barycentric_subdivision, complex_from_json, mapping_torus, point, polygon,
                                product, projections, quotient_by_free_action, simplex, suspension)
from cohomops.spaces import (antipodal_sd_sphere2, build_named_space, klein, lens, moore, rp, sphere,
                             torus)

from oracle import betti, boundary_dense


def H(K, d, ring=0):
    h = homology(K, ring, d)
    return h.free_rank, h.torsion


NAMED = [("sphere", [1]), ("sphere", [2]), ("sphere", [3]), ("rp", [2]), ("rp", [3]), ("rp", [4]),
         ("torus", []), ("klein", []), ("lens", [3, 1]), ("lens", [2, 1]), ("moore", [3, 1]),
         ("moore", [2, 2]), ("circle", [5]), ("point", []), ("cp2_9vertex", []), ("rp3_min", [])]

EULER = {"sphere": lambda n: 1 + (-1) ** n, "rp": lambda n: (1 + (-1) ** n) // 2, "torus": lambda: 0,
         "klein": lambda: 0, "lens": lambda p, q: 0, "moore": lambda p, n: 1, "circle": lambda m: 0,
         "point": lambda: 1, "cp2_9vertex": lambda: 3, "rp3_min": lambda: 0}


@pytest.mark.parametrize("name,params", NAMED)
def test_builders_valid(name, params):
    K = build_named_space(name, params)
    K.validate()
    for p in range(2, K.dim + 1):
        assert not np.any(boundary_dense(K, p - 1) @ boundary_dense(K, p))
    assert K.euler_characteristic() == EULER[name](*params)
    # alternating sum of Betti numbers over a field agrees
    assert sum((-1) ** k * b for k, b in enumerate(betti(K))) == K.euler_characteristic()


def test_sphere2_is_tetrahedron_boundary():
    S = sphere(2)
    assert S.counts[0] == 4 and S.counts[2] == 4


def test_rp2_homology():
    K = rp(2)
    assert K.counts == [6, 15, 10]
    assert H(K, 1) == (0, [2])
    assert H(K, 2) == (0, [])
    assert betti(K, 2) == [1, 1, 1]


def test_wu_manifold_groups():
    from cohomops.cohomology import cohomology
    W = build_named_space("wu_manifold")
    assert W.dim == 5
    assert cohomology(W, 0, 2).describe() == "0"
    assert cohomology(W, 0, 3).describe() == "Z/2"
    assert W.counts == [13, 78, 286, 533, 468, 156]


def test_unknown_and_bad_params():
    with pytest.raises(ComplexError):
        build_named_space("nope")
    with pytest.raises(ComplexError):
        build_named_space("lens", [4, 2])
    with pytest.raises(ComplexError):
        build_named_space("lens", [1, 1])
    with pytest.raises(ComplexError):
        build_named_space("sphere", [])


# -- products ------------------------------------------------------------------

def test_product_with_point():
    C = polygon(3).to_delta()
    P = product(C, point())
    assert P.counts == C.counts
    assert H(P, 1) == (1, [])


def test_product_of_circles_is_torus():
    C = polygon(3).to_delta()
    P = product(C, C)
    assert H(P, 1) == (2, [])
    assert H(P, 2) == (1, [])
    assert P.euler_characteristic() == 0


def test_euler_characteristic_multiplies():
    assert product(rp(2), rp(2)).euler_characteristic() == 1


KUNNETH_FACTORS = [lambda: rp(2), lambda: torus(), lambda: klein(), lambda: moore(3, 1),
                   lambda: polygon(4).to_delta(), lambda: sphere(2), lambda: point()]


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(KUNNETH_FACTORS), st.sampled_from(KUNNETH_FACTORS), st.sampled_from([2, 3, 1_000_003]))
def test_kunneth_dimension_count(fa, fb, q):
    K, L = fa(), fb()
    P = product(K, L)
    P.validate()
    bK, bL, bP = betti(K, q), betti(L, q), betti(P, q)
    for n in range(P.dim + 1):
        assert bP[n] == sum(bK[i] * bL[n - i] for i in range(len(bK)) if 0 <= n - i < len(bL))


def test_projections_are_cellular():
    P = product(torus(), polygon(3).to_delta())
    pk, pl = projections(P)
    pk.validate()
    pl.validate()
    assert all(np.all(m[m >= 0] < pk.target.count(d)) for d, m in enumerate(pk.cell_map))


# -- subdivision ---------------------------------------------------------------

def test_subdivide_interval_and_triangle_boundary():
    I = barycentric_subdivision(SimplicialComplex([(0, 1)]))
    assert I.n_vertices == 3 and len(I.facets) == 2
    hexagon = barycentric_subdivision(SimplicialComplex([(0, 1), (1, 2), (0, 2)]))
    assert hexagon.n_vertices == 6 and len(hexagon.facets) == 6
    degree = np.bincount(np.array(hexagon.facets).ravel())
    assert np.all(degree == 2)


def test_subdivision_preserves_homology():
    sd = barycentric_subdivision(SimplicialComplex([tuple(f) for f in
                                                    rp(2).meta["simplices"][2]])).to_delta()
    for d in range(3):
        assert H(sd, d) == H(rp(2), d)
    T = torus()
    sdT = barycentric_subdivision(T)
    assert isinstance(sdT, DeltaComplex)
    for d in range(3):
        assert H(sdT, d) == H(T, d)


# -- quotients -----------------------------------------------------------------

def test_antipodal_quotient_of_sphere():
    S, inv = antipodal_sd_sphere2()
    Q = quotient_by_free_action(S, [inv])
    assert H(Q, 1) == (0, [2])
    assert S.to_delta().euler_characteristic() == 2 * Q.euler_characteristic()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_lens_space_h1(p):
    L = lens(p, 1)
    assert H(L, 1) == (0, [p])
    assert H(L, 3) == (1, [])
    assert L.euler_characteristic() == 0


def test_lens_5_2():
    assert H(lens(5, 2), 1) == (0, [5])


def test_trivial_group_quotient():
    S = SimplicialComplex([(0, 1), (1, 2), (0, 2)])
    Q = quotient_by_free_action(S, [])
    assert Q.counts == S.to_delta().counts


def test_non_free_action_reports_witness():
    S = polygon(4)
    flip = SimplicialMap(S, S, [0, 3, 2, 1])   # fixes vertices 0 and 2
    with pytest.raises(ActionNotFree) as e:
        quotient_by_free_action(S, [flip])
    g, s = e.value.element, e.value.simplex
    assert tuple(sorted(g[v] for v in s)) == tuple(s)


def test_generator_must_be_automorphism():
    S = polygon(4)
    with pytest.raises(ComplexError):
        quotient_by_free_action(S, [(0, 1, 2, 0)])


# -- mapping tori --------------------------------------------------------------

def test_mapping_torus_point_is_circle():
    from cohomops.complexes import identity_map
    P = point()
    M = mapping_torus(P, identity_map(P))
    assert H(M, 1) == (1, [])
    assert M.euler_characteristic() == 0


def test_mapping_torus_identity_circle_is_torus():
    from cohomops.complexes import identity_map
    C = polygon(3).to_delta()
    T = mapping_torus(C, identity_map(C))
    assert H(T, 1) == (2, [])
    assert H(T, 2) == (1, [])


def test_mapping_torus_reflection_is_klein_bottle():
    # hexagon relabelled so that the reflection is monotone on every edge
    S = SimplicialComplex([(0, 1), (1, 3), (3, 5), (4, 5), (2, 4), (0, 2)])
    K = S.to_delta()
    f = SimplicialMap(S, S, [0, 2, 1, 4, 3, 5])
    assert f.is_monotone() and f.is_automorphism()
    M = mapping_torus(K, f.to_delta(K, K))
    assert H(M, 1) == (1, [2])
    assert H(M, 2) == (0, [])
    assert M.euler_characteristic() == 0


def test_mapping_torus_rejects_non_monotone():
    S = polygon(3)
    rot = SimplicialMap(S, S, [1, 2, 0])
    assert not rot.is_monotone()
    with pytest.raises(ComplexError):
        rot.to_delta()


# -- boundary matrices ---------------------------------------------------------

def test_edge_boundary():
    E = simplex(1)
    assert E.boundary_matrix(1).dense() == [[-1], [1]]


def test_boundary_squares_to_zero_rp2():
    K = rp(2)
    B = K.boundary_matrices()
    d1, d2 = np.array(B[0].dense()), np.array(B[1].dense())
    assert not np.any(d1 @ d2)
    assert np.array_equal(d2, boundary_dense(K, 2))


def test_torus_rank_d2():
    from cohomops.linalg import smith_normal_form
    T = torus()
    assert smith_normal_form(T.boundary_matrix(2).dense()).rank == T.count(2) - 1


def test_suspension_shifts_homology():
    S = suspension(moore(3, 1))
    assert H(S, 2) == (0, [3])


# -- JSON ------------------------------------------------------------------------

@pytest.mark.parametrize("K", [torus(), rp(2), lens(3, 1)])
def test_json_round_trip(K):
    L = complex_from_json(json.loads(json.dumps(K.to_json())))
    assert L.counts == K.counts
    assert all(np.array_equal(a, b) for a, b in zip(L.faces[1:], K.faces[1:]))


def test_simplicial_json():
    d = {"format": "simplicial", "vertices": ["a", "b", "c", "d"],
         "facets": [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]}
    K = complex_from_json(d)
    assert H(K, 2) == (1, [])


@pytest.mark.parametrize("bad,where", [
    ({"format": "delta", "cells": [[[]], [[0, 5]]]}, "cells[1][0][1]"),
    ({"format": "delta", "cells": [[[], []], [[0, 1, 1]]]}, "cells[1][0]"),
    ({"format": "simplicial", "vertices": ["a"], "facets": [[0, 3]]}, "facets[0][1]"),
    ({"format": "mystery"}, "format"),
])
def test_json_diagnostics(bad, where):
    with pytest.raises(ComplexError) as e:
        complex_from_json(bad)
    assert where in str(e.value)


def test_simplicial_identity_violation_rejected():
    # two edges from 0 to 1 but a triangle whose faces are inconsistent
    with pytest.raises(ComplexError):
        DeltaComplex(3, [[[1, 0], [2, 1], [2, 0]], [[0, 1, 2]]])
