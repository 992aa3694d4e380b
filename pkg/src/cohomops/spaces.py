"""Named spaces: explicit small triangulations and bundled manifold data."""

from __future__ import annotations

import json
import math
from importlib import resources

import numpy as np

from .complexes import (ComplexError, DeltaComplex, SimplicialComplex, SimplicialMap,
                        barycentric_subdivision, join_with_points, polygon,
                        quotient_by_free_action)

BUNDLED = ("cp2_9vertex", "wu_manifold", "rp3_min")
NAMES = ("sphere", "rp", "torus", "klein", "lens", "moore", "circle", "point") + BUNDLED

RP2_FACETS = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
              (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]


class BundledDataError(ComplexError):
    pass


def sphere(n: int) -> DeltaComplex:
    """Boundary of the (n+1)-simplex."""
    if n < 0:
        raise ComplexError("sphere dimension must be >= 0")
    verts = range(n + 2)
    facets = [tuple(v for v in verts if v != i) for i in verts]
    return SimplicialComplex(facets).to_delta(name=f"S{n}")


def cross_polytope_sphere(n: int) -> SimplicialComplex:
    """Boundary of the (n+1)-dimensional cross-polytope; vertex 2i is +e_i, 2i+1 is -e_i."""
    facets = []
    for signs in range(2 ** (n + 1)):
        facets.append(tuple(2 * i + (signs >> i & 1) for i in range(n + 1)))
    return SimplicialComplex(facets)


def rp(n: int) -> DeltaComplex:
    """Real projective space.  n = 2 is the 6-vertex triangulation; other n
    use the antipodal quotient of the cross-polytope sphere."""
    if n < 1:
        raise ComplexError("rp needs n >= 1")
    if n == 2:
        return SimplicialComplex(RP2_FACETS).to_delta(name="RP2")
    S = cross_polytope_sphere(n)
    antipode = [v ^ 1 for v in range(S.n_vertices)]
    Q = quotient_by_free_action(S, [SimplicialMap(S, S, antipode)])
    Q.name = f"RP{n}"
    return Q


def torus() -> DeltaComplex:
    """One vertex, edges a, b, c (c the diagonal), two triangles."""
    return DeltaComplex(1, [[[0, 0]] * 3, [[1, 2, 0], [0, 2, 1]]], name="T2")


def klein() -> DeltaComplex:
    """Square with sides a, b, a, b⁻¹ and diagonal c; relation b a b = a."""
    return DeltaComplex(1, [[[0, 0]] * 3, [[1, 0, 2], [0, 2, 1]]], name="Klein")


def circle(m: int = 3) -> DeltaComplex:
    return polygon(m).to_delta(name=f"S1_{m}")


def lens(p: int, q: int) -> DeltaComplex:
    """L(p, q) as the quotient of the join of two polygons by a free rotation."""
    if p < 2:
        raise ComplexError("lens space needs p >= 2")
    if math.gcd(p, q) != 1:
        raise ComplexError(f"lens space needs gcd(p, q) = 1, got p={p}, q={q}")
    m = p if p >= 3 else 2 * p
    s = m // p
    facets = []
    for i in range(m):
        for j in range(m):
            facets.append((i, (i + 1) % m, m + j, m + (j + 1) % m))
    S3 = SimplicialComplex(facets)
    rot = [(v + s) % m for v in range(m)] + [m + (j + q * s) % m for j in range(m)]
    Q = quotient_by_free_action(S3, [SimplicialMap(S3, S3, rot)])
    Q.name = f"L({p},{q})"
    return Q


def moore(p: int, n: int = 1) -> DeltaComplex:
    """Moore space M(Z/p, n): a disk whose boundary wraps p times, suspended n-1 times."""
    if p < 2 or n < 1:
        raise ComplexError("moore needs p >= 2 and n >= 1")
    # vertices: 0 = base, 1 = centre; edges: 0 = loop, 1..p = spokes
    edges = [[0, 0]] + [[1, 0]] * p
    tris = [[1 + (i + 1) % p, 1 + i, 0] for i in range(p)]
    K = DeltaComplex(2, [edges, tris], name=f"M({p},1)")
    for k in range(1, n):
        K = join_with_points(K, 2)
        K.name = f"M({p},{k + 1})"
    return K


def point() -> DeltaComplex:
    return DeltaComplex(1, [], name="point")


def load_bundled(name: str, validate: bool = True) -> DeltaComplex:
    if name not in BUNDLED:
        raise ComplexError(f"no bundled triangulation called {name!r}")
    text = resources.files("cohomops.data").joinpath(f"{name}.json").read_text()
    data = json.loads(text)
    from .complexes import complex_from_json
    K = complex_from_json(data)
    K.name = name
    K.meta["source"] = data.get("source", "")
    K.meta["certificate"] = data.get("certificate", {})
    if validate:
        validate_bundled(K, data.get("certificate", {}))
    return K


def validate_bundled(K: DeltaComplex, cert: dict):
    from .cohomology import homology
    from .duality import check_closed_pseudomanifold
    fv = cert.get("f_vector")
    if fv is not None and list(fv) != list(K.counts):
        raise BundledDataError(f"{K.name}: face vector {K.counts} differs from certificate {fv}")
    check_closed_pseudomanifold(K)
    hom = cert.get("homology")
    if hom is not None:
        got = [[homology(K, 0, d).free_rank, homology(K, 0, d).torsion] for d in range(K.dim + 1)]
        want = [[h[0], list(h[1])] for h in hom]
        if got != want:
            raise BundledDataError(f"{K.name}: homology {got} differs from certificate {want}")


def build_named_space(name: str, params=()) -> DeltaComplex:
    """Build a named space.  Parameters are positional integers."""
    params = [int(x) for x in params]

    def need(k):
        if len(params) != k:
            raise ComplexError(f"{name} takes {k} integer parameter(s), got {params}")

    if name == "sphere":
        need(1)
        return sphere(params[0])
    if name == "rp":
        need(1)
        return rp(params[0])
    if name == "torus":
        need(0)
        return torus()
    if name == "klein":
        need(0)
        return klein()
    if name == "lens":
        need(2)
        return lens(*params)
    if name == "moore":
        if len(params) == 1:
            params.append(1)
        need(2)
        return moore(*params)
    if name == "circle":
        if not params:
            params = [3]
        need(1)
        return circle(params[0])
    if name == "point":
        need(0)
        return point()
    if name in BUNDLED:
        need(0)
        return load_bundled(name)
    raise ComplexError(f"unknown space {name!r}; known: {', '.join(NAMES)}")


def antipodal_sd_sphere2():
    """sd(∂Δ³) with the free involution S ↦ complement(S)."""
    base = SimplicialComplex([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    sd = barycentric_subdivision(base)
    simp = [s for level in base.simplices() for s in level]
    idx = {s: i for i, s in enumerate(simp)}
    full = {0, 1, 2, 3}
    inv = [idx[tuple(sorted(full - set(s)))] for s in simp]
    return sd, SimplicialMap(sd, sd, inv)
