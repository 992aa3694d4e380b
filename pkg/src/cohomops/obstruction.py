"""Realizability verdicts for homology classes by submanifolds.

Two criteria are evaluated.  For a class in degree 4 of a closed oriented
manifold of dimension at least 7, it is realisable by a submanifold with
Spin^c normal bundle iff Sq³̄ of its Poincaré dual vanishes.  For a class of
codimension 3 with dual φ, such a representative forces φ ∪ φ = 0; that
test is one-directional, so passing it is reported as inconclusive.

Smooth structures cannot be checked on a combinatorial complex; every
verdict carries ``smoothness_assumed = True``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from math import gcd
from typing import Optional

import numpy as np

from .cohomology import CohomologyClass, RingMismatch, homology, homology_coordinates, is_coboundary
from .duality import (Chain, DualityFailure, NotOrientable, NotPseudomanifold,
                      check_closed_pseudomanifold, fundamental_class, poincare_dual)
from .steenrod import cup, sq3_bar


class Verdict(str, enum.Enum):
    REALIZABLE = "Realizable"
    NOT_REALIZABLE = "NotRealizable"
    NECESSARY_CONDITION_FAILS = "NecessaryConditionFails"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class RealizabilityVerdict:
    criterion: str
    verdict: Verdict
    flags: dict
    witness: Optional[CohomologyClass] = None
    trace: list = field(default_factory=list)
    certificate: object = field(default=None, repr=False)

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            w = {"degree": self.witness.degree, "ring": self.witness.ring,
                 "coordinates": [int(x) for x in self.witness.coordinates],
                 "spec": self.witness.to_spec()}
        return {"criterion": self.criterion, "verdict": self.verdict.value,
                "flags": dict(self.flags), "witness": w, "trace": list(self.trace)}


def hypothesis_flags(M, min_dim: Optional[int] = None) -> tuple[dict, list]:
    flags = {"smoothness_assumed": True}
    trace = []
    try:
        check_closed_pseudomanifold(M)
        flags["closed"] = True
    except NotPseudomanifold as e:
        flags["closed"] = False
        trace.append(str(e))
    if flags["closed"]:
        try:
            fundamental_class(M, 0)
            flags["oriented"] = True
        except NotOrientable as e:
            flags["oriented"] = False
            trace.append(str(e))
    else:
        flags["oriented"] = False
    if min_dim is not None:
        flags["dimension_ok"] = M.dim >= min_dim
        if not flags["dimension_ok"]:
            trace.append(f"dimension {M.dim} < {min_dim}")
    return flags, trace


def _check_class(M, phi, degree: int):
    if phi.complex is not M:
        raise ValueError("class does not live on M")
    if phi.p != 0:
        raise RingMismatch("an integral class is required")
    if phi.degree != degree:
        raise ValueError(f"class must have degree {degree}, got {phi.degree}")


def check_deg4_spinc(M, phi: CohomologyClass) -> RealizabilityVerdict:
    """Criterion for degree-4 classes; ``phi`` is the dual class in degree n - 4."""
    name = "deg4_spinc"
    n = M.dim
    _check_class(M, phi, n - 4)
    flags, trace = hypothesis_flags(M, min_dim=7)
    obs = sq3_bar(phi)
    cert = is_coboundary(obs.cochain, M, 0, obs.degree)
    flags["obstruction_vanishes"] = bool(cert.is_coboundary)
    trace.append(f"Sq3bar(phi) in H^{obs.degree}(M; Z) is " + ("zero" if cert else "nonzero"))
    hyp = flags["closed"] and flags["oriented"] and flags["dimension_ok"]
    if not hyp:
        trace.append("criterion not applicable: hypotheses fail")
        return RealizabilityVerdict(name, Verdict.INCONCLUSIVE, flags, None if cert else obs, trace, cert)
    if cert:
        trace.append("realisable with Spin^c normal bundle (obstruction vanishes)")
        return RealizabilityVerdict(name, Verdict.REALIZABLE, flags, None, trace, cert)
    trace.append("no representative with Spin^c normal bundle exists")
    return RealizabilityVerdict(name, Verdict.NOT_REALIZABLE, flags, obs, trace, cert)


def check_codim3_spinc(M, phi: CohomologyClass) -> RealizabilityVerdict:
    """Necessary condition φ ∪ φ = 0 for codimension-3 classes with Spin^c normal bundle."""
    name = "codim3_spinc"
    _check_class(M, phi, 3)
    flags, trace = hypothesis_flags(M)
    sq_phi = cup(phi, phi)
    if sq_phi.degree > M.dim:
        cert = None
        vanishes = True
    else:
        cert = is_coboundary(sq_phi.cochain, M, 0, sq_phi.degree)
        vanishes = bool(cert.is_coboundary)
    flags["cup_square_vanishes"] = vanishes
    if not vanishes:
        trace.append("phi ∪ phi is nonzero; the same holds for phi + 2x for every integral x (odd degree)")
        return RealizabilityVerdict(name, Verdict.NECESSARY_CONDITION_FAILS, flags, sq_phi, trace, cert)
    trace.append("phi ∪ phi = 0: necessary condition passes; it is not sufficient")
    return RealizabilityVerdict(name, Verdict.INCONCLUSIVE, flags, None, trace, cert)


@dataclass
class RealizabilityReport:
    degree: int
    dimension: int
    coordinates: list
    annotations: list
    verdicts: list
    diagnostics: list

    def to_json(self) -> dict:
        return {"degree": self.degree, "dimension": self.dimension,
                "coordinates": [int(x) for x in self.coordinates],
                "annotations": list(self.annotations),
                "verdicts": [v.to_json() for v in self.verdicts],
                "diagnostics": list(self.diagnostics)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _is_oriented(M) -> bool:
    try:
        fundamental_class(M, 0)
    except (NotPseudomanifold, NotOrientable):
        return False
    return True


def realizability_report(M, alpha: Chain) -> RealizabilityReport:
    """Annotate an integral homology class with the applicable known facts and checks."""
    if alpha.p != 0:
        raise RingMismatch("an integral homology class is required")
    n, k = M.dim, alpha.degree
    H = homology(M, 0, k)
    coords = homology_coordinates(M, 0, k, alpha.values)
    notes, verdicts, diag = [], [], []
    if k <= 6:
        notes.append("realizable: every class of degree at most 6 is realised by a submanifold (Thom)")
    if k == 1:
        notes.append("realizable: degree 1 rule (every class in H_1 is represented)")
    if k == 2:
        notes.append("realizable: degree 2 (Hopf)")
    if k == n - 2:
        notes.append("realizable: codimension 2 rule")
    if k == n - 1 and _is_oriented(M):
        free = coords[len(H.torsion):]
        g = 0
        for c in free:
            g = gcd(g, int(c))
        prim = g == 1 and not any(coords[:len(H.torsion)])
        notes.append("realizable: codimension 1 rule; a connected representative exists iff the class is "
                     "primitive; this class is " + ("primitive" if prim else "not primitive"))
    need_pd = (k == 4) or (k == n - 3)
    if need_pd:
        phi = None
        try:
            mu = fundamental_class(M, 0)
            phi = poincare_dual(alpha, mu)
        except (NotPseudomanifold, NotOrientable, DualityFailure) as e:
            diag.append(f"Poincaré dual unavailable: {e}")
            flags = {"smoothness_assumed": True, "duality": False}
            if k == 4:
                verdicts.append(RealizabilityVerdict("deg4_spinc", Verdict.INCONCLUSIVE, flags, None, [str(e)]))
            if k == n - 3:
                verdicts.append(RealizabilityVerdict("codim3_spinc", Verdict.INCONCLUSIVE, flags, None, [str(e)]))
        if phi is not None:
            if k == 4:
                verdicts.append(check_deg4_spinc(M, phi))
            if k == n - 3:
                verdicts.append(check_codim3_spinc(M, phi))
    return RealizabilityReport(k, n, coords, notes, verdicts, diag)
