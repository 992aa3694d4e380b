"""Exact cohomology operations on finite Δ-complexes."""

from .complexes import (ActionNotFree, ComplexError, DeltaComplex, DeltaMap, SimplicialComplex,
                        SimplicialMap, barycentric_subdivision, complex_from_json, mapping_torus,
                        product, projections, quotient_by_free_action, suspension)
from .linalg import NoSolution, SmithDecomposition, solve_linear, smith_normal_form
from .cohomology import (Certificate, CohomologyClass, CohomologyGroup, NotACocycle, RingMismatch,
                         cohomology, cohomology_class, homology, is_coboundary, reduce_coefficients)
from .steenrod import bockstein, cross, cup, cup_i, pullback, sq, sq3_bar
from .duality import (CharClassBundle, Chain, FundamentalClass, NotOrientable, NotPseudomanifold,
                      cap, fundamental_class, poincare_dual, spinc_obstruction, wu_and_sw_classes)
from .obstruction import (RealizabilityVerdict, Verdict, check_codim3_spinc, check_deg4_spinc,
                          realizability_report)
from .ring import (GradedAlgebraPresentation, OperationTable, TargetDegreeProfile, evaluate, kunneth,
                   load_presentation, naturality_obstruction)
from .spaces import build_named_space, load_bundled

__all__ = [name for name in dir() if not name.startswith("_")]
