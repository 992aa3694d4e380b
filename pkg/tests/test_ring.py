import json

import pytest
from hypothesis import given, settings, strategies as st

from cohomops.ring import (ALL_DEGREES, DegreeMismatch, GradedAlgebraPresentation, OperationTable, RingError,
                           TargetDegreeProfile, UnknownName, bundled_profiles, evaluate, ground_field, kunneth,
                           load_presentation, naturality_obstruction, operation_signature, resolve_profile,
                           sphere_algebra)


@pytest.fixture(scope="module")
def sp2():
    return load_presentation("sp2_mod3")


def mso3():
    return resolve_profile("mso3_mod3")


def test_shipped_presentation_structure(sp2):
    assert sp2.p == 3
    assert [d for _, d in sp2.basis] == [0, 3, 7, 10]
    assert sp2.check_structure() == []
    assert sp2.operations["P1_3"].images == {"u": {"v": 1}}


def test_eval_examples(sp2):
    x = evaluate("u ∪ P1_3(u)", sp2)
    assert x.degree == 10 and x.coeffs == (("w", 1),)
    for name in ("u", "v", "w", "1"):
        assert evaluate(f"1 ∪ {name}", sp2) == evaluate(name, sp2)
    sq = evaluate("u ∪ u", sp2)
    assert sq.is_zero and sq.degree == 6
    assert evaluate("P1_3(u) ∪ u", sp2) == evaluate("2 w", sp2)
    assert evaluate("u*v + v*u", sp2).is_zero
    assert evaluate("-(u ∪ v)", sp2) == evaluate("2*w", sp2)


def test_eval_errors(sp2):
    with pytest.raises(UnknownName):
        evaluate("u ∪ z", sp2)
    with pytest.raises(UnknownName):
        evaluate("P7(u)", sp2)
    with pytest.raises(DegreeMismatch):
        evaluate("u + v", sp2)
    with pytest.raises(RingError):
        evaluate("u ∪ (v", sp2)
    with pytest.raises(RingError):
        evaluate("u $ v", sp2)


def test_obstruction_against_mso3_profile(sp2):
    r = naturality_obstruction(sp2, {"tau": "u"}, mso3(), "u ∪ P1_3(u)")
    assert r.obstructed and r.degree == 10 and r.witness.coeffs == (("w", 1),)
    # the same expression written with the target class name
    assert naturality_obstruction(sp2, {"tau": "u"}, mso3(), "tau ∪ P1_3(tau)").obstructed
    r = naturality_obstruction(sp2, {"tau": "u"}, ALL_DEGREES, "u ∪ P1_3(u)")
    assert r.verdict == "Inconclusive" and "nonzero" in r.reason
    r = naturality_obstruction(sp2, {"tau": "u"}, mso3(), "u ∪ u")
    assert r.verdict == "Inconclusive" and r.reason.startswith("vanished")
    # degree 7 = 3 + 4 is allowed by the profile
    r = naturality_obstruction(sp2, {"tau": "u"}, mso3(), "P1_3(u)")
    assert r.verdict == "Inconclusive"


@pytest.mark.parametrize("c", [1, 2])
def test_verdict_invariant_under_unit_normalisation(sp2, c):
    d = sp2.to_json()
    d["operations"][0]["images"] = {"u": [[c, "v"]]}
    A = GradedAlgebraPresentation.from_json(d)
    r = naturality_obstruction(A, {"tau": "u"}, mso3(), "u ∪ P1_3(u)")
    assert r.obstructed
    # and under rescaling the assigned class
    r = naturality_obstruction(A, {"tau": "2 u"}, mso3(), "tau ∪ P1_3(tau)")
    assert r.obstructed


@pytest.mark.parametrize("m", [11, 12])
def test_persists_after_product_with_sphere(sp2, m):
    P = kunneth(sp2, sphere_algebra(m, 3, operation_signature(sp2)))
    assert P.check_structure() == []
    assert len(P.basis) == 8
    r = naturality_obstruction(P, {"tau": "u"}, mso3(), "u ∪ P1_3(u)")
    assert r.obstructed and r.degree == 10


def test_kunneth_with_ground_field_is_identity(sp2):
    P = kunneth(sp2, ground_field(3, operation_signature(sp2)))
    assert P.basis == sp2.basis and P.products == sp2.products
    assert P.operations["P1_3"].images == sp2.operations["P1_3"].images


def test_kunneth_signs_and_cartan(sp2):
    P = kunneth(sp2, sphere_algebra(11, 3, operation_signature(sp2)))
    # (u⊗s)(v⊗1) = (-1)^{11·7} uv⊗s
    assert evaluate("u ∪ s11 ∪ v", P) == evaluate("2 w⊗s11", P)
    assert evaluate("P1_3(u ∪ s11)", P) == evaluate("v⊗s11", P)


def test_kunneth_errors(sp2):
    with pytest.raises(RingError):
        kunneth(sp2, sphere_algebra(3, 2))
    nocartan = sphere_algebra(5, 3, [("P1_3", 4, None)])
    d = sp2.to_json()
    del d["operations"][0]["cartan"]
    with pytest.raises(RingError):
        kunneth(GradedAlgebraPresentation.from_json(d), nocartan)
    with pytest.raises(RingError):
        kunneth(sp2, sphere_algebra(5, 3))


def _mod2_cube():
    # H*(RP^infinity; Z/2) through degree 9 truncated in degree 3n: x in degree 3 with x^2 != 0
    return GradedAlgebraPresentation(2, [("1", 0), ("x", 3), ("y", 6)], {("x", "x"): {"y": 1}})


def test_mspinc3_relation():
    prof = bundled_profiles()["mspinc3"]
    A = _mod2_cube()
    assert A.check_structure() == []
    r = naturality_obstruction(A, {"tau": "x"}, prof, "tau")
    assert r.obstructed and r.expression == "tau ∪ tau" and r.witness.degree == 6
    B = GradedAlgebraPresentation(2, [("1", 0), ("x", 3)], {})
    assert naturality_obstruction(B, {"tau": "x"}, prof, "tau").verdict == "Inconclusive"


def test_structure_checks_catch_errors():
    with pytest.raises(DegreeMismatch):
        GradedAlgebraPresentation(3, [("1", 0), ("u", 3), ("v", 7)], {("u", "u"): {"v": 1}})
    with pytest.raises(UnknownName):
        GradedAlgebraPresentation(3, [("1", 0), ("u", 3)], {("u", "q"): {"u": 1}})
    with pytest.raises(DegreeMismatch):
        GradedAlgebraPresentation(3, [("1", 0), ("u", 3), ("v", 7)], {},
                                  operations={"P": OperationTable("P", 3, {"u": {"v": 1}})})
    bad = GradedAlgebraPresentation(3, [("1", 0), ("a", 2), ("b", 2), ("c", 4)],
                                    {("a", "b"): {"c": 1}, ("b", "a"): {"c": 2}})
    assert any("commutativity" in p for p in bad.check_structure())


def test_json_round_trip(sp2, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(sp2.to_json()))
    A = load_presentation(str(path))
    assert A.basis == sp2.basis and A.products == sp2.products
    assert set(A.profiles) == set(sp2.profiles)
    with pytest.raises(RingError):
        load_presentation("no_such_presentation")


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 40))
def test_profile_predicate(d):
    T = mso3()
    assert T.nonzero_in(d) == (d == 0 or (d >= 3 and d % 4 == 3))
    assert TargetDegreeProfile(degrees=(0, 5)).nonzero_in(d) == (d in (0, 5))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from(["u", "v", "w", "1", "P1_3(u)"]), min_size=1, max_size=3),
       st.sampled_from(["mso3_mod3", "all"]))
def test_obstructed_implies_nonzero_witness(factors, target):
    A = load_presentation("sp2_mod3")
    expr = " ∪ ".join(factors)
    r = naturality_obstruction(A, {"tau": "u"}, resolve_profile(target, A), expr)
    if r.obstructed:
        assert r.witness is not None and not r.witness.is_zero
        assert not evaluate(expr, A).is_zero
