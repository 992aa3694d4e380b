"""Ring-level obstruction for the degree-3 class of Sp(2), alone and times spheres.

    python3 scripts/sp2_obstruction.py [--spheres 11 12 13]
"""
import argparse

from cohomops.ring import (evaluate, kunneth, load_presentation, naturality_obstruction, operation_signature,
                           resolve_profile, sphere_algebra)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--spheres", type=int, nargs="*", default=[11, 12])
    ap.add_argument("--expr", default="tau ∪ P1_3(tau)")
    a = ap.parse_args()
    A = load_presentation("sp2_mod3")
    target = resolve_profile("mso3_mod3", A)
    spaces = [("Sp(2)", A)]
    for m in a.spheres:
        spaces.append((f"Sp(2) x S^{m}", kunneth(A, sphere_algebra(m, 3, operation_signature(A)))))
    for label, B in spaces:
        problems = B.check_structure()
        r = naturality_obstruction(B, {"tau": "u"}, target, a.expr)
        value = evaluate(a.expr, B, {"tau": "u"})
        print(f"{label:<14} basis {len(B.basis):>2}  structure {'ok' if not problems else problems}  "
              f"{a.expr} = {value} (deg {value.degree})  -> {r.verdict}")


if __name__ == "__main__":
    main()
