"""Exhaustive search for obstruction witnesses on small product complexes.

For each product and each degree it walks every integral class whose torsion
coordinates range over the full group and whose free coordinates lie in
{0, 1}, and reports

* classes with ``Sq3bar(x) != 0`` (candidates for the degree-4 checker), and
* degree-3 classes with ``x ∪ x != 0`` (candidates for the codimension-3 check).

    python3 scripts/search_witnesses.py [--max-cells 200000] [--json]
"""
import argparse
import itertools
import json
import time

from cohomops.cohomology import cohomology
from cohomops.complexes import product
from cohomops.spaces import build_named_space, lens, moore, rp
from cohomops.steenrod import cup, sq3_bar


def factors():
    return {"rp2": rp(2), "rp3": rp(3), "rp4": rp(4), "lens31": lens(3, 1), "moore22": moore(2, 2),
            "wu": build_named_space("wu_manifold"), "rp3_min": build_named_space("rp3_min")}


def classes(G):
    ranges = [range(o) for o in G.torsion] + [range(2)] * G.free_rank
    for coords in itertools.product(*ranges):
        if any(coords):
            yield G.element(list(coords))


def search(pairs, F, max_cells):
    found = []
    for a, b in pairs:
        A, B = F[a], F[b]
        size = sum(A.count(i) * B.count(j) for i in range(A.dim + 1) for j in range(B.dim + 1)
                   if i + j <= A.dim + B.dim)
        if size > max_cells:
            continue
        t = time.time()
        P = product(A, B)
        for k in range(1, P.dim - 2):
            for x in classes(cohomology(P, 0, k)):
                if not sq3_bar(x).is_zero():
                    found.append({"space": f"{a}x{b}", "kind": "sq3bar", "class": x.to_spec()})
                    break
        if P.dim >= 6:
            for x in classes(cohomology(P, 0, 3)):
                if not cup(x, x).is_zero():
                    found.append({"space": f"{a}x{b}", "kind": "cup_square", "class": x.to_spec()})
                    break
        print(f"{a} x {b}: {P.counts[-1]} top cells, {time.time() - t:.1f}s", flush=True)
    return found


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-cells", type=int, default=200_000)
    ap.add_argument("--json", action="store_true")
    a = ap.parse_args()
    F = factors()
    names = sorted(F)
    pairs = [(x, y) for x, y in itertools.combinations_with_replacement(names, 2)]
    found = search(pairs, F, a.max_cells)
    if a.json:
        print(json.dumps(found, indent=2))
    else:
        for f in found:
            print(f"{f['kind']:>10}  {f['space']:<16} {f['class']}")


if __name__ == "__main__":
    main()
