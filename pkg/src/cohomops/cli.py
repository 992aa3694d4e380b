"""Command-line interface.

Complex arguments are a JSON file, a bundled name (``wu_manifold``) or a
named construction ``name:p1,p2`` (``lens:5,1``).  Class specs are
``ring:degree:coords`` in the basis printed by ``cohomology`` (or, for
homology classes, by ``homology``), or ``@file.json`` holding
``{"ring", "degree", "values"}`` for an explicit cochain or chain.

Exit codes: 0 success, 1 malformed input, 2 hypothesis or validation failure.
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import ring as ringmod
from .cohomology import (CohomologyClass, NotACocycle, RingMismatch, class_spec, cohomology,
                         homology, parse_ring, ring_name)
from .complexes import ComplexError, complex_from_json
from .duality import (Chain, DegeneratePairing, DualityFailure, NotOrientable, NotPseudomanifold,
                      wu_and_sw_classes)
from .obstruction import Verdict, check_codim3_spinc, check_deg4_spinc, realizability_report
from .spaces import BUNDLED, BundledDataError, build_named_space
from .steenrod import bockstein, cup, sq, sq3_bar

CACHE_ENV = "COHOMOPS_CACHE_DIR"


class InputError(ValueError):
    pass


class HypothesisError(ValueError):
    pass


# -- loading -------------------------------------------------------------------

def load_complex(arg: str):
    path = Path(arg)
    if path.exists():
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise InputError(f"{arg}: invalid JSON ({e})") from None
        try:
            K = complex_from_json(data)
        except ComplexError as e:
            raise InputError(f"{arg}: {e}") from None
        K.meta["_digest"] = hashlib.sha256(path.read_bytes()).hexdigest()
        return K
    stem = arg[:-5] if arg.endswith(".json") else arg
    if stem in BUNDLED:
        K = build_named_space(stem)
    else:
        name, _, params = stem.partition(":")
        try:
            vals = [int(x) for x in params.split(",") if x]
        except ValueError:
            raise InputError(f"bad parameters in {arg!r}") from None
        try:
            K = build_named_space(name, vals)
        except ComplexError as e:
            raise InputError(f"{arg}: not a file, and {e}") from None
    K.meta["_digest"] = hashlib.sha256(json.dumps(K.to_json(), sort_keys=True).encode()).hexdigest()
    return K


def _parse_spec(spec: str):
    """``(p, degree, coords)`` or ``(p, degree, values)`` from a file."""
    if spec.startswith("@") or spec.endswith(".json"):
        path = spec[1:] if spec.startswith("@") else spec
        try:
            d = json.loads(Path(path).read_text())
            return parse_ring(d["ring"]), int(d["degree"]), None, np.asarray(d["values"], dtype=np.int64)
        except (OSError, KeyError, ValueError, TypeError) as e:
            raise InputError(f"cannot read cochain file {path!r}: {e}") from None
    parts = spec.split(":")
    if len(parts) != 3:
        raise InputError(f"class spec {spec!r} must look like ring:degree:coords (e.g. z2:2:1,0)")
    try:
        p = parse_ring(parts[0])
        deg = int(parts[1])
        coords = [int(x) for x in parts[2].split(",") if x.strip()]
    except ValueError as e:
        raise InputError(f"class spec {spec!r}: {e}") from None
    return p, deg, coords, None


def load_class(K, spec: str) -> CohomologyClass:
    p, deg, coords, values = _parse_spec(spec)
    if deg < 0:
        raise InputError(f"negative degree {deg}")
    if values is not None:
        if len(values) != K.count(deg):
            raise InputError(f"cochain has {len(values)} entries, expected {K.count(deg)}")
        x = CohomologyClass(K, deg, p, values)
        x.coordinates  # raises NotACocycle
        return x
    G = cohomology(K, p, deg)
    if len(coords) != G.rank:
        raise InputError(f"H^{deg}(-; {ring_name(p)}) = {G.describe()} needs {G.rank} coordinates, "
                         f"got {len(coords)}")
    return G.element(coords)


def load_chain(K, spec: str) -> Chain:
    p, deg, coords, values = _parse_spec(spec)
    if deg < 0 or deg > K.dim:
        raise InputError(f"degree {deg} out of range for a {K.dim}-dimensional complex")
    if values is not None:
        if len(values) != K.count(deg):
            raise InputError(f"chain has {len(values)} entries, expected {K.count(deg)}")
        return Chain(K, deg, p, values)
    H = homology(K, p, deg)
    if len(coords) != len(H.basis):
        raise InputError(f"H_{deg}(-; {ring_name(p)}) = {H.describe()} needs {len(H.basis)} coordinates, "
                         f"got {len(coords)}")
    z = np.zeros(K.count(deg), dtype=np.int64)
    for c, b in zip(coords, H.basis):
        z = z + c * b
    return Chain(K, deg, p, z)


def class_json(x: CohomologyClass) -> dict:
    G = x.group
    coords = x.coordinates
    return {"degree": x.degree, "ring": x.ring, "group": G.describe(),
            "coordinates": [int(c) for c in coords], "zero": not any(coords),
            "spec": class_spec(x.p, x.degree, coords)}


def _class_text(label: str, x: CohomologyClass) -> str:
    d = class_json(x)
    state = "zero" if d["zero"] else "nonzero"
    return f"{label} = {d['spec']}  ({state} in H^{x.degree}(-; {x.ring}) = {d['group']})"


# -- cache ---------------------------------------------------------------------

def _cached(K, key: str, compute):
    """Memoise a JSON-able result on disk when the cache variable is set."""
    root = os.environ.get(CACHE_ENV)
    if not root or "_digest" not in K.meta:
        return compute()
    path = Path(root) / f"{K.meta['_digest'][:32]}-{key}.json"
    if path.exists():
        return json.loads(path.read_text())
    out = compute()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(out, sort_keys=True))
    return out


# -- commands ------------------------------------------------------------------

def cmd_build(a):
    K = build_named_space(a.name, a.params)
    text = json.dumps(K.to_json(), sort_keys=True)
    if a.output:
        Path(a.output).write_text(text + "\n")
        info = {"name": a.name, "params": a.params, "f_vector": list(K.counts), "output": a.output}
        return info, f"wrote {a.output}: f-vector {list(K.counts)}"
    return json.loads(text), text


def _group_rows(K, p, degrees, kind):
    rows = []
    for d in degrees:
        if kind == "homology":
            H = homology(K, p, d)
            basis_orders = H.torsion + [p if p else 0] * H.free_rank
            rows.append({"degree": d, "ring": ring_name(p), "group": H.describe(),
                         "free_rank": H.free_rank, "torsion": list(H.torsion), "orders": basis_orders})
        else:
            G = cohomology(K, p, d)
            rows.append({"degree": d, "ring": ring_name(p), "group": G.describe(),
                         "free_rank": G.free_rank, "torsion": list(G.torsion), "orders": G.orders})
    return rows


def _groups(a, kind):
    K = load_complex(a.file)
    p = parse_ring(a.ring)
    degrees = [a.deg] if a.deg is not None else list(range(K.dim + 1))
    if a.deg is not None and not 0 <= a.deg:
        raise InputError("degree must be non-negative")
    rows = _cached(K, f"{kind}-{p}-{'-'.join(map(str, degrees))}",
                   lambda: _group_rows(K, p, degrees, kind))
    sym = "H_" if kind == "homology" else "H^"
    if a.deg is not None:
        text = rows[0]["group"]
    else:
        text = "\n".join(f"{sym}{r['degree']} = {r['group']}" for r in rows)
    out = rows[0] if a.deg is not None else {"groups": rows}
    return out, text


def cmd_homology(a):
    return _groups(a, "homology")


def cmd_cohomology(a):
    return _groups(a, "cohomology")


def cmd_cup(a):
    K = load_complex(a.file)
    x, y = load_class(K, a.a), load_class(K, a.b)
    if x.degree + y.degree > K.dim:
        raise InputError("product degree exceeds the dimension")
    z = cup(x, y)
    return class_json(z), _class_text("a ∪ b", z)


def cmd_sq(a):
    K = load_complex(a.file)
    x = load_class(K, a.cls)
    if x.degree + a.k > K.dim:
        raise InputError(f"Sq^{a.k} of a degree-{x.degree} class lands above the dimension")
    z = sq(a.k, x)
    return class_json(z), _class_text(f"Sq^{a.k}(x)", z)


def cmd_bockstein(a):
    K = load_complex(a.file)
    x = load_class(K, a.cls)
    if x.p != a.p:
        raise InputError(f"class has coefficients {x.ring}, expected Z/{a.p}")
    if x.degree + 1 > K.dim:
        raise InputError("Bockstein lands above the dimension")
    z = bockstein(x, a.kind)
    return class_json(z), _class_text("β(x)", z)


def cmd_sq3bar(a):
    K = load_complex(a.file)
    x = load_class(K, a.cls)
    if x.degree + 3 > K.dim:
        raise InputError("Sq3bar lands above the dimension")
    z = sq3_bar(x)
    return class_json(z), _class_text("Sq3bar(x)", z)


def _charclasses(K):
    b = wu_and_sw_classes(K)
    out = {"orientable": b.orientable, "spin_c": b.spin_c,
           "v": [class_json(v) for v in b.v], "w": [class_json(w) for w in b.w],
           "W3": class_json(b.W3)}
    return out


def cmd_charclasses(a):
    K = load_complex(a.file)
    out = _cached(K, "charclasses", lambda: _charclasses(K))
    lines = [f"orientable: {out['orientable']}"]
    lines += [f"v{i} = {v['spec']}" + ("" if v["zero"] else "  (nonzero)") for i, v in enumerate(out["v"])]
    lines += [f"w{i} = {w['spec']}" + ("" if w["zero"] else "  (nonzero)") for i, w in enumerate(out["w"])]
    lines.append(f"W3 = {out['W3']['spec']}" + ("" if out["W3"]["zero"] else "  (nonzero)"))
    lines.append(f"spin_c: {out['spin_c']}")
    return out, "\n".join(lines)


def cmd_spinc(a):
    K = load_complex(a.file)
    full = _cached(K, "charclasses", lambda: _charclasses(K))
    out = {"spin_c": full["spin_c"], "W3": full["W3"], "w2": full["w"][2] if len(full["w"]) > 2 else None,
           "orientable": full["orientable"]}
    text = f"spin_c: {out['spin_c']}\nW3 = {out['W3']['spec']} ({'zero' if out['W3']['zero'] else 'nonzero'})"
    return out, text


def _verdict_text(v) -> str:
    lines = [f"{v.criterion}: {v.verdict.value}"]
    lines += [f"  {k}: {val}" for k, val in sorted(v.flags.items())]
    if v.witness is not None:
        lines.append(f"  witness: {v.witness.to_spec()}")
    lines += [f"  - {t}" for t in v.trace]
    return "\n".join(lines)


def cmd_check(a):
    K = load_complex(a.file)
    phi = load_class(K, a.phi)
    try:
        v = check_deg4_spinc(K, phi) if a.which == "deg4" else check_codim3_spinc(K, phi)
    except (ValueError, RingMismatch) as e:
        if isinstance(e, (NotPseudomanifold, NotOrientable)):
            raise
        raise InputError(str(e)) from None
    failed = [k for k in ("closed", "oriented", "dimension_ok") if v.flags.get(k) is False]
    if v.verdict is Verdict.INCONCLUSIVE and failed:
        # criterion not applicable: report why, but signal a hypothesis failure
        raise _FailedWithOutput(v.to_json(), _verdict_text(v))
    return v.to_json(), _verdict_text(v)


def cmd_report(a):
    K = load_complex(a.file)
    alpha = load_chain(K, a.alpha)
    r = realizability_report(K, alpha)
    lines = [f"class of degree {r.degree} in a {r.dimension}-complex, coordinates {r.coordinates}"]
    lines += [f"* {n}" for n in r.annotations]
    lines += [_verdict_text(v) for v in r.verdicts]
    lines += [f"! {d}" for d in r.diagnostics]
    return r.to_json(), "\n".join(lines)


def _parse_assign(items) -> dict:
    out = {}
    for item in items or []:
        for part in item.split(","):
            if not part.strip():
                continue
            k, eq, v = part.partition("=")
            if not eq or not k.strip() or not v.strip():
                raise InputError(f"assignment {part!r} must look like name=expression")
            out[k.strip()] = v.strip()
    return out


def _presentation(a):
    A = ringmod.load_presentation(a.presentation)
    sig = ringmod.operation_signature(A)
    for m in a.sphere or []:
        A = ringmod.kunneth(A, ringmod.sphere_algebra(m, A.p, sig))
    return A


def cmd_ring_eval(a):
    A = _presentation(a)
    x = ringmod.evaluate(a.expr, A, _parse_assign(a.assign))
    out = {"expression": a.expr, "degree": x.degree, "element": str(x),
           "coefficients": [[c, n] for n, c in x.coeffs], "zero": x.is_zero}
    return out, f"{a.expr} = {x}  (degree {x.degree})"


def cmd_ring_obstruct(a):
    A = _presentation(a)
    target = ringmod.resolve_profile(a.target, A)
    res = ringmod.naturality_obstruction(A, _parse_assign(a.assign), target, a.expr)
    out = res.to_json()
    out["target"] = target.name
    text = f"{res.verdict}: {res.reason}"
    if res.witness is not None and res.obstructed:
        text += f"\nwitness: {res.witness} in degree {res.witness.degree}"
    return out, text


def cmd_selftest(a):
    from .selftest import run_selftest
    results = run_selftest(seed=a.seed, trials=a.trials)
    ok = all(r["failures"] == 0 for r in results)
    text = "\n".join(f"{'PASS' if r['failures'] == 0 else 'FAIL'} {r['name']}: "
                     f"{r['instances'] - r['failures']}/{r['instances']}" for r in results)
    out = {"seed": a.seed, "results": results, "ok": ok}
    if not ok:
        raise _FailedWithOutput(out, text)
    return out, text


class _FailedWithOutput(Exception):
    """Emit the normal output, then exit with status 2."""

    def __init__(self, out, text):
        self.out, self.text = out, text


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cohomops", description="Exact cohomology operations on Δ-complexes.")
    ap.add_argument("--json", action="store_true", help="emit JSON")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        p.set_defaults(fn=fn)
        return p

    p = add("build", cmd_build, "build a named space")
    p.add_argument("name")
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("-o", "--output")

    for name, fn in (("homology", cmd_homology), ("cohomology", cmd_cohomology)):
        p = add(name, fn, f"{name} groups")
        p.add_argument("file")
        p.add_argument("--ring", default="z")
        p.add_argument("--deg", type=int)

    p = add("cup", cmd_cup, "cup product")
    p.add_argument("file")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = add("sq", cmd_sq, "Steenrod square")
    p.add_argument("file")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--class", dest="cls", required=True)

    p = add("bockstein", cmd_bockstein, "Bockstein")
    p.add_argument("file")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--kind", choices=["integral", "modp"], default="integral")
    p.add_argument("--class", dest="cls", required=True)

    p = add("sq3bar", cmd_sq3bar, "integral Steenrod square")
    p.add_argument("file")
    p.add_argument("--class", dest="cls", required=True)

    for name, fn in (("charclasses", cmd_charclasses), ("spinc", cmd_spinc)):
        p = add(name, fn, "Wu/Stiefel-Whitney classes" if name == "charclasses" else "Spin^c verdict")
        p.add_argument("file")

    p = add("check", cmd_check, "realizability criteria")
    p.add_argument("which", choices=["deg4", "codim3"])
    p.add_argument("file")
    p.add_argument("--phi", required=True)

    p = add("report", cmd_report, "realizability report for a homology class")
    p.add_argument("file")
    p.add_argument("--alpha", required=True)

    p = sub.add_parser("ring", help="ring-level prover")
    rsub = p.add_subparsers(dest="ring_command", required=True)
    for name, fn in (("eval", cmd_ring_eval), ("obstruct", cmd_ring_obstruct)):
        q = rsub.add_parser(name)
        q.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        q.set_defaults(fn=fn)
        q.add_argument("presentation")
        q.add_argument("--expr", required=True)
        q.add_argument("--assign", action="append")
        q.add_argument("--sphere", type=int, action="append",
                       help="tensor with H*(S^m) first (repeatable)")
        if name == "obstruct":
            q.add_argument("--target", required=True)

    p = add("selftest", cmd_selftest, "randomized property checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    return ap


INPUT_ERRORS = (InputError, ComplexError, ringmod.RingError, NotACocycle, RingMismatch,
                json.JSONDecodeError, OSError)
HYPOTHESIS_ERRORS = (NotPseudomanifold, NotOrientable, DegeneratePairing, DualityFailure,
                     BundledDataError, HypothesisError)


def _emit(out, text, as_json, stream):
    if as_json:
        stream.write(json.dumps(out, sort_keys=True, indent=2) + "\n")
    else:
        stream.write(text + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            a = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    try:
        out, text = a.fn(a)
    except _FailedWithOutput as e:
        _emit(e.out, e.text, a.json, stdout)
        return 2
    except HYPOTHESIS_ERRORS as e:
        stderr.write(f"error: {e}\n")
        return 2
    except INPUT_ERRORS as e:
        stderr.write(f"error: {e}\n")
        return 1
    except ValueError as e:
        stderr.write(f"error: {e}\n")
        return 1
    _emit(out, text, a.json, stdout)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
