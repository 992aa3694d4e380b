"""Finitely presented graded algebras over Z/p with operation tables.

This is where classes that have no triangulation in the package live (for
example the mod-3 cohomology of Sp(2)).  The prover checks degree-gap
contradictions: if pulling back a target class along a map would produce a
nonzero element in a degree where the target has no cohomology, or would
violate a relation known in the target, no such map exists.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from itertools import product as iproduct
from typing import Optional


class RingError(ValueError):
    pass


class UnknownName(RingError):
    pass


class DegreeMismatch(RingError):
    pass


# -- elements --------------------------------------------------------------

@dataclass(frozen=True)
class Element:
    """Homogeneous element: ``coeffs`` maps basis names to nonzero residues."""

    coeffs: tuple  # sorted ((name, coeff), ...)
    degree: int

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(n if c == 1 else f"{c}*{n}" for n, c in self.coeffs)


def _element(d: dict, degree: int, p: int) -> Element:
    items = tuple(sorted((n, c % p) for n, c in d.items() if c % p))
    return Element(items, degree)


@dataclass
class OperationTable:
    name: str
    shift: int
    images: dict            # basis name -> {name: coeff}
    cartan: Optional[list] = None   # [[left_op, right_op], ...]; "id" is identity

    def to_json(self) -> dict:
        d = {"name": self.name, "shift": self.shift,
             "images": {k: [[c, n] for n, c in sorted(v.items())] for k, v in self.images.items()}}
        if self.cartan is not None:
            d["cartan"] = [list(x) for x in self.cartan]
        return d


@dataclass
class TargetDegreeProfile:
    """Where the target's cohomology can be nonzero, plus relations known to hold there."""

    name: str = ""
    modulus: Optional[int] = None
    residues: tuple = ()
    degrees: Optional[tuple] = None
    min_degree: int = 0
    all_degrees: bool = False
    vanishing: tuple = ()   # expressions in target class names that are zero in the target

    def nonzero_in(self, degree: int) -> bool:
        if degree == 0:
            return True
        if self.all_degrees:
            return True
        if self.degrees is not None:
            return degree in self.degrees
        if self.modulus:
            return degree >= self.min_degree and degree % self.modulus in self.residues
        return False

    @classmethod
    def from_json(cls, d: dict) -> "TargetDegreeProfile":
        return cls(name=d.get("name", ""), modulus=d.get("modulus"),
                   residues=tuple(d.get("residues", ())),
                   degrees=tuple(d["degrees"]) if "degrees" in d else None,
                   min_degree=d.get("min_degree", 0), all_degrees=bool(d.get("all", False)),
                   vanishing=tuple(d.get("vanishing", ())))

    def to_json(self) -> dict:
        d: dict = {"name": self.name}
        if self.all_degrees:
            d["all"] = True
        if self.degrees is not None:
            d["degrees"] = list(self.degrees)
        if self.modulus:
            d.update(modulus=self.modulus, residues=list(self.residues), min_degree=self.min_degree)
        if self.vanishing:
            d["vanishing"] = list(self.vanishing)
        return d


ALL_DEGREES = TargetDegreeProfile(name="all", all_degrees=True)


@dataclass
class GradedAlgebraPresentation:
    p: int
    basis: list                      # [(name, degree)]
    products: dict                   # (left, right) -> {name: coeff}
    unit: str = "1"
    operations: dict = field(default_factory=dict)
    profiles: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        self.degree_of = {n: d for n, d in self.basis}
        if len(self.degree_of) != len(self.basis):
            raise RingError("duplicate basis names")
        if self.unit not in self.degree_of or self.degree_of[self.unit] != 0:
            raise RingError("unit must be a degree-0 basis element")
        for (l, r), res in self.products.items():
            for n in (l, r, *res):
                if n not in self.degree_of:
                    raise UnknownName(f"product refers to unknown basis element {n!r}")
            for n in res:
                if self.degree_of[n] != self.degree_of[l] + self.degree_of[r]:
                    raise DegreeMismatch(f"product {l}*{r} -> {n} is not degree-additive")
        for op in self.operations.values():
            for src, img in op.images.items():
                if src not in self.degree_of:
                    raise UnknownName(f"operation {op.name} refers to unknown element {src!r}")
                for n in img:
                    if self.degree_of.get(n) != self.degree_of[src] + op.shift:
                        raise DegreeMismatch(f"{op.name}({src}) -> {n} violates the degree shift")

    # -- arithmetic ------------------------------------------------------------
    def basis_element(self, name: str) -> Element:
        if name not in self.degree_of:
            raise UnknownName(f"unknown basis element {name!r}")
        return Element(((name, 1),), self.degree_of[name])

    def zero(self, degree: int) -> Element:
        return Element((), degree)

    def add(self, x: Element, y: Element, sign: int = 1) -> Element:
        if x.is_zero and y.is_zero:
            return Element((), x.degree)
        if not x.is_zero and not y.is_zero and x.degree != y.degree:
            raise DegreeMismatch(f"cannot add elements of degrees {x.degree} and {y.degree}")
        deg = x.degree if not x.is_zero else y.degree
        d = x.as_dict()
        for n, c in y.coeffs:
            d[n] = d.get(n, 0) + sign * c
        return _element(d, deg, self.p)

    def scale(self, c: int, x: Element) -> Element:
        return _element({n: c * v for n, v in x.coeffs}, x.degree, self.p)

    def basis_product(self, l: str, r: str) -> dict:
        if l == self.unit:
            return {r: 1}
        if r == self.unit:
            return {l: 1}
        return self.products.get((l, r), {})

    def mul(self, x: Element, y: Element) -> Element:
        d: dict = {}
        for a, ca in x.coeffs:
            for b, cb in y.coeffs:
                for n, c in self.basis_product(a, b).items():
                    d[n] = d.get(n, 0) + ca * cb * c
        return _element(d, x.degree + y.degree, self.p)

    def apply(self, op_name: str, x: Element) -> Element:
        op = self.operations.get(op_name)
        if op is None:
            raise UnknownName(f"unknown operation {op_name!r}")
        d: dict = {}
        for a, ca in x.coeffs:
            for n, c in op.images.get(a, {}).items():
                d[n] = d.get(n, 0) + ca * c
        return _element(d, x.degree + op.shift, self.p)

    # -- structure checks ----------------------------------------------------
    def check_structure(self) -> list[str]:
        """Associativity, graded commutativity and unit law over the basis; returns problems."""
        problems = []
        els = [self.basis_element(n) for n, _ in self.basis]
        for x in els:
            if self.mul(self.basis_element(self.unit), x) != x or self.mul(x, self.basis_element(self.unit)) != x:
                problems.append(f"unit law fails on {x}")
        for x, y in iproduct(els, els):
            xy, yx = self.mul(x, y), self.mul(y, x)
            sgn = -1 if (x.degree * y.degree) % 2 else 1
            if xy != self.scale(sgn, yx):
                problems.append(f"graded commutativity fails for {x}, {y}")
        for x, y, z in iproduct(els, els, els):
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                problems.append(f"associativity fails for {x}, {y}, {z}")
        return problems

    # -- serialisation ---------------------------------------------------------
    def to_json(self) -> dict:
        return {"name": self.name, "field": self.p, "unit": self.unit,
                "basis": [{"name": n, "degree": d} for n, d in self.basis],
                "products": [{"left": l, "right": r, "result": [[c, n] for n, c in sorted(res.items())]}
                             for (l, r), res in sorted(self.products.items())],
                "operations": [op.to_json() for op in self.operations.values()],
                "profiles": [pr.to_json() for pr in self.profiles.values()]}

    @classmethod
    def from_json(cls, d: dict) -> "GradedAlgebraPresentation":
        try:
            p = int(d["field"])
            basis = [(b["name"], int(b["degree"])) for b in d["basis"]]
        except (KeyError, TypeError, ValueError) as e:
            raise RingError(f"malformed presentation: {e}") from None
        products = {}
        for k, pr in enumerate(d.get("products", [])):
            try:
                products[(pr["left"], pr["right"])] = {n: int(c) for c, n in pr["result"]}
            except (KeyError, TypeError, ValueError):
                raise RingError(f"products[{k}] is malformed") from None
        ops = {}
        for op in d.get("operations", []):
            imgs = {src: {n: int(c) for c, n in img} for src, img in op.get("images", {}).items()}
            ops[op["name"]] = OperationTable(op["name"], int(op["shift"]), imgs, op.get("cartan"))
        profiles = {pr["name"]: TargetDegreeProfile.from_json(pr) for pr in d.get("profiles", [])}
        return cls(p, basis, products, d.get("unit", "1"), ops, profiles, d.get("name", ""))


def load_presentation(path_or_name: str) -> GradedAlgebraPresentation:
    """Load from a JSON file path, or a bundled name such as ``sp2_mod3``."""
    import os
    if os.path.exists(path_or_name):
        with open(path_or_name) as fh:
            return GradedAlgebraPresentation.from_json(json.load(fh))
    name = path_or_name[:-5] if path_or_name.endswith(".json") else path_or_name
    try:
        text = resources.files("cohomops.data").joinpath(f"{name}.json").read_text()
    except FileNotFoundError:
        raise RingError(f"no presentation file or bundled presentation {path_or_name!r}") from None
    return GradedAlgebraPresentation.from_json(json.loads(text))


def bundled_profiles() -> dict:
    text = resources.files("cohomops.data").joinpath("profiles.json").read_text()
    return {d["name"]: TargetDegreeProfile.from_json(d) for d in json.loads(text)["profiles"]}


def resolve_profile(name: str, A: Optional[GradedAlgebraPresentation] = None) -> TargetDegreeProfile:
    if A is not None and name in A.profiles:
        return A.profiles[name]
    prof = bundled_profiles()
    if name in prof:
        return prof[name]
    raise UnknownName(f"unknown target profile {name!r}")


# -- expressions -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_⊗]*)|(∪|\*|\+|-|\(|\)|,))")


def _tokenize(s: str) -> list:
    out, pos = [], 0
    s = s.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise RingError(f"unexpected character {s[pos]!r} at position {pos}")
        num, name, sym = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("cup", None) if name == "cup" else ("name", name))
        else:
            out.append(("cup", None) if sym in ("∪", "*") else ("sym", sym))
        pos = m.end()
        while pos < len(s) and s[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, A: GradedAlgebraPresentation, text: str, env: dict):
        self.A, self.toks, self.i, self.env = A, _tokenize(text), 0, env

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> Element:
        e = self.expr()
        if self.i != len(self.toks):
            raise RingError(f"trailing input at token {self.i}")
        return e

    def expr(self):
        x = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            sign = 1 if self.take()[1] == "+" else -1
            x = self.A.add(x, self.term(), sign)
        return x

    def term(self):
        x = self.factor()
        while self.peek()[0] == "cup":
            self.take()
            x = self.A.mul(x, self.factor())
        return x

    def factor(self):
        kind, val = self.take()
        if kind == "sym" and val == "-":
            return self.A.scale(-1, self.factor())
        if kind == "sym" and val == "(":
            x = self.expr()
            if self.take() != ("sym", ")"):
                raise RingError("missing ')'")
            return x
        if kind == "num":
            # "2 u" is a scalar multiple; a bare number is a multiple of the unit
            if self.peek()[0] == "name" or self.peek() == ("sym", "("):
                return self.A.scale(val, self.factor())
            return self.A.scale(val, self.A.basis_element(self.A.unit))
        if kind == "name":
            if self.peek() == ("sym", "("):
                self.take()
                arg = self.expr()
                if self.take() != ("sym", ")"):
                    raise RingError("missing ')'")
                return self.A.apply(val, arg)
            if val in self.env:
                return self.env[val]
            return self.A.basis_element(val)
        raise RingError(f"unexpected token {val!r}")


def evaluate(expr: str, A: GradedAlgebraPresentation, assignment: Optional[dict] = None) -> Element:
    """Evaluate an expression in basis names, ``∪`` (or ``*``), ``+``, ``-``,
    parentheses and operation calls such as ``P1_3(u)``.  ``assignment`` maps
    extra names (target classes) to source expressions."""
    env = {}
    for k, v in (assignment or {}).items():
        env[k] = v if isinstance(v, Element) else _Parser(A, v, {}).parse()
    return _Parser(A, expr, env).parse()


# -- the prover --------------------------------------------------------------

@dataclass
class ObstructionResult:
    verdict: str            # "Obstructed" | "Inconclusive"
    reason: str
    degree: int
    witness: Optional[Element] = None
    expression: str = ""

    @property
    def obstructed(self) -> bool:
        return self.verdict == "Obstructed"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "reason": self.reason, "degree": self.degree,
                "expression": self.expression,
                "witness": None if self.witness is None else
                {"degree": self.witness.degree, "element": str(self.witness),
                 "coefficients": [[c, n] for n, c in self.witness.coeffs]}}


def naturality_obstruction(A: GradedAlgebraPresentation, assignment: dict, target: TargetDegreeProfile,
                           expr: str) -> ObstructionResult:
    """Decide whether a map to the target pulling the assigned target classes
    back to the given source classes is ruled out by ``expr``.

    ``expr`` is written with source names and/or the assigned target names;
    it must be built from cup products and operations natural under pullback.
    """
    val = evaluate(expr, A, assignment)
    deg = val.degree
    if val.is_zero:
        return ObstructionResult("Inconclusive", "vanished: the expression is zero in the source", deg, None, expr)
    if not target.nonzero_in(deg):
        return ObstructionResult(
            "Obstructed", f"the expression is nonzero in degree {deg}, where the target "
            f"{target.name or 'profile'} has no cohomology", deg, val, expr)
    for rel in target.vanishing:
        rv = evaluate(rel, A, assignment)
        if not rv.is_zero:
            return ObstructionResult(
                "Obstructed", f"the target relation {rel} = 0 pulls back to the nonzero element {rv}",
                rv.degree, rv, rel)
    return ObstructionResult("Inconclusive", f"target cohomology is nonzero in degree {deg}", deg, val, expr)


# -- products ------------------------------------------------------------------

def _tensor_name(a: str, b: str, ua: str, ub: str) -> str:
    if b == ub:
        return a
    if a == ua:
        return b
    return f"{a}⊗{b}"


def kunneth(A: GradedAlgebraPresentation, B: GradedAlgebraPresentation) -> GradedAlgebraPresentation:
    """Tensor product algebra with the graded sign rule; operations extend
    through their declared Cartan rules."""
    if A.p != B.p:
        raise RingError(f"field mismatch: Z/{A.p} vs Z/{B.p}")
    p = A.p
    nm = {}
    basis = []
    for (a, da), (b, db) in iproduct(A.basis, B.basis):
        n = _tensor_name(a, b, A.unit, B.unit)
        nm[(a, b)] = n
        basis.append((n, da + db))
    if len({n for n, _ in basis}) != len(basis):
        raise RingError("basis names collide in the tensor product; rename factors")
    unit = nm[(A.unit, B.unit)]

    def tensor(dx: dict, dy: dict, sign: int = 1) -> dict:
        out: dict = {}
        for x, cx in dx.items():
            for y, cy in dy.items():
                out[nm[(x, y)]] = out.get(nm[(x, y)], 0) + sign * cx * cy
        return out

    products = {}
    for (a, da), (b, db) in iproduct(A.basis, B.basis):
        for (c, dc), (d, dd) in iproduct(A.basis, B.basis):
            if (a, b) == (A.unit, B.unit) or (c, d) == (A.unit, B.unit):
                continue
            sign = -1 if (db * dc) % 2 else 1
            res = tensor(A.basis_product(a, c), B.basis_product(b, d), sign)
            res = {n: v % p for n, v in res.items() if v % p}
            if res:
                products[(nm[(a, b)], nm[(c, d)])] = res

    ops = {}
    names = set(A.operations) | set(B.operations)
    for name in sorted(names):
        oa, ob = A.operations.get(name), B.operations.get(name)
        if oa is None or ob is None:
            raise RingError(f"operation {name} is not defined on both factors")
        rule = oa.cartan if oa.cartan is not None else ob.cartan
        if rule is None:
            raise RingError(f"operation {name} lacks a declared Cartan rule")

        def img(P, op_name, x):
            if op_name == "id":
                return {x: 1}, 0
            op = P.operations.get(op_name)
            if op is None:
                raise RingError(f"Cartan rule for {name} uses {op_name}, undefined on a factor")
            return op.images.get(x, {}), op.shift

        images = {}
        for (a, da), (b, db) in iproduct(A.basis, B.basis):
            acc: dict = {}
            for left, right in rule:
                ia, _ = img(A, left, a)
                ib, sb = img(B, right, b)
                sign = -1 if (sb * da) % 2 else 1
                for n, v in tensor(ia, ib, sign).items():
                    acc[n] = acc.get(n, 0) + v
            acc = {n: v % p for n, v in acc.items() if v % p}
            if acc:
                images[nm[(a, b)]] = acc
        ops[name] = OperationTable(name, oa.shift, images, rule)
    profiles = dict(B.profiles)
    profiles.update(A.profiles)
    return GradedAlgebraPresentation(p, basis, products, unit, ops, profiles,
                                     f"{A.name or 'A'} x {B.name or 'B'}")


def sphere_algebra(m: int, p: int, operations: Optional[list] = None) -> GradedAlgebraPresentation:
    """``H*(S^m; Z/p)``; every listed positive-shift operation acts by zero."""
    ops = {}
    for name, shift, rule in operations or []:
        ops[name] = OperationTable(name, shift, {}, rule)
    return GradedAlgebraPresentation(p, [("1", 0), (f"s{m}", m)], {}, "1", ops, {}, f"S{m}")


def ground_field(p: int, operations: Optional[list] = None) -> GradedAlgebraPresentation:
    ops = {name: OperationTable(name, shift, {}, rule) for name, shift, rule in operations or []}
    return GradedAlgebraPresentation(p, [("1", 0)], {}, "1", ops, {}, f"Z/{p}")


def operation_signature(A: GradedAlgebraPresentation) -> list:
    """``[(name, shift, cartan), ...]`` for building compatible factor algebras."""
    return [(op.name, op.shift, op.cartan) for op in A.operations.values()]
