"""JSON descriptors for algebras and modules.

An algebra descriptor names a family (``{"family": "initial_poly", "trunc": 3}``)
or spells out a table.  A module descriptor embeds its algebra's descriptor
together with the graded space, d and one map per generator.
"""
from __future__ import annotations

import json

from .algebras import (CdgAlgebra, DeformedDg, TableAlgebra, base_field, dual_numbers, initial_poly,
                       initial_trunc, poly_u, z2_rho)
from .errors import UsageError
from .graded import Grading, GradedMap, GradedSpace
from .modules import CdgModule
from .scalars import QQ, FieldSpec


def _elem(data: dict, F: FieldSpec) -> dict:
    return {k: F.parse(v) for k, v in data.items()}


def algebra_from_descriptor(desc: dict, field: FieldSpec = QQ) -> CdgAlgebra:
    fam = desc.get("family")
    if fam == "base_field":
        return base_field(field)
    if fam == "dual_numbers":
        return dual_numbers(field)
    if fam == "initial_poly":
        n = desc.get("trunc")
        return initial_poly(field) if n is None else initial_trunc(int(n), field)
    if fam == "poly_u":
        return poly_u(desc.get("ring", "k"), desc.get("rho", "0"), field)
    if fam == "z2_rho":
        return z2_rho(desc.get("ring", "k"), desc.get("rho", "0"), field)
    if fam == "table":
        mul = {(a, b): _elem(e, field) for a, b, e in desc.get("mul", [])}
        diff = {a: _elem(e, field) for a, e in desc.get("diff", {}).items()}
        return TableAlgebra({l: int(d) for l, d in desc["basis"].items()}, mul, diff,
                            _elem(desc.get("curvature", {}), field), field,
                            Grading(desc.get("grading", "Z")), desc.get("unit", "1"),
                            desc.get("name", "table"))
    if fam == "deformed_dg":
        base = algebra_from_descriptor(desc["base"], field)
        if not isinstance(base, TableAlgebra):
            raise UsageError("a deformation needs a table base algebra")
        return DeformedDg(base, _elem(desc.get("phi0", {}), field),
                          {a: _elem(e, field) for a, e in desc.get("phi1", {}).items()},
                          {(a, b): _elem(e, field) for a, b, e in desc.get("phi2", [])})
    raise UsageError(f"unknown algebra family {fam!r}")


def module_to_json(M: CdgModule) -> dict:
    out = {"name": M.name, "algebra": M.algebra.descriptor(), "space": M.space.to_json(),
           "d": M.d.to_json(), "actions": {g: a.to_json() for g, a in sorted(M.actions.items())}}
    if M.interior is not None:
        out["interior"] = sorted(M.interior)
    return out


def module_from_json(data: dict, field: FieldSpec = QQ, algebra: CdgAlgebra | None = None) -> CdgModule:
    A = algebra or algebra_from_descriptor(data["algebra"], field)
    F = A.field
    sp = GradedSpace.from_json(data["space"])
    d = GradedMap.from_json(data["d"], sp, sp, F)
    acts = {g: GradedMap.from_json(a, sp, sp, F) for g, a in data.get("actions", {}).items()}
    return CdgModule(A, sp, d, acts, data.get("interior"), data.get("name", "M"))


def dumps(M: CdgModule) -> str:
    return json.dumps(module_to_json(M), sort_keys=True)


def loads(text: str, field: FieldSpec = QQ) -> CdgModule:
    return module_from_json(json.loads(text), field)
