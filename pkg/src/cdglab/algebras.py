"""Curved dg algebras as structure constants.

An algebra exposes a basis of labels in each degree, the product and the
predifferential on basis labels, a unit label and a curvature element.
Elements are dicts ``{label: coefficient}`` with zero coefficients dropped.

Families of polynomial type (``k[c]``, ``R_rho[u]``) are infinite; their basis
is produced degree by degree on demand and every consumer works inside an
explicit degree window.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .errors import NotDefined, UsageError
from .graded import Grading, Z, Z2
from .scalars import FieldSpec, QQ

Element = dict


# ---------------------------------------------------------------------------
# element arithmetic


def clean(e: Mapping) -> Element:
    return {k: v for k, v in e.items() if v}


def add(*elems: Mapping) -> Element:
    out = {}
    for e in elems:
        for k, v in e.items():
            out[k] = out.get(k, 0) + v
    return clean(out)


def scale(e: Mapping, s) -> Element:
    return clean({k: s * v for k, v in e.items()})


def sub(a: Mapping, b: Mapping) -> Element:
    return add(a, scale(b, -1))


class CdgAlgebra:
    """Common interface; subclasses provide the structure constants."""

    field: FieldSpec
    grading: Grading
    name: str = "A"
    unit: str = "1"

    # -- structure, per basis label
    def basis(self, d: int) -> list[str]:
        raise NotImplementedError

    def degree(self, label: str) -> int:
        raise NotImplementedError

    def mul(self, a: str, b: str) -> Element:
        raise NotImplementedError

    def diff(self, a: str) -> Element:
        raise NotImplementedError

    @property
    def curvature(self) -> Element:
        raise NotImplementedError

    def generators(self) -> dict[str, str]:
        """Designated generators: action name -> basis label."""
        raise NotImplementedError

    def monomial(self, label: str) -> list[str]:
        """Generator names whose ordered product is exactly ``label``."""
        raise NotImplementedError

    def is_finite(self) -> bool:
        return False

    def eps_quotient(self):
        """(quotient algebra, label map) for the ε = 0 reduction."""
        raise NotDefined(f"{self.name} has no ε to quotient by")

    def descriptor(self) -> dict:
        raise NotImplementedError

    # -- derived helpers
    def degrees_in(self, lo: int, hi: int) -> list[int]:
        if self.grading.is_z2:
            return [0, 1]
        return list(range(lo, hi + 1))

    def labels_in(self, lo: int, hi: int) -> list[str]:
        out = []
        for d in self.degrees_in(lo, hi):
            out.extend(self.basis(d))
        return out

    def elem(self, x) -> Element:
        if isinstance(x, Mapping):
            return clean({self.canonical(k): self.field(v) for k, v in x.items()})
        if isinstance(x, str):
            return {self.canonical(x): self.field.one}
        if x == 0:
            return {}
        return {self.unit: self.field(x)}

    def canonical(self, label: str) -> str:
        return label

    def emul(self, x: Mapping, y: Mapping) -> Element:
        out = {}
        for a, s in x.items():
            for b, t in y.items():
                for c, v in self.mul(a, b).items():
                    out[c] = out.get(c, 0) + s * t * v
        return clean(out)

    def ediff(self, x: Mapping) -> Element:
        out = {}
        for a, s in x.items():
            for c, v in self.diff(a).items():
                out[c] = out.get(c, 0) + s * v
        return clean(out)

    def edegree(self, x: Mapping) -> int | None:
        degs = {self.degree(a) for a in x}
        if len(degs) > 1:
            raise UsageError(f"inhomogeneous element {x}")
        return degs.pop() if degs else None

    def power(self, x: Mapping, n: int) -> Element:
        out = {self.unit: self.field.one}
        for _ in range(n):
            out = self.emul(out, x)
        return out

    def fmt(self, x: Mapping) -> str:
        if not x:
            return "0"
        parts = []
        for k, v in x.items():
            s = self.field.format(v)
            parts.append(k if s == "1" else f"{s}*{k}")
        return " + ".join(parts)

    def __repr__(self):
        return self.name


# ---------------------------------------------------------------------------
# polynomial-type families


_MONO = re.compile(r"^(?:(eps)(?:\*|$))?(?:([a-z])(?:\^(\d+))?)?$")


class PolyFamily(CdgAlgebra):
    """R[x] or R[x]/x^n with R in {k, k[ε]}, d = 0, and a chosen curvature.

    Basis labels are ε^r x^j (r in {0,1}); x has degree ``var_degree`` (2 in
    the Z-graded families).  Over a Z/2 grading the variable is absent and
    the algebra is just R in even degree.
    """

    def __init__(self, name: str, field: FieldSpec, grading: Grading, with_eps: bool,
                 var: str | None, trunc: int | None, curv: tuple[int, int] | None,
                 descriptor: dict, var_degree: int = 2, unit_alias: str | None = None):
        self.name = name
        self.field = field
        self.grading = grading
        self.with_eps = with_eps
        self.var = var
        self.trunc = trunc
        self._curv = curv
        self._descriptor = descriptor
        self.var_degree = var_degree
        self.unit_alias = unit_alias
        if trunc is not None and trunc < 1:
            raise UsageError("truncation must be at least 1")

    def _key(self, label: str) -> tuple[int, int]:
        if label == "1":
            return (0, 0)
        m = _MONO.match(label)
        if not m or not (m.group(1) or m.group(2)):
            raise UsageError(f"{label!r} is not a basis label of {self.name}")
        r = 1 if m.group(1) else 0
        v = m.group(2)
        j = 0
        if v is not None:
            j = int(m.group(3) or 1)
            if v == self.unit_alias:
                j = 0
            elif v != self.var:
                raise UsageError(f"{label!r} is not a basis label of {self.name}")
        if r and not self.with_eps:
            raise UsageError(f"{self.name} has no ε")
        if self.trunc is not None and j >= self.trunc:
            raise UsageError(f"{label!r} vanishes in {self.name}")
        return (r, j)

    def _label(self, r: int, j: int) -> str:
        parts = []
        if r:
            parts.append("eps")
        if j:
            parts.append(self.var if j == 1 else f"{self.var}^{j}")
        return "*".join(parts) if parts else "1"

    def canonical(self, label: str) -> str:
        return self._label(*self._key(label))

    def basis(self, d: int) -> list[str]:
        d = self.grading.norm(d)
        if self.var is None:
            if d != 0:
                return []
            return ["1", "eps"] if self.with_eps else ["1"]
        if d < 0 or d % self.var_degree:
            return []
        j = d // self.var_degree
        if self.trunc is not None and j >= self.trunc:
            return []
        out = [self._label(0, j)]
        if self.with_eps:
            out.append(self._label(1, j))
        return out

    def degree(self, label: str) -> int:
        r, j = self._key(label)
        return self.grading.norm(self.var_degree * j)

    def mul(self, a: str, b: str) -> Element:
        r1, j1 = self._key(a)
        r2, j2 = self._key(b)
        r, j = r1 + r2, j1 + j2
        if r > 1 or (self.trunc is not None and j >= self.trunc):
            return {}
        return {self._label(r, j): self.field.one}

    def diff(self, a: str) -> Element:
        self._key(a)
        return {}

    @property
    def curvature(self) -> Element:
        if self._curv is None:
            return {}
        r, j = self._curv
        if self.trunc is not None and j >= self.trunc:
            return {}
        return {self._label(r, j): self.field.one}

    def generators(self) -> dict[str, str]:
        g = {}
        if self.with_eps:
            g["eps"] = "eps"
        if self.var is not None and (self.trunc is None or self.trunc > 1):
            g[self.var] = self.var
        return g

    def monomial(self, label: str) -> list[str]:
        r, j = self._key(label)
        return ["eps"] * r + [self.var] * j

    def is_finite(self) -> bool:
        return self.var is None or self.trunc is not None

    def support(self) -> tuple[int, int]:
        if not self.is_finite():
            raise UsageError(f"{self.name} is infinite")
        if self.var is None or self.grading.is_z2:
            return 0, 0
        return 0, self.var_degree * (self.trunc - 1)

    def eps_quotient(self):
        if not self.with_eps:
            raise NotDefined(f"{self.name} has no ε to quotient by")
        curv = self._curv
        if curv is not None and curv[0] == 1:
            curv = None
        desc = dict(self._descriptor)
        if "ring" in desc:
            desc["ring"] = "k"
        if desc.get("rho") == "eps":
            desc["rho"] = "0"
        if desc.get("family") == "dual_numbers":
            desc = {"family": "base_field"}
        Q = PolyFamily(self.name.replace("k[eps]", "k").replace("_eps", "_0") + "/eps",
                       self.field, self.grading, False, self.var, self.trunc, curv, desc,
                       self.var_degree, self.unit_alias)

        def label_map(label: str):
            r, j = self._key(label)
            return None if r else Q._label(0, j)

        return Q, label_map

    def descriptor(self) -> dict:
        return dict(self._descriptor)


def base_field(field: FieldSpec = QQ) -> PolyFamily:
    return PolyFamily("k", field, Z, False, None, None, None, {"family": "base_field"})


def initial_poly(field: FieldSpec = QQ) -> PolyFamily:
    """k[c], c in degree 2, d = 0, curvature c."""
    return PolyFamily("k[c]", field, Z, False, "c", None, (0, 1), {"family": "initial_poly"})


def initial_trunc(n: int, field: FieldSpec = QQ) -> PolyFamily:
    """k[c]/c^n."""
    if n < 1:
        raise UsageError("k[c]/c^n needs n >= 1")
    return PolyFamily(f"k[c]/c^{n}", field, Z, False, "c", n, (0, 1),
                      {"family": "initial_poly", "trunc": n})


def dual_numbers(field: FieldSpec = QQ) -> PolyFamily:
    """k[ε] in degree 0, ε² = 0, d = 0, c = 0."""
    return PolyFamily("k[eps]", field, Z, True, None, None, None, {"family": "dual_numbers"})


_RHO = {"0": None, "1": (0,), "eps": (1,)}


def _rho_key(rho) -> str:
    rho = str(rho)
    if rho not in _RHO:
        raise UsageError(f"rho must be one of 0, 1, eps (got {rho!r})")
    return rho


def poly_u(ring: str = "k", rho="0", field: FieldSpec = QQ) -> PolyFamily:
    """R_rho[u]: u in degree 2, d = 0, curvature rho*u, R = k or k[ε]."""
    rho = _rho_key(rho)
    with_eps = _ring(ring)
    if rho == "eps" and not with_eps:
        raise UsageError("rho = eps needs ring k[eps]")
    curv = None if rho == "0" else (_RHO[rho][0], 1)
    return PolyFamily(f"{'k[eps]' if with_eps else 'k'}_{rho}[u]", field, Z, with_eps, "u", None,
                      curv, {"family": "poly_u", "ring": ring, "rho": rho})


def z2_rho(ring: str = "k", rho="0", field: FieldSpec = QQ) -> PolyFamily:
    """The Z/2-graded algebra R concentrated in even degree, curvature rho.

    The label ``u`` is accepted as an alias of the unit: this is the algebra
    on which the u-periodic Z-graded data over R_rho[u, u^-1] lives after
    collapsing degrees mod 2.
    """
    rho = _rho_key(rho)
    with_eps = _ring(ring)
    if rho == "eps" and not with_eps:
        raise UsageError("rho = eps needs ring k[eps]")
    curv = None if rho == "0" else (_RHO[rho][0], 0)
    return PolyFamily(f"Z2[{'k[eps]' if with_eps else 'k'}, {rho}]", field, Z2, with_eps, None,
                      None, curv, {"family": "z2_rho", "ring": ring, "rho": rho}, unit_alias="u")


def _ring(ring: str) -> bool:
    if ring in ("k",):
        return False
    if ring in ("k[eps]", "keps", "eps"):
        return True
    raise UsageError(f"ring must be 'k' or 'k[eps]' (got {ring!r})")


# ---------------------------------------------------------------------------
# generic tables


class TableAlgebra(CdgAlgebra):
    """A finite algebra given by structure constants.

    Products with the unit are implicit; every other missing product is zero.
    The designated generators are all non-unit labels.
    """

    def __init__(self, labels: Mapping[str, int], mul: Mapping | None = None,
                 diff: Mapping | None = None, curvature: Mapping | None = None,
                 field: FieldSpec = QQ, grading: Grading = Z, unit: str = "1", name: str = "table"):
        self.name = name
        self.field = field
        self.grading = grading
        self.unit = unit
        if unit not in labels:
            raise UsageError("the unit must be a basis label")
        self._deg = {l: grading.norm(d) for l, d in labels.items()}
        self._order = list(labels)
        self._mul = {}
        for (a, b), v in (mul or {}).items():
            self._check(a), self._check(b)
            self._mul[(a, b)] = self._coerce(v)
        self._diff = {a: self._coerce(v) for a, v in (diff or {}).items()}
        for a in self._diff:
            self._check(a)
        self._curv = self._coerce(curvature or {})

    def _check(self, a):
        if a not in self._deg:
            raise UsageError(f"{a!r} is not a basis label of {self.name}")

    def _coerce(self, v) -> Element:
        if isinstance(v, str):
            v = {v: 1}
        out = {}
        for k, x in v.items():
            self._check(k)
            x = self.field(x)
            if x:
                out[k] = x
        return out

    def basis(self, d: int) -> list[str]:
        d = self.grading.norm(d)
        return [l for l in self._order if self._deg[l] == d]

    def all_labels(self) -> list[str]:
        return list(self._order)

    def degree(self, label: str) -> int:
        self._check(label)
        return self._deg[label]

    def mul(self, a: str, b: str) -> Element:
        if a == self.unit:
            self._check(b)
            return {b: self.field.one}
        if b == self.unit:
            self._check(a)
            return {a: self.field.one}
        return dict(self._mul.get((a, b), {}))

    def diff(self, a: str) -> Element:
        self._check(a)
        return dict(self._diff.get(a, {}))

    @property
    def curvature(self) -> Element:
        return dict(self._curv)

    def generators(self) -> dict[str, str]:
        return {l: l for l in self._order if l != self.unit}

    def monomial(self, label: str) -> list[str]:
        self._check(label)
        return [] if label == self.unit else [label]

    def is_finite(self) -> bool:
        return True

    def labels_in(self, lo: int, hi: int) -> list[str]:
        if self.grading.is_z2:
            return list(self._order)
        return [l for l in self._order if lo <= self._deg[l] <= hi]

    def support(self) -> tuple[int, int]:
        degs = list(self._deg.values())
        return min(degs), max(degs)

    def descriptor(self) -> dict:
        f = self.field.format
        return {
            "family": "table",
            "grading": self.grading.group,
            "unit": self.unit,
            "basis": {l: self._deg[l] for l in self._order},
            "mul": [[a, b, {k: f(v) for k, v in e.items()}] for (a, b), e in self._mul.items()],
            "diff": {a: {k: f(v) for k, v in e.items()} for a, e in self._diff.items()},
            "curvature": {k: f(v) for k, v in self._curv.items()},
        }


def truncated_poly_table(n: int, var: str = "u", degree: int = 2, field: FieldSpec = QQ,
                         curvature=None) -> TableAlgebra:
    """k[var]/var^n as a table (d = 0)."""
    def lab(j):
        return "1" if j == 0 else (var if j == 1 else f"{var}^{j}")

    labels = {lab(j): degree * j for j in range(n)}
    mul = {}
    for i in range(1, n):
        for j in range(1, n):
            if i + j < n:
                mul[(lab(i), lab(j))] = {lab(i + j): 1}
    return TableAlgebra(labels, mul, {}, curvature or {}, field, Z, name=f"k[{var}]/{var}^{n}")


class DeformedDg(TableAlgebra):
    """A_φ[ε] for a dg table A and φ = (φ0, φ1, φ2).

    Product ``m_A + φ2 ε``, predifferential ``d_A + φ1 ε``, curvature ``φ0 ε``,
    with ε central of degree 0 and ε² = 0.  Labels are those of A together
    with ``a*eps`` (and ``eps`` for the unit).
    """

    def __init__(self, base: TableAlgebra, phi0=None, phi1=None, phi2=None, name: str | None = None):
        if base.curvature:
            raise UsageError("the base must be a dg algebra (zero curvature)")
        self.base = base
        F = base.field
        self.phi0 = base._coerce(phi0 or {})
        self.phi1 = {a: base._coerce(v) for a, v in (phi1 or {}).items()}
        self.phi2 = {(a, b): base._coerce(v) for (a, b), v in (phi2 or {}).items()}
        e = self.eps_label
        labels = {}
        for l in base.all_labels():
            labels[l] = base.degree(l)
        for l in base.all_labels():
            labels[e(l)] = base.degree(l)
        mul = {}
        B = base.all_labels()
        for a in B:
            for b in B:
                if a == base.unit or b == base.unit:
                    continue
                prod = add(base.mul(a, b), {e(k): v for k, v in self.phi2.get((a, b), {}).items()})
                if prod:
                    mul[(a, b)] = prod
                ab = base.mul(a, b)
                if ab:
                    mul[(e(a), b)] = {e(k): v for k, v in ab.items()}
                    mul[(a, e(b))] = {e(k): v for k, v in ab.items()}
        for a in B:
            if a != base.unit:
                mul[(a, e(base.unit))] = {e(a): 1}
                mul[(e(base.unit), a)] = {e(a): 1}
        diff = {}
        for a in B:
            da = add(base.diff(a), {e(k): v for k, v in self.phi1.get(a, {}).items()})
            if da:
                diff[a] = da
            if base.diff(a):
                diff[e(a)] = {e(k): v for k, v in base.diff(a).items()}
        curv = {e(k): v for k, v in self.phi0.items()}
        super().__init__(labels, mul, diff, curv, F, base.grading, base.unit,
                         name or f"{base.name}_phi[eps]")

    @staticmethod
    def eps_label(label: str) -> str:
        return "eps" if label == "1" else f"{label}*eps"

    def generators(self) -> dict[str, str]:
        g = {l: l for l in self.base.all_labels() if l != self.base.unit}
        g["eps"] = "eps"
        return g

    def monomial(self, label: str) -> list[str]:
        self._check(label)
        if label == self.unit:
            return []
        if label == "eps":
            return ["eps"]
        if label.endswith("*eps"):
            return [label[:-4], "eps"]
        return [label]

    def eps_quotient(self):
        base = self.base

        def label_map(label: str):
            if label == "eps" or label.endswith("*eps"):
                return None
            return label

        return base, label_map

    def descriptor(self) -> dict:
        f = self.field.format
        return {
            "family": "deformed_dg",
            "base": self.base.descriptor(),
            "phi0": {k: f(v) for k, v in self.phi0.items()},
            "phi1": {a: {k: f(v) for k, v in e.items()} for a, e in self.phi1.items()},
            "phi2": [[a, b, {k: f(v) for k, v in e.items()}] for (a, b), e in self.phi2.items()],
        }


# ---------------------------------------------------------------------------
# axiom checks


@dataclass
class AxiomReport:
    subject: str
    violations: list = dc_field(default_factory=list)
    checked: dict = dc_field(default_factory=dict)
    notes: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, identity: str, witness, detail=None):
        self.violations.append({"identity": identity, "witness": witness, "detail": detail})

    def count(self, identity: str, n: int = 1):
        self.checked[identity] = self.checked.get(identity, 0) + n

    def failed_identities(self) -> set[str]:
        return {v["identity"] for v in self.violations}

    def to_json(self) -> dict:
        return {"subject": self.subject, "ok": self.ok, "checked": dict(self.checked),
                "violations": [{k: (str(v) if k == "detail" and v is not None else v)
                                for k, v in x.items()} for x in self.violations],
                "notes": list(self.notes)}

    def __bool__(self):
        return self.ok


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def check_cdg_axioms(A: CdgAlgebra, window: tuple[int, int] = (-10, 10)) -> AxiomReport:
    """Verify unit, degrees, Leibniz, associativity, d(c) = 0 and d² = [c, -]."""
    rep = AxiomReport(A.name)
    lo, hi = window
    labels = A.labels_in(lo, hi)
    g = A.grading
    one = {A.unit: A.field.one}
    c = A.curvature

    if A.ediff(one):
        rep.fail("d(1)=0", A.unit, A.ediff(one))
    rep.count("d(1)=0")
    if c and A.edegree(c) != g.norm(2):
        rep.fail("curvature degree 2", A.fmt(c))
    rep.count("curvature degree 2")
    dc = A.ediff(c)
    rep.count("d(c)=0")
    if dc:
        rep.fail("d(c)=0", A.fmt(c), A.fmt(dc))

    for a in labels:
        x = {a: A.field.one}
        rep.count("unit")
        if A.emul(one, x) != x or A.emul(x, one) != x:
            rep.fail("unit", a)
        da = A.ediff(x)
        rep.count("diff degree")
        if da and A.edegree(da) != g.norm(A.degree(a) + 1):
            rep.fail("diff degree", a, A.fmt(da))
        lhs = A.ediff(da)
        rhs = sub(A.emul(c, x), A.emul(x, c))
        rep.count("d^2=[c,-]")
        if lhs != rhs:
            rep.fail("d^2=[c,-]", a, f"d^2 = {A.fmt(lhs)}, [c,a] = {A.fmt(rhs)}")

    for a, b in itertools.product(labels, repeat=2):
        x, y = {a: A.field.one}, {b: A.field.one}
        ab = A.emul(x, y)
        rep.count("mul degree")
        if ab and A.edegree(ab) != g.norm(A.degree(a) + A.degree(b)):
            rep.fail("mul degree", (a, b), A.fmt(ab))
        lhs = A.ediff(ab)
        rhs = add(A.emul(A.ediff(x), y), scale(A.emul(x, A.ediff(y)), _sign(A.degree(a))))
        rep.count("leibniz")
        if lhs != rhs:
            rep.fail("leibniz", (a, b), f"d(ab) = {A.fmt(lhs)}, rhs = {A.fmt(rhs)}")

    for a, b, cc in itertools.product(labels, repeat=3):
        x, y, z = ({t: A.field.one} for t in (a, b, cc))
        rep.count("associativity")
        if A.emul(A.emul(x, y), z) != A.emul(x, A.emul(y, z)):
            rep.fail("associativity", (a, b, cc))
    return rep


def curvature_nilpotency(A: CdgAlgebra, max_power: int = 16) -> int | None:
    """Smallest n <= max_power with c^n = 0, or None."""
    c = A.curvature
    p = {A.unit: A.field.one}
    for n in range(1, max_power + 1):
        p = A.emul(p, c)
        if not p:
            return n
    return None


def check_hochschild_cocycle(A: DeformedDg, window: tuple[int, int] = (-10, 10)) -> AxiomReport:
    """The ε-linear parts of the cdg identities for A_φ[ε], stated on (φ0, φ1, φ2)."""
    B = A.base
    rep = AxiomReport(f"hochschild({A.name})")
    lo, hi = window
    labels = B.labels_in(lo, hi)
    one = B.field.one
    p1 = lambda a: dict(A.phi1.get(a, {}))
    p2 = lambda a, b: dict(A.phi2.get((a, b), {}))

    def p1e(x):
        return add(*[scale(p1(a), s) for a, s in x.items()]) if x else {}

    def p2e(x, y):
        out = []
        for a, s in x.items():
            for b, t in y.items():
                out.append(scale(p2(a, b), s * t))
        return add(*out) if out else {}

    rep.count("phi0 closed")
    if B.ediff(A.phi0):
        rep.fail("phi0 closed", B.fmt(A.phi0), B.fmt(B.ediff(A.phi0)))
    rep.count("normalized")
    if p1(B.unit) or any(p2(B.unit, a) or p2(a, B.unit) for a in labels):
        rep.fail("normalized", B.unit)

    for a in labels:
        x = {a: one}
        lhs = add(B.ediff(p1(a)), p1e(B.ediff(x)))
        rhs = sub(B.emul(A.phi0, x), B.emul(x, A.phi0))
        rep.count("d phi1 + phi1 d = [phi0, -]")
        if lhs != rhs:
            rep.fail("d phi1 + phi1 d = [phi0, -]", a)

    for a, b in itertools.product(labels, repeat=2):
        x, y = {a: one}, {b: one}
        sa = _sign(B.degree(a))
        lhs = add(p1e(B.emul(x, y)), B.ediff(p2(a, b)))
        rhs = add(p2e(B.ediff(x), y), B.emul(p1(a), y),
                  scale(add(p2e(x, B.ediff(y)), B.emul(x, p1(b))), sa))
        rep.count("leibniz cocycle")
        if lhs != rhs:
            rep.fail("leibniz cocycle", (a, b))

    for a, b, c in itertools.product(labels, repeat=3):
        x, y, z = {a: one}, {b: one}, {c: one}
        lhs = add(p2e(B.emul(x, y), z), B.emul(p2(a, b), z))
        rhs = add(p2e(x, B.emul(y, z)), B.emul(x, p2(b, c)))
        rep.count("associativity cocycle")
        if lhs != rhs:
            rep.fail("associativity cocycle", (a, b, c))
    return rep


def hochschild_coboundary_phi2(B: TableAlgebra, f: Mapping[str, Mapping]) -> dict:
    """φ2 = δf for a degree-0 cochain f: φ2(a, b) = a f(b) − f(ab) + f(a) b."""
    one = B.field.one
    fe = lambda x: add(*[scale(B._coerce(f.get(a, {})), s) for a, s in x.items()]) if x else {}
    out = {}
    for a in B.all_labels():
        for b in B.all_labels():
            if B.unit in (a, b):
                continue
            x, y = {a: one}, {b: one}
            v = add(B.emul(x, fe(y)), scale(fe(B.emul(x, y)), -1), B.emul(fe(x), y))
            if v:
                out[(a, b)] = v
    return out


def hochschild_coboundary_phi1(B: TableAlgebra, f: Mapping[str, Mapping]) -> dict:
    """φ1 = d f − f d for the same degree-0 cochain f."""
    one = B.field.one
    fe = lambda x: add(*[scale(B._coerce(f.get(a, {})), s) for a, s in x.items()]) if x else {}
    out = {}
    for a in B.all_labels():
        v = sub(B.ediff(fe({a: one})), fe(B.ediff({a: one})))
        if v:
            out[a] = v
    return out


# ---------------------------------------------------------------------------
# strict morphisms


class StrictMorphism:
    """Degree-0 unital algebra map given on the source's designated generators."""

    def __init__(self, source: CdgAlgebra, target: CdgAlgebra, gen_images: Mapping[str, object],
                 name: str = "f"):
        if source.field != target.field:
            raise UsageError("field mismatch")
        if source.grading != target.grading:
            raise UsageError("grading mismatch")
        self.source = source
        self.target = target
        self.name = name
        gens = source.generators()
        extra = set(gen_images) - set(gens)
        if extra:
            raise UsageError(f"unknown generators {sorted(extra)}")
        self.gen_images = {gname: target.elem(gen_images.get(gname, 0)) for gname in gens}

    def image(self, label: str) -> Element:
        T = self.target
        out = {T.unit: T.field.one}
        for g in self.source.monomial(label):
            out = T.emul(out, self.gen_images[g])
        return out

    def eimage(self, x: Mapping) -> Element:
        return add(*[scale(self.image(a), s) for a, s in x.items()]) if x else {}

    @classmethod
    def identity(cls, A: CdgAlgebra) -> "StrictMorphism":
        return cls(A, A, {g: l for g, l in A.generators().items()}, name="id")


def check_strict(f: StrictMorphism, window: tuple[int, int] = (-10, 10)) -> AxiomReport:
    A, B = f.source, f.target
    rep = AxiomReport(f"{f.name}: {A.name} -> {B.name}")
    lo, hi = window
    labels = A.labels_in(lo, hi)
    one = A.field.one
    rep.count("unital")
    if f.image(A.unit) != {B.unit: one}:
        rep.fail("unital", A.unit)
    rep.count("curvature")
    fc = f.eimage(A.curvature)
    if fc != B.curvature:
        rep.fail("curvature", A.fmt(A.curvature), f"f(c) = {B.fmt(fc)}, c' = {B.fmt(B.curvature)}")
    for a in labels:
        fa = f.image(a)
        rep.count("degree 0")
        if fa and B.edegree(fa) != B.grading.norm(A.degree(a)):
            rep.fail("degree 0", a)
        rep.count("commutes with d")
        if f.eimage(A.diff(a)) != B.ediff(fa):
            rep.fail("commutes with d", a)
    for a, b in itertools.product(labels, repeat=2):
        rep.count("multiplicative")
        if f.eimage(A.mul(a, b)) != B.emul(f.image(a), f.image(b)):
            rep.fail("multiplicative", (a, b))
    return rep


def initial_morphism(A: CdgAlgebra, source_trunc: int | None = None, max_power: int = 32) -> StrictMorphism:
    """The unique strict morphism k[c] -> A (or k[c]/c^n -> A), c ↦ c_A."""
    if A.grading != Z:
        raise UsageError("the initial algebras are Z-graded")
    src = initial_poly(A.field) if source_trunc is None else initial_trunc(source_trunc, A.field)
    c = A.curvature
    if source_trunc is not None:
        if A.power(c, source_trunc):
            raise NotDefined(f"c^{source_trunc} is nonzero in {A.name}: "
                             f"cannot send c to c_A from k[c]/c^{source_trunc}")
    images = {"c": c} if "c" in src.generators() else {}
    return StrictMorphism(src, A, images, name="initial")


def quotient_morphism(n: int | None, m: int, field: FieldSpec = QQ) -> StrictMorphism:
    """k[c]/c^n -> k[c]/c^m (n = None for k[c]) with m <= n."""
    src = initial_poly(field) if n is None else initial_trunc(n, field)
    tgt = initial_trunc(m, field)
    return StrictMorphism(src, tgt, {"c": "c"} if m > 1 else {}, name="quotient")


# ---------------------------------------------------------------------------
# Laurent collapse


def laurent_collapse_check(ring: str, rho, field: FieldSpec = QQ, window: tuple[int, int] = (-6, 6)) -> AxiomReport:
    """Compare R_rho[u, u^-1] structure constants with Z2Rho(R, rho) after degrees mod 2.

    Laurent labels are ε^r u^j for j in the window.  Collapsing sends u to the
    unit; the check is that collapse is multiplicative, keeps the parity of
    degrees, and sends the curvature rho*u to rho.
    """
    A = z2_rho(ring, rho, field)
    rep = AxiomReport(f"collapse R_{rho}[u,u^-1] -> {A.name}")
    rs = [0, 1] if A.with_eps else [0]
    lo, hi = window
    laur = [(r, j) for j in range(lo, hi + 1) for r in rs]

    def collapse(r, j):
        return A._label(r, 0)

    one = field.one
    for (r1, j1), (r2, j2) in itertools.product(laur, repeat=2):
        r, j = r1 + r2, j1 + j2
        prod = {} if r > 1 else {collapse(r, j): one}
        rep.count("multiplicative")
        if prod != A.mul(collapse(r1, j1), collapse(r2, j2)):
            rep.fail("multiplicative", ((r1, j1), (r2, j2)))
        rep.count("parity")
        if (2 * j) % 2 != A.degree(collapse(r1, j1)):
            rep.fail("parity", (r1, j1))
    rho = _rho_key(rho)
    curv = {} if rho == "0" else {collapse(_RHO[rho][0], 1): one}
    rep.count("curvature")
    if curv != A.curvature:
        rep.fail("curvature", rho)
    return rep
