"""Finite cdg modules and the standard constructions on them.

A module is a graded space with a predifferential ``d`` (shift +1) and one
action map per designated generator of its algebra.  The action of an
arbitrary basis label is the composite of generator actions along the
label's monomial.  Modules cut out of an infinite object carry an
``interior`` set of degrees; axioms and homotopies are only asserted there.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .algebras import (AxiomReport, CdgAlgebra, PolyFamily, StrictMorphism, add, initial_poly,
                       initial_trunc, poly_u, scale)
from .errors import NotDefined, PreconditionViolation, UsageError
from .graded import (GradedMap, GradedSpace, Grading, Z, Z2, block_map, direct_sum_maps,
                     direct_sum_spaces, shift_map, summand_inclusion, summand_projection)
from .scalars import Matrix, inverse, kernel_basis, rank, column_space_basis


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


class CdgModule:
    def __init__(self, algebra: CdgAlgebra, space: GradedSpace, d: GradedMap,
                 actions: Mapping[str, GradedMap] | None = None, interior=None, name: str = "M"):
        self.algebra = algebra
        self.field = algebra.field
        self.space = space
        self.name = name
        if space.grading != algebra.grading:
            raise UsageError("module and algebra gradings differ")
        if d.source != space or d.target != space:
            raise UsageError("d must be an endomorphism of the module's space")
        if d.shift != space.grading.norm(1):
            raise UsageError("d must have shift +1")
        self.d = d
        actions = dict(actions or {})
        gens = algebra.generators()
        missing = set(gens) - set(actions)
        if missing:
            raise UsageError(f"missing actions for generators {sorted(missing)}")
        extra = set(actions) - set(gens)
        if extra:
            raise UsageError(f"actions for unknown generators {sorted(extra)}")
        for g, a in actions.items():
            if a.source != space or a.target != space:
                raise UsageError(f"action of {g} is not an endomorphism of the space")
            want = space.grading.norm(algebra.degree(gens[g]))
            if a.shift != want:
                raise UsageError(f"action of {g} has shift {a.shift}, expected {want}")
        self.actions = actions
        self.interior = None if interior is None else frozenset(space.grading.norm(i) for i in interior)

    @property
    def grading(self) -> Grading:
        return self.space.grading

    @property
    def windowed(self) -> bool:
        return self.interior is not None

    def interior_degrees(self) -> list[int]:
        if self.interior is None:
            return self.space.degrees()
        return sorted(self.interior)

    def act(self, gen: str) -> GradedMap:
        return self.actions[gen]

    def identity(self) -> GradedMap:
        return GradedMap.identity(self.space, self.field)

    def act_label(self, label: str) -> GradedMap:
        out = self.identity()
        for g in self.algebra.monomial(label):
            out = out @ self.actions[g]
        return out

    def act_element(self, x: Mapping, degree: int | None = None) -> GradedMap:
        A = self.algebra
        if not x:
            deg = 0 if degree is None else degree
            return GradedMap.zero(self.space, self.space, deg, self.field)
        out = None
        for a, s in x.items():
            term = self.act_label(a).scale(s)
            out = term if out is None else out + term
        return out

    def same_as(self, other: "CdgModule") -> bool:
        return (self.space == other.space and self.d == other.d
                and self.actions.keys() == other.actions.keys()
                and all(self.actions[g] == other.actions[g] for g in self.actions))

    def __repr__(self):
        return f"CdgModule({self.name} over {self.algebra.name}, dims={self.space.dims})"


@dataclass
class ModuleMap:
    source: CdgModule
    target: CdgModule
    map: GradedMap

    def __post_init__(self):
        if self.map.source != self.source.space or self.map.target != self.target.space:
            raise UsageError("map does not fit between the given modules")
        if self.source.algebra is not self.target.algebra and \
                self.source.algebra.descriptor() != self.target.algebra.descriptor():
            raise UsageError("modules over different algebras")

    def defects(self) -> list[str]:
        """Names of the strictness conditions that fail."""
        f, M, N = self.map, self.source, self.target
        out = []
        if f.shift != 0:
            out.append("degree 0")
            return out
        degs = M.interior_degrees()
        if not (N.d @ f).agrees_on(f @ M.d, degs):
            out.append("commutes with d")
        for g in M.actions:
            if not (N.act(g) @ f).agrees_on(f @ M.act(g), degs):
                out.append(f"commutes with {g}")
        return out

    def is_strict(self) -> bool:
        return not self.defects()


def _window(M: CdgModule, window):
    if window is not None:
        return window
    rng = M.space.support_range()
    span = 0 if rng is None else rng[1] - rng[0]
    return (-(span + 2), span + 2)


def check_module_axioms(M: CdgModule, window: tuple[int, int] | None = None) -> AxiomReport:
    """Relations among actions, the derivation law, and d² = c·(-)."""
    A = M.algebra
    rep = AxiomReport(M.name)
    degs = M.interior_degrees()
    if M.windowed:
        rep.notes.append(f"truncated: axioms checked on interior degrees {degs} only")
    lo, hi = _window(M, window)
    labels = A.labels_in(lo, hi)
    gens = A.generators()
    acts = {a: M.act_label(a) for a in labels}

    for a, b in itertools.product(labels, repeat=2):
        ab = A.mul(a, b)
        lhs = acts[a] @ acts[b]
        rhs = M.act_element(ab, degree=A.degree(a) + A.degree(b))
        rep.count("relations")
        if not lhs.agrees_on(rhs, degs):
            rep.fail("relations", (a, b))

    for g, lab in gens.items():
        act = M.act(g)
        sg = _sign(A.degree(lab))
        lhs = (M.d @ act) - (act @ M.d).scale(sg)
        rhs = M.act_element(A.diff(lab), degree=A.degree(lab) + 1)
        rep.count("derivation law")
        if not lhs.agrees_on(rhs, degs):
            rep.fail("derivation law", g)

    d2 = M.d @ M.d
    c = M.act_element(A.curvature, degree=2)
    rep.count("curvature law")
    if not d2.agrees_on(c, degs):
        bad = [i for i in degs if d2.block(i) != c.block(i)]
        rep.fail("curvature law", bad, "d^2 differs from the curvature action")
    return rep


# ---------------------------------------------------------------------------
# constructors


def _mat(rows, field, nrows=None, ncols=None):
    if isinstance(rows, Matrix):
        return rows
    if not rows:
        return Matrix.zeros(nrows or 0, ncols or 0, field)
    return Matrix.from_rows(rows, field)


def module_from_blocks(algebra: CdgAlgebra, dims: Mapping[int, int], d_blocks: Mapping,
                       action_blocks: Mapping[str, Mapping] | None = None, interior=None,
                       name: str = "M") -> CdgModule:
    """Build a module from plain matrices (lists of rows or :class:`Matrix`)."""
    F = algebra.field
    sp = GradedSpace(algebra.grading, dims)
    g = sp.grading

    def gm(blocks, shift):
        out = {}
        for deg, rows in blocks.items():
            out[deg] = _mat(rows, F, sp.dim(deg + shift), sp.dim(deg))
        return GradedMap(sp, sp, shift, out, F)

    d = gm(d_blocks, 1)
    gens = algebra.generators()
    acts = {}
    for gname, lab in gens.items():
        acts[gname] = gm((action_blocks or {}).get(gname, {}), algebra.degree(lab))
    return CdgModule(algebra, sp, d, acts, interior, name)


def precomplex(dims: Mapping[int, int], d_blocks: Mapping, trunc: int | None = None,
               field=None, name: str = "P") -> CdgModule:
    """A precomplex as a k[c]- (or k[c]/c^n-) module: c acts by d²."""
    from .scalars import QQ
    F = field or QQ
    A = initial_poly(F) if trunc is None else initial_trunc(trunc, F)
    sp = GradedSpace(Z, dims)
    d = GradedMap(sp, sp, 1, {k: _mat(v, F) for k, v in d_blocks.items()}, F)
    return precomplex_from_map(A, d, name)


def precomplex_from_map(A: CdgAlgebra, d: GradedMap, name: str = "P") -> CdgModule:
    acts = {}
    if "c" in A.generators():
        acts["c"] = d @ d
    return CdgModule(A, d.source, d, acts, None, name)


def interval_precomplex(m: int, n: int, shift: int = 0, algebra: CdgAlgebra | None = None,
                        field=None) -> CdgModule:
    """X_n on k^m: copies of k^m in degrees shift..shift+n-1 joined by identities."""
    from .scalars import QQ
    if n < 1:
        raise UsageError("interval length must be at least 1")
    A = algebra or initial_poly(field or QQ)
    F = A.field
    sp = GradedSpace(Z, {shift + j: m for j in range(n)})
    d = GradedMap(sp, sp, 1, {shift + j: Matrix.identity(m, F) for j in range(n - 1)}, F)
    return precomplex_from_map(A, d, name=f"X{n}" + (f"[{-shift}]" if shift else ""))


def direct_sum(*mods: CdgModule, name: str | None = None) -> CdgModule:
    if not mods:
        raise UsageError("empty direct sum")
    A = mods[0].algebra
    for M in mods[1:]:
        if M.algebra is not A and M.algebra.descriptor() != A.descriptor():
            raise UsageError("direct sum of modules over different algebras")
    d = direct_sum_maps([M.d for M in mods])
    acts = {g: direct_sum_maps([M.act(g) for M in mods]) for g in A.generators()}
    masks = [set(M.interior) for M in mods if M.interior is not None]
    interior = set.intersection(*masks) if masks else None
    return CdgModule(A, d.source, d, acts, interior, name or " + ".join(M.name for M in mods))


def shift_module(M: CdgModule, n: int, name: str | None = None) -> CdgModule:
    """M[n]: d picks up (-1)^n, the action of g picks up (-1)^(n|g|)."""
    A = M.algebra
    d = shift_map(M.d, n, _sign(n))
    gens = A.generators()
    acts = {g: shift_map(a, n, _sign(n * A.degree(gens[g]))) for g, a in M.actions.items()}
    interior = None if M.interior is None else {i - n for i in M.interior}
    return CdgModule(A, d.source, d, acts, interior, name or f"{M.name}[{n}]")


def zero_module(A: CdgAlgebra) -> CdgModule:
    sp = GradedSpace(A.grading, {})
    d = GradedMap.zero(sp, sp, 1, A.field)
    return CdgModule(A, sp, d, {g: GradedMap.zero(sp, sp, A.degree(l), A.field)
                                for g, l in A.generators().items()}, None, "0")


def z2_module(algebra: CdgAlgebra, d0, d1, actions: Mapping[str, tuple] | None = None,
              name: str = "M") -> CdgModule:
    """A Z/2 module (M0, M1, d0: M0 -> M1, d1: M1 -> M0).

    ``actions`` maps a generator to the pair (even block, odd block).
    """
    if not algebra.grading.is_z2:
        raise UsageError("z2_module needs a Z/2-graded algebra")
    F = algebra.field
    d0, d1 = _mat(d0, F), _mat(d1, F)
    n0, n1 = d0.cols, d0.rows
    if d1.shape != (n0, n1):
        raise UsageError(f"d1 has shape {d1.shape}, expected {(n0, n1)}")
    blocks = {}
    for g, pair in (actions or {}).items():
        a0, a1 = pair
        blocks[g] = {0: _mat(a0, F, n0, n0), 1: _mat(a1, F, n1, n1)}
    return module_from_blocks(algebra, {0: n0, 1: n1}, {0: d0, 1: d1}, blocks, None, name)


def matrix_factorization(algebra: CdgAlgebra, d0, d1, eps=None, name: str = "MF") -> CdgModule:
    """z2_module with the ε-action given as a pair of blocks when the ring is k[ε]."""
    acts = {}
    if "eps" in algebra.generators():
        if eps is None:
            raise UsageError("this algebra needs an ε-action")
        acts["eps"] = eps
    return z2_module(algebra, d0, d1, acts, name)


def eps_block(n: int, field) -> Matrix:
    """ε acting on k[ε]^n with basis (1, ε) per copy."""
    e = {}
    for j in range(n):
        e[(2 * j + 1, 2 * j)] = 1
    return Matrix(2 * n, 2 * n, field, e)


# ---------------------------------------------------------------------------
# free modules, splittings


def free_module(A: CdgAlgebra, gens: Sequence[tuple[str, int]], dgen: Mapping[str, Sequence],
                window: tuple[int, int] | None = None, name: str = "F") -> CdgModule:
    """⊕ A·g over generators g of the given degrees.

    ``dgen[g]`` lists pairs (element of A, generator) giving d(g); then
    d(x g) = d(x) g + (-1)^|x| x d(g).  Infinite algebras need a ``window``
    (lo, hi); the result then has interior degrees [lo + 2, hi - 2].
    """
    F = A.field
    g = A.grading
    gdeg = {gn: g.norm(dg) for gn, dg in gens}
    if window is None:
        if not A.is_finite():
            raise UsageError(f"{A.name} is infinite: pass a degree window")
        if g.is_z2:
            degrees = [0, 1]
        else:
            lo_a, hi_a = A.support()
            degrees = sorted({a + dg for a in range(lo_a, hi_a + 1) for dg in gdeg.values()})
        interior = None
    else:
        lo, hi = window
        degrees = list(range(lo, hi + 1)) if not g.is_z2 else [0, 1]
        interior = set(range(lo + 2, hi - 1)) if not g.is_z2 else None

    basis = {}
    for dd in degrees:
        b = []
        for gn, dg in gens:
            for lab in A.basis(dd - dg):
                b.append((lab, gn))
        if b:
            basis[g.norm(dd)] = b
    sp = GradedSpace(g, {dd: len(b) for dd, b in basis.items()})
    index = {dd: {x: k for k, x in enumerate(b)} for dd, b in basis.items()}

    def image_matrix(shift, fn):
        blocks = {}
        for dd, b in basis.items():
            t = g.norm(dd + shift)
            e = {}
            for col, (lab, gn) in enumerate(b):
                for (lab2, gn2), v in fn(lab, gn).items():
                    row = index.get(t, {}).get((lab2, gn2))
                    if row is None:
                        continue
                    e[(row, col)] = e.get((row, col), 0) + v
            blocks[dd] = Matrix(sp.dim(t), len(b), F, e)
        return GradedMap(sp, sp, shift, blocks, F)

    dgen_e = {gn: [(A.elem(x), h) for x, h in dgen.get(gn, [])] for gn in gdeg}

    def d_fn(lab, gn):
        out = {}
        for l2, v in A.diff(lab).items():
            out[(l2, gn)] = out.get((l2, gn), 0) + v
        s = _sign(A.degree(lab))
        for x, h in dgen_e[gn]:
            for l2, v in A.emul({lab: F.one}, x).items():
                out[(l2, h)] = out.get((l2, h), 0) + s * v
        return out

    d = image_matrix(1, d_fn)
    acts = {}
    for gname, glab in A.generators().items():
        def act_fn(lab, gn, glab=glab):
            return {(l2, gn): v for l2, v in A.mul(glab, lab).items()}
        acts[gname] = image_matrix(A.degree(glab), act_fn)
    return CdgModule(A, sp, d, acts, interior, name)


@dataclass
class Splitting:
    """Closed φ in A^(1-i), ψ in A^(1+i) with ψφ = φψ = c (d_A = 0 only)."""

    algebra: CdgAlgebra
    phi: dict
    psi: dict
    i: int

    def __post_init__(self):
        A = self.algebra
        self.phi = A.elem(self.phi)
        self.psi = A.elem(self.psi)
        self.i = A.grading.norm(self.i)
        g = A.grading
        if self.phi and A.edegree(self.phi) != g.norm(1 - self.i):
            raise UsageError(f"φ must have degree {1 - self.i}")
        if self.psi and A.edegree(self.psi) != g.norm(1 + self.i):
            raise UsageError(f"ψ must have degree {1 + self.i}")

    def check(self, window=(-10, 10)) -> list[str]:
        A = self.algebra
        bad = []
        if any(A.diff(l) for l in A.labels_in(*window)):
            bad.append("d_A = 0")
        if A.ediff(self.phi) or A.ediff(self.psi):
            bad.append("d(φ) = d(ψ) = 0")
        c = A.curvature
        if A.emul(self.psi, self.phi) != c:
            bad.append("ψφ = c")
        if A.emul(self.phi, self.psi) != c:
            bad.append("φψ = c")
        return bad


def splitting_cone(s: Splitting, carrier=None, name: str | None = None) -> CdgModule:
    """The free module on e (degree 0) and f (degree -i) with d(e) = ±ψ f, d(f) = φ e.

    The sign on ψ is (-1)^(1+i), which makes d² = c on both generators.
    ``carrier`` is None (finite algebra), ``"Z2"`` or ``("window", lo, hi)``.
    """
    bad = s.check()
    if bad:
        raise PreconditionViolation(f"not a splitting: {', '.join(bad)}", bad)
    A = s.algebra
    sigma = _sign(1 + s.i)
    window = None
    if isinstance(carrier, tuple):
        if carrier[0] != "window":
            raise UsageError("carrier must be None, 'Z2' or ('window', lo, hi)")
        window = (carrier[1], carrier[2])
    elif carrier == "Z2":
        if not A.grading.is_z2:
            raise UsageError("Z2 carrier needs a Z/2-graded algebra")
    elif carrier is not None:
        raise UsageError("carrier must be None, 'Z2' or ('window', lo, hi)")
    psi = scale(s.psi, sigma)
    M = free_module(A, [("e", 0), ("f", -s.i)],
                    {"e": [(psi, "f")] if psi else [], "f": [(s.phi, "e")] if s.phi else []},
                    window, name or f"A_({A.fmt(s.phi)},{A.fmt(s.psi)})")
    return M


@dataclass
class PdgCone:
    module: CdgModule
    d2_target: GradedMap
    d2_source: GradedMap
    d2_off: tuple


def pdg_cone(phi: GradedMap, psi: GradedMap, M: CdgModule, N: CdgModule) -> PdgCone:
    """N ⊕ M with d = [[d_N, φ], [ψ, d_M]] for φ: M -> N, ψ: N -> M of shift 1.

    φ and ψ must anticommute with the predifferentials (they are maps into a
    shift by one) and be compatible with the actions.
    """
    A = M.algebra
    for name, f, S, T in (("φ", phi, M, N), ("ψ", psi, N, M)):
        if f.source != S.space or f.target != T.space or f.shift != A.grading.norm(1):
            raise UsageError(f"{name} must be a shift-1 map between the given modules")
        comm = (T.d @ f) + (f @ S.d)
        if not comm.is_zero():
            raise PreconditionViolation(f"{name} is not a pdg map", comm)
        for g, lab in A.generators().items():
            sg = _sign(A.degree(lab))
            c2 = (f @ S.act(g)) - (T.act(g) @ f).scale(sg)
            if not c2.is_zero():
                raise PreconditionViolation(f"{name} does not commute with {g}", c2)
    d = block_map([[N.d, phi], [psi, M.d]], [N.space, M.space], [N.space, M.space], 1, A.field)
    acts = {g: direct_sum_maps([N.act(g), M.act(g)]) for g in A.generators()}
    C = CdgModule(A, d.source, d, acts, None, f"pdgcone({N.name},{M.name})")
    d2 = d @ d
    P = [summand_projection([N.space, M.space], k, A.field) for k in range(2)]
    I = [summand_inclusion([N.space, M.space], k, A.field) for k in range(2)]
    blk = lambda a, b: P[a] @ d2 @ I[b]
    return PdgCone(C, blk(0, 0), blk(1, 1), (blk(0, 1), blk(1, 0)))


# ---------------------------------------------------------------------------
# cones, short exact sequences


def _from_shifted_source(f: GradedMap, src_shifted: GradedSpace, n: int) -> GradedMap:
    """f: M -> N viewed as M[n] -> N of shift n (same blocks)."""
    g = f.grading
    blocks = {g.norm(j - n): m for j, m in f.blocks().items()}
    return GradedMap(src_shifted, f.target, f.shift + n, blocks, f.field)


def _to_shifted_target(f: GradedMap, tgt_shifted: GradedSpace, n: int) -> GradedMap:
    """f: M -> N viewed as M -> N[n] of shift -n (same blocks)."""
    return GradedMap(f.source, tgt_shifted, f.shift - n, f.blocks(), f.field)


@dataclass
class Cone:
    module: CdgModule
    inclusion: ModuleMap
    projection: ModuleMap


def cone_of_map(f: ModuleMap) -> Cone:
    """N ⊕ M[1] with d = [[d_N, f], [0, -d_M]]."""
    bad = f.defects()
    if bad:
        raise PreconditionViolation(f"cone needs a strict map ({', '.join(bad)} fails)", bad)
    M, N = f.source, f.target
    A = M.algebra
    M1 = shift_module(M, 1)
    fo = _from_shifted_source(f.map, M1.space, 1)
    d = block_map([[N.d, fo], [None, M1.d]], [N.space, M1.space], [N.space, M1.space], 1, A.field)
    acts = {g: direct_sum_maps([N.act(g), M1.act(g)]) for g in A.generators()}
    masks = [set(X.interior) for X in (N, M1) if X.interior is not None]
    interior = set.intersection(*masks) if masks else None
    C = CdgModule(A, d.source, d, acts, interior, f"cone({f.source.name}->{f.target.name})")
    inc = ModuleMap(N, C, summand_inclusion([N.space, M1.space], 0, A.field))
    proj = ModuleMap(C, M1, summand_projection([N.space, M1.space], 1, A.field))
    return Cone(C, inc, proj)


@dataclass
class ShortExactSeq:
    i: ModuleMap
    p: ModuleMap

    def __post_init__(self):
        if self.i.target is not self.p.source and not self.i.target.same_as(self.p.source):
            raise UsageError("the middle terms of i and p differ")


@dataclass
class SesReport:
    exact: bool
    strict: bool
    graded_k_split: bool
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.exact and self.strict

    def to_json(self) -> dict:
        return {"exact": self.exact, "strict": self.strict, "graded_k_split": self.graded_k_split,
                "failures": list(self.failures)}


def verify_ses(s: ShortExactSeq) -> SesReport:
    """Degreewise exactness by ranks; strictness of both maps."""
    Mp, M, Mpp = s.i.source, s.i.target, s.p.target
    fails = []
    strict = True
    for nm, f in (("i", s.i), ("p", s.p)):
        for dfc in f.defects():
            fails.append(f"{nm}: {dfc}")
            strict = False
    exact = True
    degs = set(Mp.space.degrees()) | set(M.space.degrees()) | set(Mpp.space.degrees())
    for dg in sorted(degs):
        i, p = s.i.map.block(dg), s.p.map.block(dg)
        if rank(i) != Mp.space.dim(dg):
            exact = False
            fails.append(f"i not injective in degree {dg}")
        if rank(p) != Mpp.space.dim(dg):
            exact = False
            fails.append(f"p not surjective in degree {dg}")
        if not (p @ i).is_zero():
            exact = False
            fails.append(f"p∘i ≠ 0 in degree {dg}")
        if M.space.dim(dg) != Mp.space.dim(dg) + Mpp.space.dim(dg):
            exact = False
            fails.append(f"im i ≠ ker p in degree {dg}")
    # over a field every degreewise exact sequence splits as graded vector spaces
    return SesReport(exact, strict, exact, fails)


def totalize_ses(s: ShortExactSeq) -> CdgModule:
    """M'[1] ⊕ M ⊕ M''[-1] with i and p as unsigned off-diagonal blocks."""
    rep = verify_ses(s)
    if not rep.ok:
        raise PreconditionViolation("totalization needs a strict exact sequence", rep.failures)
    Mp, M, Mpp = s.i.source, s.i.target, s.p.target
    A = M.algebra
    T1, T3 = shift_module(Mp, 1), shift_module(Mpp, -1)
    io = _from_shifted_source(s.i.map, T1.space, 1)
    po = _to_shifted_target(s.p.map, T3.space, -1)
    spaces = [T1.space, M.space, T3.space]
    d = block_map([[T1.d, None, None], [io, M.d, None], [None, po, T3.d]], spaces, spaces, 1, A.field)
    acts = {g: direct_sum_maps([T1.act(g), M.act(g), T3.act(g)]) for g in A.generators()}
    return CdgModule(A, d.source, d, acts, None, f"Tot({Mp.name}->{M.name}->{Mpp.name})")


# ---------------------------------------------------------------------------
# change of algebra


def restrict_scalars(f: StrictMorphism, M: CdgModule) -> CdgModule:
    """View a module over f.target as one over f.source."""
    if M.algebra is not f.target and M.algebra.descriptor() != f.target.descriptor():
        raise UsageError("module is not over the target of the morphism")
    A = f.source
    acts = {}
    for g, lab in A.generators().items():
        acts[g] = M.act_element(f.gen_images[g], degree=A.degree(lab))
    return CdgModule(A, M.space, M.d, acts, M.interior, f"{f.name}^*{M.name}")


def _quotient_data(E: Matrix):
    """Projection q onto a complement of im E, and a section s with q s = 1."""
    F = E.field
    n = E.rows
    piv = column_space_basis(E)
    cols = [E.column(j) for j in piv]
    chosen = list(cols)
    sec = []
    for k in range(n):
        e = [F.zero] * n
        e[k] = F.one
        trial = Matrix.from_columns(chosen + [e], F, rows=n)
        if rank(trial) > len(chosen):
            chosen.append(e)
            sec.append(k)
    B = Matrix.from_columns(chosen, F, rows=n) if chosen else Matrix.zeros(0, 0, F)
    Binv = inverse(B)
    r = len(cols)
    q = Binv.submatrix(list(range(r, n)), list(range(n))) if n else Matrix.zeros(0, 0, F)
    s = Matrix.from_columns([[F.one if i == k else F.zero for i in range(n)] for k in sec], F, rows=n) \
        if sec else Matrix.zeros(n, 0, F)
    return q, s


def reduce_mod_epsilon(M: CdgModule) -> CdgModule:
    """Degreewise cokernel of the ε-action, as a module over the ε = 0 quotient."""
    A = M.algebra
    if "eps" not in A.generators():
        raise NotDefined(f"{A.name} has no ε generator")
    Q, label_map = A.eps_quotient()
    E = M.act("eps")
    if not (E @ E).is_zero():
        raise PreconditionViolation("ε does not square to zero on the module")
    F = A.field
    qs = {dg: _quotient_data(E.block(dg)) for dg in M.space.degrees()}
    sp = GradedSpace(M.grading, {dg: qs[dg][0].rows for dg in qs})

    def induced(f: GradedMap, what: str) -> GradedMap:
        blocks = {}
        for dg in M.space.degrees():
            t = M.grading.norm(dg + f.shift)
            if t not in qs:
                continue
            q_t = qs[t][0]
            if not (q_t @ f.block(dg) @ E.block(dg)).is_zero():
                raise PreconditionViolation(f"{what} does not preserve εM in degree {dg}")
            blocks[dg] = q_t @ f.block(dg) @ qs[dg][1]
        return GradedMap(sp, sp, f.shift, blocks, F)

    d = induced(M.d, "d")
    acts = {}
    for g in Q.generators():
        acts[g] = induced(M.act(g), g)
    interior = None if M.interior is None else set(M.interior)
    return CdgModule(Q, sp, d, acts, interior, f"{M.name}/eps")


def extend_by_zero_eps(N: CdgModule, A: CdgAlgebra) -> CdgModule:
    """A module over the ε = 0 quotient of A regarded over A with ε acting by 0."""
    Q, _ = A.eps_quotient()
    if N.algebra is not Q and N.algebra.descriptor() != Q.descriptor():
        raise UsageError(f"module is over {N.algebra.name}, expected {Q.name}")
    acts = dict(N.actions)
    acts["eps"] = GradedMap.zero(N.space, N.space, 0, A.field)
    for g in A.generators():
        if g not in acts:
            raise UsageError(f"generator {g} of {A.name} is not in the quotient")
    return CdgModule(A, N.space, N.d, acts, N.interior, f"{N.name}|eps=0")


def graded_free_rank(M: CdgModule) -> dict[int, int] | None:
    """Rank of each degree as a free k[ε]-module, or None if some degree is not free."""
    if "eps" not in M.actions:
        raise UsageError("module has no ε-action")
    E = M.act("eps")
    out = {}
    for dg in M.space.degrees():
        n, r = M.space.dim(dg), rank(E.block(dg))
        if n != 2 * r:
            return None
        out[dg] = r
    return out


# ---------------------------------------------------------------------------
# Z/2 collapse of u-periodic data


def unfold_z2(M: CdgModule, lo: int, hi: int) -> CdgModule:
    """Unroll a Z/2 module over Z2Rho(R, rho) to a u-periodic window over R_rho[u].

    Degree j carries M^(j mod 2); u acts by the identity from j to j + 2.
    The result is truncated to [lo, hi] with interior [lo + 2, hi - 2].
    """
    A = M.algebra
    if not isinstance(A, PolyFamily) or A.descriptor().get("family") != "z2_rho":
        raise UsageError("unfold_z2 needs a module over z2_rho")
    desc = A.descriptor()
    B = poly_u(desc["ring"], desc["rho"], A.field)
    F = A.field
    dims = {j: M.space.dim(j % 2) for j in range(lo, hi + 1)}
    dims = {j: n for j, n in dims.items() if n}
    sp = GradedSpace(Z, dims)
    d = GradedMap(sp, sp, 1, {j: M.d.block(j % 2) for j in range(lo, hi) if j in dims and j + 1 in dims}, F)
    acts = {"u": GradedMap(sp, sp, 2, {j: Matrix.identity(dims[j], F) for j in range(lo, hi - 1)
                                       if j in dims and j + 2 in dims}, F)}
    if "eps" in B.generators():
        acts["eps"] = GradedMap(sp, sp, 0, {j: M.act("eps").block(j % 2) for j in dims}, F)
    return CdgModule(B, sp, d, acts, set(range(lo + 2, hi - 1)), f"{M.name}~[{lo},{hi}]")


def fold_z(M: CdgModule, at: int, algebra: CdgAlgebra) -> CdgModule:
    """Read Z/2 data off a u-periodic window at degrees (at, at + 1)."""
    F = M.field
    e, o = (at, at + 1) if at % 2 == 0 else (at + 1, at)
    d0 = M.d.block(e)
    d1 = M.d.block(o)
    acts = {}
    if "eps" in algebra.generators():
        acts["eps"] = (M.act("eps").block(e), M.act("eps").block(o))
    return z2_module(algebra, d0, d1, acts, M.name + "/u")
