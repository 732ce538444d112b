"""Homotopy questions as linear systems.

An unknown homogeneous map ``X: M -> N`` of shift ``s`` is flattened into a
vector of entries, degree by degree.  Equations of the form
``Σ coef · L ∘ X ∘ R = F`` become one sparse system, solved exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .errors import UsageError
from .graded import GradedMap, GradedSpace
from .modules import CdgModule, ModuleMap, Splitting
from .scalars import (Matrix, inconsistency_certificate, is_invertible, kernel_basis, rank, solve)


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


class Layout:
    """Positions of the entries of a shift-``s`` map between two spaces."""

    def __init__(self, source: GradedSpace, target: GradedSpace, shift: int):
        self.source, self.target = source, target
        g = source.grading
        self.shift = g.norm(shift)
        self.offsets = {}
        n = 0
        for d in source.degrees():
            r, c = target.dim(d + self.shift), source.dim(d)
            if r and c:
                self.offsets[d] = (n, r, c)
                n += r * c
        self.size = n

    def index(self, d: int, r: int, c: int) -> int | None:
        o = self.offsets.get(d)
        if o is None:
            return None
        return o[0] + r * o[2] + c

    def to_map(self, vec: Sequence, field) -> GradedMap:
        blocks = {}
        for d, (off, r, c) in self.offsets.items():
            e = {}
            for a in range(r):
                for b in range(c):
                    v = vec[off + a * c + b]
                    if v:
                        e[(a, b)] = v
            blocks[d] = Matrix(r, c, field, e)
        return GradedMap(self.source, self.target, self.shift, blocks, field)

    def from_map(self, f: GradedMap) -> list:
        F = f.field
        vec = [F.zero] * self.size
        for d, (off, r, c) in self.offsets.items():
            for (a, b), v in f.block(d).items():
                vec[off + a * c + b] = v
        return vec


def _entries(f: GradedMap | None, d: int, dim: int):
    if f is None:
        return [((k, k), 1) for k in range(dim)]
    return list(f.block(d).items())


def operator_rows(unknown: Layout, terms, out_source: GradedSpace, out_target: GradedSpace,
                  out_shift: int, degrees, field) -> tuple[dict, Layout]:
    """Sparse rows of the linear map X ↦ Σ coef · L ∘ X ∘ R.

    ``terms`` is a list of (coef, L, R) with L: N -> T, R: S -> M (None is
    the identity).  Rows are indexed like a :class:`Layout` of shift
    ``out_shift`` from S to T, restricted to the given source degrees.
    """
    out = Layout(out_source, out_target, out_shift)
    g = out_source.grading
    keep = None if degrees is None else {g.norm(x) for x in degrees}
    rows = {}
    for coef, L, R in terms:
        coef = field(coef)
        if not coef:
            continue
        rshift = 0 if R is None else R.shift
        for j in out_source.degrees():
            if keep is not None and j not in keep:
                continue
            if j not in out.offsets:
                continue
            k = g.norm(j + rshift)
            if k not in unknown.offsets:
                continue
            ks = g.norm(k + unknown.shift)
            r_ent = _entries(R, j, out_source.dim(j))
            l_ent = _entries(L, ks, unknown.target.dim(ks))
            for (q, b), rv in r_ent:
                for (a, p), lv in l_ent:
                    row = out.index(j, a, b)
                    col = unknown.index(k, p, q)
                    if row is None or col is None:
                        continue
                    v = coef * lv * rv
                    rd = rows.setdefault(row, {})
                    s = rd.get(col, 0) + v
                    if s:
                        rd[col] = s
                    else:
                        rd.pop(col, None)
    return rows, out


def _assemble(blocks: list[tuple[dict, int]], ncols: int, field) -> Matrix:
    e = {}
    base = 0
    for rows, nrows in blocks:
        for r, rd in rows.items():
            for c, v in rd.items():
                if v:
                    e[(base + r, c)] = v
        base += nrows
    return Matrix(base, ncols, field, e)


def _commutation_terms(M: CdgModule, N: CdgModule, shift: int):
    """act_N(g) X − (−1)^(|g| shift) X act_M(g) for each generator g."""
    A = M.algebra
    out = []
    for g, lab in A.generators().items():
        sg = _sign(A.degree(lab) * shift)
        out.append((g, [(1, N.act(g), None), (-sg, None, M.act(g))], A.degree(lab)))
    return out


def _check_same_algebra(M: CdgModule, N: CdgModule):
    if M.algebra is not N.algebra and M.algebra.descriptor() != N.algebra.descriptor():
        raise UsageError("modules over different algebras")


# ---------------------------------------------------------------------------
# homotopy search


@dataclass
class HomotopySearch:
    """Outcome of a homotopy search.

    On failure ``certificate`` is a row vector y with y·A = 0 and y·b = 1,
    proving the system inconsistent.
    """

    homotopy: GradedMap | None
    equations: int
    unknowns: int
    rank: int
    certificate: list | None = None
    constraints: list = dc_field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.homotopy is not None

    def to_json(self, field=None) -> dict:
        out = {"found": self.found, "equations": self.equations, "unknowns": self.unknowns,
               "rank": self.rank, "constraints": list(self.constraints)}
        if self.homotopy is not None:
            out["homotopy"] = self.homotopy.to_json()
        if self.certificate is not None:
            fmt = (field.format if field is not None else str)
            out["certificate"] = {str(k): fmt(v) for k, v in enumerate(self.certificate) if v}
        return out


def homotopy_search(M: CdgModule, N: CdgModule, f: GradedMap, respect_actions: bool = True,
                    degrees=None) -> HomotopySearch:
    """Look for h: M -> N of shift -1 with d_N h + h d_M = f (and h A-linear)."""
    _check_same_algebra(M, N)
    F = M.field
    if f.source != M.space or f.target != N.space or f.shift != 0:
        raise UsageError("f must be a degree-0 map M -> N")
    if degrees is None:
        degrees = M.interior_degrees()
        if N.interior is not None:
            degrees = [d for d in degrees if d in N.interior]
    X = Layout(M.space, N.space, -1)
    main, out = operator_rows(X, [(1, N.d, None), (1, None, M.d)], M.space, N.space, 0, degrees, F)
    parts = [(main, out.size)]
    b = out.from_map(f)
    keep = {M.grading.norm(x) for x in degrees}
    for dd, (off, r, c) in out.offsets.items():
        if dd not in keep:
            for k in range(off, off + r * c):
                b[k] = F.zero
    constraints = ["d h + h d = f"]
    if respect_actions:
        for g, terms, gdeg in _commutation_terms(M, N, -1):
            rows, lay = operator_rows(X, terms, M.space, N.space, -1 + gdeg, degrees, F)
            parts.append((rows, lay.size))
            b = b + [F.zero] * lay.size
            constraints.append(f"h commutes with {g}")
    A = _assemble(parts, X.size, F)
    x = solve(A, b)
    rk = rank(A)
    if x is None:
        y = inconsistency_certificate(A, b)
        return HomotopySearch(None, A.rows, A.cols, rk, y, constraints)
    return HomotopySearch(X.to_map(x, F), A.rows, A.cols, rk, None, constraints)


def contraction_search(M: CdgModule, respect_actions: bool = True) -> HomotopySearch:
    return homotopy_search(M, M, M.identity(), respect_actions)


def is_contractible(M: CdgModule, respect_actions: bool = True) -> GradedMap | None:
    """Some h with dh + hd = 1 commuting with the actions, or None."""
    return contraction_search(M, respect_actions).homotopy


def null_homotopy(f: ModuleMap, respect_actions: bool = True) -> GradedMap | None:
    return homotopy_search(f.source, f.target, f.map, respect_actions).homotopy


def is_homotopy(M: CdgModule, N: CdgModule, h: GradedMap, f: GradedMap, respect_actions: bool = True) -> bool:
    """Direct check of d h + h d = f (and A-linearity of h) on interior degrees."""
    degs = M.interior_degrees()
    if N.interior is not None:
        degs = [d for d in degs if d in N.interior]
    if not ((N.d @ h) + (h @ M.d)).agrees_on(f, degs):
        return False
    if respect_actions:
        A = M.algebra
        for g, lab in A.generators().items():
            sg = _sign(A.degree(lab))
            if not (N.act(g) @ h).agrees_on((h @ M.act(g)).scale(sg), degs):
                return False
    return True


@dataclass
class ForgetAgreement:
    with_actions: bool
    without_actions: bool

    @property
    def agree(self) -> bool:
        return self.with_actions == self.without_actions


def homotopy_forget_agreement(M: CdgModule) -> ForgetAgreement:
    """Contractibility by A-linear homotopies versus by plain k-linear ones."""
    return ForgetAgreement(is_contractible(M, True) is not None, is_contractible(M, False) is not None)


# ---------------------------------------------------------------------------
# Hom complexes


class HomComplex:
    """Graded A-linear maps M -> N with D(f) = d_N f − (−1)^i f d_M."""

    def __init__(self, M: CdgModule, N: CdgModule):
        _check_same_algebra(M, N)
        if M.windowed or N.windowed:
            raise UsageError("Hom complexes need finite modules (no truncation window)")
        self.M, self.N = M, N
        self.field = M.field
        self._cache = {}

    def shift_range(self) -> list[int]:
        if self.M.grading.is_z2:
            return [0, 1]
        rm, rn = self.M.space.support_range(), self.N.space.support_range()
        if rm is None or rn is None:
            return []
        return list(range(rn[0] - rm[1], rn[1] - rm[0] + 1))

    def layout(self, i: int) -> Layout:
        return Layout(self.M.space, self.N.space, i)

    def piece(self, i: int) -> list[list]:
        """Basis (full coordinates) of the A-linear maps of shift i."""
        key = ("piece", self.M.grading.norm(i))
        if key not in self._cache:
            X = self.layout(i)
            parts = []
            for g, terms, gdeg in _commutation_terms(self.M, self.N, i):
                rows, lay = operator_rows(X, terms, self.M.space, self.N.space, i + gdeg, None, self.field)
                parts.append((rows, lay.size))
            C = _assemble(parts, X.size, self.field)
            self._cache[key] = kernel_basis(C)
        return self._cache[key]

    def differential(self, i: int) -> Matrix:
        """Matrix of D from shift-i coordinates to shift-(i+1) coordinates."""
        key = ("D", self.M.grading.norm(i))
        if key not in self._cache:
            X = self.layout(i)
            rows, out = operator_rows(X, [(1, self.N.d, None), (-_sign(i), None, self.M.d)],
                                      self.M.space, self.N.space, i + 1, None, self.field)
            self._cache[key] = _assemble([(rows, out.size)], X.size, self.field)
        return self._cache[key]

    def apply_d(self, f: GradedMap) -> GradedMap:
        return (self.N.d @ f) - (f @ self.M.d).scale(_sign(f.shift))

    def _restricted(self, i: int) -> Matrix:
        basis = self.piece(i)
        D = self.differential(i)
        F = self.field
        if not basis:
            return Matrix.zeros(D.rows, 0, F)
        return D @ Matrix.from_columns(basis, F, rows=D.cols)

    def d_squared_zero(self, i: int) -> bool:
        return (self.differential(i + 1) @ self._restricted(i)).is_zero()

    def cohomology(self, i: int) -> "HomCohomology":
        F = self.field
        basis = self.piece(i)
        Di = self._restricted(i)
        Dprev = self._restricted(i - 1)
        ri, rp = rank(Di), rank(Dprev)
        dim = len(basis) - ri - rp
        reps = []
        if dim:
            lay = self.layout(i)
            coeffs = kernel_basis(Di)
            cocycles = [[sum((c[k] * basis[k][t] for k in range(len(basis)) if c[k]), F.zero)
                         for t in range(lay.size)] for c in coeffs]
            span = [Dprev.column(j) for j in range(Dprev.cols)]
            cur = rp
            for z in cocycles:
                trial = span + [z]
                r = rank(Matrix.from_columns(trial, F, rows=lay.size))
                if r > cur:
                    span, cur = trial, r
                    reps.append(lay.to_map(z, F))
                if len(reps) == dim:
                    break
        return HomCohomology(i, dim, reps, len(basis), ri, rp)


@dataclass
class HomCohomology:
    shift: int
    dim: int
    representatives: list
    piece_dim: int
    rank_out: int
    rank_in: int


def hom_cohomology(M: CdgModule, N: CdgModule, i: int) -> HomCohomology:
    return HomComplex(M, N).cohomology(i)


def hom_cohomology_dims(M: CdgModule, N: CdgModule) -> dict[int, int]:
    H = HomComplex(M, N)
    return {i: H.cohomology(i).dim for i in H.shift_range()}


# ---------------------------------------------------------------------------
# splittings


def _elem_block(M: CdgModule, x: Mapping, deg: int, at: int) -> Matrix:
    return M.act_element(x, degree=deg).block(at)


def _split_degrees(M: CdgModule, s: Splitting, j: int):
    g = M.grading
    A = s.algebra
    return g.norm(j), g.norm(j - s.i), g.norm(1 + s.i), g.norm(1 - s.i)


def splitting_cocycle_test(m: Sequence, n: Sequence, M: CdgModule, s: Splitting, j: int) -> bool:
    """Whether d_M m + (−1)^j ψ n = 0 and d_M n + (−1)^j φ m = 0 (m in M^j, n in M^(j−i))."""
    F = M.field
    jj, jn, dpsi, dphi = _split_degrees(M, s, j)
    if len(m) != M.space.dim(jj) or len(n) != M.space.dim(jn):
        raise UsageError("pair has the wrong degrees for this splitting")
    m = [F(x) for x in m]
    n = [F(x) for x in n]
    sj = _sign(j)
    psi = _elem_block(M, s.psi, dpsi, jn)
    phi = _elem_block(M, s.phi, dphi, jj)
    first = [a + sj * b for a, b in zip(M.d.block(jj).apply(m), psi.apply(n))]
    second = [a + sj * b for a, b in zip(M.d.block(jn).apply(n), phi.apply(m))]
    return not any(first) and not any(second)


def splitting_boundary_test(m: Sequence, n: Sequence, M: CdgModule, s: Splitting, j: int):
    """(h, k) with m = d h + (−1)^(j+1) ψ k and n = d k + (−1)^(j+1) φ h, or None."""
    F = M.field
    g = M.grading
    jj, jn, dpsi, dphi = _split_degrees(M, s, j)
    if len(m) != M.space.dim(jj) or len(n) != M.space.dim(jn):
        raise UsageError("pair has the wrong degrees for this splitting")
    hdeg, kdeg = g.norm(j - 1), g.norm(j - 1 - s.i)
    sg = _sign(j + 1)
    dh = M.d.block(hdeg)
    dk = M.d.block(kdeg)
    psi_k = _elem_block(M, s.psi, dpsi, kdeg).scale(sg)
    phi_h = _elem_block(M, s.phi, dphi, hdeg).scale(sg)
    A = Matrix.block([[dh, psi_k], [phi_h, dk]], [M.space.dim(jj), M.space.dim(jn)],
                     [M.space.dim(hdeg), M.space.dim(kdeg)], F)
    x = solve(A, [F(v) for v in m] + [F(v) for v in n])
    if x is None:
        return None
    nh = M.space.dim(hdeg)
    return x[:nh], x[nh:]


def splitting_formula_complex(M: CdgModule, s: Splitting):
    """Degree j -> (matrix of d from K^j to K^(j+1)), K^j = M^j ⊕ M^(j−i)."""
    F = M.field
    g = M.grading
    rng = M.space.support_range()
    if rng is None:
        return {}, {}
    if g.is_z2:
        degs = [0, 1]
    else:
        lo, hi = rng
        degs = list(range(lo, hi + s.i + 2)) if s.i >= 0 else list(range(lo + s.i, hi + 2))
    dims = {j: M.space.dim(j) + M.space.dim(j - s.i) for j in degs}
    mats = {}
    for j in degs:
        jj, jn, dpsi, dphi = _split_degrees(M, s, j)
        sj = _sign(j)
        t, tn = g.norm(j + 1), g.norm(j + 1 - s.i)
        psi = _elem_block(M, s.psi, dpsi, jn).scale(sj)
        phi = _elem_block(M, s.phi, dphi, jj).scale(sj)
        mats[j] = Matrix.block([[M.d.block(jj), psi], [phi, M.d.block(jn)]],
                               [M.space.dim(t), M.space.dim(tn)],
                               [M.space.dim(jj), M.space.dim(jn)], F)
    return dims, mats


def splitting_cohomology(M: CdgModule, s: Splitting) -> dict[int, int]:
    """Cohomology of the pair complex, at the degrees it is fully computed."""
    dims, mats = splitting_formula_complex(M, s)
    g = M.grading
    out = {}
    valid = None
    if M.interior is not None:
        valid = set(M.interior)
    for j in dims:
        prev = g.norm(j - 1)
        if valid is not None:
            need = {g.norm(x) for x in (j - 1, j, j + 1, j - 1 - s.i, j - s.i, j + 1 - s.i)}
            if not need <= valid:
                continue
        Dj = mats.get(j)
        Dp = mats.get(prev)
        r_out = rank(Dj) if Dj is not None else 0
        r_in = rank(Dp) if Dp is not None else 0
        out[j] = dims[j] - r_out - r_in
    return out


def acyclic_wrt(generators: Sequence, N: CdgModule) -> bool:
    """True iff every generator has vanishing Hom cohomology into N in all shifts.

    A generator is a finite module or a :class:`Splitting` (standing for its
    cone, possibly infinite); the latter uses the pair complex, which also
    handles truncated N on its interior.
    """
    for G in generators:
        if isinstance(G, Splitting):
            if any(splitting_cohomology(N, G).values()):
                return False
        else:
            if any(hom_cohomology_dims(G, N).values()):
                return False
    return True


# ---------------------------------------------------------------------------
# isomorphisms


def strict_iso_check(f) -> bool:
    """True iff f is strict and every degree block is square and invertible."""
    if isinstance(f, ModuleMap):
        if not f.is_strict():
            return False
        g = f.map
    else:
        g = f
    if g.shift != 0:
        return False
    degs = set(g.source.degrees()) | set(g.target.degrees())
    return all(is_invertible(g.block(d)) for d in degs)
