"""Normal forms: interval (barcode) decomposition of precomplexes and the
string/bar decomposition of Z/2 complexes over a field."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import NotDefined, UsageError
from .graded import GradedMap, GradedSpace, Z
from .modules import (CdgModule, ModuleMap, direct_sum, interval_precomplex, z2_module, zero_module)
from .scalars import Matrix, kernel_basis, rank


@dataclass
class Barcode:
    """Intervals (birth degree, length) with multiplicities."""

    bars: Counter

    def multiplicity(self, birth: int, length: int) -> int:
        return self.bars.get((birth, length), 0)

    def dims(self) -> dict[int, int]:
        out = {}
        for (a, n), k in self.bars.items():
            for j in range(a, a + n):
                out[j] = out.get(j, 0) + k
        return out

    def total(self) -> int:
        return sum(n * k for (a, n), k in self.bars.items())

    def sorted(self) -> list[tuple[int, int, int]]:
        return sorted((a, n, k) for (a, n), k in self.bars.items())

    def to_json(self) -> list:
        return [{"birth": a, "length": n, "multiplicity": k} for a, n, k in self.sorted()]


@dataclass
class BarcodeDecomposition:
    barcode: Barcode
    canonical: CdgModule
    witness: ModuleMap
    """Strict isomorphism canonical -> input."""


def barcode_decompose(P: CdgModule) -> BarcodeDecomposition:
    """Interval decomposition of a finite precomplex.

    Degrees are swept left to right.  Basis vectors of the current degree
    each belong to a bar; their images under d are reduced in order of age
    (oldest first).  A column that reduces to zero kills the youngest bar
    involved, and the reduction is replayed along that bar's history so the
    basis stays adapted in every earlier degree.
    """
    if P.grading != Z:
        raise UsageError("barcode decomposition needs a Z-graded precomplex")
    if set(P.algebra.generators()) - {"c"}:
        raise UsageError("barcode decomposition handles precomplexes without extra actions")
    F = P.field
    rng = P.space.support_range()
    if rng is None:
        return BarcodeDecomposition(Barcode(Counter()), P, ModuleMap(P, P, P.identity()))
    lo, hi = rng
    # bars[b] = {"birth": a, "vecs": {degree: vector}, "death": last degree or None}
    bars = []
    live = []  # bar indices alive in the current degree, oldest first
    for j in range(lo, hi + 1):
        n = P.space.dim(j)
        # complete the live vectors to a basis of degree j with new births
        current = [bars[b]["vecs"][j] for b in live]
        for k in range(n):
            e = [F.zero] * n
            e[k] = F.one
            trial = current + [e]
            if rank(Matrix.from_columns(trial, F, rows=n)) > len(current):
                current = trial
                bars.append({"birth": j, "vecs": {j: e}, "death": None})
                live.append(len(bars) - 1)
        if len(live) != n:
            raise AssertionError("basis completion failed")
        if j == hi or n == 0:
            for b in live:
                bars[b]["death"] = j
            live = []
            continue
        D = P.d.block(j)
        m = P.space.dim(j + 1)
        pivots = {}  # pivot row -> (reduced image, combination {bar: coef})
        survivors = []
        for b in live:
            img = D.apply(bars[b]["vecs"][j])
            comb = {b: F.one}
            while True:
                p = next((r for r in range(m) if img[r]), None)
                if p is None or p not in pivots:
                    break
                pimg, pcomb = pivots[p]
                f = img[p] / pimg[p]
                img = [x - f * y for x, y in zip(img, pimg)]
                for bb, v in pcomb.items():
                    comb[bb] = comb.get(bb, F.zero) - f * v
            if p is None:
                # the combination dies here: rewrite bar b along its history
                for k in range(bars[b]["birth"], j + 1):
                    v = [F.zero] * P.space.dim(k)
                    for bb, cf in comb.items():
                        if cf:
                            v = [x + cf * y for x, y in zip(v, bars[bb]["vecs"][k])]
                    bars[b]["vecs"][k] = v
                bars[b]["death"] = j
            else:
                # after the rewrite bar b alone maps to img
                pivots[p] = (img, {b: F.one})
                if any(cf for bb, cf in comb.items() if bb != b):
                    for k in range(bars[b]["birth"], j + 1):
                        v = [F.zero] * P.space.dim(k)
                        for bb, cf in comb.items():
                            if cf:
                                v = [x + cf * y for x, y in zip(v, bars[bb]["vecs"][k])]
                        bars[b]["vecs"][k] = v
                bars[b]["vecs"][j + 1] = img
                survivors.append(b)
        live = survivors
    # canonical form: bars ordered by (birth, creation order)
    order = sorted(range(len(bars)), key=lambda b: (bars[b]["birth"], b))
    counts = Counter()
    pieces = []
    for b in order:
        a, z = bars[b]["birth"], bars[b]["death"]
        counts[(a, z - a + 1)] += 1
        pieces.append(interval_precomplex(1, z - a + 1, a, algebra=P.algebra))
    canonical = direct_sum(*pieces, name="barcode") if pieces else P
    blocks = {}
    for j in range(lo, hi + 1):
        cols = [bars[b]["vecs"][j] for b in order if bars[b]["birth"] <= j <= bars[b]["death"]]
        if cols:
            blocks[j] = Matrix.from_columns(cols, F, rows=P.space.dim(j))
    W = GradedMap(canonical.space, P.space, 0, blocks, F)
    return BarcodeDecomposition(Barcode(counts), canonical, ModuleMap(canonical, P, W))


def _dpow_rank(P: CdgModule, a: int, n: int) -> int:
    """Rank of d^n starting at degree a (d^0 is the identity of P^a)."""
    F = P.field
    dim = P.space.dim(a)
    if dim == 0:
        return 0
    M = Matrix.identity(dim, F)
    for k in range(n):
        M = P.d.block(a + k) @ M
        if M.is_zero():
            return 0
    return rank(M)


def rank_formula_multiplicity(P: CdgModule, a: int, n: int) -> int:
    """mult(a, n) from ranks of powers of d alone."""
    r = lambda start, k: _dpow_rank(P, start, k)
    return r(a, n - 1) - r(a, n) - r(a - 1, n) + r(a - 1, n + 1)


def rank_formula_barcode(P: CdgModule) -> Barcode:
    rng = P.space.support_range()
    out = Counter()
    if rng is None:
        return Barcode(out)
    lo, hi = rng
    for a in range(lo, hi + 1):
        for n in range(1, hi - a + 2):
            k = rank_formula_multiplicity(P, a, n)
            if k:
                out[(a, n)] = k
    return Barcode(out)


# ---------------------------------------------------------------------------
# Z/2 complexes


@dataclass
class Z2Decomposition:
    strings_even: int
    """Strings k -> k starting in even degree (d0 an isomorphism on them)."""
    strings_odd: int
    bars_even: int
    bars_odd: int
    canonical: CdgModule
    witness: ModuleMap

    @property
    def strings(self) -> int:
        return self.strings_even + self.strings_odd

    def to_json(self) -> dict:
        return {"strings_even": self.strings_even, "strings_odd": self.strings_odd,
                "bars_even": self.bars_even, "bars_odd": self.bars_odd}


def _extend_basis(vectors, n, F, candidates=None):
    chosen = list(vectors)
    cur = rank(Matrix.from_columns(chosen, F, rows=n)) if chosen else 0
    added = []
    pool = candidates if candidates is not None else [
        [F.one if i == k else F.zero for i in range(n)] for k in range(n)]
    for e in pool:
        trial = chosen + [e]
        r = rank(Matrix.from_columns(trial, F, rows=n))
        if r > cur:
            chosen, cur = trial, r
            added.append(e)
    return added


def z2_decompose(M: CdgModule) -> Z2Decomposition:
    """Decompose a Z/2 complex over a field into strings and single bars."""
    A = M.algebra
    if not M.grading.is_z2:
        raise UsageError("z2_decompose needs a Z/2-graded module")
    if A.curvature:
        raise NotDefined("decomposition is implemented for zero curvature only (rho = 0)")
    if A.generators():
        raise UsageError("z2_decompose handles modules over the base field only")
    F = M.field
    d0, d1 = M.d.block(0), M.d.block(1)
    n0, n1 = M.space.dim(0), M.space.dim(1)
    if not (d1 @ d0).is_zero() or not (d0 @ d1).is_zero():
        raise UsageError("not a complex: d1 d0 or d0 d1 is nonzero")

    def pivots_of(D: Matrix):
        from .scalars import column_space_basis
        return column_space_basis(D) if D.rows and D.cols else []

    def unit(k, n):
        return [F.one if i == k else F.zero for i in range(n)]

    xs = [unit(k, n0) for k in pivots_of(d0)]
    ys = [d0.apply(x) for x in xs]
    zs = [unit(k, n1) for k in pivots_of(d1)]
    ws = [d1.apply(z) for z in zs]
    ker0 = kernel_basis(d0) if n0 else []
    ker1 = kernel_basis(d1) if n1 else []
    h0 = _extend_basis(ws, n0, F, ker0) if n0 else []
    h1 = _extend_basis(ys, n1, F, ker1) if n1 else []
    s0, s1 = len(xs), len(zs)
    # canonical ordering: even degree [x's, w's, h0's], odd degree [y's, z's, h1's]
    E = {}
    for k in range(s0):
        E[(k, k)] = F.one
    cd0 = Matrix(n1, n0, F, E)
    E = {}
    for k in range(s1):
        E[(s0 + k, s0 + k)] = F.one
    cd1 = Matrix(n0, n1, F, E)
    canonical = z2_module(A, cd0, cd1, name="z2-normal-form")
    B0 = Matrix.from_columns(xs + ws + h0, F, rows=n0) if n0 else Matrix.zeros(0, 0, F)
    B1 = Matrix.from_columns(ys + zs + h1, F, rows=n1) if n1 else Matrix.zeros(0, 0, F)
    W = GradedMap(canonical.space, M.space, 0, {0: B0, 1: B1}, F)
    return Z2Decomposition(s0, s1, len(h0), len(h1), canonical, ModuleMap(canonical, M, W))
