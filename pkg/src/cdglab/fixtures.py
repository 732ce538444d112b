"""Ready-made modules, sequences and seeded random generators.

These are the concrete objects the verifier scenarios, the tests and the
demos share.  Every constructor takes a field so the same fixture can be
evaluated over Q and over F_p.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .algebras import (CdgAlgebra, DeformedDg, TableAlgebra, base_field, dual_numbers, initial_poly,
                       initial_trunc, poly_u, truncated_poly_table, z2_rho)
from .graded import GradedMap, GradedSpace, Z
from .modules import (CdgModule, ModuleMap, ShortExactSeq, Splitting, cone_of_map, direct_sum,
                      eps_block, extend_by_zero_eps, interval_precomplex, module_from_blocks,
                      precomplex_from_map, shift_module, splitting_cone, z2_module)
from .scalars import QQ, FieldSpec, Matrix, inverse, is_invertible


# ---------------------------------------------------------------------------
# algebra catalogue


def axiom_families(F: FieldSpec = QQ) -> list[CdgAlgebra]:
    """One instance of every closed family, plus a deformed dg algebra."""
    algs = [base_field(F), initial_poly(F)]
    algs += [initial_trunc(n, F) for n in (2, 3, 4)]
    algs.append(dual_numbers(F))
    algs += [poly_u("k", "0", F), poly_u("k", "1", F), poly_u("k[eps]", "eps", F)]
    algs += [z2_rho("k", "0", F), z2_rho("k", "1", F), z2_rho("k[eps]", "0", F), z2_rho("k[eps]", "eps", F)]
    algs.append(deformed_u(3, F))
    return algs


def deformed_u(m: int = 3, F: FieldSpec = QQ) -> DeformedDg:
    """k[u]/u^m deformed by the curvature cocycle u (so c = u·ε)."""
    return DeformedDg(truncated_poly_table(m, field=F), phi0={"u": 1})


# ---------------------------------------------------------------------------
# precomplexes


def interval_ses(F: FieldSpec = QQ) -> ShortExactSeq:
    """0 -> X2[-1] -> X3 + X1[-1] -> X2 -> 0 over k[c].

    X2[-1] is realized as the interval in degrees 1..2 with identity
    differential (isomorphic to the sign-twisted shift), so that the maps
    are the unsigned ones: i = (1, 1)^t then 1, and p = 1 then (1, -1).
    """
    A = initial_poly(F)
    sub = interval_precomplex(1, 2, 1, algebra=A)
    mid = direct_sum(interval_precomplex(1, 3, algebra=A), interval_precomplex(1, 1, 1, algebra=A))
    quo = interval_precomplex(1, 2, algebra=A)
    i = GradedMap(sub.space, mid.space, 0, {1: Matrix.from_rows([[1], [1]], F), 2: Matrix.from_rows([[1]], F)}, F)
    p = GradedMap(mid.space, quo.space, 0, {0: Matrix.from_rows([[1]], F), 1: Matrix.from_rows([[1, -1]], F)}, F)
    return ShortExactSeq(ModuleMap(sub, mid, i), ModuleMap(mid, quo, p))


def random_invertible(rng: random.Random, n: int, F: FieldSpec, spread: int = 3) -> Matrix:
    while True:
        M = Matrix.from_rows([[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)], F) \
            if n else Matrix.zeros(0, 0, F)
        if is_invertible(M):
            return M


def conjugate(M: CdgModule, rng: random.Random) -> CdgModule:
    """Transport M along random degreewise base changes."""
    F = M.field
    G = {d: random_invertible(rng, M.space.dim(d), F) for d in M.space.degrees()}
    Gi = {d: inverse(g) for d, g in G.items()}

    def move(f: GradedMap) -> GradedMap:
        blocks = {}
        for d, b in f.blocks().items():
            t = M.grading.norm(d + f.shift)
            blocks[d] = G[t] @ b @ Gi[d]
        return GradedMap(f.source, f.target, f.shift, blocks, F)

    acts = {g: move(a) for g, a in M.actions.items()}
    return CdgModule(M.algebra, M.space, move(M.d), acts, M.interior, M.name + "'")


def random_precomplex(rng: random.Random, trunc: int | None = None, F: FieldSpec = QQ,
                      max_total: int = 8) -> CdgModule:
    """Seeded precomplex of total dimension at most ``max_total``.

    Over k[c] the differential is an arbitrary random matrix per degree.
    Over k[c]/c^n the module is a random sum of intervals of length at most
    2n (so that c^n = d^(2n) vanishes), hidden by a random base change.
    """
    if trunc is None:
        A = initial_poly(F)
        total = rng.randint(1, max_total)
        ndeg = rng.randint(1, min(4, total))
        cuts = sorted(rng.sample(range(1, total), ndeg - 1)) if ndeg > 1 else []
        sizes = [b - a for a, b in zip([0] + cuts, cuts + [total])]
        start = rng.randint(-2, 2)
        dims = {start + j: s for j, s in enumerate(sizes)}
        sp = GradedSpace(Z, dims)
        blocks = {}
        for j in range(start, start + ndeg - 1):
            blocks[j] = Matrix.from_rows([[rng.choice([0, 0, 1, -1, 2]) for _ in range(dims[j])]
                                          for _ in range(dims[j + 1])], F)
        return precomplex_from_map(A, GradedMap(sp, sp, 1, blocks, F), "P")
    A = initial_trunc(trunc, F)
    pieces, used = [], 0
    while used < max_total:
        n = rng.randint(1, min(2 * trunc, max_total - used))
        pieces.append(interval_precomplex(1, n, rng.randint(-2, 2), algebra=A))
        used += n
        if rng.random() < 0.3:
            break
    return conjugate(direct_sum(*pieces, name="P"), rng)


# ---------------------------------------------------------------------------
# Z/2 data


def random_z2_complex(rng: random.Random, F: FieldSpec = QQ, max_dim: int = 6) -> CdgModule:
    """A random Z/2 complex over k: a random normal form under random base changes."""
    A = z2_rho("k", "0", F)
    while True:
        se, so = rng.randint(0, 3), rng.randint(0, 3)
        he, ho = rng.randint(0, 3), rng.randint(0, 3)
        n0, n1 = se + so + he, se + so + ho
        if 0 < max(n0, n1) and n0 <= max_dim and n1 <= max_dim:
            break
    d0 = {(k, k): 1 for k in range(se)}
    d1 = {(se + k, se + k): 1 for k in range(so)}
    M = z2_module(A, Matrix(n1, n0, F, d0), Matrix(n0, n1, F, d1), name="Z2")
    return conjugate(M, rng)


@dataclass
class DeformationSequence:
    """The three-row sequence over Z2[k[ε], ε] and the cone of its first map."""

    sub: CdgModule
    middle: CdgModule
    quotient: CdgModule
    phi: ModuleMap
    p: ModuleMap
    cone: CdgModule
    target: CdgModule
    witness: ModuleMap
    """Strict map cone(φ) -> sub[1] + middle, built by column operations."""


def deformation_sequence(F: FieldSpec = QQ) -> DeformationSequence:
    A = z2_rho("k[eps]", "eps", F)
    sub = z2_module(A, Matrix.zeros(1, 0, F), Matrix.zeros(0, 1, F), {"eps": ([], [[0]])}, name="M'")
    mid = z2_module(A, [[0], [1]], [[1, 0]], {"eps": ([[0]], eps_block(1, F))}, name="M")
    quo = z2_module(A, [[0]], [[1]], {"eps": ([[0]], [[0]])}, name="M''")
    phi = ModuleMap(sub, mid, GradedMap(sub.space, mid.space, 0, {1: Matrix.from_rows([[0], [1]], F)}, F))
    p = ModuleMap(mid, quo, GradedMap(mid.space, quo.space, 0,
                                      {0: Matrix.from_rows([[1]], F), 1: Matrix.from_rows([[1, 0]], F)}, F))
    cone = cone_of_map(phi).module
    target = direct_sum(shift_module(sub, 1), mid, name="M'[1] + M")
    w = GradedMap(cone.space, target.space, 0,
                  {0: Matrix.from_rows([[0, 1], [1, 1]], F), 1: Matrix.identity(2, F)}, F)
    return DeformationSequence(sub, mid, quo, phi, p, cone, target, ModuleMap(cone, target, w))


def periodic_eps_module(F: FieldSpec = QQ) -> CdgModule:
    """(k[ε], k[ε], ε, ε) over Z2[k[ε], 0]: graded free but not contractible."""
    A = z2_rho("k[eps]", "0", F)
    E = eps_block(1, F)
    return z2_module(A, E, E, {"eps": (E, E)}, name="k[eps]~")


@dataclass
class SplittingPair:
    module: CdgModule
    splitting: Splitting
    m: list
    n: list
    j: int


def periodic_splitting_pair(F: FieldSpec = QQ) -> SplittingPair:
    """The 2-periodic k[ε] over Z2[k[ε], 0] against the splitting (0, u), pair (1, ε)."""
    A = z2_rho("k[eps]", "0", F)
    E = eps_block(1, F)
    N = z2_module(A, E, E, {"eps": (E, E)}, name="k[eps]~")
    return SplittingPair(N, Splitting(A, {}, "u", 1), [1, 0], [0, 1], 1)


def splitting_cone_fixtures(F: FieldSpec = QQ) -> dict[str, CdgModule]:
    """MF(1, 1), MF(ε, 1) and k_{0,0} = k + k[-1]."""
    A1 = z2_rho("k", "1", F)
    Ae = z2_rho("k[eps]", "eps", F)
    k = base_field(F)
    return {
        "MF(1,1)": splitting_cone(Splitting(A1, "1", "u", 1), "Z2"),
        "MF(eps,1)": splitting_cone(Splitting(Ae, "eps", "u", 1), "Z2"),
        "k_00": splitting_cone(Splitting(k, {}, {}, -1)),
    }


# ---------------------------------------------------------------------------
# deformations


def random_dg_module(rng: random.Random, B: TableAlgebra, max_pieces: int = 3) -> CdgModule:
    """Random dg module over k[u]/u^m: sums of (two-term complex) ⊗ k[u]/u^a, base-changed."""
    F = B.field
    m = len(B.all_labels())
    var = next(l for l in B.all_labels() if B.degree(l) and "^" not in l)
    step = B.degree(var)
    pieces = []
    for _ in range(rng.randint(1, max_pieces)):
        a = rng.randint(1, m)
        start = rng.randint(-2, 2)
        length = rng.choice([1, 1, 2])
        dims, dblocks, ublocks = {}, {}, {}
        # basis in degree start + t + step*j: (t, j) for t < length, j < a
        cells = {}
        for t in range(length):
            for j in range(a):
                deg = start + t + step * j
                cells.setdefault(deg, []).append((t, j))
        dims = {deg: len(v) for deg, v in cells.items()}

        def at(cell):
            t, j = cell
            deg = start + t + step * j
            return deg, cells[deg].index(cell)

        for deg, cl in cells.items():
            for c in cl:
                t, j = c
                if t == 0 and length == 2:
                    tdeg, r = at((1, j))
                    dblocks.setdefault(deg, {})[(r, cells[deg].index(c))] = 1
                if j + 1 < a:
                    tdeg, r = at((t, j + 1))
                    ublocks.setdefault(deg, {})[(r, cells[deg].index(c))] = 1
        sp = GradedSpace(Z, dims)
        d = GradedMap(sp, sp, 1, {deg: Matrix(sp.dim(deg + 1), sp.dim(deg), F, e) for deg, e in dblocks.items()}, F)
        U = GradedMap(sp, sp, step, {deg: Matrix(sp.dim(deg + step), sp.dim(deg), F, e)
                                     for deg, e in ublocks.items()}, F)
        acts = {}
        P = U
        for l in sorted((l for l in B.all_labels() if l != B.unit), key=B.degree):
            acts[l] = P
            P = U @ P
        pieces.append(CdgModule(B, sp, d, acts, None, f"N{len(pieces)}"))
    return conjugate(direct_sum(*pieces, name="N"), rng)


@dataclass
class DeformationHomFixture:
    algebra: DeformedDg
    M: CdgModule
    """A module over the deformation built from cones of the splitting (ε, u)."""
    N: CdgModule
    """A dg module over the undeformed algebra."""


def deformation_hom_fixture(rng: random.Random, F: FieldSpec = QQ) -> DeformationHomFixture:
    m = rng.randint(2, 3)
    D = deformed_u(m, F)
    cone = splitting_cone(Splitting(D, "eps", "u", 1))
    parts = [shift_module(cone, rng.randint(-2, 2)) for _ in range(rng.randint(1, 2))]
    M = direct_sum(*parts, name="M") if len(parts) > 1 else parts[0]
    N = random_dg_module(rng, D.base)
    return DeformationHomFixture(D, M, N)


def extended_target(fx: DeformationHomFixture):
    """N regarded over the deformation (ε acting by zero)."""
    return extend_by_zero_eps(fx.N, fx.algebra)
