"""The builtin scenario catalogue.

A scenario builds its fixtures for the requested field, evaluates a list of
expectations and returns them.  Every expectation carries a provenance tag:
``source`` (a claim taken from the theory being checked), ``trivial`` (holds
by construction) or ``derived`` (an independent computation used as an
oracle).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .. import bar as barlab
from ..algebras import base_field, check_cdg_axioms, initial_poly, initial_trunc, laurent_collapse_check
from ..decompose import barcode_decompose, z2_decompose
from ..errors import PreconditionViolation, UsageError
from ..fixtures import (axiom_families, deformation_hom_fixture, deformation_sequence, extended_target,
                        interval_ses, periodic_eps_module, periodic_splitting_pair, random_precomplex,
                        random_z2_complex, splitting_cone_fixtures)
from ..homotopy import (acyclic_wrt, contraction_search, hom_cohomology_dims, homotopy_forget_agreement,
                        is_contractible, is_homotopy, splitting_boundary_test, splitting_cocycle_test,
                        strict_iso_check)
from ..modules import (ShortExactSeq, check_module_axioms, fold_z, graded_free_rank, interval_precomplex,
                       reduce_mod_epsilon, totalize_ses, unfold_z2, verify_ses)
from ..scalars import QQ, FieldSpec, rank

SOURCE, TRIVIAL, DERIVED = "source", "trivial", "derived"


@dataclass
class Context:
    field: FieldSpec = QQ
    window: tuple[int, int] = (-10, 10)
    seed: int = 0
    bar_convention: str = "shifted"

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")


@dataclass
class Expectation:
    claim: str
    provenance: str
    ok: bool
    witness: object = None

    def to_json(self) -> dict:
        out = {"claim": self.claim, "provenance": self.provenance, "ok": bool(self.ok)}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class Scenario:
    name: str
    summary: str
    run: Callable[[Context], list]


REGISTRY: dict[str, Scenario] = {}


def scenario(name: str, summary: str):
    def deco(fn):
        REGISTRY[name] = Scenario(name, summary, fn)
        return fn
    return deco


def _fmt_map(f) -> dict | None:
    return None if f is None else f.to_json()


# ---------------------------------------------------------------------------


@scenario("axioms-sweep", "every algebra family satisfies the cdg axioms on the window")
def _axioms(ctx: Context) -> list:
    out = []
    for A in axiom_families(ctx.field):
        rep = check_cdg_axioms(A, ctx.window)
        out.append(Expectation(f"{A.name} is a cdg algebra", SOURCE, rep.ok,
                               None if rep.ok else rep.to_json()))
    return out


@scenario("interval-sweep", "X_n on k^m is contractible iff n is even (m = 1..3, n = 1..10)")
def _interval(ctx: Context) -> list:
    out = []
    A = initial_poly(ctx.field)
    for m in (1, 2, 3):
        for n in range(1, 11):
            X = interval_precomplex(m, n, algebra=A)
            S = contraction_search(X)
            ok = S.found == (n % 2 == 0)
            if S.found:
                ok = ok and is_homotopy(X, X, S.homotopy, X.identity())
            w = None
            if not S.found:
                w = {"inconsistent_system": S.to_json(ctx.field)}
            out.append(Expectation(f"X_{n} on k^{m}: contractible = {n % 2 == 0}", SOURCE, ok, w))
    return out


@scenario("homotopy-forget", "A-linear and k-linear contractibility agree on random precomplexes")
def _forget(ctx: Context) -> list:
    rng = ctx.rng("forget")
    out = []
    for k in range(30):
        trunc = None if k % 2 == 0 else 2
        P = random_precomplex(rng, trunc, ctx.field)
        a = homotopy_forget_agreement(P)
        out.append(Expectation(f"fixture {k} over {P.algebra.name}: verdicts agree", SOURCE, a.agree,
                               {"with_actions": a.with_actions, "without_actions": a.without_actions,
                                "dims": {str(d): n for d, n in P.space.dims.items()}}))
    return out


@scenario("ses-totalization", "0 -> X2[-1] -> X3 + X1[-1] -> X2 -> 0 and its totalization")
def _ses(ctx: Context) -> list:
    s = interval_ses(ctx.field)
    rep = verify_ses(s)
    T = totalize_ses(s) if rep.ok else None
    ax = check_module_axioms(T) if T is not None else None
    bars = dict(barcode_decompose(T).barcode.bars) if T is not None else {}
    A = s.i.source.algebra
    return [
        Expectation("the displayed sequence is strict and exact", SOURCE, rep.ok, rep.to_json()),
        Expectation("the totalization is a cdg module", DERIVED, bool(ax and ax.ok),
                    None if ax is None else ax.to_json()),
        Expectation("the totalization splits into the intervals of its three terms", DERIVED,
                    bars == {(0, 3): 1, (1, 1): 1, (0, 2): 1, (1, 2): 1}, {"barcode": [list(b) for b in sorted(bars)]}),
        Expectation("X2 is contractible while X1 and X3 are not", SOURCE,
                    [is_contractible(interval_precomplex(1, n, algebra=A)) is not None for n in (1, 2, 3)]
                    == [False, True, False]),
    ]


@scenario("deformation-cone", "the ε-deformed three-row sequence, cone(φ) and its splitting")
def _cone(ctx: Context) -> list:
    F = ctx.field
    P = deformation_sequence(F)
    h = is_contractible(P.quotient)
    blocks = {"even_to_odd": P.cone.d.block(0).to_rows(), "odd_to_even": P.cone.d.block(1).to_rows()}
    want = {"even_to_odd": [[F(0), F(0)], [F(1), F(1)]], "odd_to_even": [[F(1), F(0)], [F(0), F(0)]]}
    red = reduce_mod_epsilon(P.middle)
    fmt = lambda rows: [[F.format(x) for x in r] for r in rows]
    return [
        Expectation("all rows are modules", TRIVIAL,
                    all(check_module_axioms(X).ok for X in (P.sub, P.middle, P.quotient))),
        Expectation("the sequence is strict and exact", SOURCE, verify_ses(ShortExactSeq(P.phi, P.p)).ok),
        Expectation("M'' is contractible", SOURCE, h is not None, {"homotopy": _fmt_map(h)}),
        Expectation("cone(φ) has blocks [ε ε] and [1 0]^t", SOURCE, blocks == want,
                    {k: fmt(v) for k, v in blocks.items()}),
        Expectation("cone(φ) is strictly isomorphic to M'[1] + M", DERIVED, strict_iso_check(P.witness),
                    {"witness": P.witness.map.to_json()}),
        Expectation("M modulo ε has differentials (0, 1)", DERIVED,
                    red.d.block(0).to_rows() == [[F(0)]] and red.d.block(1).to_rows() == [[F(1)]]),
    ]


@scenario("z2-decomposition", "random Z/2 complexes split into strings and single bars")
def _z2dec(ctx: Context) -> list:
    rng = ctx.rng("z2")
    out = []
    for k in range(50):
        M = random_z2_complex(rng, ctx.field)
        D = z2_decompose(M)
        r = rank(M.d.block(0)) + rank(M.d.block(1))
        ok = strict_iso_check(D.witness) and D.strings == r
        out.append(Expectation(f"fixture {k}: strings = rank d0 + rank d1, witness is an isomorphism",
                               SOURCE, ok, D.to_json()))
    return out


@scenario("z2-tautology", "Z/2 data agrees with u-periodic data after collapsing degrees")
def _taut(ctx: Context) -> list:
    F = ctx.field
    out = []
    lo, hi = max(ctx.window[0], -6), min(ctx.window[1], 6)
    for ring, rho in (("k", "0"), ("k", "1"), ("k[eps]", "0"), ("k[eps]", "eps")):
        rep = laurent_collapse_check(ring, rho, F, (lo, hi))
        out.append(Expectation(f"structure constants collapse for R = {ring}, rho = {rho}", SOURCE, rep.ok,
                               None if rep.ok else rep.to_json()))
    P = deformation_sequence(F)
    for M in (P.middle, P.quotient, periodic_eps_module(F)):
        U = unfold_z2(M, -4, 5)
        back = fold_z(U, 0, M.algebra)
        same = back.d == M.d and all(back.act(g) == M.act(g) for g in M.algebra.generators())
        out.append(Expectation(f"{M.name} unfolds to a u-periodic module and folds back", SOURCE,
                               check_module_axioms(U).ok and same))
    return out


@scenario("splitting-cones", "cones of splittings: two contractible factorizations and k + k[-1]")
def _cones(ctx: Context) -> list:
    F = ctx.field
    C = splitting_cone_fixtures(F)
    out = []
    for name in ("MF(1,1)", "MF(eps,1)"):
        X = C[name]
        h = is_contractible(X)
        out.append(Expectation(f"{name} is contractible", SOURCE, check_module_axioms(X).ok and h is not None,
                               {"homotopy": _fmt_map(h)}))
    k00 = C["k_00"]
    out.append(Expectation("k_00 is k + k[-1] with zero differential", SOURCE,
                           k00.space.dims == {0: 1, 1: 1} and k00.d.is_zero()))
    X = C["MF(eps,1)"]
    out.append(Expectation("MF(eps,1) is acyclic for itself (it is contractible)", DERIVED,
                           acyclic_wrt([X], X)))
    return out


@scenario("splitting-cocycle", "the pair (1, ε) against the splitting (0, u) on 2-periodic k[ε]")
def _cocycle(ctx: Context) -> list:
    F = ctx.field
    S = periodic_splitting_pair(F)
    coc = splitting_cocycle_test(S.m, S.n, S.module, S.splitting, S.j)
    bd = splitting_boundary_test(S.m, S.n, S.module, S.splitting, S.j)
    w = None if bd is None else {"h": [F.format(x) for x in bd[0]], "k": [F.format(x) for x in bd[1]]}
    return [
        Expectation("(1, ε) is a cocycle", SOURCE, coc),
        Expectation("(1, ε) is not a boundary", SOURCE, bd is None, w),
    ]


@scenario("deformation-hom", "Hom over the deformation equals Hom over the base after reducing mod ε")
def _defhom(ctx: Context) -> list:
    rng = ctx.rng("defhom")
    out = []
    for k in range(10):
        fx = deformation_hom_fixture(rng, ctx.field)
        big = hom_cohomology_dims(fx.M, extended_target(fx))
        small = hom_cohomology_dims(reduce_mod_epsilon(fx.M), fx.N)
        keys = sorted(set(big) | set(small))
        ok = all(big.get(i, 0) == small.get(i, 0) for i in keys)
        out.append(Expectation(f"fixture {k}: dim H^i agree for all i", SOURCE, ok,
                               {"over_deformation": {str(i): big.get(i, 0) for i in keys if big.get(i, 0)},
                                "over_base": {str(i): small.get(i, 0) for i in keys if small.get(i, 0)}}))
    return out


BAR_ALGEBRAS = (None, 2, 3)


def _bar_algebra(trunc, F):
    return initial_poly(F) if trunc is None else initial_trunc(trunc, F)


@scenario("bar-contraction", "k is contracted over k[c] and k[c]/c^n by the single component h_2")
def _bar_contraction(ctx: Context) -> list:
    F = ctx.field
    out = []
    for trunc in BAR_ALGEBRAS:
        A = _bar_algebra(trunc, F)
        k = interval_precomplex(1, 1, algebra=A)
        ident = barlab.module_identity_check(A, k, 4)
        out.append(Expectation(f"{A.name}: module identities hold with m_0 = c", DERIVED, ident.ok,
                               ident.to_json()))
        rep = barlab.ainf_contraction_check(A, k, barlab.lemma_h2(A, 1), 6, ctx.bar_convention)
        f = rep.first_failure()
        out.append(Expectation(f"{A.name}: h_2(c ⊗ 1) = 1 satisfies the contraction identity for p <= 6 "
                               f"under convention {ctx.bar_convention}", SOURCE, rep.ok,
                               None if f is None else {"arity": f.p, "counterexample": f.witness}))
        passing = {s: barlab.conventions_passing(A, k, barlab.lemma_h2(A, s), 6) for s in (1, -1)}
        out.append(Expectation(f"{A.name}: some sign of h_2 passes under exactly one convention", DERIVED,
                               any(len(v) == 1 for v in passing.values()),
                               {"h2=+1": passing[1], "h2=-1": passing[-1]}))
        B = barlab.build_bar(A, k, 4)
        fails = barlab.bar_contraction_check(B, lambda lets, m: {m: 1} if lets == ("c",) else {})
        out.append(Expectation(f"{A.name}: D H + H D = 1 on the truncated bar module", DERIVED, not fails,
                               {"interior": len(B.interior()), "words": len(B.words)}))
    K = base_field(F)
    dg = barlab.conventions_passing(K, interval_precomplex(1, 1, algebra=K), barlab.AinfHomotopyComponents({}), 6)
    out.append(Expectation("over k itself h = 0 is no contraction", TRIVIAL, ctx.bar_convention not in dg,
                           {"conventions_passing": dg}))
    return out


@scenario("bar-inverting", "1 - ψ is inverted by Σ ψ^j when ψ lowers the word length")
def _bar_inverting(ctx: Context) -> list:
    F = ctx.field
    A = initial_poly(F)
    k = interval_precomplex(1, 1, algebra=A)
    B = barlab.build_bar(A, k, 4)
    Psi = barlab.comodule_endomorphism(B, lambda lets, m: {m: 1} if lets == ("c",) else {})
    dec = barlab.filtration_decay_check(B, Psi)
    inv = barlab.nilpotent_inverse(B, Psi)
    zero = barlab.comodule_endomorphism(B, lambda lets, m: {})
    zinv = barlab.nilpotent_inverse(B, zero)
    try:
        barlab.comodule_endomorphism(B, lambda lets, m: {m: 1})
        rejected = False
    except PreconditionViolation:
        rejected = True
    return [
        Expectation("ψ(F_n) ⊆ F_{n-1} and ψ^{n+1}(F_n) = 0", SOURCE, dec.ok, dec.failures or None),
        Expectation("(1 - ψ) Σ ψ^j = 1 on F_{L-1}, L = 4", SOURCE, inv.verified),
        Expectation("ψ = 0 has inverse the identity", TRIVIAL, zinv.verified),
        Expectation("ψ_0 nonzero on length-0 words is rejected", TRIVIAL, rejected),
        Expectation("interior D^2 = 0", DERIVED, B.d_squared_interior().is_zero()),
    ]


@scenario("graded-free-not-contractible", "the 2-periodic k[ε] module is graded free yet not contractible")
def _gp(ctx: Context) -> list:
    M = periodic_eps_module(ctx.field)
    S = contraction_search(M)
    return [
        Expectation("graded free of rank 1 per degree", SOURCE, graded_free_rank(M) == {0: 1, 1: 1}),
        Expectation("no contracting homotopy", SOURCE, not S.found,
                    {"search": S.to_json(ctx.field)}),
    ]


def resolve(names) -> list[Scenario]:
    out = []
    for n in names:
        if n not in REGISTRY:
            raise UsageError(f"unknown scenario {n!r}; known: {', '.join(sorted(REGISTRY))}")
        out.append(REGISTRY[n])
    return out
