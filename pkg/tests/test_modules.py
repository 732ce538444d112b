import random

import pytest
from hypothesis import given

from cdglab.algebras import base_field, initial_poly, initial_trunc, poly_u, quotient_morphism, z2_rho
from cdglab.errors import PreconditionViolation, UsageError
from cdglab.fixtures import (deformation_sequence, interval_ses, periodic_eps_module, random_precomplex,
                             splitting_cone_fixtures)
from cdglab.graded import GradedMap
from cdglab.modules import (CdgModule, ModuleMap, ShortExactSeq, Splitting, check_module_axioms, cone_of_map, direct_sum,
                            extend_by_zero_eps, fold_z, free_module, graded_free_rank, interval_precomplex,
                            precomplex, reduce_mod_epsilon, restrict_scalars, shift_module, splitting_cone,
                            totalize_ses, unfold_z2, verify_ses, z2_module)
from cdglab.scalars import QQ, Matrix
from cdglab.serialize import dumps, loads

from strategies import seeds


def test_interval_precomplex_shape():
    X = interval_precomplex(2, 3, shift=-1)
    assert X.space.dims == {-1: 2, 0: 2, 1: 2}
    assert X.d.block(-1) == Matrix.identity(2, QQ)
    assert X.d.block(1).is_zero()
    # c acts by d^2, which is nonzero only from -1 to 1
    assert X.act("c").block(-1) == Matrix.identity(2, QQ)
    assert check_module_axioms(X).ok


def test_precomplex_over_truncation_needs_nilpotent_d():
    X = interval_precomplex(1, 5, algebra=initial_trunc(2))
    rep = check_module_axioms(X)
    assert not rep.ok  # c^2 = d^4 is nonzero on X_5
    assert check_module_axioms(interval_precomplex(1, 4, algebra=initial_trunc(2))).ok


def test_wrong_action_is_caught():
    A = initial_poly()
    P = precomplex({0: 1, 1: 1}, {0: [[1]]})
    M = CdgModule(A, P.space, P.d, {"c": GradedMap.zero(P.space, P.space, 2)})
    assert check_module_axioms(M).ok  # d^2 = 0 here, so c = 0 is right
    X = interval_precomplex(1, 3)
    M = CdgModule(X.algebra, X.space, X.d, {"c": GradedMap.zero(X.space, X.space, 2)})
    assert "curvature law" in check_module_axioms(M).failed_identities()


def test_missing_generator_is_a_usage_error():
    A = poly_u("k", "1")
    sp = interval_precomplex(1, 1).space
    with pytest.raises(UsageError):
        CdgModule(A, sp, GradedMap.zero(sp, sp, 1), {})


@given(seeds)
def test_random_precomplexes_are_modules(seed):
    rng = random.Random(seed)
    for trunc in (None, 2, 3):
        P = random_precomplex(rng, trunc)
        assert check_module_axioms(P).ok


@given(seeds)
def test_shift_and_sum_preserve_axioms(seed):
    rng = random.Random(seed)
    P = random_precomplex(rng, None)
    Q = random_precomplex(rng, None)
    n = rng.randint(-3, 3)
    assert check_module_axioms(shift_module(P, n)).ok
    assert check_module_axioms(direct_sum(P, shift_module(Q, n))).ok
    # shifting twice is shifting once
    assert shift_module(shift_module(P, n), -n).d == P.d


def test_shift_signs_on_odd_generators():
    # u has even degree, so its action keeps its sign; d flips under odd shifts
    M = splitting_cone_fixtures()["MF(1,1)"]
    S = shift_module(M, 1)
    assert S.d.block(0) == M.d.block(1).scale(-1)
    assert check_module_axioms(S).ok


def test_cone_of_identity_is_contractible_shape():
    X = interval_precomplex(1, 2)
    C = cone_of_map(ModuleMap(X, X, X.identity())).module
    assert check_module_axioms(C).ok
    assert C.space.total() == 4


def test_cone_requires_strict_map():
    X = interval_precomplex(1, 2)
    f = GradedMap(X.space, X.space, 0, {0: Matrix.from_rows([[1]], QQ)}, QQ)
    with pytest.raises(PreconditionViolation):
        cone_of_map(ModuleMap(X, X, f))


def test_interval_sequence(field):
    s = interval_ses(field)
    rep = verify_ses(s)
    assert rep.ok and rep.graded_k_split
    T = totalize_ses(s)
    assert check_module_axioms(T).ok
    assert T.space.dims == {0: 2, 1: 4, 2: 2}


def test_non_exact_sequence_is_reported():
    s = interval_ses()
    bad = ShortExactSeq(s.i, ModuleMap(s.p.source, s.p.target, s.p.map.scale(0)))
    rep = verify_ses(bad)
    assert not rep.exact
    with pytest.raises(PreconditionViolation):
        totalize_ses(bad)


def test_deformation_sequence_rows(field):
    P = deformation_sequence(field)
    for X in (P.sub, P.middle, P.quotient, P.cone, P.target):
        assert check_module_axioms(X).ok, X.name
    assert verify_ses(ShortExactSeq(P.phi, P.p)).ok
    red = reduce_mod_epsilon(P.middle)
    assert red.d.block(0).to_rows() == [[0]] and red.d.block(1).to_rows() == [[1]]
    assert red.algebra.descriptor() == {"family": "z2_rho", "ring": "k", "rho": "0"}


def test_graded_free_rank():
    assert graded_free_rank(periodic_eps_module()) == {0: 1, 1: 1}
    assert graded_free_rank(deformation_sequence().middle) is None


def test_splitting_validation():
    A = z2_rho("k", "1")
    with pytest.raises(PreconditionViolation):
        splitting_cone(Splitting(A, "1", {}, 1), "Z2")  # ψφ = 0 ≠ 1
    with pytest.raises(UsageError):
        Splitting(initial_poly(), "c", "1", 0)  # φ must have degree 1


def test_splitting_cone_degrees():
    C = splitting_cone_fixtures()
    assert C["k_00"].space.dims == {0: 1, 1: 1}
    assert C["MF(1,1)"].d.block(0).to_rows() == [[1]]  # d0 = 1, d1 = ρ = 1
    assert C["MF(eps,1)"].space.dims == {0: 2, 1: 2}


def test_windowed_free_module_over_infinite_algebra():
    A = poly_u("k", "1")
    M = splitting_cone(Splitting(A, "1", "u", 1), ("window", -6, 6))
    assert M.windowed
    assert check_module_axioms(M).ok
    assert set(M.interior_degrees()) <= set(range(-4, 5))


def test_free_module_without_splitting_is_not_a_module():
    # with d = 0 the curvature law d² = c fails: c acts nontrivially
    A = initial_trunc(3)
    F = free_module(A, [("g", 0)], {})
    assert F.space.dims == {0: 1, 2: 1, 4: 1}
    assert check_module_axioms(F).failed_identities() == {"curvature law"}
    k = base_field()
    assert check_module_axioms(free_module(k, [("g", 0)], {})).ok


def test_restrict_scalars_along_quotient():
    X = interval_precomplex(1, 3, algebra=initial_trunc(2))
    R = restrict_scalars(quotient_morphism(None, 2), X)
    assert R.algebra.descriptor() == {"family": "initial_poly"}
    assert check_module_axioms(R).ok


def test_extend_by_zero_eps_and_back():
    A = z2_rho("k[eps]", "0")
    Q, _ = A.eps_quotient()
    N = z2_module(Q, [[1]], [[0]])
    E = extend_by_zero_eps(N, A)
    assert check_module_axioms(E).ok
    assert reduce_mod_epsilon(E).d == N.d


def test_unfold_and_fold(field):
    for M in (periodic_eps_module(field), deformation_sequence(field).middle):
        U = unfold_z2(M, -3, 4)
        assert check_module_axioms(U).ok
        back = fold_z(U, 0, M.algebra)
        assert back.d == M.d
        assert back.act("eps") == M.act("eps")


@given(seeds)
def test_serialization_round_trip(seed):
    rng = random.Random(seed)
    P = random_precomplex(rng, rng.choice([None, 2]))
    assert dumps(loads(dumps(P))) == dumps(P)
    assert loads(dumps(P)).d == P.d
