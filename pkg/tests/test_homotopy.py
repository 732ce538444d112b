import random

import pytest
from hypothesis import given, strategies as st

from cdglab.algebras import initial_poly, initial_trunc, z2_rho
from cdglab.errors import UsageError
from cdglab.fixtures import (deformation_sequence, periodic_eps_module, periodic_splitting_pair,
                             random_precomplex, splitting_cone_fixtures)
from cdglab.graded import GradedMap
from cdglab.homotopy import (HomComplex, acyclic_wrt, contraction_search, hom_cohomology, hom_cohomology_dims,
                             homotopy_forget_agreement, homotopy_search, is_contractible, is_homotopy,
                             null_homotopy, splitting_boundary_test, splitting_cocycle_test,
                             splitting_cohomology, strict_iso_check)
from cdglab.modules import ModuleMap, Splitting, cone_of_map, direct_sum, interval_precomplex, shift_module, z2_module
from cdglab.scalars import QQ, Matrix

from strategies import seeds


@pytest.mark.parametrize("m", [1, 2, 3])
def test_intervals_contractible_iff_even(m, field):
    A = initial_poly(field)
    for n in range(1, 11):
        X = interval_precomplex(m, n, algebra=A)
        S = contraction_search(X)
        assert S.found == (n % 2 == 0)
        if S.found:
            assert is_homotopy(X, X, S.homotopy, X.identity())
        else:
            y = S.certificate
            assert y is not None and any(y)


def test_x2_homotopy_by_hand():
    X = interval_precomplex(1, 2)
    h = is_contractible(X)
    # the only choice: h sends degree 1 back to degree 0 by 1
    assert h.block(1).to_rows() == [[1]]


def test_certificate_is_an_inconsistency_proof():
    X = interval_precomplex(1, 1)
    S = contraction_search(X)
    assert not S.found and S.certificate is not None and S.rank < S.equations


def test_hom_complex_squares_to_zero():
    rng = random.Random(3)
    for _ in range(5):
        M, N = random_precomplex(rng), random_precomplex(rng)
        H = HomComplex(M, N)
        for i in H.shift_range():
            assert H.d_squared_zero(i)


def test_hom_dimensions_by_hand():
    X1, X2 = interval_precomplex(1, 1), interval_precomplex(1, 2)
    assert {i: d for i, d in hom_cohomology_dims(X1, X1).items() if d} == {0: 1}
    assert not any(hom_cohomology_dims(X1, X2).values())
    assert not any(hom_cohomology_dims(X2, X1).values())


@given(seeds)
def test_contractible_objects_have_no_cohomology(seed):
    rng = random.Random(seed)
    C = shift_module(interval_precomplex(rng.randint(1, 2), 2 * rng.randint(1, 2)), rng.randint(-2, 2))
    X = random_precomplex(rng)
    assert not any(hom_cohomology_dims(C, X).values())
    assert not any(hom_cohomology_dims(X, C).values())


@given(seeds)
def test_sum_contractible_iff_summands(seed):
    rng = random.Random(seed)
    M = random_precomplex(rng, max_total=5)
    N = random_precomplex(rng, max_total=5)
    both = is_contractible(direct_sum(M, N)) is not None
    assert both == (is_contractible(M) is not None and is_contractible(N) is not None)


@given(seeds)
def test_forgetting_the_action_does_not_change_contractibility(seed):
    rng = random.Random(seed)
    P = random_precomplex(rng, rng.choice([None, 2]))
    assert homotopy_forget_agreement(P).agree


@given(seeds)
def test_cone_of_strict_iso_is_contractible(seed):
    rng = random.Random(seed)
    P = random_precomplex(rng, rng.choice([None, 2]), max_total=5)
    assert is_contractible(cone_of_map(ModuleMap(P, P, P.identity())).module) is not None


def test_cone_of_the_deformation_witness_is_contractible():
    assert is_contractible(cone_of_map(deformation_sequence().witness).module) is not None


def test_null_homotopy_of_zero_and_identity():
    X = interval_precomplex(1, 3)
    assert null_homotopy(ModuleMap(X, X, GradedMap.zero(X.space, X.space))) is not None
    assert null_homotopy(ModuleMap(X, X, X.identity())) is None


def test_homotopy_search_rejects_wrong_shape():
    X = interval_precomplex(1, 2)
    with pytest.raises(UsageError):
        homotopy_search(X, X, GradedMap.zero(X.space, X.space, 1))


def test_graded_free_module_is_not_contractible(field):
    M = periodic_eps_module(field)
    S = contraction_search(M)
    assert not S.found
    # as a bare complex of vector spaces it is acyclic, hence k-contractible:
    # only ε-linearity obstructs the homotopy
    h = contraction_search(M, respect_actions=False).homotopy
    assert h is not None and is_homotopy(M, M, h, M.identity(), respect_actions=False)


def test_splitting_cones_contractible(field):
    C = splitting_cone_fixtures(field)
    assert is_contractible(C["MF(1,1)"]) is not None
    assert is_contractible(C["MF(eps,1)"]) is not None
    assert is_contractible(C["k_00"]) is None


def test_deformation_quotient_contractible():
    P = deformation_sequence()
    assert is_contractible(P.quotient) is not None
    assert is_contractible(P.middle) is None


def test_splitting_pair_tests_trivial_pair():
    S = periodic_splitting_pair()
    assert splitting_cocycle_test([0, 0], [0, 0], S.module, S.splitting, S.j)
    h, k = splitting_boundary_test([0, 0], [0, 0], S.module, S.splitting, S.j)
    assert not any(h) and not any(k)


def test_splitting_pair_of_the_periodic_module():
    S = periodic_splitting_pair()
    assert splitting_cocycle_test(S.m, S.n, S.module, S.splitting, S.j)
    bd = splitting_boundary_test(S.m, S.n, S.module, S.splitting, S.j)
    # (h, k) = (0, 1) solves m = d h + ψ k, n = d k + φ h with ψ = 1, φ = 0
    assert bd is not None
    h, k = bd
    assert list(h) == [0, 0] and list(k) == [1, 0]
    with pytest.raises(UsageError):
        splitting_cocycle_test([1], [0, 1], S.module, S.splitting, S.j)


def test_zero_splitting_reduces_to_classical_cohomology():
    A = z2_rho("k", "0")
    M = z2_module(A, [[1]], [[0]])  # k -> k, acyclic
    N = z2_module(A, [[0]], [[0]])  # zero differential
    s = Splitting(A, {}, {}, 1)
    assert not any(splitting_cohomology(M, s).values())
    assert acyclic_wrt([s], M)
    assert not acyclic_wrt([s], N)


@given(seeds)
def test_acyclicity_stable_under_adding_contractibles(seed):
    rng = random.Random(seed)
    G = [interval_precomplex(1, 1, rng.randint(-1, 1))]
    N = random_precomplex(rng, max_total=5)
    C = shift_module(interval_precomplex(1, 2), rng.randint(-2, 2))
    assert acyclic_wrt(G, N) == acyclic_wrt(G, direct_sum(N, C))


def test_strict_iso_check():
    X = interval_precomplex(2, 2)
    assert strict_iso_check(ModuleMap(X, X, X.identity()))
    assert strict_iso_check(deformation_sequence().witness)
    Y = interval_precomplex(1, 2)
    f = GradedMap(X.space, Y.space, 0, {0: Matrix.from_rows([[1, 0]], QQ), 1: Matrix.from_rows([[1, 0]], QQ)}, QQ)
    assert not strict_iso_check(ModuleMap(X, Y, f))


def test_hom_cohomology_representatives_are_cocycles():
    X = interval_precomplex(1, 1)
    H = hom_cohomology(X, X, 0)
    assert H.dim == 1
    Hc = HomComplex(X, X)
    for f in H.representatives:
        assert Hc.apply_d(f).is_zero()
