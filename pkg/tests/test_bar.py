import pytest

from cdglab.algebras import base_field, dual_numbers, initial_poly, initial_trunc, poly_u
from cdglab.bar import (AinfHomotopyComponents, BarWord, ainf_contraction_check, bar_contraction_check, build_bar,
                        comodule_endomorphism, conventions_passing, filtration_decay_check, lemma_h2,
                        module_identity_check, nilpotent_inverse)
from cdglab.errors import PreconditionViolation, UsageError
from cdglab.modules import interval_precomplex
from cdglab.scalars import Matrix

CURVED = [None, 2, 3]


def _alg(trunc, field=None):
    from cdglab.scalars import QQ
    F = field or QQ
    return initial_poly(F) if trunc is None else initial_trunc(trunc, F)


def _k(A):
    return interval_precomplex(1, 1, algebra=A)


@pytest.mark.parametrize("trunc", CURVED)
def test_interior_square_vanishes(trunc, field):
    A = _alg(trunc, field)
    B = build_bar(A, _k(A), 4)
    assert B.d_squared_interior().is_zero()
    assert B.interior()


def test_square_vanishes_with_a_nontrivial_module():
    A = initial_poly()
    for n in (2, 3):
        B = build_bar(A, interval_precomplex(1, n, algebra=A), 3)
        assert B.d_squared_interior().is_zero()
    E = poly_u("k[eps]", "eps")
    assert build_bar(E, _zero_module_over(E), 3).d_squared_interior().is_zero()


def _zero_module_over(A):
    from cdglab.modules import module_from_blocks
    return module_from_blocks(A, {0: 1}, {}, {})


def test_over_the_base_field_everything_vanishes():
    k = base_field()
    B = build_bar(k, _k(k), 3)
    assert len(B.words) == 1 and B.D.is_zero()


def test_first_differential_by_hand():
    A = initial_poly()
    B = build_bar(A, _k(A), 4)
    m = (0, 0)
    w = BarWord(("c",), m)
    out = B.apply(w)
    # c acts by zero on k and d_A = 0, so only insertions of the curvature remain
    assert all(word.length == 2 for word in out)


def test_module_identities_hold():
    for trunc in CURVED:
        A = _alg(trunc)
        for n in (1, 2, 3):
            assert module_identity_check(A, interval_precomplex(1, n, algebra=A), 3).ok


@pytest.mark.parametrize("trunc", CURVED)
def test_contraction_sign_and_convention(trunc):
    A = _alg(trunc)
    k = _k(A)
    # the displayed h_2(c ⊗ 1) = 1 fails in arity 1 under both conventions
    assert conventions_passing(A, k, lemma_h2(A, 1), 6) == []
    rep = ainf_contraction_check(A, k, lemma_h2(A, 1), 6, "shifted")
    assert rep.first_failure().p == 1
    # the opposite sign passes under exactly one convention
    assert conventions_passing(A, k, lemma_h2(A, -1), 6) == ["shifted"]


def test_zero_homotopy_is_no_contraction():
    k = base_field()
    assert "shifted" not in conventions_passing(k, _k(k), AinfHomotopyComponents({}), 4)


def test_unknown_convention():
    A = initial_poly()
    with pytest.raises(UsageError):
        ainf_contraction_check(A, _k(A), lemma_h2(A), 2, "lax")


@pytest.mark.parametrize("trunc", CURVED)
def test_bar_level_contraction(trunc):
    A = _alg(trunc)
    B = build_bar(A, _k(A), 4)
    assert bar_contraction_check(B, lambda lets, m: {m: 1} if lets == ("c",) else {}) == []
    assert bar_contraction_check(B, lambda lets, m: {m: -1} if lets == ("c",) else {}) != []


def test_inverting_lemma(field):
    A = initial_poly(field)
    B = build_bar(A, _k(A), 4)
    Psi = comodule_endomorphism(B, lambda lets, m: {m: 1} if lets == ("c",) else {})
    assert filtration_decay_check(B, Psi).ok
    inv = nilpotent_inverse(B, Psi)
    assert inv.verified
    Z = comodule_endomorphism(B, lambda lets, m: {})
    zi = nilpotent_inverse(B, Z)
    assert zi.verified and zi.inverse == Matrix.identity(len(B.words), field)


def test_inverting_lemma_rejects_length_zero_component():
    A = initial_poly()
    B = build_bar(A, _k(A), 3)
    with pytest.raises(PreconditionViolation):
        comodule_endomorphism(B, lambda lets, m: {m: 1})


def test_non_nilpotent_map_fails_decay():
    A = initial_poly()
    B = build_bar(A, _k(A), 3)
    I = Matrix.identity(len(B.words), A.field)
    assert not filtration_decay_check(B, I).ok


def test_filtration_is_increasing():
    A = initial_trunc(3)
    B = build_bar(A, _k(A), 4)
    levels = [set(B.filtration(n)) for n in range(5)]
    assert all(a <= b for a, b in zip(levels, levels[1:]))
    assert levels[-1] == set(range(len(B.words)))
