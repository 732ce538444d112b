import pytest
from hypothesis import given, strategies as st

from cdglab.algebras import (DeformedDg, StrictMorphism, TableAlgebra, base_field, check_cdg_axioms,
                             check_hochschild_cocycle, check_strict, curvature_nilpotency,
                             hochschild_coboundary_phi1, hochschild_coboundary_phi2, initial_morphism,
                             initial_poly, initial_trunc, laurent_collapse_check, poly_u, quotient_morphism,
                             truncated_poly_table, z2_rho)
from cdglab.errors import NotDefined, UsageError
from cdglab.fixtures import axiom_families
from cdglab.graded import Z2
from cdglab.scalars import QQ


def test_every_family_satisfies_the_axioms(field):
    for A in axiom_families(field):
        rep = check_cdg_axioms(A, (-10, 10))
        assert rep.ok, rep.to_json()


def test_initial_poly_structure():
    A = initial_poly()
    assert A.basis(4) == ["c^2"]
    assert A.basis(3) == []
    assert A.mul("c", "c^2") == {"c^3": 1}
    assert A.curvature == {"c": 1}
    assert A.degree("c^5") == 10


def test_truncation_kills_high_powers():
    A = initial_trunc(3)
    assert A.mul("c", "c") == {"c^2": 1}
    assert A.mul("c", "c^2") == {}
    assert A.basis(6) == []
    assert curvature_nilpotency(A) == 3
    assert curvature_nilpotency(initial_poly()) is None


def test_poly_u_curvatures():
    assert poly_u("k", "0").curvature == {}
    assert poly_u("k", "1").curvature == {"u": 1}
    assert poly_u("k[eps]", "eps").curvature == {"eps*u": 1}
    with pytest.raises(UsageError):
        poly_u("k", "eps")


def test_z2_rho_aliases_u_to_the_unit():
    A = z2_rho("k[eps]", "eps")
    assert A.grading == Z2
    assert A.canonical("u") == A.unit
    assert A.curvature == {"eps": 1}
    assert A.mul("eps", "eps") == {}


def test_broken_table_is_caught():
    # d(x) = y with y of the wrong degree, and a non-associative product
    A = TableAlgebra({"1": 0, "x": 1, "y": 1, "z": 2}, {("x", "y"): "z"}, {"x": "y"}, {}, QQ)
    rep = check_cdg_axioms(A)
    assert not rep.ok
    assert {"diff degree", "leibniz"} <= rep.failed_identities()


def test_curvature_must_be_closed():
    A = TableAlgebra({"1": 0, "a": 1, "c": 2}, {}, {"a": "c"}, {"c": 1}, QQ)
    assert check_cdg_axioms(A).ok
    B = TableAlgebra({"1": 0, "b": 1, "c": 2, "e": 3}, {}, {"c": "e"}, {"c": 1}, QQ)
    assert check_cdg_axioms(B).failed_identities() == {"d(c)=0"}


def test_deformed_algebra_matches_hochschild_condition():
    base = truncated_poly_table(3)
    D = DeformedDg(base, phi0={"u": 1})
    assert check_cdg_axioms(D).ok
    assert check_hochschild_cocycle(D).ok
    assert D.curvature == {"u*eps": 1}
    assert set(D.generators()) == {"u", "u^2", "eps"}


def test_non_cocycle_fails_both_checks():
    base = truncated_poly_table(4)
    D = DeformedDg(base, phi2={("u", "u^2"): {"u^3": 1}})
    assert not check_hochschild_cocycle(D).ok
    assert not check_cdg_axioms(D).ok


@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_coboundaries_are_cocycles(coefs):
    base = truncated_poly_table(4)
    labels = ["u", "u^2", "u^3"]
    f = {l: {l: c} for l, c in zip(labels, coefs) if c}
    D = DeformedDg(base, phi1=hochschild_coboundary_phi1(base, f), phi2=hochschild_coboundary_phi2(base, f))
    assert check_hochschild_cocycle(D).ok
    assert check_cdg_axioms(D).ok


def test_initial_morphisms():
    for A in (initial_poly(), initial_trunc(3), poly_u("k", "1")):
        f = initial_morphism(A)
        assert check_strict(f).ok
    # c is nilpotent of order 3 in k[c]/c^3, so k[c]/c^2 cannot map there
    with pytest.raises(NotDefined):
        initial_morphism(initial_trunc(3), source_trunc=2)
    assert check_strict(initial_morphism(initial_trunc(2), source_trunc=3)).ok


def test_quotient_morphism_and_identity():
    assert check_strict(quotient_morphism(None, 3)).ok
    assert check_strict(quotient_morphism(4, 2)).ok
    assert check_strict(StrictMorphism.identity(poly_u("k[eps]", "eps"))).ok


def test_non_morphism_is_reported():
    A = initial_poly()
    f = StrictMorphism(A, A, {"c": {"c": 2}})
    rep = check_strict(f)
    assert not rep.ok
    assert "curvature" in rep.failed_identities()


def test_laurent_collapse(field):
    for ring, rho in (("k", "0"), ("k", "1"), ("k[eps]", "0"), ("k[eps]", "eps")):
        assert laurent_collapse_check(ring, rho, field).ok


def test_base_field_is_trivially_dg():
    k = base_field()
    assert k.curvature == {}
    assert k.generators() == {}
