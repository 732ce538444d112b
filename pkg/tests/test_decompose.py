import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from cdglab.algebras import initial_trunc, z2_rho
from cdglab.decompose import barcode_decompose, rank_formula_barcode, z2_decompose
from cdglab.errors import NotDefined, UsageError
from cdglab.fixtures import random_precomplex, random_z2_complex
from cdglab.homotopy import strict_iso_check
from cdglab.modules import direct_sum, interval_precomplex, shift_module, z2_module
from cdglab.scalars import QQ, FieldSpec, Matrix, rank

from strategies import seeds


def test_single_interval():
    D = barcode_decompose(interval_precomplex(1, 3))
    assert D.barcode.sorted() == [(0, 3, 1)]


def test_sum_of_intervals():
    P = direct_sum(interval_precomplex(1, 2), interval_precomplex(1, 1, 1))
    assert barcode_decompose(P).barcode.sorted() == [(0, 2, 1), (1, 1, 1)]


def test_hidden_intervals_by_hand():
    # d = [1 1] from k^2 to k: one bar of length 2 and one point in degree 0
    from cdglab.modules import precomplex
    P = precomplex({0: 2, 1: 1}, {0: [[1, 1]]})
    D = barcode_decompose(P)
    assert D.barcode.sorted() == [(0, 1, 1), (0, 2, 1)]
    assert strict_iso_check(D.witness)


@given(seeds, st.sampled_from([QQ, FieldSpec(5), FieldSpec(2)]))
def test_barcode_matches_rank_formula(seed, F):
    P = random_precomplex(random.Random(seed), None, F)
    D = barcode_decompose(P)
    assert D.barcode.bars == rank_formula_barcode(P).bars
    assert D.barcode.total() == P.space.total()
    assert D.barcode.dims() == {d: n for d, n in P.space.dims.items() if n}
    assert strict_iso_check(D.witness)


@given(seeds)
def test_barcode_of_truncated_precomplexes(seed):
    P = random_precomplex(random.Random(seed), 2)
    D = barcode_decompose(P)
    assert all(n <= 4 for (_, n) in D.barcode.bars)
    assert strict_iso_check(D.witness)


def test_dim_232_example():
    from cdglab.modules import precomplex
    P = precomplex({0: 2, 1: 3, 2: 2}, {0: [[1, 0], [0, 1], [1, 1]], 1: [[1, -1, 0], [0, 0, 0]]})
    D = barcode_decompose(P)
    assert D.barcode.bars == rank_formula_barcode(P).bars
    assert strict_iso_check(D.witness)


def test_barcode_refuses_extra_actions():
    with pytest.raises(UsageError):
        barcode_decompose(z2_module(z2_rho("k", "0"), [[1]], [[0]]))


def test_z2_examples_by_hand():
    A = z2_rho("k", "0")
    D = z2_decompose(z2_module(A, [[1]], [[0]]))
    assert (D.strings, D.bars_even, D.bars_odd) == (1, 0, 0)
    D = z2_decompose(z2_module(A, Matrix.zeros(0, 1, QQ), Matrix.zeros(1, 0, QQ)))
    assert (D.strings, D.bars_even, D.bars_odd) == (0, 1, 0)


@given(seeds, st.sampled_from([QQ, FieldSpec(5)]))
def test_z2_random(seed, F):
    M = random_z2_complex(random.Random(seed), F)
    D = z2_decompose(M)
    r0, r1 = rank(M.d.block(0)), rank(M.d.block(1))
    assert D.strings == r0 + r1
    assert D.bars_even == M.space.dim(0) - r0 - r1
    assert D.bars_odd == M.space.dim(1) - r0 - r1
    assert strict_iso_check(D.witness)


def test_z2_refuses_curvature_and_actions():
    with pytest.raises(NotDefined):
        z2_decompose(z2_module(z2_rho("k", "1"), [[1]], [[1]]))
    E = [[0, 0], [1, 0]]
    with pytest.raises(UsageError):
        z2_decompose(z2_module(z2_rho("k[eps]", "0"), E, E, {"eps": (E, E)}))
