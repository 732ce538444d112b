import pytest
from hypothesis import given, strategies as st

from cdglab.errors import UsageError
from cdglab.graded import (Z, Z2, GradedMap, GradedSpace, Grading, block_map, direct_sum_maps, shift_map,
                           summand_inclusion, summand_projection)
from cdglab.scalars import QQ, Matrix

from strategies import fields


def test_shift_convention():
    V = GradedSpace(Z, {0: 2, 3: 1})
    assert V.shift(1).dims == {-1: 2, 2: 1}  # M[n]^i = M^(i+n)
    assert V.shift(-2).dim(2) == 2


def test_z2_degrees_reduce_mod_two():
    V = GradedSpace(Z2, {0: 1, 1: 2})
    assert V.dim(3) == 2 and V.dim(-2) == 1
    assert V.shift(1).dims == {0: 2, 1: 1}
    assert Z2.norm(-3) == 1 and Z.norm(-3) == -3


def test_unknown_grading():
    with pytest.raises(UsageError):
        Grading("Z3")


def test_collapse_to_z2_sums_parities():
    V = GradedSpace(Z, {-1: 1, 0: 2, 1: 3, 2: 1})
    assert V.collapse_to_z2().dims == {0: 3, 1: 4}


@st.composite
def graded_maps(draw, field, shift=None):
    dims_s = {d: draw(st.integers(0, 2)) for d in range(-1, 2)}
    dims_t = {d: draw(st.integers(0, 2)) for d in range(-2, 3)}
    S, T = GradedSpace(Z, dims_s), GradedSpace(Z, dims_t)
    s = shift if shift is not None else draw(st.integers(-1, 1))
    blocks = {}
    for d in S.degrees():
        r, c = T.dim(d + s), S.dim(d)
        vals = draw(st.lists(st.integers(-2, 2), min_size=r * c, max_size=r * c))
        blocks[d] = Matrix(r, c, field, {(i, j): vals[i * c + j] for i in range(r) for j in range(c)
                                         if vals[i * c + j]})
    return GradedMap(S, T, s, blocks, field)


@given(fields, st.data())
def test_json_round_trip(F, data):
    f = data.draw(graded_maps(F))
    assert GradedMap.from_json(f.to_json(), f.source, f.target, F) == f
    assert GradedSpace.from_json(f.source.to_json()) == f.source


@given(fields, st.data())
def test_linear_operations(F, data):
    f = data.draw(graded_maps(F, shift=0))
    assert (f + f) - f == f
    assert f.scale(F(0)).is_zero()
    assert GradedMap.identity(f.target, F) @ f == f
    assert f @ GradedMap.identity(f.source, F) == f


@given(fields, st.data(), st.integers(-3, 3))
def test_shift_map_preserves_composition(F, data, n):
    f = data.draw(graded_maps(F, shift=0))
    g = GradedMap.identity(f.target, F)
    assert shift_map(g @ f, n) == shift_map(g, n) @ shift_map(f, n)
    assert shift_map(shift_map(f, n), -n) == f


def test_summands_split_the_identity():
    V, W = GradedSpace(Z, {0: 1, 1: 2}), GradedSpace(Z, {1: 1})
    total = None
    for k in range(2):
        term = summand_inclusion([V, W], k) @ summand_projection([V, W], k)
        total = term if total is None else total + term
    assert total == GradedMap.identity(V + W)
    assert summand_projection([V, W], 0) @ summand_inclusion([V, W], 1) == GradedMap.zero(W, V)


def test_direct_sum_of_maps_is_block_diagonal():
    V = GradedSpace(Z, {0: 1})
    a = GradedMap.scalar(V, 2)
    b = GradedMap.scalar(V, 3)
    assert direct_sum_maps([a, b]).block(0) == Matrix.from_rows([[2, 0], [0, 3]], QQ)


def test_block_map_checks_components():
    V = GradedSpace(Z, {0: 1})
    with pytest.raises(UsageError):
        block_map([[GradedMap.identity(V)]], [V], [V], 1)


def test_collapse_of_a_map():
    V = GradedSpace(Z, {0: 1, 1: 1, 2: 1})
    d = GradedMap(V, V, 1, {0: Matrix.from_rows([[1]], QQ), 1: Matrix.from_rows([[5]], QQ)}, QQ)
    c = d.collapse_to_z2()
    assert c.source.dims == {0: 2, 1: 1}
    assert c.block(0).to_rows() == [[1, 0]]
    assert c.block(1).to_rows() == [[0], [5]]
