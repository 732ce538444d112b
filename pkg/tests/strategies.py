"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from cdglab.scalars import QQ, FieldSpec, Matrix

small = st.integers(-3, 3)


@st.composite
def matrices(draw, field=QQ, max_rows=5, max_cols=5, rows=None, cols=None):
    r = rows if rows is not None else draw(st.integers(0, max_rows))
    c = cols if cols is not None else draw(st.integers(0, max_cols))
    data = draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix(r, c, field, {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v})


fields = st.sampled_from([QQ, FieldSpec(5), FieldSpec(2)])
seeds = st.integers(0, 10_000)
