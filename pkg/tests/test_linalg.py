from fractions import Fraction as F

import sympy
from hypothesis import given, settings, strategies as st

from n2char.linalg import bareiss_rank


def test_small_cases():
    assert bareiss_rank([]) == 0
    assert bareiss_rank([[F(0)]]) == 0
    assert bareiss_rank([[F(1, 3)]]) == 1
    assert bareiss_rank([[1, 2], [2, 4]]) == 1
    assert bareiss_rank([[0, 1], [1, 0]]) == 2
    # pivot has to come from a later column
    assert bareiss_rank([[0, 0, 1], [0, 0, 2], [0, 1, 0]]) == 2


entries = st.builds(F, st.integers(-6, 6), st.integers(1, 5)) | st.just(F(0))


@st.composite
def matrices(draw):
    rows = draw(st.integers(1, 6))
    cols = draw(st.integers(1, 6))
    m = [[draw(entries) for _ in range(cols)] for _ in range(rows)]
    if draw(st.booleans()) and rows > 1:
        # force a dependency
        k = draw(st.builds(F, st.integers(-4, 4), st.integers(1, 3)))
        m[-1] = [k * x + y for x, y in zip(m[0], m[1 % rows])]
    return m


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_matches_sympy_rank(m):
    assert bareiss_rank(m) == sympy.Matrix(m).rank()
