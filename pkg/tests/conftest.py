import random

import pytest
from hypothesis import strategies as st

from qtspp.qfield import Poly, RatFunc

exponents = st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(0, 2))

polys = st.dictionaries(exponents, st.integers(-9, 9), max_size=5).map(Poly)

nonzero_polys = polys.filter(lambda p: not p.is_zero)

q_polys = st.lists(st.integers(-9, 9), min_size=1, max_size=8).map(Poly.from_q_coeffs)

nonzero_q_polys = q_polys.filter(lambda p: not p.is_zero)


def ratfuncs_from(num, den):
    return RatFunc(num, den)


ratfuncs = st.builds(ratfuncs_from, polys, nonzero_polys)


@pytest.fixture
def rng():
    return random.Random(20260810)
