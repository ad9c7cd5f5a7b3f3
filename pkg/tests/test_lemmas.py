from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from barelyrandom.core import WeightFunction
from barelyrandom.generators import benevolent_fn

lengths = st.fractions(F(1, 8), 20, max_denominator=8)


@pytest.mark.parametrize("preset", ["linear", "power2", "power3", "quadratic"])
@given(parts=st.lists(lengths, min_size=1, max_size=6),
       extra=st.fractions(0, 10, max_denominator=8))
def test_merging_never_loses_weight(preset, parts, extra):
    f = benevolent_fn(preset)
    assert f.merge_gap(parts, sum(parts) + extra) >= 0


@given(a=lengths, b=lengths)
def test_reciprocal_prefers_short(a, b):
    f = WeightFunction("reciprocal")
    assert (f(a) >= f(b)) == (a <= b)


def test_merge_gap_example():
    f = benevolent_fn("power2")
    # 5^2 - (1^2 + 2^2) with one unit of slack
    assert f.merge_gap([F(1), F(2)], F(4)) == 16 - 5


@given(x=lengths, y=lengths, z=lengths)
def test_c_benevolent_convexity(x, y, z):
    f = benevolent_fn("quadratic")
    lo, mid, hi = sorted((x, y, z))
    if lo < hi:
        # chord above the graph
        t = (mid - lo) / (hi - lo)
        assert f(mid) <= (1 - t) * f(lo) + t * f(hi)
