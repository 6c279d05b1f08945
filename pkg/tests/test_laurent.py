from hypothesis import given, settings
from hypothesis import strategies as st

from hallq.laurent import LaurentPoly, laurent_mul

polys = st.dictionaries(st.integers(-4, 4), st.integers(-9, 9), max_size=5) \
    .map(LaurentPoly)


@given(polys, polys, polys)
@settings(max_examples=200, deadline=None)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + LaurentPoly.zero() == a
    assert a * LaurentPoly.one() == a
    assert a - a == LaurentPoly.zero()


@given(polys)
@settings(max_examples=100, deadline=None)
def test_json_roundtrip(a):
    assert LaurentPoly.from_json(a.to_json()) == a


def test_str_forms():
    assert str(LaurentPoly.const(3)) == "3"
    assert str(LaurentPoly.const(3) * LaurentPoly.v(1)) == "3v^1"
    assert str(LaurentPoly.v(-1)) == "v^-1"
    assert str(LaurentPoly.zero()) == "0"


def test_evaluate():
    poly = LaurentPoly({2: 1, 0: 3})       # v^2 + 3
    assert poly.evaluate(2) == 7


def test_int_coercion_and_scalar_mul():
    assert LaurentPoly.const(5) == 5
    assert LaurentPoly.const(2) * 3 == LaurentPoly.const(6)
    assert laurent_mul(LaurentPoly.v(1), LaurentPoly.v(-1)) == LaurentPoly.one()
