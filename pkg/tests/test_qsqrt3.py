import math
from fractions import Fraction as F

from hypothesis import given
from hypothesis import strategies as st

from mmot_euler.qsqrt3 import SQRT3, QSqrt3

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=60)
elements = st.builds(QSqrt3, rationals, rationals)


def test_sqrt3_squared_is_three():
    assert SQRT3 * SQRT3 == 3
    assert (1 / SQRT3) == QSqrt3(0, F(1, 3))


def test_mixing_with_fractions():
    a = QSqrt3(1, 2)
    assert a + F(1, 2) == QSqrt3(F(3, 2), 2)
    assert F(1, 2) - a == QSqrt3(F(-1, 2), -2)
    assert 2 * a == QSqrt3(2, 4)
    assert QSqrt3(5, 0) == 5 and hash(QSqrt3(5, 0)) == hash(F(5))


def test_sign_and_abs():
    assert QSqrt3(2, -1).sign() == 1  # 2 > sqrt3
    assert QSqrt3(1, -1).sign() == -1
    assert abs(QSqrt3(1, -1)) == QSqrt3(-1, 1)
    assert QSqrt3(0, 0).sign() == 0


@given(elements, elements)
def test_field_operations_match_floats(a, b):
    assert math.isclose(float(a + b), float(a) + float(b), abs_tol=1e-9)
    assert math.isclose(float(a * b), float(a) * float(b), rel_tol=1e-9, abs_tol=1e-9)
    if b:
        assert (a / b) * b == a
    assert (a < b) == (float(a) < float(b)) or math.isclose(float(a), float(b), abs_tol=1e-9)


def test_json_round_trip():
    a = QSqrt3(F(-1, 3), F(2, 7))
    assert a.to_json() == {"rat": "-1/3", "sqrt3": "2/7"}
    assert QSqrt3.from_json(a.to_json()) == a
