import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arcinterp.jets import Jet, compose, constant_jet, factorials, variable_jet


def test_factorials():
    assert list(factorials(5)) == [1, 1, 2, 6, 24, 120]


def test_variable_jet_shape():
    j = variable_jet(0.3, 4)
    assert j.order == 4
    assert j.value == 0.3
    assert j.coeffs[1] == 1.0 and j.coeffs[2] == 0.0


def test_arithmetic_against_hand_derivatives():
    # g(t) = (t^2 + 1) / (t + 2) at t = 0.5; derivatives done by hand:
    # g = (t^2+1)/(t+2), g' = (t^2 + 4t - 1)/(t+2)^2, g'' = 10/(t+2)^3
    t = 0.5
    v = variable_jet(t, 3)
    g = (v * v + 1.0) / (v + 2.0)
    assert g.value == pytest.approx((t**2 + 1) / (t + 2), rel=1e-15)
    assert g.derivative_value(1) == pytest.approx((t**2 + 4 * t - 1) / (t + 2) ** 2, rel=1e-14)
    assert g.derivative_value(2) == pytest.approx(10 / (t + 2) ** 3, rel=1e-14)


def test_compose_matches_chain_rule():
    # sin(t^2 + 1): first derivative 2t cos(t^2+1),
    # second derivative 2 cos(t^2+1) - 4 t^2 sin(t^2+1)
    t = 0.7
    inner = variable_jet(t, 3)
    inner = inner * inner + 1.0
    u = inner.value
    outer = [np.sin(u + j * math.pi / 2) / math.factorial(j) for j in range(4)]
    g = compose(outer, inner)
    assert g.value == pytest.approx(math.sin(t**2 + 1), rel=1e-15)
    assert g.derivative_value(1) == pytest.approx(2 * t * math.cos(t**2 + 1), rel=1e-14)
    assert g.derivative_value(2) == pytest.approx(
        2 * math.cos(t**2 + 1) - 4 * t**2 * math.sin(t**2 + 1), rel=1e-13
    )


def test_division_roundtrip():
    v = variable_jet(0.2, 5)
    a = v * v * v + 2j * v + 0.3
    b = v * v - v + 1.5
    q = a / b
    back = q * b
    assert np.allclose(back.coeffs, a.coeffs, rtol=1e-13, atol=1e-15)


def test_division_by_zero_constant_term():
    v = variable_jet(0.0, 3)
    with pytest.raises(ZeroDivisionError):
        (v + 1.0) / v


def test_derivative_coefficients():
    j = Jet(0.0, [1.0, 2.0, 3.0, 4.0])
    d = j.derivative()
    assert list(d.coeffs) == [2.0, 6.0, 12.0]
    with pytest.raises(ValueError):
        constant_jet(1.0, 0.0, 0).derivative()


def test_conjugate_matches_conj_of_map():
    # t -> conj(e^{it}) has derivative -i e^{-it}
    t = 0.9
    order = 3
    coeffs = [np.exp(1j * t) * (1j) ** j / math.factorial(j) for j in range(order + 1)]
    g = Jet(t, coeffs).conjugate()
    assert g.value == pytest.approx(np.exp(-1j * t), rel=1e-15)
    assert g.derivative_value(1) == pytest.approx(-1j * np.exp(-1j * t), rel=1e-14)


def test_mixed_order_truncation():
    a = variable_jet(0.1, 5)
    b = variable_jet(0.1, 2)
    assert (a * b).order == 2
    assert (a + b).order == 2


def test_base_point_mismatch_rejected():
    with pytest.raises(ValueError):
        variable_jet(0.1, 2) + variable_jet(0.2, 2)


def test_pow():
    v = variable_jet(0.4, 4)
    assert np.allclose((v**3).coeffs, (v * v * v).coeffs)
    one = v**0
    assert one.value == 1.0 and np.allclose(one.coeffs[1:], 0)


coeff = st.complex_numbers(
    min_magnitude=0.0, max_magnitude=10.0, allow_nan=False, allow_infinity=False
)


@settings(max_examples=60, deadline=None)
@given(
    a=st.lists(coeff, min_size=4, max_size=4),
    b=st.lists(coeff, min_size=4, max_size=4),
    c=st.lists(coeff, min_size=4, max_size=4),
)
def test_ring_distributivity(a, b, c):
    ja, jb, jc = Jet(0.0, a), Jet(0.0, b), Jet(0.0, c)
    lhs = (ja + jb) * jc
    rhs = ja * jc + jb * jc
    assert np.allclose(lhs.coeffs, rhs.coeffs, rtol=1e-12, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(
    a=st.lists(coeff, min_size=5, max_size=5),
    b=st.lists(coeff, min_size=5, max_size=5),
)
def test_product_rule(a, b):
    ja, jb = Jet(0.0, a), Jet(0.0, b)
    lhs = (ja * jb).derivative()
    rhs = ja.derivative() * jb.truncated(3) + ja.truncated(3) * jb.derivative()
    assert np.allclose(lhs.coeffs, rhs.coeffs, rtol=1e-12, atol=1e-9)
