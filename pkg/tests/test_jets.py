import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import polynomial as P

from logpole.jets import Jet, compose

coef = st.floats(-3, 3, allow_nan=False)
poly = st.lists(coef, min_size=1, max_size=6)
point = st.floats(-2, 2, allow_nan=False)


def poly_jet(c, x, order):
    """Jet of a polynomial at x from numpy's own derivative routine."""
    derivs = [P.polyval(x, P.polyder(c, j)) if j else P.polyval(x, c) for j in range(order + 1)]
    return np.array(derivs)


@settings(max_examples=60, deadline=None)
@given(poly, poly, point)
def test_product_matches_polynomial_product(a, b, x):
    k = 5
    ja = Jet.from_derivatives(poly_jet(a, x, k))
    jb = Jet.from_derivatives(poly_jet(b, x, k))
    expect = poly_jet(P.polymul(a, b), x, k)
    np.testing.assert_allclose((ja * jb).coeffs, expect, rtol=1e-10, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(poly, poly, point)
def test_sum_and_derivative_commute(a, b, x):
    k = 4
    ja = Jet.from_derivatives(poly_jet(a, x, k))
    jb = Jet.from_derivatives(poly_jet(b, x, k))
    lhs = (ja + jb).d().coeffs
    rhs = ja.d().coeffs + jb.d().coeffs
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(poly, poly, point)
def test_composition_of_polynomials(a, b, x):
    # F(g(x)) with F = a, g = b, against composing the coefficient arrays
    k = 4
    g = Jet.from_derivatives(poly_jet(b, x, k))
    outer = Jet.from_derivatives(poly_jet(a, g.value, k))
    composed = np.zeros(1)
    for c in reversed(a):
        composed = P.polyadd(P.polymul(composed, b), [c])
    np.testing.assert_allclose(compose(outer, g).coeffs, poly_jet(composed, x, k), rtol=1e-9, atol=1e-8)


@pytest.mark.parametrize(
    "name, build, mp_fn",
    [
        ("exp", lambda x: (x * x * 0.5 - x).exp(), lambda t: mp.exp(t * t / 2 - t)),
        ("log", lambda x: (x * x + 1.0).log(), lambda t: mp.log(t * t + 1)),
        ("sqrt", lambda x: (x * x + 2.0).sqrt(), lambda t: mp.sqrt(t * t + 2)),
        ("power", lambda x: (x + 3.0).power(-1.5), lambda t: (t + 3) ** mp.mpf(-1.5)),
        ("divide", lambda x: (x + 2.0) / (x * x + 1.0), lambda t: (t + 2) / (t * t + 1)),
        ("reciprocal", lambda x: (x * 3.0 - 1.0).reciprocal(), lambda t: 1 / (3 * t - 1)),
    ],
)
def test_elementary_functions_against_mpmath(name, build, mp_fn):
    x0, k = 0.7, 6
    jet = build(Jet.variable(x0, k))
    with mp.workdps(40):
        expect = [float(mp.diff(mp_fn, mp.mpf(x0), j)) for j in range(k + 1)]
    np.testing.assert_allclose(jet.coeffs, expect, rtol=1e-11)


def test_integer_power_matches_repeated_product():
    x = Jet.variable(np.array([0.3, -1.2]), 5)
    np.testing.assert_allclose((x**5).coeffs, (x * x * x * x * x).coeffs)
    assert (x**0).coeffs[0].tolist() == [1.0, 1.0]


def test_order_and_accessors():
    j = Jet.from_derivatives([1.0, 2.0, 6.0])
    assert j.order == 2
    assert len(j) == 3
    assert j.derivative(2) == pytest.approx(6.0)
    assert j.taylor[2] == pytest.approx(3.0)


def test_rescale_is_linear_chain_rule():
    # d^j/dx^j of f(c x) = c^j f^(j)(c x)
    c, x0 = 2.5, 0.4
    direct = (Jet.variable(c * x0, 4) * 1.0).exp()
    via = (Jet.variable(x0, 4) * c).exp()
    np.testing.assert_allclose(direct.rescale(c).coeffs, via.coeffs, rtol=1e-13)


def test_derivative_jet_lowers_order():
    x = Jet.variable(1.5, 4)
    cube = x * x * x
    dc = cube.d()
    assert dc.order == 3
    np.testing.assert_allclose(dc.coeffs, [3 * 1.5**2, 6 * 1.5, 6.0, 0.0])


def test_truncate_rejects_extension():
    with pytest.raises(ValueError):
        Jet.variable(0.0, 2).truncate(3)
    with pytest.raises(ValueError):
        Jet.constant(1.0, 0).d()


def test_batched_broadcasting():
    x = Jet.variable(np.linspace(0, 1, 5), 3)
    y = x * np.arange(5.0) + 1.0
    assert y.batch_shape == (5,)
    np.testing.assert_allclose(y.coeffs[1], np.arange(5.0))


def test_mixed_order_alignment_truncates():
    a = Jet.variable(1.0, 5)
    b = Jet.variable(1.0, 2)
    assert (a * b).order == 2
    assert math.isclose((a + b).value, 2.0)
