# Stdlib imports
import logging
import math

# Third-party imports
import numpy as np
import pytest
from hypothesis import given, strategies as st

# Internal imports
from src.harmonic.quadrature import composite_gauss, integrate_radial, lgwt, trapezoid_angles


def test_lgwt_exact_on_polynomials():
    """N-point Gauss-Legendre integrates degree 2N-1 exactly"""
    logging.info("==== test_lgwt_exact_on_polynomials =====")

    x, w = lgwt(3, 0.0, 2.0)
    assert np.dot(w, x**5) == pytest.approx(64.0 / 6.0, rel=1e-14)
    assert np.dot(w, x**4) == pytest.approx(32.0 / 5.0, rel=1e-14)


@given(a=st.floats(-5.0, 5.0), length=st.floats(0.01, 10.0), n=st.integers(1, 40))
def test_lgwt_weights_sum_to_length(a, length, n):
    x, w = lgwt(n, a, a + length)
    assert np.sum(w) == pytest.approx(length, rel=1e-12)
    assert np.all((x > a) & (x < a + length))


def test_composite_gauss_covers_interval():
    """Panels tile [a, b] and the weights add up to b - a"""
    logging.info("==== test_composite_gauss_covers_interval =====")

    x, w = composite_gauss(1.0, 3.5, per_unit=32)
    assert np.sum(w) == pytest.approx(2.5, rel=1e-14)
    assert x.size >= 80
    assert np.all(np.diff(x) > 0)


def test_integrate_radial_settles():
    logging.info("==== test_integrate_radial_settles =====")

    value, density = integrate_radial(np.exp, 1.0, 2.0)
    assert value == pytest.approx(math.e**2 - math.e, rel=1e-13)
    assert density >= 32


def test_trapezoid_angles():
    logging.info("==== test_trapezoid_angles =====")

    theta = trapezoid_angles(8)
    assert theta.size == 8
    assert theta[0] == 0.0
    assert theta[-1] == pytest.approx(2 * math.pi * 7 / 8)
    # exact for trigonometric polynomials of degree < M
    assert np.mean(np.cos(3 * theta) ** 2) == pytest.approx(0.5, abs=1e-15)
