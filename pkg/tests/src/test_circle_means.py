# Stdlib imports
import logging
import math

# Third-party imports
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Internal imports
import src.harmonic.circle_means as circle_means
import src.harmonic.defaults as defaults
from src.harmonic.annulus_core import AnnulusMap
from src.harmonic.circle_means import (
    angular_order,
    energy_green,
    energy_quadrature,
    half_derivative_at_one,
    initial_speed,
    means_closed_form,
    means_quadrature,
    operator_L,
    operator_L_conformal,
    operator_L_conformal_direct,
    radial_profile,
)
from src.harmonic.errors import DomainError, NotConformalError
from src.harmonic.gen_maps import make_rng, random_annulus_map, random_conformal_map
from src.harmonic.nitsche_family import NitscheParams, nitsche_map


CRITICAL = AnnulusMap(R=2.0, terms={1: (0.5, 0.5)})
IDENTITY = AnnulusMap(R=2.0, terms={1: (1.0, 0.0)})


def test_means_of_identity_map():
    """h = e^{ia} z gives (rho^2, 2 rho, 2)"""
    logging.info("==== test_means_of_identity_map =====")

    hmap = AnnulusMap(R=3.0, terms={1: (np.exp(0.4j), 0.0)})
    for rho in (1.0, 1.5, 3.0):
        U, U_dot, U_ddot = means_closed_form(hmap, rho)
        assert U == pytest.approx(rho**2, rel=1e-15)
        assert U_dot == pytest.approx(2 * rho, rel=1e-15)
        assert U_ddot == pytest.approx(2.0, rel=1e-15)


def test_means_of_critical_map():
    logging.info("==== test_means_of_critical_map =====")

    U, _, _ = means_closed_form(CRITICAL, 1.5)
    assert U == pytest.approx((0.5 * (1.5 + 1 / 1.5)) ** 2, rel=1e-15)


def test_means_of_log_term():
    logging.info("==== test_means_of_log_term =====")

    hmap = AnnulusMap(R=3.0, log_a0=1.0, log_b0=0.5)
    U, U_dot, U_ddot = means_closed_form(hmap, 2.0)
    p = math.log(2.0) + 0.5
    assert U == pytest.approx(p**2)
    assert U_dot == pytest.approx(2 * p / 2.0)
    assert U_ddot == pytest.approx(2 / 4.0 - 2 * p / 4.0)


def test_means_outside_range():
    logging.info("==== test_means_outside_range =====")

    with pytest.raises(DomainError):
        means_closed_form(CRITICAL, 0.9)
    with pytest.raises(DomainError):
        means_closed_form(CRITICAL, 2.1)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), rho=st.floats(1.0, 2.0))
def test_quadrature_matches_closed_form(seed, rho):
    """Trapezoid mean of |h|^2 is exact above the 4N + 8 threshold"""
    hmap = random_annulus_map(make_rng(seed), order=6, R=2.0)
    exact, _, _ = means_closed_form(hmap, rho)
    estimate = means_quadrature(hmap, rho, 4 * 6 + 8)
    assert estimate.flags == ()
    assert estimate.value == pytest.approx(exact, rel=1e-12, abs=1e-14)


def test_quadrature_below_threshold_is_flagged():
    logging.info("==== test_quadrature_below_threshold_is_flagged =====")

    hmap = random_annulus_map(make_rng(1), order=6, R=2.0)
    estimate = means_quadrature(hmap, 1.5, 8)
    assert estimate.flags == ("below_exactness",)
    assert estimate.M == 8


def test_angular_order_floor():
    logging.info("==== test_angular_order_floor =====")

    hmap = AnnulusMap(R=1.1, terms={100: (1.0, 0.0)})
    assert angular_order(hmap, 16) == 4 * 100 + defaults.exactness_margin
    assert angular_order(CRITICAL, 512) == 512


def test_initial_speed():
    """The initial speed of h_v is v"""
    logging.info("==== test_initial_speed =====")

    for v in (0.0, 0.3, 1.0):
        hmap = nitsche_map(NitscheParams(v=v, R=2.0))
        assert initial_speed(hmap) == pytest.approx(v, abs=1e-15)
        assert half_derivative_at_one(hmap) == pytest.approx(v, abs=1e-15)

    with pytest.raises(DomainError):
        initial_speed(AnnulusMap(R=2.0, terms={1: (1.0, -1.0)}))


def test_energy_green_values():
    logging.info("==== test_energy_green_values =====")

    assert energy_green(CRITICAL, 2.0) == pytest.approx(15 * math.pi / 8, rel=1e-14)
    assert energy_green(IDENTITY, 2.0) == pytest.approx(6 * math.pi, rel=1e-14)
    assert energy_green(CRITICAL, 1.0) == 0.0


def test_energy_green_matches_quadrature():
    """Green's identity against direct 2-D quadrature of |Dh|^2"""
    logging.info("==== test_energy_green_matches_quadrature =====")

    assert energy_quadrature(CRITICAL, 2.0) == pytest.approx(15 * math.pi / 8, rel=1e-9)

    rng = make_rng(4)
    for _ in range(5):
        hmap = random_annulus_map(rng, order=5, R=2.5)
        for rho in (1.3, 2.5):
            assert energy_quadrature(hmap, rho) == pytest.approx(energy_green(hmap, rho), rel=1e-9)


def test_operator_L_vanishes_on_critical_map():
    logging.info("==== test_operator_L_vanishes_on_critical_map =====")

    for rho in np.linspace(1.0, 2.0, 7):
        L1, L2, L3 = operator_L(CRITICAL, rho)
        assert abs(L1) < 1e-12
        assert abs(L2) < 1e-12
        assert abs(L3) < 1e-12


def test_operator_L_forms_agree():
    """Closed-form, divergence and first-derivative forms of L agree"""
    logging.info("==== test_operator_L_forms_agree =====")

    rng = make_rng(8)
    for _ in range(10):
        hmap = random_annulus_map(rng, order=6, R=2.0)
        for rho in (1.0, 1.37, 2.0):
            L1, L2, L3 = operator_L(hmap, rho)
            U, _, _ = means_closed_form(hmap, rho)
            scale = max(1.0, U)
            assert L2 == pytest.approx(L1, abs=1e-10 * scale)
            assert L3 == pytest.approx(L1, abs=1e-9 * scale)


def test_divergence_form_ignores_closed_form_second_derivative(monkeypatch):
    """Shifting the closed-form U_ddot moves L1 only"""
    logging.info("==== test_divergence_form_ignores_closed_form_second_derivative =====")

    hmap = random_annulus_map(make_rng(12), order=4, R=2.0)
    L1, L2, _ = operator_L(hmap, 1.6)

    closed_form = circle_means.means_closed_form

    def shifted(h, rho):
        U, U_dot, U_ddot = closed_form(h, rho)
        return U, U_dot, U_ddot + 1.0

    monkeypatch.setattr(circle_means, "means_closed_form", shifted)
    shifted_L1, shifted_L2, _ = operator_L(hmap, 1.6)
    assert shifted_L1 == pytest.approx(L1 + 1.0, abs=1e-9)
    assert shifted_L2 == L2
    assert shifted_L2 != pytest.approx(shifted_L1, abs=0.5)


def test_divergence_form_with_log_term():
    """a0 log|z| + b0: U = |a0 log rho + b0|^2, checked against L1 on the whole radius range"""
    logging.info("==== test_divergence_form_with_log_term =====")

    hmap = AnnulusMap(R=3.0, log_a0=0.7 - 0.2j, log_b0=1.1 + 0.4j, terms={-2: (0.3, 0.1j), 3: (0.05, -0.2)})
    for rho in np.linspace(1.0, 3.0, 9):
        L1, L2, _ = operator_L(hmap, float(rho))
        U, _, _ = means_closed_form(hmap, float(rho))
        assert L2 == pytest.approx(L1, abs=1e-11 * max(1.0, U))


def test_operator_L_conformal():
    """4 sum n(n-1)|a_n|^2 rho^(2n-2) equals U_ddot - U_dot/rho and is >= 0"""
    logging.info("==== test_operator_L_conformal =====")

    square = AnnulusMap(R=2.0, terms={2: (1.0, 0.0)})
    assert operator_L_conformal(square, 1.5) == pytest.approx(8 * 1.5**2)
    assert operator_L_conformal_direct(square, 1.5) == pytest.approx(8 * 1.5**2)

    rng = make_rng(9)
    for _ in range(100):
        hmap = random_conformal_map(rng, R=2.0)
        for rho in (1.0, 1.5, 2.0):
            L = operator_L_conformal(hmap, rho)
            assert L >= 0.0
            assert L == pytest.approx(operator_L_conformal_direct(hmap, rho), rel=1e-9, abs=1e-12)

    with pytest.raises(NotConformalError):
        operator_L_conformal(CRITICAL, 1.5)


def test_operator_L_conformal_finite_difference():
    """(1/rho) d/drho [rho^3 d/drho (U/rho^2)] by central differences"""
    logging.info("==== test_operator_L_conformal_finite_difference =====")

    hmap = AnnulusMap(R=2.0, terms={2: (1.0, 0.0), -1: (0.5, 0.0)})

    def U(r):
        return means_closed_form(hmap, r)[0]

    def flux(r, h=1e-4):
        return r**3 * (U(r + h) / (r + h) ** 2 - U(r - h) / (r - h) ** 2) / (2 * h)

    rho, h = 1.5, 1e-3
    fd = (flux(rho + h) - flux(rho - h)) / (2 * h) / rho
    exact = 8 * rho**2 + 2 * rho**-4
    assert operator_L_conformal(hmap, rho) == pytest.approx(exact, rel=1e-14)
    assert fd == pytest.approx(exact, rel=1e-5)


def test_radial_profile_of_critical_map():
    """Margin column vanishes for the critical map"""
    logging.info("==== test_radial_profile_of_critical_map =====")

    df = radial_profile(CRITICAL, np.linspace(1.0, 1.99, 50))
    assert list(df.columns) == defaults.means_columns
    assert len(df) == 50
    assert np.max(np.abs(df["margin"])) <= 1e-12
    assert df["energy"].iloc[0] == pytest.approx(0.0, abs=1e-15)
    np.testing.assert_allclose(df["nitsche_floor"], 0.5 * (df["rho"] + 1 / df["rho"]))


def test_radial_profile_rejects_bad_grid():
    logging.info("==== test_radial_profile_rejects_bad_grid =====")

    with pytest.raises(DomainError):
        radial_profile(CRITICAL, [1.5, 1.2])
    with pytest.raises(DomainError):
        radial_profile(CRITICAL, [1.0, 3.0])


def test_energy_column_monotone():
    """rho U_dot grows strictly for h_v and stays flat for a constant map"""
    logging.info("==== test_energy_column_monotone =====")

    grid = np.linspace(1.0, 2.0, 40)
    for v in (0.0, 0.5, 1.0):
        df = radial_profile(nitsche_map(NitscheParams(v=v, R=2.0)), grid)
        assert np.all(np.diff(df["energy"]) > 0)

    flat = radial_profile(AnnulusMap(R=2.0, log_b0=1.0), grid)
    assert np.all(np.diff(flat["energy"]) >= 0)
    assert np.max(np.abs(flat["energy"])) == 0.0
