# Stdlib imports
import logging
import math

# Third-party imports
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Internal imports
import src.harmonic.defaults as defaults
from src.harmonic.annulus_core import AnnulusMap
from src.harmonic.errors import DomainError
from src.harmonic.gen_maps import make_rng, random_annulus_map
from src.harmonic.quadratic_forms import (
    circle_functionals,
    circle_functionals_quadrature,
    default_rho_grid,
    positivity_scan,
    prop52_certificate,
    q0_discriminant,
    qform_coefficients,
    qform_coefficients_general,
    qform_decomposition,
    qform_direct,
    qform_value,
)


def test_spot_values_at_three():
    """A_2(3) = 511/9, B_2(3) = 271/81, C_2(3) = -85/9"""
    logging.info("==== test_spot_values_at_three =====")

    rec = qform_coefficients(2, 3.0)
    assert rec.A == pytest.approx(511 / 9, rel=1e-13)
    assert rec.B == pytest.approx(271 / 81, rel=1e-13)
    assert rec.C == pytest.approx(-85 / 9, rel=1e-13)
    assert rec.discriminant == pytest.approx(rec.A * rec.B - rec.C**2)


@pytest.mark.parametrize("n", [-7, -2, -1, 1, 2, 5, 12])
def test_general_formula_matches_cases(n):
    for rho in (1.3, defaults.sqrt7, 4.0, 9.5):
        rec = qform_coefficients(n, rho)
        A, B, C = qform_coefficients_general(n, rho)
        scale = max(1.0, abs(rec.A), abs(rec.B))
        assert float(A) == pytest.approx(rec.A, abs=1e-12 * scale)
        assert float(B) == pytest.approx(rec.B, abs=1e-12 * scale)
        assert float(C) == pytest.approx(rec.C, abs=1e-12 * scale)


def test_mode_one_is_semidefinite():
    logging.info("==== test_mode_one_is_semidefinite =====")

    rho = 2.0
    rec = qform_coefficients(1, rho)
    k1 = (rho**2 - 1) ** 2 / (4 * rho**2)
    assert (rec.A, rec.B, rec.C) == pytest.approx((k1, k1, -k1))
    assert rec.discriminant == 0.0
    assert qform_value(rec, 0.3 + 0.1j, 0.3 + 0.1j) == pytest.approx(0.0, abs=1e-15)


def test_mode_zero_discriminant():
    """2 log rho - 1 changes sign at sqrt(e)"""
    logging.info("==== test_mode_zero_discriminant =====")

    for rho in (1.2, math.sqrt(math.e), 3.0):
        rec = qform_coefficients(0, rho)
        assert rec.discriminant == pytest.approx(float(q0_discriminant(rho)), abs=1e-14)
    assert float(q0_discriminant(math.sqrt(math.e))) == pytest.approx(0.0, abs=1e-15)


def test_coefficients_need_rho_above_one():
    logging.info("==== test_coefficients_need_rho_above_one =====")

    with pytest.raises(DomainError):
        qform_coefficients(2, 1.0)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(-6, 6),
    rho=st.floats(1.01, 6.0),
    parts=st.lists(st.floats(-2.0, 2.0), min_size=4, max_size=4),
)
def test_form_value_matches_single_mode_certificate(n, rho, parts):
    """Q_n from (A, B, C) equals the certificate of xi z^n + zeta conj(z)^-n"""
    xi, zeta = complex(parts[0], parts[1]), complex(parts[2], parts[3])
    rec = qform_coefficients(n, rho)
    scale = 1.0 + (abs(xi) ** 2 + abs(zeta) ** 2) * rho ** (2 * abs(n)) * (1 + n * n)
    assert qform_value(rec, xi, zeta) == pytest.approx(qform_direct(n, rho, xi, zeta), abs=1e-11 * scale)


def test_certificate_of_critical_map_vanishes():
    logging.info("==== test_certificate_of_critical_map_vanishes =====")

    hmap = AnnulusMap(R=4.0, terms={1: (0.5, 0.5)})
    cert = prop52_certificate(hmap, 3.0)
    assert cert.value == pytest.approx(0.0, abs=1e-12)
    assert cert.flags == ()

    low = prop52_certificate(hmap, 2.0)
    assert "below_sqrt7" in low.flags


def test_certificate_flags_non_unimodular_trace():
    logging.info("==== test_certificate_flags_non_unimodular_trace =====")

    hmap = random_annulus_map(make_rng(6), order=3, R=4.0)
    assert "trace_not_unimodular" in prop52_certificate(hmap, 3.0).flags


def test_certificate_is_sum_of_forms():
    """The decomposition's Q column adds up to the certificate"""
    logging.info("==== test_certificate_is_sum_of_forms =====")

    rng = make_rng(12)
    for _ in range(20):
        hmap = random_annulus_map(rng, order=5, R=4.0)
        rho = float(rng.uniform(defaults.sqrt7, 4.0))
        df = qform_decomposition(hmap, rho)
        assert list(df.columns) == defaults.scan_columns + ["Q"]
        assert len(df) == len(hmap.terms) + 1
        cert = prop52_certificate(hmap, rho).value
        assert float(df["Q"].sum()) == pytest.approx(cert, rel=1e-10, abs=1e-10)
        assert cert >= -1e-10


def test_circle_functionals_match_quadrature():
    logging.info("==== test_circle_functionals_match_quadrature =====")

    hmap = random_annulus_map(make_rng(13), order=4, R=2.0)
    exact = circle_functionals(hmap, 1.5)
    approx = circle_functionals_quadrature(hmap, 1.5)
    for name in exact._fields:
        assert getattr(approx, name) == pytest.approx(getattr(exact, name), rel=1e-8, abs=1e-10)


def test_default_grid():
    logging.info("==== test_default_grid =====")

    grid = default_rho_grid()
    assert grid[0] == pytest.approx(defaults.sqrt7)
    assert grid[-1] <= defaults.qform_rho_max
    assert np.all(np.diff(grid) > 0)


def test_positivity_scan_small():
    logging.info("==== test_positivity_scan_small =====")

    report = positivity_scan((-5, 5), np.linspace(defaults.sqrt7, 6.0, 30))
    assert len(report.table) == 11 * 30
    assert list(report.table.columns) == defaults.scan_columns
    assert report.positive
    assert report.n1_max_abs_discriminant == 0.0


def test_positivity_scan_full_range():
    """|n| <= 40 and sqrt(7) <= rho <= 25 at step 0.01"""
    logging.info("==== test_positivity_scan_full_range =====")

    report = positivity_scan()
    assert report.min_A > 0
    assert report.min_B > 0
    assert report.min_discriminant > 0
    assert report.B_pos_bound_ok
    assert report.B_neg_bound_ok
    assert report.n_minus_one_bound_ok
