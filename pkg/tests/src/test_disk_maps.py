# Stdlib imports
import logging
import math

# Third-party imports
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Internal imports
from src.harmonic.annulus_core import AnnulusMap
from src.harmonic.disk_maps import (
    BoundaryHomeo,
    DiskMap,
    boundary_det_mean,
    boundary_det_mean_quadrature,
    boundary_normal_derivative,
    disk_area,
    disk_area_quadrature,
    disk_energy,
    disk_energy_quadrature,
    disk_jet,
    format_bhm,
    jacobian_energy_chain,
    lemma62_functional,
    lemma62_split,
    parse_bhm,
    poisson_extend,
    psi,
    psi_region_check,
    read_bhm,
    spectral_normal_derivative,
    write_bhm,
)
from src.harmonic.errors import DomainError, FormatError, NonFiniteCoefficientError, NonMonotoneBoundaryError
from src.harmonic.gen_maps import make_rng, random_boundary_homeo


SHIFT = BoundaryHomeo({0: 0.7})


def test_from_trig():
    logging.info("==== test_from_trig =====")

    bdry = BoundaryHomeo.from_trig(0.1, cos={1: 0.2}, sin={2: 0.1})
    theta = np.array([0.0, 0.7, 2.9])
    expected = 0.1 + 0.2 * np.cos(theta) + 0.1 * np.sin(2 * theta)
    np.testing.assert_allclose(bdry.zeta(theta), expected, atol=1e-15)
    np.testing.assert_allclose(bdry.xi_prime(theta), 1 - 0.2 * np.sin(theta) + 0.2 * np.cos(2 * theta), atol=1e-15)
    assert bdry.slope_budget() == pytest.approx(0.4)


def test_boundary_validation():
    logging.info("==== test_boundary_validation =====")

    with pytest.raises(NonMonotoneBoundaryError):
        BoundaryHomeo.from_trig(cos={1: 1.5})
    with pytest.raises(DomainError):
        BoundaryHomeo({0: 0.1j})
    with pytest.raises(DomainError):
        BoundaryHomeo({-1: 0.1})
    with pytest.raises(NonFiniteCoefficientError):
        BoundaryHomeo({1: float("inf")})
    with pytest.raises(NonFiniteCoefficientError):
        DiskMap({1: float("nan")})


def test_poisson_extend_of_shift():
    """A rigid shift extends to the rotation e^{0.7 i} z"""
    logging.info("==== test_poisson_extend_of_shift =====")

    f = poisson_extend(SHIFT)
    assert f.coeffs[1] == pytest.approx(np.exp(0.7j), abs=1e-14)
    others = max(abs(c) for n, c in f.coeffs.items() if n != 1)
    assert others < 1e-14
    with pytest.raises(DomainError):
        poisson_extend(SHIFT, N=0)


def test_poisson_extend_of_annulus_trace():
    logging.info("==== test_poisson_extend_of_annulus_trace =====")

    hmap = AnnulusMap(R=2.0, log_a0=3.0, log_b0=0.25, terms={1: (0.5, 0.5), -2: (0.1, 0.2j)})
    f = poisson_extend(hmap)
    assert dict(f.coeffs) == pytest.approx({0: 0.25, 1: 1.0, -2: 0.1 + 0.2j})


def test_closed_forms_match_quadrature():
    logging.info("==== test_closed_forms_match_quadrature =====")

    f = DiskMap({0: 0.5, 1: 1.0, -2: 0.3, 3: 0.1j})
    assert disk_energy(f) == pytest.approx(2 * math.pi * (1 + 2 * 0.09 + 3 * 0.01))
    assert disk_area(f) == pytest.approx(math.pi * (1 - 2 * 0.09 + 3 * 0.01))
    assert boundary_det_mean(f) == pytest.approx(1 - 4 * 0.09 + 9 * 0.01)

    assert disk_energy_quadrature(f) == pytest.approx(disk_energy(f), rel=1e-10)
    assert disk_area_quadrature(f) == pytest.approx(disk_area(f), rel=1e-10)
    assert boundary_det_mean_quadrature(f) == pytest.approx(boundary_det_mean(f), rel=1e-12)


def test_disk_jet_range():
    logging.info("==== test_disk_jet_range =====")

    with pytest.raises(DomainError):
        disk_jet(DiskMap({1: 1.0}), [0.0], [0.0])
    with pytest.raises(DomainError):
        disk_jet(DiskMap({1: 1.0}), [1.1], [0.0])


def test_chain_for_identity():
    """Every link equals 2 pi for the identity, which is reported as inconclusive"""
    logging.info("==== test_chain_for_identity =====")

    chain = jacobian_energy_chain(DiskMap({1: 1.0}))
    assert chain.boundary_abs_det == pytest.approx(2 * math.pi)
    assert chain.disk_energy == pytest.approx(2 * math.pi)
    assert chain.twice_area == pytest.approx(2 * math.pi)
    assert "inconclusive_near_isometry" in chain.flags


def test_chain_for_random_boundaries():
    logging.info("==== test_chain_for_random_boundaries =====")

    rng = make_rng(14)
    for _ in range(20):
        chain = jacobian_energy_chain(poisson_extend(random_boundary_homeo(rng)))
        assert chain.boundary_abs_det >= chain.disk_energy - 1e-8
        assert chain.disk_energy >= chain.twice_area - 1e-8
        assert chain.area == pytest.approx(math.pi, abs=1e-8)
        assert "not_sense_preserving" not in chain.flags


def test_chain_flags_reversed_map():
    logging.info("==== test_chain_flags_reversed_map =====")

    chain = jacobian_energy_chain(DiskMap({-1: 1.0}))
    assert chain.area == pytest.approx(-math.pi)
    assert "not_sense_preserving" in chain.flags
    assert "area_not_pi" in chain.flags


def test_normal_derivative_kernel_matches_spectral():
    """Singular-integral |f|_rho on T equals Re(conj f f_rho) of the extension"""
    logging.info("==== test_normal_derivative_kernel_matches_spectral =====")

    theta = np.linspace(0.0, 2 * math.pi, 17)
    identity = BoundaryHomeo({})
    np.testing.assert_allclose(boundary_normal_derivative(identity, theta), 1.0, atol=1e-12)

    rng = make_rng(15)
    for _ in range(3):
        bdry = random_boundary_homeo(rng)
        kernel = boundary_normal_derivative(bdry, theta)
        spectral = spectral_normal_derivative(poisson_extend(bdry), theta)
        np.testing.assert_allclose(kernel, spectral, atol=1e-8)


def test_functional_vanishes_for_shift():
    logging.info("==== test_functional_vanishes_for_shift =====")

    assert lemma62_functional(SHIFT) == pytest.approx(0.0, abs=1e-12)
    assert lemma62_split(SHIFT).total == pytest.approx(0.0, abs=1e-12)


def test_functional_nonnegative_and_split_total():
    """The four split parts add up to the double integral"""
    logging.info("==== test_functional_nonnegative_and_split_total =====")

    rng = make_rng(16)
    for _ in range(5):
        bdry = random_boundary_homeo(rng)
        value = lemma62_functional(bdry)
        parts = lemma62_split(bdry)
        assert value >= -1e-9
        assert parts.total == pytest.approx(value, rel=1e-6, abs=1e-8)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), c=st.floats(-10.0, 10.0), t=st.floats(0.0, 2 * math.pi))
def test_functional_ignores_shift_and_rotation(seed, c, t):
    """Kernel depends on differences only: xi + c and zeta(theta + t) give the same value"""
    bdry = random_boundary_homeo(make_rng(seed))
    value = lemma62_functional(bdry)

    shifted = dict(bdry.zeta_coeffs)
    shifted[0] = shifted.get(0, 0j) + c
    assert lemma62_functional(BoundaryHomeo(shifted)) == pytest.approx(value, rel=1e-9, abs=1e-9)

    turned = {n: z * np.exp(1j * n * t) for n, z in bdry.zeta_coeffs.items()}
    assert lemma62_functional(BoundaryHomeo(turned)) == pytest.approx(value, rel=1e-9, abs=1e-9)


def test_psi():
    logging.info("==== test_psi =====")

    assert float(psi(math.pi, 0.0)) == pytest.approx(0.0, abs=1e-15)
    assert float(psi(0.5 * math.pi, -0.5 * math.pi)) == pytest.approx(2 - 0.5 * math.pi)


def test_psi_region_check():
    logging.info("==== test_psi_region_check =====")

    report = psi_region_check()
    assert report.min_value >= -1e-12
    assert report.edge_decreasing
    assert report.diagonal_decreasing
    assert report.diagonal_at_minus_half_pi == pytest.approx(2 - 0.5 * math.pi)
    assert report.resolution == 1000

    with pytest.raises(DomainError):
        psi_region_check(99)


def test_bhm_round_trip(tmp_path):
    logging.info("==== test_bhm_round_trip =====")

    bdry = random_boundary_homeo(make_rng(17))
    assert parse_bhm(format_bhm(bdry)) == bdry
    path = write_bhm(bdry, tmp_path / "boundary.bhm")
    assert read_bhm(path) == bdry


@pytest.mark.parametrize(
    "text",
    [
        "",
        "BHM 2\nZ 0 0.1 0\n",
        "BHM 1\nY 0 0.1 0\n",
        "BHM 1\nZ -1 0.1 0\n",
        "BHM 1\nZ 1 0.1 0\nZ 1 0.1 0\n",
        "BHM 1\nZ 1 abc 0\n",
        "BHM 1\nZ 1 0.1\n",
    ],
)
def test_parse_bhm_rejects_malformed(text):
    with pytest.raises(FormatError):
        parse_bhm(text)
