# Stdlib imports
import logging
import math

# Third-party imports
import pandas as pd
import pytest

# Internal imports
import src.harmonic.acceptance as acceptance
import src.harmonic.defaults as defaults
from src.harmonic.errors import DomainError
from src.harmonic.quadratic_forms import positivity_scan


FAST = [
    "critical_map_equality",
    "identity_constant_map",
    "identity_identity_map",
    "qform_spot_value",
    "chain_identity_map",
    "functional_rigid_shift",
    "psi_region",
    "example51_conditions",
    "example51_margin",
    "construct_vs_minimizer",
    "energy_green_vs_quadrature",
    "conformal_means",
    "catenoid_lift",
    "lift_residual",
    "modulus_bound_equality",
]


def test_registry():
    logging.info("==== test_registry =====")

    names = [name for name, _ in acceptance.CHECKS]
    assert len(names) == 22
    assert len(set(names)) == len(names)
    assert set(FAST) <= set(names)


def test_deterministic_checks_pass():
    """Checks with fixed inputs all pass at the default tolerance"""
    logging.info("==== test_deterministic_checks_pass =====")

    report = acceptance.run_acceptance(names=FAST)
    assert list(report.columns) == defaults.verify_columns
    assert report["check"].tolist() == [n for n, _ in acceptance.CHECKS if n in FAST]
    failed = report.loc[~report["passed"], "check"].tolist()
    assert failed == []


def test_randomized_checks_pass():
    logging.info("==== test_randomized_checks_pass =====")

    names = [
        "identity_random_maps",
        "certificate_decomposition",
        "certificate_sign",
        "chain_random_boundaries",
        "functional_random_boundaries",
        "conformal_operator",
    ]
    report = acceptance.run_acceptance(seed=11, names=names)
    assert report["passed"].all(), report.to_string()


def test_same_seed_same_report():
    logging.info("==== test_same_seed_same_report =====")

    names = ["certificate_sign", "functional_random_boundaries"]
    first = acceptance.run_acceptance(seed=5, names=names)
    second = acceptance.run_acceptance(seed=5, names=names)
    pd.testing.assert_frame_equal(first, second)


def test_qform_scan_check():
    logging.info("==== test_qform_scan_check =====")

    report = acceptance.run_acceptance(names=["qform_positivity_scan"])
    assert report["passed"].iloc[0]
    assert report["value"].iloc[0] > 0


@pytest.mark.parametrize(
    "failed_bound", ["B_pos_bound_ok", "B_neg_bound_ok", "n_minus_one_bound_ok"]
)
def test_qform_scan_check_needs_every_bound(monkeypatch, failed_bound):
    """Positive minima alone do not pass: each pointwise bound gates the check"""
    logging.info("==== test_qform_scan_check_needs_every_bound =====")

    scan = positivity_scan(n_range=(-4, 4), rho_grid=[3.0, 5.0])
    assert scan.positive and scan.n_minus_one_bound_ok

    broken = scan._replace(**{failed_bound: False})
    monkeypatch.setattr(acceptance, "positivity_scan", lambda: broken)
    report = acceptance.run_acceptance(names=["qform_positivity_scan"])
    assert not report["passed"].iloc[0]


def test_unknown_check_name():
    logging.info("==== test_unknown_check_name =====")

    with pytest.raises(DomainError):
        acceptance.run_acceptance(names=["no_such_check"])


def test_raising_check_is_reported(monkeypatch):
    logging.info("==== test_raising_check_is_reported =====")

    def raising(rng, tol):
        raise ValueError("bad input")

    monkeypatch.setattr(acceptance, "CHECKS", [("raising", raising)])
    report = acceptance.run_acceptance()
    assert len(report) == 1
    assert not report["passed"].iloc[0]
    assert math.isnan(report["value"].iloc[0])
