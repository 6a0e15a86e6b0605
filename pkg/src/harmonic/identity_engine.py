"""
identity_engine.py

Both sides of the integral identity behind the Nitsche bound for thin annuli,
computed independently, plus the thin-annulus bound it implies.

For a harmonic h on A(1, R) and g defined by h = (z + 1/conj z) g / 2,
i.e. g = 2 conj(z) h / (|z|^2 + 1):

    2R^2/(R^2+1) U(R) - (R^2+1)/2 U(1) - (R^2-1) U_dot(1)/2 - (R^2-1) log R (W - U(1))
        = (1/pi) int_{A(1,R)} [W1 |g_z|^2 + W2 |g_zbar|^2]

with W the winding form and the weights
    W1 = (R^2 - rho^2)/rho^2 + (R^2 - 1) log(R/rho)
    W2 = (R^2 - rho^2) - (R^2 - 1) log(R/rho).

Provides:
- g_substitute(), g_derivative_norms_from_h()
- identity_lhs(), identity_rhs(), identity_report(), identity_table()
- identity_weights(), weight_sign_scan()
- thin_annulus_bound(), distance_to_critical_family()
"""


# Stdlib imports
import math
from dataclasses import dataclass
from typing import NamedTuple

# Third-party imports
import numpy as np
import pandas as pd

# Internal imports
import src.config as config
import src.harmonic.defaults as defaults
from src.harmonic.annulus_core import AnnulusMap, evaluate, evaluate_grid, values
from src.harmonic.circle_means import angular_order, check_rho, means_closed_form
from src.harmonic.errors import DomainError
from src.harmonic.nitsche_family import winding_number
from src.harmonic.quadratic_forms import circle_functionals
from src.harmonic.quadrature import integrate_radial, trapezoid_angles
from src.utils.logger import logger


class LHS(NamedTuple):
    value: float
    terms: tuple[float, float, float, float]


class RHS(NamedTuple):
    value: float
    integrals: tuple[float, float]


@dataclass(frozen=True)
class IdentityReport:
    R: float
    lhs: float
    rhs: float
    residual: float
    quad_orders: tuple[int, int]
    term_breakdown: tuple[float, float, float, float]
    integrals: tuple[float, float]

    def as_row(self) -> dict:
        t1, t2, t3, t4 = self.term_breakdown
        i1, i2 = self.integrals
        return {
            "R_eval": self.R, "lhs": self.lhs, "rhs": self.rhs, "residual": self.residual,
            "term1": t1, "term2": t2, "term3": t3, "term4": t4, "int1": i1, "int2": i2,
        }


class BoundResult(NamedTuple):
    value: float
    sigma: float
    flags: tuple[str, ...] = ()


# G-SUBSTITUTION
def g_substitute(hmap: AnnulusMap, z: complex) -> tuple[complex, complex, complex]:
    """
    g = 2 conj(z) h / (|z|^2 + 1) and its Wirtinger derivatives
        g_z    = 2 conj(z) h_z / (|z|^2 + 1) - 2 conj(z)^2 h / (|z|^2 + 1)^2
        g_zbar = 2 h / (|z|^2 + 1)^2 + 2 conj(z) h_zbar / (|z|^2 + 1)
    """
    jet = evaluate(hmap, z)
    zb = z.conjugate()
    s = abs(z) ** 2 + 1.0

    g = 2.0 * zb * jet.value / s
    g_z = 2.0 * zb * jet.d_z / s - 2.0 * zb * zb * jet.value / s**2
    g_zbar = 2.0 * jet.value / s**2 + 2.0 * zb * jet.d_zbar / s
    return g, g_z, g_zbar


def _g_norms(rho, value, d_rho, d_theta):
    s = 1.0 + rho**2
    gz = np.abs((rho * d_rho - 1j * d_theta) / s - 2.0 * rho**2 * value / s**2)
    gzb = np.abs((rho * d_rho + 1j * d_theta) / s + 2.0 * value / s**2)
    return gz, gzb


def g_derivative_norms_from_h(hmap: AnnulusMap, z: complex) -> tuple[float, float]:
    """|g_z| and |g_zbar| from the polar derivatives of h."""
    jet = evaluate(hmap, z)
    gz, gzb = _g_norms(abs(z), jet.value, jet.d_rho, jet.d_theta)
    return float(gz), float(gzb)


# WEIGHTS
def identity_weights(R: float, rho):
    rho = np.asarray(rho, dtype=float)
    log_term = (R**2 - 1.0) * np.log(R / rho)
    w1 = (R**2 - rho**2) / rho**2 + log_term
    w2 = (R**2 - rho**2) - log_term
    return w1, w2


def weight_sign_scan(R: float, samples: int = 1000) -> tuple[float, float]:
    """Minimum of each weight over interior samples of (1, R)."""
    rho = np.linspace(1.0, R, samples + 2)[1:-1]
    w1, w2 = identity_weights(R, rho)
    return float(np.min(w1)), float(np.min(w2))


# BOTH SIDES
def identity_lhs(hmap: AnnulusMap, R_eval: float) -> LHS:
    """The four circle terms, from closed forms."""
    if not (1.0 < R_eval <= hmap.R):
        raise DomainError(f"R_eval must lie in (1, {hmap.R}], got {R_eval}")

    R2 = R_eval**2
    U_R, _, _ = means_closed_form(hmap, R_eval)
    cf = circle_functionals(hmap, 1.0)

    t1 = 2.0 * R2 / (R2 + 1.0) * U_R
    t2 = -(R2 + 1.0) / 2.0 * cf.U
    t3 = -(R2 - 1.0) * cf.half_dU_at_1
    t4 = -(R2 - 1.0) * math.log(R_eval) * (cf.winding_form - cf.U)
    return LHS(t1 + t2 + t3 + t4, (t1, t2, t3, t4))


def identity_rhs(
    hmap: AnnulusMap,
    R_eval: float,
    M: int | None = None,
    per_unit: int | None = None,
) -> RHS:
    """
    The two weighted double integrals: Gauss-Legendre in rho (node doubling),
    trapezoid in theta.
    """
    if not (1.0 < R_eval <= hmap.R):
        raise DomainError(f"R_eval must lie in (1, {hmap.R}], got {R_eval}")

    theta = trapezoid_angles(angular_order(hmap, M))

    def ring(r: np.ndarray, which: int) -> np.ndarray:
        jet = evaluate_grid(hmap, r, theta)
        rr = r[:, None]
        gz, gzb = _g_norms(rr, jet.value, jet.d_rho, jet.d_theta)
        w1, w2 = identity_weights(R_eval, rr)
        integrand = w1 * gz**2 if which == 1 else w2 * gzb**2
        # (1/pi) * 2 pi * mean over theta * rho
        return 2.0 * r * np.mean(integrand, axis=1)

    per_unit = per_unit or config.RADIAL_NODES_PER_UNIT
    int1, _ = integrate_radial(lambda r: ring(r, 1), 1.0, R_eval, per_unit, config.RADIAL_REL_TOL)
    int2, _ = integrate_radial(lambda r: ring(r, 2), 1.0, R_eval, per_unit, config.RADIAL_REL_TOL)
    return RHS(int1 + int2, (int1, int2))


def identity_report(
    hmap: AnnulusMap,
    R_eval: float,
    M: int | None = None,
    per_unit: int | None = None,
) -> IdentityReport:
    lhs = identity_lhs(hmap, R_eval)
    rhs = identity_rhs(hmap, R_eval, M, per_unit)
    report = IdentityReport(
        R=R_eval,
        lhs=lhs.value,
        rhs=rhs.value,
        residual=lhs.value - rhs.value,
        quad_orders=(angular_order(hmap, M), per_unit or config.RADIAL_NODES_PER_UNIT),
        term_breakdown=lhs.terms,
        integrals=rhs.integrals,
    )
    logger.info(f"Identity at R={R_eval}: lhs {report.lhs:.12g}, residual {report.residual:.3e}")
    return report


def identity_table(hmap: AnnulusMap, R_grid, M: int | None = None) -> pd.DataFrame:
    rows = [identity_report(hmap, float(R), M).as_row() for R in R_grid]
    return pd.DataFrame(rows, columns=defaults.identity_columns)


# THIN ANNULUS BOUND
def thin_annulus_bound(hmap: AnnulusMap, sigma: float) -> BoundResult:
    """
    sqrt U(sigma) - (sigma + 1/sigma)/2, nonnegative when the inner trace is
    unimodular with winding 1, U_dot(1) >= 0 and 1 < sigma <= e. When a
    precondition fails the value is still returned, flagged.
    """
    check_rho(hmap, sigma)
    flags = []

    z = np.exp(1j * trapezoid_angles(angular_order(hmap)))
    unimodular = np.max(np.abs(np.abs(values(hmap, z)) - 1.0)) <= 1e-9
    degree_one = abs(winding_number(hmap, 1.0) - 1.0) < 1e-9
    speed_ok = circle_functionals(hmap, 1.0).half_dU_at_1 >= -defaults.initial_condition_slack
    if not (unimodular and degree_one and speed_ok) or not (1.0 < sigma <= defaults.thin_annulus_limit):
        logger.warning(f"Thin-annulus bound at sigma={sigma}: preconditions failed")
        flags.append("preconditions_failed")

    U, _, _ = means_closed_form(hmap, sigma)
    return BoundResult(math.sqrt(U) - 0.5 * (sigma + 1.0 / sigma), sigma, tuple(flags))


def distance_to_critical_family(hmap: AnnulusMap) -> float:
    """
    l2 distance of the coefficient vector to the rotations e^{i alpha}(z + 1/conj z)/2,
    minimised over alpha in closed form.
    """
    norm2 = abs(hmap.log_a0) ** 2 + abs(hmap.log_b0) ** 2
    norm2 += sum(abs(a) ** 2 + abs(b) ** 2 for a, b in hmap.terms.values())
    a1, b1 = hmap.terms.get(1, (0j, 0j))
    overlap = abs(0.5 * (a1 + b1))
    return math.sqrt(max(0.0, norm2 + 0.5 - 2.0 * overlap))
