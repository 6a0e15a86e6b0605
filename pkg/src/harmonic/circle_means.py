"""
circle_means.py

Integral means of |h|^2 over the circles T_rho and the radial quantities built on them.

Provides:
- means_closed_form(): U, U_dot, U_ddot as exact finite sums
- means_quadrature(): trapezoid oracle for U
- initial_speed(), half_derivative_at_one()
- energy_green() and its 2-D quadrature oracle energy_quadrature()
- operator_L(): the radial operator in three equivalent forms
- operator_L_conformal() / operator_L_conformal_direct()
- radial_profile(): everything above on a rho grid, as a DataFrame

Assumptions:
- rho ranges over the closed annulus [1, R]; tables are smooth up to T_R
- U(rho) = |a0 log rho + b0|^2 + sum |a_n rho^n + b_n rho^-n|^2
"""


# Stdlib imports
import math
from typing import NamedTuple

# Third-party imports
import numpy as np
import pandas as pd

# Internal imports
import src.config as config
import src.harmonic.defaults as defaults
from src.harmonic.annulus_core import AnnulusMap, evaluate_grid, is_conformal, max_order
from src.harmonic.errors import DomainError, NotConformalError
from src.harmonic.quadrature import integrate_radial, trapezoid_angles
from src.utils.logger import logger


class MeanEstimate(NamedTuple):
    value: float
    M: int
    flags: tuple[str, ...] = ()


# HELPERS
def check_rho(hmap: AnnulusMap, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 1.0) or np.any(rho > hmap.R):
        raise DomainError(f"rho must lie in [1, {hmap.R}], got {rho.min()}..{rho.max()}")
    return rho


def angular_order(hmap: AnnulusMap, M: int | None = None) -> int:
    """Trapezoid size: the configured M, raised to the exactness threshold 4N + 8."""
    floor = 4 * max_order(hmap) + defaults.exactness_margin
    return max(M or config.ANGULAR_NODES, floor)


def means_arrays(hmap: AnnulusMap, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised (U, U_dot, U_ddot) on an array of radii, no range check."""
    rho = np.asarray(rho, dtype=float)
    a0, b0 = hmap.log_a0, hmap.log_b0

    p = a0 * np.log(rho) + b0
    dp = a0 / rho
    ddp = -a0 / rho**2
    U = np.abs(p) ** 2
    U_dot = 2.0 * np.real(np.conj(p) * dp)
    U_ddot = 2.0 * np.abs(dp) ** 2 + 2.0 * np.real(np.conj(p) * ddp)

    for n, (a_n, b_n) in hmap.terms.items():
        up, down = rho ** float(n), rho ** float(-n)
        q = a_n * up + b_n * down
        dq = n * (a_n * up - b_n * down) / rho
        ddq = (n * (n - 1) * a_n * up + n * (n + 1) * b_n * down) / rho**2

        U = U + np.abs(q) ** 2
        U_dot = U_dot + 2.0 * np.real(np.conj(q) * dq)
        U_ddot = U_ddot + 2.0 * np.abs(dq) ** 2 + 2.0 * np.real(np.conj(q) * ddq)

    return U, U_dot, U_ddot


# MEANS
def means_closed_form(hmap: AnnulusMap, rho: float) -> tuple[float, float, float]:
    """
    (U, U_dot, U_ddot) at rho from orthogonality of the powers.
    """
    check_rho(hmap, rho)
    U, U_dot, U_ddot = means_arrays(hmap, rho)
    return float(U), float(U_dot), float(U_ddot)


def means_quadrature(hmap: AnnulusMap, rho: float, M: int) -> MeanEstimate:
    """
    M-point trapezoid average of |h|^2 on T_rho. Exact when M >= 4N + 8;
    below that the estimate is returned with a 'below_exactness' flag.
    """
    check_rho(hmap, rho)
    flags = ()
    if M < 4 * max_order(hmap) + defaults.exactness_margin:
        logger.warning(f"Trapezoid with M={M} is below the exactness threshold for N={max_order(hmap)}")
        flags = ("below_exactness",)

    jet = evaluate_grid(hmap, [rho], trapezoid_angles(M))
    return MeanEstimate(float(np.mean(np.abs(jet.value) ** 2)), M, flags)


def half_derivative_at_one(hmap: AnnulusMap) -> float:
    """U_dot(1) / 2 = Re(a0 conj b0) + sum n (|a_n|^2 - |b_n|^2)."""
    total = (hmap.log_a0 * hmap.log_b0.conjugate()).real
    for n, (a_n, b_n) in hmap.terms.items():
        total += n * (abs(a_n) ** 2 - abs(b_n) ** 2)
    return float(total)


def initial_speed(hmap: AnnulusMap) -> float:
    """
    Derivative of the mean radius at the inner circle: U_dot(1) / (2 sqrt U(1)).
    """
    U1, U1_dot, _ = means_closed_form(hmap, 1.0)
    if U1 == 0.0:
        raise DomainError("Initial speed undefined: U(1) = 0")
    return U1_dot / (2.0 * math.sqrt(U1))


# ENERGY
def energy_green(hmap: AnnulusMap, rho: float) -> float:
    """
    Dirichlet energy of h on A(1, rho) via Green's identity: pi (rho U_dot(rho) - U_dot(1)).
    """
    _, U_dot, _ = means_closed_form(hmap, rho)
    _, U1_dot, _ = means_closed_form(hmap, 1.0)
    return math.pi * (rho * U_dot - U1_dot)


def energy_quadrature(
    hmap: AnnulusMap,
    rho: float,
    M: int | None = None,
    per_unit: int | None = None,
    rel_tol: float | None = None,
) -> float:
    """
    Direct 2-D quadrature of |Dh|^2 over A(1, rho): composite Gauss-Legendre in
    the radius (with node doubling) times the trapezoid rule in the angle.
    """
    check_rho(hmap, rho)
    if rho == 1.0:
        return 0.0

    theta = trapezoid_angles(angular_order(hmap, M))

    def ring(r: np.ndarray) -> np.ndarray:
        jet = evaluate_grid(hmap, r, theta)
        return 2.0 * math.pi * r * np.mean(jet.grad_norm_sq, axis=1)

    value, _ = integrate_radial(
        ring,
        1.0,
        rho,
        per_unit=per_unit or config.RADIAL_NODES_PER_UNIT,
        rel_tol=rel_tol or config.RADIAL_REL_TOL,
    )
    return value


# OPERATOR L
def _L1(rho, U, U_dot, U_ddot):
    s = rho**2 + 1.0
    return U_ddot + (3.0 - rho**2) / (rho * s) * U_dot - 8.0 * U / s**2


def _means_extended(hmap: AnnulusMap, r: complex) -> tuple[complex, complex]:
    """
    U and U_dot continued off the real axis: conj(q) is replaced by the series
    with conjugated coefficients, so both are holomorphic in r and real on r > 0.
    """
    a0, b0 = hmap.log_a0, hmap.log_b0
    p, p_bar = a0 * np.log(r) + b0, a0.conjugate() * np.log(r) + b0.conjugate()
    U = p * p_bar
    U_dot = (p * a0.conjugate() + p_bar * a0) / r
    for n, (a_n, b_n) in hmap.terms.items():
        up, down = r**n, r ** (-n)
        q = a_n * up + b_n * down
        q_bar = a_n.conjugate() * up + b_n.conjugate() * down
        dq = n * (a_n * up - b_n * down) / r
        dq_bar = n * (a_n.conjugate() * up - b_n.conjugate() * down) / r
        U = U + q * q_bar
        U_dot = U_dot + q * dq_bar + q_bar * dq
    return U, U_dot


def _L2(hmap: AnnulusMap, rho: float) -> float:
    """
    Divergence form ((rho^2+1)/rho^3) d/drho [rho^3 d/drho (U/(rho^2+1))].
    The outer derivative is taken by complex step, so U_ddot never enters.
    """
    step = defaults.complex_step * rho
    r = complex(rho, step)
    U, U_dot = _means_extended(hmap, r)
    s = r**2 + 1.0
    q = r**3 * (U_dot / s - 2.0 * r * U / s**2)
    return float((rho**2 + 1.0) / rho**3 * q.imag / step)


def _L3(hmap: AnnulusMap, rho: np.ndarray, M: int) -> np.ndarray:
    """First-derivative integrand of L averaged over T_rho (no second derivatives)."""
    rho = np.atleast_1d(rho)
    jet = evaluate_grid(hmap, rho, trapezoid_angles(M))
    r = rho[:, None]
    s = r**2 + 1.0
    integrand = (
        2.0 * np.abs(jet.d_rho) ** 2
        + 2.0 * np.abs(jet.d_theta) ** 2 / r**2
        - 2.0 * (r**2 - 1.0) / (r * s) * 2.0 * np.real(np.conj(jet.value) * jet.d_rho)
        - 8.0 * np.abs(jet.value) ** 2 / s**2
    )
    return np.mean(integrand, axis=1)


def operator_L(hmap: AnnulusMap, rho: float, M: int | None = None) -> tuple[float, float, float]:
    """
    L[U] at rho, computed three ways:
        L1 from the closed-form means,
        L2 from the divergence form, differentiated by complex step,
        L3 by angular quadrature of the first-derivative integrand.
    """
    U, U_dot, U_ddot = means_closed_form(hmap, rho)
    L1 = _L1(rho, U, U_dot, U_ddot)
    L2 = _L2(hmap, rho)
    L3 = float(_L3(hmap, np.array([rho]), angular_order(hmap, M))[0])
    return float(L1), float(L2), L3


def operator_L_conformal(hmap: AnnulusMap, rho: float) -> float:
    """
    4 sum n(n-1) |a_n|^2 rho^(2n-2) for a conformal table.
    """
    if not is_conformal(hmap):
        raise NotConformalError("operator_L_conformal needs a holomorphic table")
    check_rho(hmap, rho)

    total = 0.0
    for n, (a_n, _) in hmap.terms.items():
        total += 4.0 * n * (n - 1) * abs(a_n) ** 2 * rho ** (2 * n - 2)
    return total


def operator_L_conformal_direct(hmap: AnnulusMap, rho: float) -> float:
    """(1/rho) d/drho [rho^3 d/drho (U / rho^2)] = U_ddot - U_dot / rho."""
    _, U_dot, U_ddot = means_closed_form(hmap, rho)
    return U_ddot - U_dot / rho


# PROFILE
def radial_profile(hmap: AnnulusMap, rho_grid, M: int | None = None) -> pd.DataFrame:
    """
    Radial profile of the map on rho_grid (increasing, inside [1, R]).

    Returns:
        DataFrame with columns defaults.means_columns
    """
    rho = check_rho(hmap, np.atleast_1d(rho_grid))
    if np.any(np.diff(rho) <= 0):
        raise DomainError("rho grid must be strictly increasing")

    U, U_dot, U_ddot = means_arrays(hmap, rho)
    _, U1_dot, _ = means_arrays(hmap, 1.0)
    mean_radius = np.sqrt(U)
    floor = 0.5 * (rho + 1.0 / rho)

    df = pd.DataFrame(
        {
            "rho": rho,
            "U": U,
            "U_dot": U_dot,
            "U_ddot": U_ddot,
            "mean_radius": mean_radius,
            "L1": _L1(rho, U, U_dot, U_ddot),
            "L3": _L3(hmap, rho, angular_order(hmap, M)),
            "energy": math.pi * (rho * U_dot - U1_dot),
            "nitsche_floor": floor,
            "margin": mean_radius - floor,
        },
        columns=defaults.means_columns,
    )
    logger.info(f"Radial profile on {len(rho)} radii, min margin {df['margin'].min():.6g}")
    return df
