"""
quadratic_forms.py

Circle functionals of an annulus map and the per-mode quadratic forms whose
positivity proves the Nitsche bound for annuli of modulus >= 1.

Provides:
- circle_functionals() / circle_functionals_quadrature(): the six closed-form sums and their oracles
- qform_coefficients(): (A_n, B_n, C_n) by index case; qform_coefficients_general(): one formula for all n
- qform_value(), qform_direct(): the form's value from coefficients and from single-mode functionals
- positivity_scan(): minima of A, B, AB - C^2 and the intermediate bounds over (n, rho)
- prop52_certificate(), qform_decomposition(), q0_discriminant()

Assumptions:
- the disk extension has c_n = a_n + b_n (c_0 = b0)
- s = (rho + 1/rho)^2 / 4 and k = rho^2 - 4 - rho^-2 throughout
"""


# Stdlib imports
import math
from typing import NamedTuple

# Third-party imports
import numpy as np
import pandas as pd

# Internal imports
import src.harmonic.defaults as defaults
from src.harmonic.annulus_core import AnnulusMap, evaluate_grid, values
from src.harmonic.circle_means import angular_order, check_rho, half_derivative_at_one, means_closed_form
from src.harmonic.disk_maps import (
    boundary_det_mean_quadrature,
    disk_energy_quadrature,
    poisson_extend,
)
from src.harmonic.errors import DomainError
from src.harmonic.quadrature import trapezoid_angles
from src.utils.logger import logger


class CircleFunctionals(NamedTuple):
    U: float
    half_dU_at_1: float
    winding_form: float
    mean_jacobian: float
    boundary_det_Df: float
    disk_energy: float


class QFormEval(NamedTuple):
    n: int
    rho: float
    A: float
    B: float
    C: float
    discriminant: float


class Certificate(NamedTuple):
    value: float
    rho: float
    flags: tuple[str, ...] = ()


class ScanReport(NamedTuple):
    min_A: float
    min_B: float
    min_discriminant: float
    n1_max_abs_discriminant: float
    B_pos_bound_ok: bool
    B_neg_bound_ok: bool
    n_minus_one_bound_ok: bool
    table: pd.DataFrame

    @property
    def positive(self) -> bool:
        return self.min_A > 0 and self.min_B > 0 and self.min_discriminant > 0


# CIRCLE FUNCTIONALS
def circle_functionals(hmap: AnnulusMap, rho: float) -> CircleFunctionals:
    """
    U(rho), U_dot(1)/2, the winding form sum n|c_n|^2, the mean Jacobian on T
    sum n^2 (|a_n|^2 - |b_n|^2), the mean boundary det of the disk extension
    sum n|n||c_n|^2 and the disk energy 2 pi sum |n||c_n|^2.
    """
    U, _, _ = means_closed_form(hmap, rho)

    winding = jac = det = energy = 0.0
    for n, (a_n, b_n) in hmap.terms.items():
        c2 = abs(a_n + b_n) ** 2
        winding += n * c2
        jac += n * n * (abs(a_n) ** 2 - abs(b_n) ** 2)
        det += n * abs(n) * c2
        energy += abs(n) * c2

    return CircleFunctionals(
        U=U,
        half_dU_at_1=half_derivative_at_one(hmap),
        winding_form=winding,
        mean_jacobian=jac,
        boundary_det_Df=det,
        disk_energy=2.0 * math.pi * energy,
    )


def circle_functionals_quadrature(hmap: AnnulusMap, rho: float, M: int | None = None) -> CircleFunctionals:
    """Same six numbers by trapezoid sums on T_rho / T and 2-D quadrature on the disk."""
    check_rho(hmap, rho)
    theta = trapezoid_angles(angular_order(hmap, M))
    on_rho = evaluate_grid(hmap, [rho], theta)
    on_T = evaluate_grid(hmap, [1.0], theta)
    f = poisson_extend(hmap)

    return CircleFunctionals(
        U=float(np.mean(np.abs(on_rho.value) ** 2)),
        half_dU_at_1=float(np.mean(np.real(np.conj(on_T.value) * on_T.d_rho))),
        winding_form=float(np.mean(np.imag(np.conj(on_T.value) * on_T.d_theta))),
        mean_jacobian=float(np.mean(on_T.jacobian)),
        boundary_det_Df=boundary_det_mean_quadrature(f, M),
        disk_energy=disk_energy_quadrature(f, M),
    )


# COEFFICIENTS
def _s_k(rho):
    s = (rho + 1.0 / rho) ** 2 / 4.0
    k = rho**2 - 4.0 - rho**-2.0
    return s, k


def qform_coefficients_general(n, rho):
    """
    (A, B, C) from the functional sums, valid for every n != 0 (vectorised):

        A = rho^2n - n s - 2n - (k/2) n^2 - (k/2)(n|n| - |n|)
        B = rho^-2n - n s + 2n + (k/2) n^2 - (k/2)(n|n| - |n|)
        C = 1 - n s - (k/2)(n|n| - |n|)
    """
    n = np.asarray(n, dtype=float)
    rho = np.asarray(rho, dtype=float)
    s, k = _s_k(rho)
    half = 0.5 * k
    t = n * np.abs(n) - np.abs(n)

    A = rho ** (2 * n) - n * s - 2 * n - half * n**2 - half * t
    B = rho ** (-2 * n) - n * s + 2 * n + half * n**2 - half * t
    C = 1.0 - n * s - half * t
    return A, B, C


def qform_coefficients(n: int, rho: float) -> QFormEval:
    """
    (A_n, B_n, C_n) at rho, case by case:
        n >= 2      positive modes,
        n = -m <= -1 negative modes,
        n = 1       the rank-one form k1 |xi - zeta|^2, k1 = (rho^2 - 1)^2 / (4 rho^2),
        n = 0       |xi log rho + zeta|^2 - 2 Re(xi conj zeta).
    """
    if rho <= 1.0:
        raise DomainError(f"rho must exceed 1, got {rho}")
    s, k = _s_k(rho)

    if n == 0:
        L = math.log(rho)
        A, B, C = L * L, 1.0, L - 1.0
    elif n == 1:
        k1 = (rho**2 - 1.0) ** 2 / (4.0 * rho**2)
        A, B, C = k1, k1, -k1
    elif n >= 2:
        A = rho ** (2 * n) - n * s - 2 * n - 0.5 * k * (2 * n * n - n)
        B = rho ** (-2 * n) - n * s + 2 * n + 0.5 * k * n
        C = 1.0 - n * s - 0.5 * k * (n * n - n)
    else:
        m = -n
        A = rho ** (-2 * m) + m * s + 2 * m + 0.5 * k * m
        B = rho ** (2 * m) + m * s - 2 * m + 0.5 * k * (2 * m * m + m)
        C = 1.0 + m * s + 0.5 * k * (m * m + m)

    return QFormEval(n, rho, A, B, C, A * B - C * C)


def q0_discriminant(rho):
    """A0 B0 - C0^2 = 2 log rho - 1; positive exactly when rho > sqrt(e)."""
    return 2.0 * np.log(rho) - 1.0


def qform_value(record: QFormEval, xi: complex, zeta: complex) -> float:
    """A |xi|^2 + B |zeta|^2 + 2 C Re(xi conj zeta)."""
    return float(
        record.A * abs(xi) ** 2
        + record.B * abs(zeta) ** 2
        + 2.0 * record.C * (xi * complex(zeta).conjugate()).real
    )


def qform_direct(n: int, rho: float, xi: complex, zeta: complex) -> float:
    """
    Q_n(xi, zeta) as the certificate of the single-mode map
    (xi log|z| + zeta for n = 0, xi z^n + zeta conj(z)^-n otherwise).
    """
    R = rho + 1.0
    if n == 0:
        hmap = AnnulusMap(R=R, log_a0=xi, log_b0=zeta)
    else:
        hmap = AnnulusMap(R=R, terms={n: (xi, zeta)})
    return _certificate_value(hmap, rho)


# CERTIFICATE
def _certificate_value(hmap: AnnulusMap, rho: float) -> float:
    cf = circle_functionals(hmap, rho)
    s, k = _s_k(rho)
    boundary_minus_energy = 2.0 * math.pi * cf.boundary_det_Df - cf.disk_energy
    return (
        cf.U
        - s * cf.winding_form
        - 2.0 * cf.half_dU_at_1
        - 0.5 * k * cf.mean_jacobian
        - k / (4.0 * math.pi) * boundary_minus_energy
    )


def prop52_certificate(hmap: AnnulusMap, rho: float) -> Certificate:
    """
    U(rho) - s W - 2 H - (k/2) J - (k / 4 pi)[int_T det Df - int_D |Df|^2]

    with W the winding form, H = U_dot(1)/2 and J the mean Jacobian on T.
    Nonnegative for rho >= sqrt(7); below that the value is returned with a flag.
    """
    check_rho(hmap, rho)
    flags = []
    if rho < defaults.sqrt7:
        logger.warning(f"Certificate requested at rho={rho} < sqrt(7); positivity not guaranteed")
        flags.append("below_sqrt7")

    z = np.exp(1j * trapezoid_angles(angular_order(hmap)))
    if np.max(np.abs(np.abs(values(hmap, z)) - 1.0)) > 1e-9:
        flags.append("trace_not_unimodular")

    return Certificate(float(_certificate_value(hmap, rho)), rho, tuple(flags))


def qform_decomposition(hmap: AnnulusMap, rho: float) -> pd.DataFrame:
    """
    Per-index table n, rho, A, B, C, discriminant, Q with Q = Q_n(a_n, b_n)
    (n = 0 carries the log pair). The Q column sums to the certificate.
    """
    rows = []
    pairs = [(0, hmap.log_a0, hmap.log_b0)] + [(n, a, b) for n, (a, b) in hmap.terms.items()]
    for n, xi, zeta in pairs:
        rec = qform_coefficients(n, rho)
        rows.append({**rec._asdict(), "Q": qform_value(rec, xi, zeta)})
    return pd.DataFrame(rows, columns=defaults.scan_columns + ["Q"])


# POSITIVITY SCAN
def default_rho_grid() -> np.ndarray:
    step = defaults.qform_rho_step
    count = int(round((defaults.qform_rho_max - defaults.sqrt7) / step)) + 1
    grid = defaults.sqrt7 + step * np.arange(count)
    return grid[grid <= defaults.qform_rho_max]


def positivity_scan(
    n_range: tuple[int, int] = (defaults.qform_n_min, defaults.qform_n_max),
    rho_grid=None,
) -> ScanReport:
    """
    Scan (A_n, B_n, C_n) over n in n_range (inclusive) and rho_grid. n = 0 and
    n = 1 are kept in the table but excluded from the minima; n = 1 is checked
    to be exactly semidefinite. Also verifies pointwise

        B_n >= n rho^2 / 7                    (n >= 2)
        B_{-m} > (49/48) m^3 rho^2            (m >= 2)
        A_{-1} B_{-1} - C_{-1}^2 >= (8 rho^2 (rho^2 - 1) - 100) / 16
    """
    rho = np.asarray(default_rho_grid() if rho_grid is None else rho_grid, dtype=float)
    ns = np.arange(n_range[0], n_range[1] + 1)

    records = [qform_coefficients(int(n), float(r)) for n in ns for r in rho]
    table = pd.DataFrame(records, columns=defaults.scan_columns)

    regular = table[~table["n"].isin([0, 1])]
    n1 = table[table["n"] == 1]

    pos = table[table["n"] >= 2]
    neg = table[table["n"] <= -2]
    m1 = table[table["n"] == -1]
    m = -neg["n"].to_numpy(dtype=float)

    report = ScanReport(
        min_A=float(regular["A"].min()) if len(regular) else math.inf,
        min_B=float(regular["B"].min()) if len(regular) else math.inf,
        min_discriminant=float(regular["discriminant"].min()) if len(regular) else math.inf,
        n1_max_abs_discriminant=float(n1["discriminant"].abs().max()) if len(n1) else 0.0,
        B_pos_bound_ok=bool(np.all(pos["B"] >= pos["n"] * pos["rho"] ** 2 / 7.0)),
        B_neg_bound_ok=bool(np.all(neg["B"] > 49.0 / 48.0 * m**3 * neg["rho"] ** 2)),
        n_minus_one_bound_ok=bool(
            np.all(m1["discriminant"] >= (8.0 * m1["rho"] ** 2 * (m1["rho"] ** 2 - 1.0) - 100.0) / 16.0)
        ),
        table=table,
    )
    logger.info(
        f"Q-form scan over {len(ns)} indices x {len(rho)} radii: "
        f"min A {report.min_A:.6g}, min B {report.min_B:.6g}, min AB-C^2 {report.min_discriminant:.6g}"
    )
    return report
