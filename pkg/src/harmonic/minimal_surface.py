"""
minimal_surface.py

Isothermal lifts of harmonic annulus maps to minimal graphs.

For h = u + i v harmonic, phi = h_z conj(h_zbar) is holomorphic and a third
coordinate w with w_z^2 = -phi makes (u, v, w) conformal and harmonic, i.e.
a minimal surface. We take w_z = i sqrt(phi) and the real primitive
dw = 2 Re(w_z dz); the sign is fixed so that w grows outward on average,
which turns the critical map into the catenoid slab w = log|z|.

Provides:
- lift(): MinimalLift on a polar grid (angular pass on T, then radial rays)
- phi_winding(): winding of phi around T_rho (zero counting)
- integration_residual(): w_z recovered from the integrated samples against i sqrt(phi)
- surface_samples(), lift_modulus(), lift_width()
- catenoid_modulus(), modulus_bound_check(), surface_ratio()
- second_dilatation()
"""


# Stdlib imports
import math
from dataclasses import dataclass

# Third-party imports
import numpy as np
import pandas as pd

# Internal imports
import src.harmonic.defaults as defaults
from src.harmonic.annulus_core import AnnulusMap, coefficient_l1, evaluate, evaluate_grid
from src.harmonic.circle_means import means_closed_form
from src.harmonic.errors import DomainError, NoLiftError, SingularPointError
from src.harmonic.quadrature import lgwt, trapezoid_angles
from src.utils.logger import logger


# Gauss-Legendre nodes per grid interval of the path integration
_PATH_NODES = 8


@dataclass(frozen=True)
class MinimalLift:
    base: AnnulusMap
    rho: np.ndarray
    theta: np.ndarray
    w_samples: np.ndarray
    branch_sign: np.ndarray
    mu_samples: np.ndarray
    residual: np.ndarray
    flat: bool
    w_z: np.ndarray
    derivative_residual: np.ndarray


# HELPERS
def _phi(jet) -> np.ndarray:
    return jet.d_z * np.conj(jet.d_zbar)


def _align(s: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Flip signs of s so that each entry lies within 90 degrees of ref."""
    flip = np.real(s * np.conj(ref)) < 0
    return np.where(flip, -s, s)


def phi_winding(hmap: AnnulusMap, rho: float, M: int = 1024) -> float:
    """
    Winding number of phi around T_rho, i.e. the number of zeros of phi inside
    |z| < rho counted with order (the log term contributes its pole at 0).
    """
    jet = evaluate_grid(hmap, [rho], trapezoid_angles(M))
    phi = _phi(jet)[0]
    if np.min(np.abs(phi)) == 0.0:
        return float("nan")
    return float(np.sum(np.angle(np.roll(phi, -1) / phi)) / (2.0 * math.pi))


def _check_zero_parity(hmap: AnnulusMap, rho: np.ndarray) -> None:
    """Every zero of phi in the annulus must have even order."""
    windings = [phi_winding(hmap, float(r)) for r in rho]
    base = windings[0]
    if not math.isfinite(base) or round(base) % 2 != 0:
        raise NoLiftError(f"phi winds {base:.3f} times around T; no continuous square root")
    for r, wnd in zip(rho[1:], windings[1:]):
        if math.isfinite(wnd) and (round(wnd) - round(base)) % 2 != 0:
            raise NoLiftError(f"phi has a zero of odd order inside |z| < {r:.6g}")


def _path_sqrt(phi_nodes: np.ndarray, start: np.ndarray) -> np.ndarray:
    """Continue sqrt(phi) from start along consecutive nodes (axis 1)."""
    s = np.sqrt(phi_nodes)
    out = np.empty_like(s)
    ref = start
    for k in range(s.shape[1]):
        out[:, k] = _align(s[:, k], ref)
        ref = out[:, k]
    return out


def _radial_derivative(f: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """d/drho along axis 0 of a uniform grid: 5-point stencils, one-sided at the ends."""
    n = len(rho)
    if n < 5:
        return np.gradient(f, rho, axis=0, edge_order=2 if n > 2 else 1)

    step = 12.0 * (rho[1] - rho[0])
    out = np.empty_like(f)
    out[2:-2] = (-f[4:] + 8.0 * f[3:-1] - 8.0 * f[1:-3] + f[:-4]) / step
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / step
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / step
    out[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / step
    out[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / step
    return out


def _angular_derivative(f: np.ndarray) -> np.ndarray:
    """Spectral d/dtheta along axis 1 of a trapezoid grid."""
    n = f.shape[1]
    k = np.fft.fftfreq(n, 1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0
    return np.real(np.fft.ifft(1j * k[None, :] * np.fft.fft(f, axis=1), axis=1))


def integration_residual(rho: np.ndarray, theta: np.ndarray, w_samples: np.ndarray, w_z: np.ndarray) -> np.ndarray:
    """
    |w_z recovered from the samples - w_z| on the grid.

    The samples are differentiated on their own (4th order in rho, spectral in
    theta) and combined into w_z = (w_rho - i w_theta / rho) e^{-i theta} / 2,
    so errors in the path integration show up here.
    """
    w_rho = _radial_derivative(w_samples, rho)
    w_theta = _angular_derivative(w_samples)
    recovered = 0.5 * (w_rho - 1j * w_theta / rho[:, None]) * np.exp(-1j * theta)[None, :]
    return np.abs(recovered - w_z)


# LIFT
def lift(hmap: AnnulusMap, n_rho: int = 65, n_theta: int = 128) -> MinimalLift:
    """
    Third isothermal coordinate w on the grid linspace(1, R, n_rho) x trapezoid_angles(n_theta).

    w(1, 0) = 0; w is integrated first along T, then outward along each ray,
    with composite Gauss-Legendre on every grid interval and sqrt(phi)
    continued across nodes.

    Raises:
        DomainError: fewer than 2 radii or 4 angles.
        NoLiftError: phi has a zero of odd order, or w has a period around T.
    """
    if n_rho < 2 or n_theta < 4:
        raise DomainError(f"Lift grid needs n_rho >= 2 and n_theta >= 4, got {n_rho} x {n_theta}")
    rho = np.linspace(1.0, hmap.R, n_rho)
    theta = trapezoid_angles(n_theta)
    grid = evaluate_grid(hmap, rho, theta)
    phi = _phi(grid)

    scale = float(np.max(np.abs(grid.d_z) ** 2 + np.abs(grid.d_zbar) ** 2)) or 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = np.where(np.abs(grid.d_z) > 0, np.conj(grid.d_zbar) / grid.d_z, np.nan + 0j)

    if np.max(np.abs(phi)) <= 1e-14 * scale:
        logger.info("phi vanishes identically: flat lift")
        zeros = np.zeros(phi.shape)
        return MinimalLift(hmap, rho, theta, zeros, np.ones(phi.shape), mu, zeros, True, zeros + 0j, zeros)

    _check_zero_parity(hmap, rho)

    x, wts = lgwt(_PATH_NODES, 0.0, 1.0)

    # angular pass on T
    s_T = np.empty(n_theta + 1, dtype=complex)
    w_T = np.zeros(n_theta + 1)
    s_T[0] = np.sqrt(phi[0, 0])
    steps = np.diff(np.append(theta, 2.0 * math.pi))
    for j in range(n_theta):
        nodes = theta[j] + steps[j] * x
        jet = evaluate_grid(hmap, [1.0], nodes)
        s = _path_sqrt(_phi(jet), s_T[j : j + 1])[0]
        z = np.exp(1j * nodes)
        dw = 2.0 * np.real(1j * s * 1j * z)
        w_T[j + 1] = w_T[j] + steps[j] * np.dot(wts, dw)
        end = np.sqrt(_phi(evaluate_grid(hmap, [1.0], [theta[j] + steps[j]]))[0])
        s_T[j + 1] = _align(end, s[-1:])[0]

    if np.real(s_T[-1] * np.conj(s_T[0])) < 0:
        raise NoLiftError("sqrt(phi) changes branch around T")
    period = w_T[-1]
    if abs(period) > 1e-8 * max(1.0, math.sqrt(scale)):
        raise NoLiftError(f"w has period {period:.3e} around T; not single-valued")

    # radial rays
    s_grid = np.empty((n_rho, n_theta), dtype=complex)
    w = np.zeros((n_rho, n_theta))
    s_grid[0] = s_T[:-1]
    w[0] = w_T[:-1]
    e = np.exp(1j * theta)
    for k in range(n_rho - 1):
        h_k = rho[k + 1] - rho[k]
        nodes = rho[k] + h_k * x
        jet = evaluate_grid(hmap, nodes, theta)
        s = _path_sqrt(_phi(jet).T, s_grid[k]).T
        dw = 2.0 * np.real(1j * s * e[None, :])
        w[k + 1] = w[k] + h_k * (wts @ dw)
        s_grid[k + 1] = _align(np.sqrt(phi[k + 1]), s[-1])

    # outward orientation: mean radial slope of w on T is nonnegative
    slope = np.mean(2.0 * np.real(1j * s_grid[0] * e))
    sign = 1.0 if slope >= 0 else -1.0
    w = sign * w
    s_grid = sign * s_grid

    w_z = 1j * s_grid
    residual = np.abs(phi + w_z**2)
    branch = np.where(np.real(s_grid * np.conj(np.sqrt(phi))) >= 0, 1.0, -1.0)

    derivative = integration_residual(rho, theta, w, w_z)
    result = MinimalLift(hmap, rho, theta, w, branch, mu, residual, False, w_z, derivative)
    logger.info(f"Lifted map on A(1, {hmap.R}): width {lift_width(result):.12g}")
    return result


def surface_samples(lift_result: MinimalLift) -> pd.DataFrame:
    """rho, theta, u, v, w, residual in long format."""
    jet = evaluate_grid(lift_result.base, lift_result.rho, lift_result.theta)
    rr, tt = np.meshgrid(lift_result.rho, lift_result.theta, indexing="ij")
    return pd.DataFrame(
        {
            "rho": rr.ravel(),
            "theta": tt.ravel(),
            "u": np.real(jet.value).ravel(),
            "v": np.imag(jet.value).ravel(),
            "w": lift_result.w_samples.ravel(),
            "residual": lift_result.residual.ravel(),
        },
        columns=defaults.surface_columns,
    )


def lift_modulus(lift_result: MinimalLift) -> float:
    """Conformal modulus of the parametrising annulus."""
    return math.log(lift_result.base.R)


def lift_width(lift_result: MinimalLift) -> float:
    return float(np.max(lift_result.w_samples) - np.min(lift_result.w_samples))


# MODULUS BOUND
def catenoid_modulus(R_star: float) -> float:
    """log(R* + sqrt(R*^2 - 1)), the modulus of the critical catenoid slab."""
    if R_star < 1.0:
        raise DomainError(f"Radius ratio must be >= 1, got {R_star}")
    return math.log(R_star + math.sqrt(R_star * R_star - 1.0))


def modulus_bound_check(surface_modulus: float, ratio: float, tol: float = 1e-12) -> tuple[bool, float]:
    """
    (holds, slack) with slack = catenoid_modulus(ratio) - surface_modulus.
    holds allows rounding-level negative slack down to -tol.
    """
    slack = catenoid_modulus(ratio) - surface_modulus
    return slack >= -tol, slack


def surface_ratio(hmap: AnnulusMap) -> float:
    """R*/r* of the image annulus, read off the boundary mean radii."""
    U1, _, _ = means_closed_form(hmap, 1.0)
    UR, _, _ = means_closed_form(hmap, hmap.R)
    return math.sqrt(UR / U1)


# SECOND DILATATION
def second_dilatation(hmap: AnnulusMap, z: complex) -> complex:
    """mu = conj(h_zbar) / h_z."""
    jet = evaluate(hmap, z)
    if abs(jet.d_z) <= 1e-15 * (1.0 + coefficient_l1(hmap)):
        raise SingularPointError(f"h_z vanishes at z = {z}")
    return jet.d_zbar.conjugate() / jet.d_z
