"""
nitsche_family.py

Extremal maps of the annulus problem and the predicates around the Nitsche bound.

Provides:
- nitsche_map(): the family h_v(z) = (z + 1/conj z)/2 + v (z - 1/conj z)/2
- nitsche_bound_holds(), construct_harmonic_homeo(), energy_minimizer()
- schottky_conformal_map(): the conformal maps between annuli of equal modulus
- hammering_map(): the piecewise energy-minimizing limit below the bound
- double_cover_map(), double_cover_ratio()
- example_51_map() and its margin / crossing helpers
- check_initial_conditions(): the three boundary conditions (I), (II), (III)

Assumptions:
- inner radii are normalized to 1 on both sides (r = r* = 1)
- extremal maps are returned with rotation angle 0; use annulus_core.rotate for the rest
- homeomorphism checks are heuristic (Jacobian sign on a grid + boundary winding)
"""


# Stdlib imports
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

# Third-party imports
import numpy as np

# Internal imports
import src.harmonic.defaults as defaults
from src.harmonic.annulus_core import AnnulusMap, evaluate_grid, max_order, values
from src.harmonic.circle_means import angular_order, half_derivative_at_one, means_arrays, means_closed_form
from src.harmonic.errors import DomainError, NoHarmonicHomeomorphism
from src.harmonic.quadrature import trapezoid_angles
from src.utils.logger import logger


@dataclass(frozen=True)
class NitscheParams:
    v: float
    R: float


# NITSCHE FAMILY
def nitsche_map(params: NitscheParams) -> AnnulusMap:
    """
    h_v with a_1 = (1 + v)/2, b_1 = (1 - v)/2. v = 0 is the critical map.
    """
    if params.v < 0:
        raise DomainError(f"Initial speed v must be >= 0, got {params.v}")
    return AnnulusMap(R=params.R, terms={1: ((1 + params.v) / 2, (1 - params.v) / 2)})


def nitsche_mean_radius(v: float, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    return 0.5 * (rho + 1.0 / rho) + 0.5 * v * (rho - 1.0 / rho)


def nitsche_bound_holds(R: float, R_star: float) -> bool:
    """R* >= (R + 1/R)/2, compared exactly."""
    if R <= 1.0 or R_star <= 1.0:
        raise DomainError(f"Both radii must exceed 1, got R={R}, R*={R_star}")
    return R_star >= 0.5 * (R + 1.0 / R)


def nitsche_speed_for(R: float, R_star: float) -> float:
    """The v for which h_v maps T_R onto a circle of mean radius R*."""
    return (2.0 * R_star - (R + 1.0 / R)) / (R - 1.0 / R)


def winding_number(hmap: AnnulusMap, rho: float = 1.0, M: int | None = None) -> float:
    """
    Argument increment of h around T_rho divided by 2 pi.
    Returns nan when h vanishes on the sampled circle.
    """
    M = angular_order(hmap, M)
    z = rho * np.exp(1j * trapezoid_angles(M))
    h = values(hmap, z)
    if np.min(np.abs(h)) == 0.0:
        return float("nan")
    steps = np.angle(np.roll(h, -1) / h)
    return float(np.sum(steps) / (2.0 * math.pi))


def homeomorphism_heuristic(hmap: AnnulusMap, samples: int = 64) -> bool:
    """
    Jacobian > 0 on a samples x samples grid strictly inside A(1, R) and
    winding 1 on both boundary circles. Not a proof of injectivity.
    """
    rho = np.linspace(1.0, hmap.R, samples + 2)[1:-1]
    theta = trapezoid_angles(samples)
    jet = evaluate_grid(hmap, rho, theta)
    windings = [winding_number(hmap, 1.0), winding_number(hmap, hmap.R)]
    return bool(np.min(jet.jacobian) > 0 and all(abs(w - 1.0) < 1e-9 for w in windings))


def construct_harmonic_homeo(R: float, R_star: float) -> AnnulusMap:
    """
    Harmonic homeomorphism A(1, R) -> A(1, R*) from the Nitsche family.

    Raises:
        NoHarmonicHomeomorphism: the bound fails; carries the deficit.
    """
    if not nitsche_bound_holds(R, R_star):
        raise NoHarmonicHomeomorphism(R, R_star)

    v = nitsche_speed_for(R, R_star)
    hmap = nitsche_map(NitscheParams(v=v, R=R))

    outer = math.sqrt(means_closed_form(hmap, R)[0])
    if not math.isclose(outer, R_star, rel_tol=1e-12):
        logger.warning(f"Outer mean radius {outer} differs from R* = {R_star}")
    if not homeomorphism_heuristic(hmap):
        logger.warning(f"Jacobian sampling did not confirm a homeomorphism for v = {v}")

    logger.info(f"Constructed h_v on A(1, {R}) -> A(1, {R_star}) with v = {v:.17g}")
    return hmap


def energy_minimizer(R: float, R_star: float) -> AnnulusMap:
    """
    Energy minimizer a z + b / conj z with a + b = 1 and a R + b / R = R*.
    """
    if not nitsche_bound_holds(R, R_star):
        raise NoHarmonicHomeomorphism(R, R_star)

    a = (R * R_star - 1.0) / (R**2 - 1.0)
    b = (R - R_star) * R / (R**2 - 1.0)
    return AnnulusMap(R=R, terms={1: (a, b)})


def minimizer_energy(R: float, R_star: float) -> float:
    """2 pi [a^2 (R^2 - 1) + b^2 (1 - R^-2)]."""
    a, b = energy_minimizer(R, R_star).terms[1]
    return 2.0 * math.pi * (abs(a) ** 2 * (R**2 - 1.0) + abs(b) ** 2 * (1.0 - R**-2))


def schottky_conformal_map(R: float, R_star: float, reverse: bool = False) -> AnnulusMap:
    """
    Conformal map A(1, R) -> A(1, R*): z itself, or R*/z when reverse.
    Exists only when the two moduli agree.
    """
    if not math.isclose(math.log(R), math.log(R_star), rel_tol=1e-12):
        raise DomainError(f"No conformal map: log {R} != log {R_star}")
    if reverse:
        return AnnulusMap(R=R, terms={-1: (R_star, 0.0)})
    return AnnulusMap(R=R, terms={1: (1.0, 0.0)})


# HAMMERING MAP
ANGULAR_PROJECTION = "angular_projection"


@dataclass(frozen=True)
class PiecewiseMap:
    """
    Map assembled from radial pieces (lo, hi, piece); a piece is either an
    AnnulusMap or the projection z -> z/|z|.
    """

    pieces: tuple[tuple[float, float, Union[AnnulusMap, str]], ...]

    @property
    def inner(self) -> float:
        return self.pieces[0][0]

    @property
    def outer(self) -> float:
        return self.pieces[-1][1]

    def evaluate(self, z: complex) -> complex:
        rho = abs(z)
        if not (self.inner <= rho <= self.outer):
            raise DomainError(f"|z| = {rho} outside [{self.inner}, {self.outer}]")
        for lo, hi, piece in self.pieces:
            if lo <= rho <= hi:
                if isinstance(piece, str):
                    return z / rho
                return complex(values(piece, z))
        raise DomainError(f"No piece covers |z| = {rho}")


def hammering_map(R: float) -> PiecewiseMap:
    """
    z/|z| on 1/R < |z| <= 1 and the critical map (z + 1/conj z)/2 on 1 <= |z| < R.
    """
    if R <= 1.0:
        raise DomainError(f"R must exceed 1, got {R}")
    critical = nitsche_map(NitscheParams(v=0.0, R=R))
    return PiecewiseMap(pieces=((1.0 / R, 1.0, ANGULAR_PROJECTION), (1.0, R, critical)))


# DOUBLE COVER
def double_cover_map(r: float, R: float) -> AnnulusMap:
    """
    (w / sqrt(rR) + sqrt(rR) / conj w) / 2 on A(r, R), rescaled to A(1, R/r).
    The Jacobian vanishes on the fold circle |w| = sqrt(rR).
    """
    if not (0 < r < R):
        raise DomainError(f"Need 0 < r < R, got r={r}, R={R}")
    s = math.sqrt(r * R)
    return AnnulusMap.from_general(r, R, terms={1: (0.5 / s, 0.5 * s)})


def double_cover_ratio(hmap: AnnulusMap) -> float:
    """
    max / min of the mean radius over [1, R]. The minimum is located on a
    dense grid and polished with Newton steps on U_dot.
    """
    rho = np.linspace(1.0, hmap.R, defaults.monotone_check_points)
    U, _, _ = means_arrays(hmap, rho)

    best = float(rho[np.argmin(U)])
    for _ in range(50):
        _, U_dot, U_ddot = means_arrays(hmap, best)
        if U_ddot <= 0:
            break
        step = float(U_dot / U_ddot)
        best = min(max(best - step, 1.0), hmap.R)
        if abs(step) < 1e-15 * best:
            break

    u_min = min(float(np.min(U)), float(means_arrays(hmap, best)[0]))
    u_max = max(float(U[0]), float(U[-1]))
    return math.sqrt(u_max / u_min)


# COUNTEREXAMPLE MAP
def example_51_order(a: float, R: float) -> tuple[int, float]:
    """
    Truncation order of the counterexample series and the sup of the dropped
    tail on the closed annulus, (1 + a) a^N.

    N is the first order with a^N < 1e-16, lowered if needed so that
    N log R stays under defaults.overflow_cap.
    """
    N = max(1, math.ceil(math.log(1e-16) / math.log(a)))
    while a**N >= 1e-16:
        N += 1
    N = min(N, max(1, math.floor(defaults.overflow_cap / math.log(R))))
    return N, (1.0 + a) * a**N


def example_51_map(a: float, lam: float | None = None, R: float = 20.0) -> AnnulusMap:
    """
    (1 + a conj z)/(conj z + a) + lam log|z| as a table on A(1, R).

    The fraction equals a + (1 - a^2) sum_k (-a)^k conj(z)^(-k-1); the series is
    cut by example_51_order(). lam defaults to 1/a, the value at which U_dot(1) = 0.
    """
    if not (0.0 < a < 1.0):
        raise DomainError(f"Parameter a must lie in (0, 1), got {a}")
    if R <= 1.0:
        raise DomainError(f"R must exceed 1, got {R}")
    if lam is None:
        lam = 1.0 / a

    N, tail = example_51_order(a, R)
    if tail >= 1e-15:
        logger.warning(f"Example map a={a} cut at N={N} by the overflow cap: tail up to {tail:.3g}")

    terms = {n: (0.0, (1.0 - a**2) * (-a) ** (n - 1)) for n in range(1, N + 1)}
    hmap = AnnulusMap(R=R, log_a0=lam, log_b0=a, terms=terms)
    logger.info(f"Example map a={a}, lam={lam}: {N} terms on A(1, {R})")
    return hmap


def example_51_margin(hmap: AnnulusMap, sigma) -> np.ndarray:
    """sqrt U(sigma) - (sigma + 1/sigma)/2."""
    return generalized_bound_margin(hmap, 0.0, sigma)


def generalized_bound_margin(hmap: AnnulusMap, v: float, sigma) -> np.ndarray:
    """sqrt U(sigma) minus the mean radius of h_v at sigma."""
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma < 1.0) or np.any(sigma > hmap.R):
        raise DomainError(f"sigma must lie in [1, {hmap.R}]")
    U, _, _ = means_arrays(hmap, sigma)
    return np.sqrt(U) - nitsche_mean_radius(v, sigma)


def example_51_crossing(a: float, lam: float | None = None, R: float = 20.0) -> float | None:
    """
    First sigma > 1 where the bound margin turns negative, by bisection.
    None if the margin stays nonnegative on (1, R].
    """
    hmap = example_51_map(a, lam, R)
    grid = np.linspace(1.0, R, 2000)[1:]
    margin = example_51_margin(hmap, grid)

    negative = np.flatnonzero(margin < 0)
    if negative.size == 0:
        return None

    k = int(negative[0])
    lo = float(grid[k - 1]) if k > 0 else 1.0
    hi = float(grid[k])
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(example_51_margin(hmap, mid)) < 0:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-13:
            break
    return 0.5 * (lo + hi)


# INITIAL CONDITIONS
class InitialConditions(NamedTuple):
    I: bool
    II: bool
    III: bool
    winding: float
    min_abs: float
    U_dot_at_1: float
    mean_jacobian: float


def mean_boundary_jacobian(hmap: AnnulusMap, M: int | None = None) -> float:
    """Trapezoid mean of J(z, h) over T."""
    jet = evaluate_grid(hmap, [1.0], trapezoid_angles(angular_order(hmap, M)))
    return float(np.mean(jet.jacobian))


def check_initial_conditions(hmap: AnnulusMap, M: int | None = None) -> InitialConditions:
    """
    (I)   h on T has degree 1 and does not vanish (a computable stand-in for
          "homeomorphism homotopic to the identity"),
    (II)  U_dot(1) >= 0,
    (III) mean of the Jacobian over T >= 0,
    each up to defaults.initial_condition_slack.
    """
    slack = defaults.initial_condition_slack
    M = angular_order(hmap, M)

    z = np.exp(1j * trapezoid_angles(M))
    min_abs = float(np.min(np.abs(values(hmap, z))))
    winding = winding_number(hmap, 1.0, M)
    U_dot = 2.0 * half_derivative_at_one(hmap)
    mean_jac = mean_boundary_jacobian(hmap, M)

    result = InitialConditions(
        I=bool(min_abs > 0 and abs(winding - 1.0) < 1e-9),
        II=bool(U_dot >= -slack),
        III=bool(mean_jac >= -slack),
        winding=winding,
        min_abs=min_abs,
        U_dot_at_1=U_dot,
        mean_jacobian=mean_jac,
    )
    logger.info(
        f"Initial conditions (N={max_order(hmap)}): I={result.I} II={result.II} III={result.III}"
    )
    return result
