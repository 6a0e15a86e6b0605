"""
disk_maps.py

Harmonic maps of the unit disk and the Jacobian-energy inequality for boundary homeomorphisms.

Provides:
- BoundaryHomeo: xi(theta) = theta + zeta(theta), zeta a real trigonometric polynomial
- DiskMap: f = sum_{n>=0} c_n z^n + sum_{n<0} c_n conj(z)^|n|
- poisson_extend(): spectral harmonic extension of a boundary homeomorphism or of
  the inner trace of an AnnulusMap
- disk_energy(), disk_area(), boundary_det_mean() closed forms with quadrature oracles
- jacobian_energy_chain(): boundary |det Df| >= energy >= 2 area
- boundary_normal_derivative(): the singular-integral formula for |f|_rho on T
- lemma62_functional() / lemma62_split(): the double integral and its four-part split
- psi(), psi_region_check(): the elementary inequality behind the split
- BHM text format: format_bhm(), parse_bhm(), write_bhm(), read_bhm()

Assumptions:
- zeta is stored by its coefficients for n >= 0; zeta_{-n} = conj(zeta_n) is implied
- every singular kernel (1 - cos x)/(1 - cos y) is evaluated as sin^2(x/2)/sin^2(y/2)
"""


# Stdlib imports
import cmath
import math
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, NamedTuple, Union

# Third-party imports
import numpy as np

# Internal imports
import src.config as config
import src.harmonic.defaults as defaults
import src.harmonic.formats as fmt
from src.harmonic.annulus_core import AnnulusMap
from src.harmonic.errors import DomainError, FormatError, NonFiniteCoefficientError, NonMonotoneBoundaryError
from src.harmonic.quadrature import integrate_radial, lgwt, trapezoid_angles
from src.utils.logger import logger
from src.utils.table_helpers import write_text_atomic


# BOUNDARY HOMEOMORPHISM
@dataclass(frozen=True)
class BoundaryHomeo:
    """
    Increasing degree-1 circle map xi(theta) = theta + zeta(theta) with

        zeta(theta) = zeta_0 + sum_{n>=1} 2 Re(zeta_n e^{i n theta}).

    Raises NonMonotoneBoundaryError unless xi' > 0 on a dense grid.
    """

    zeta_coeffs: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for n, c in sorted(self.zeta_coeffs.items()):
            if int(n) != n or n < 0:
                raise DomainError(f"zeta index must be a nonnegative integer, got {n}")
            c = complex(c)
            if not cmath.isfinite(c):
                raise NonFiniteCoefficientError(f"zeta_{n} is not finite")
            if n == 0 and c.imag != 0.0:
                raise DomainError("zeta_0 must be real")
            clean[int(n)] = c
        object.__setattr__(self, "zeta_coeffs", MappingProxyType(clean))

        theta = trapezoid_angles(defaults.monotone_check_points)
        slope = float(np.min(self.xi_prime(theta)))
        if slope <= 0.0:
            raise NonMonotoneBoundaryError(f"xi' reaches {slope:.6g} <= 0")

    @classmethod
    def from_trig(
        cls,
        constant: float = 0.0,
        cos: Mapping[int, float] | None = None,
        sin: Mapping[int, float] | None = None,
    ) -> "BoundaryHomeo":
        """zeta = constant + sum cos[n] cos(n theta) + sum sin[n] sin(n theta)."""
        coeffs: dict[int, complex] = {0: complex(constant)}
        for n, a in (cos or {}).items():
            coeffs[n] = coeffs.get(n, 0j) + a / 2
        for n, b in (sin or {}).items():
            coeffs[n] = coeffs.get(n, 0j) - 0.5j * b
        return cls(coeffs)

    def zeta(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, self.zeta_coeffs.get(0, 0j).real)
        for n, c in self.zeta_coeffs.items():
            if n > 0:
                out = out + 2.0 * np.real(c * np.exp(1j * n * theta))
        return out

    def zeta_prime(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape)
        for n, c in self.zeta_coeffs.items():
            if n > 0:
                out = out + 2.0 * np.real(1j * n * c * np.exp(1j * n * theta))
        return out

    def xi(self, theta) -> np.ndarray:
        return np.asarray(theta, dtype=float) + self.zeta(theta)

    def xi_prime(self, theta) -> np.ndarray:
        return 1.0 + self.zeta_prime(theta)

    def slope_budget(self) -> float:
        """sum over n != 0 of |n| |zeta_n|; below 1 it guarantees xi' > 0."""
        return 2.0 * sum(n * abs(c) for n, c in self.zeta_coeffs.items() if n > 0)


# DISK MAPS
@dataclass(frozen=True)
class DiskMap:
    """
    Harmonic map of the unit disk, f = sum_{n>=0} c_n z^n + sum_{n<0} c_n conj(z)^|n|.
    On T it equals sum c_n e^{i n theta}.
    """

    coeffs: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(n): complex(c) for n, c in sorted(self.coeffs.items())}
        if not all(cmath.isfinite(c) for c in clean.values()):
            raise NonFiniteCoefficientError("Disk coefficients hold NaN or inf")
        object.__setattr__(self, "coeffs", MappingProxyType(clean))


class DiskJet(NamedTuple):
    value: np.ndarray
    d_rho: np.ndarray
    d_theta: np.ndarray
    jacobian: np.ndarray
    grad_norm_sq: np.ndarray


def disk_jet(f: DiskMap, rho, theta) -> DiskJet:
    """Value and polar derivatives on the grid rho x theta (0 < rho <= 1)."""
    rho = np.atleast_1d(np.asarray(rho, dtype=float))[:, None]
    theta = np.atleast_1d(np.asarray(theta, dtype=float))[None, :]
    if np.any(rho <= 0.0) or np.any(rho > 1.0):
        raise DomainError("Disk evaluation needs 0 < rho <= 1")

    shape = np.broadcast_shapes(rho.shape, theta.shape)
    value = np.zeros(shape, dtype=complex)
    d_rho = np.zeros(shape, dtype=complex)
    d_theta = np.zeros(shape, dtype=complex)

    for n, c in f.coeffs.items():
        e = np.exp(1j * n * theta)
        m = abs(n)
        value = value + c * rho**m * e
        if n != 0:
            d_rho = d_rho + m * c * rho ** (m - 1) * e
            d_theta = d_theta + 1j * n * c * rho**m * e

    jacobian = np.imag(np.conj(d_rho) * d_theta) / rho
    grad_norm_sq = np.abs(d_rho) ** 2 + np.abs(d_theta) ** 2 / rho**2
    return DiskJet(value, d_rho, d_theta, jacobian, grad_norm_sq)


def poisson_extend(source: Union[BoundaryHomeo, AnnulusMap], N: int = 128) -> DiskMap:
    """
    Harmonic extension to the disk.

    For an AnnulusMap the inner trace gives c_n = a_n + b_n and c_0 = b0 exactly.
    For a BoundaryHomeo, c_n are the FFT coefficients of e^{i xi(theta)}, |n| <= N.
    """
    if isinstance(source, AnnulusMap):
        coeffs = {0: source.log_b0}
        coeffs.update({n: a_n + b_n for n, (a_n, b_n) in source.terms.items()})
        return DiskMap(coeffs)

    if N < 1:
        raise DomainError(f"Truncation order must be >= 1, got {N}")

    M = max(defaults.boundary_fft_points, 4 * N)
    samples = np.exp(1j * source.xi(trapezoid_angles(M)))
    spectrum = np.fft.fft(samples) / M
    coeffs = {n: complex(spectrum[n % M]) for n in range(-N, N + 1)}
    return DiskMap(coeffs)


def disk_energy(f: DiskMap) -> float:
    """Dirichlet energy 2 pi sum |n| |c_n|^2."""
    return 2.0 * math.pi * sum(abs(n) * abs(c) ** 2 for n, c in f.coeffs.items())


def disk_area(f: DiskMap) -> float:
    """Signed area pi sum n |c_n|^2 (the integral of det Df over the disk)."""
    return math.pi * sum(n * abs(c) ** 2 for n, c in f.coeffs.items())


def boundary_det_mean(f: DiskMap) -> float:
    """Mean of det Df over T: sum n |n| |c_n|^2."""
    return float(sum(n * abs(n) * abs(c) ** 2 for n, c in f.coeffs.items()))


def _disk_order(f: DiskMap, M: int | None) -> int:
    N = max((abs(n) for n in f.coeffs), default=0)
    return max(M or config.ANGULAR_NODES, 4 * N + defaults.exactness_margin)


def _disk_integral(f: DiskMap, field_name: str, M: int | None) -> float:
    theta = trapezoid_angles(_disk_order(f, M))

    def ring(r: np.ndarray) -> np.ndarray:
        jet = disk_jet(f, r, theta)
        return 2.0 * math.pi * r * np.mean(getattr(jet, field_name), axis=1)

    value, _ = integrate_radial(
        ring, 0.0, 1.0, per_unit=config.RADIAL_NODES_PER_UNIT, rel_tol=config.RADIAL_REL_TOL
    )
    return value


def disk_area_quadrature(f: DiskMap, M: int | None = None) -> float:
    return _disk_integral(f, "jacobian", M)


def disk_energy_quadrature(f: DiskMap, M: int | None = None) -> float:
    return _disk_integral(f, "grad_norm_sq", M)


def boundary_det_mean_quadrature(f: DiskMap, M: int | None = None) -> float:
    jet = disk_jet(f, [1.0], trapezoid_angles(_disk_order(f, M)))
    return float(np.mean(jet.jacobian))


# JACOBIAN-ENERGY CHAIN
class ChainResult(NamedTuple):
    boundary_abs_det: float
    disk_energy: float
    twice_area: float
    area: float
    flags: tuple[str, ...] = ()


def jacobian_energy_chain(f: DiskMap, M: int | None = None, tol: float = 1e-8) -> ChainResult:
    """
    The three quantities of the chain

        int_T |det Df| >= int_D |Df|^2 >= 2 int_D |det Df| = 2 pi

    for the harmonic extension of a boundary homeomorphism. The first is a
    trapezoid sum on T; the others are closed forms. twice_area uses |area|,
    which equals the integral of |det Df| for sense-preserving extensions.
    """
    M = max(_disk_order(f, M), defaults.chain_quad_points)
    jet = disk_jet(f, [1.0], trapezoid_angles(M))
    boundary = 2.0 * math.pi * float(np.mean(np.abs(jet.jacobian)))

    energy = disk_energy(f)
    area = disk_area(f)

    flags = []
    if area < 0:
        flags.append("not_sense_preserving")
    if abs(area - math.pi) > tol:
        flags.append("area_not_pi")
    if boundary - energy <= tol and energy - 2.0 * abs(area) <= tol and "area_not_pi" not in flags:
        flags.append("inconclusive_near_isometry")

    return ChainResult(boundary, energy, 2.0 * abs(area), area, tuple(flags))


# NORMAL DERIVATIVE ON T
def _kernel(dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    """(1 - cos dx)/(1 - cos dy) for dy away from 0 mod 2 pi."""
    return np.sin(0.5 * dx) ** 2 / np.sin(0.5 * dy) ** 2


def boundary_normal_derivative(bdry: BoundaryHomeo, theta, M: int | None = None) -> np.ndarray:
    """
    |f|_rho on T from the singular integral

        (1/2 pi) int (1 - cos[xi(theta) - xi(phi)]) / (1 - cos(theta - phi)) dphi,

    by the trapezoid rule on a phi-grid through theta, with the diagonal
    value replaced by its limit xi'(theta)^2.
    """
    M = M or defaults.boundary_fft_points
    theta = np.atleast_1d(np.asarray(theta, dtype=float))

    offsets = trapezoid_angles(M)[1:]
    phi = theta[:, None] + offsets[None, :]
    off_diag = _kernel(bdry.xi(theta)[:, None] - bdry.xi(phi), -offsets[None, :])

    diagonal = bdry.xi_prime(theta) ** 2
    return (np.sum(off_diag, axis=1) + diagonal) / M


def spectral_normal_derivative(f: DiskMap, theta) -> np.ndarray:
    """Re(conj(f) f_rho) on T with f_rho = sum |n| c_n e^{i n theta}."""
    jet = disk_jet(f, [1.0], np.atleast_1d(theta))
    return np.real(np.conj(jet.value) * jet.d_rho)[0]


# BOUNDARY DOUBLE INTEGRAL
def lemma62_functional(bdry: BoundaryHomeo, M: int | None = None) -> float:
    """
    Double trapezoid of (1 - cos[xi(theta) - xi(phi)]) / (1 - cos(theta - phi)) (xi'(theta) - 1)
    over [0, 2 pi]^2, diagonal replaced by xi'(theta)^2. Nonnegative for increasing xi.
    """
    M = M or defaults.chain_quad_points
    theta = trapezoid_angles(M)
    xi = bdry.xi(theta)
    weight = bdry.xi_prime(theta) - 1.0

    d = theta[:, None] - theta[None, :]
    dx = xi[:, None] - xi[None, :]
    K = np.empty((M, M))
    mask = ~np.eye(M, dtype=bool)
    K[mask] = _kernel(dx[mask], d[mask])
    K[~mask] = bdry.xi_prime(theta) ** 2

    h = 2.0 * math.pi / M
    return float(h * h * np.sum(K * weight[:, None]))


class SplitParts(NamedTuple):
    A_plus: float
    B_plus: float
    A_minus: float
    B_minus: float

    @property
    def total(self) -> float:
        return self.A_plus + self.B_plus + self.A_minus + self.B_minus


def lemma62_split(bdry: BoundaryHomeo, M: int | None = None, nodes: int | None = None) -> SplitParts:
    """
    The functional split along the offset alpha = theta - phi, beta = zeta(phi + alpha) - zeta(phi):

        A+ = int_{|alpha| <= pi/2} cos(alpha) (1 - cos beta)/(1 - cos alpha) zeta'(phi + alpha)
        B+ = int_{|alpha| <= pi/2} (1 - cos beta)/(1 - cos alpha)
        A- = int_{pi/2}^{3 pi/2} sin(alpha) (beta - sin beta)/(1 - cos alpha)^2
        B- = int_{pi/2}^{3 pi/2} (1 - cos beta)/(1 - cos alpha)

    each integrated by Gauss-Legendre in alpha and the trapezoid rule in phi.
    A- is the integrated-by-parts form, so A- + B- = int Psi(alpha, beta)/(1 - cos alpha)^2.
    """
    M = M or defaults.chain_quad_points
    nodes = nodes or defaults.split_alpha_nodes
    phi = trapezoid_angles(M)[:, None]
    zeta_phi = bdry.zeta(phi)
    h = 2.0 * math.pi / M

    # Q+
    alpha, w = lgwt(nodes, -0.5 * math.pi, 0.5 * math.pi)
    beta = bdry.zeta(phi + alpha[None, :]) - zeta_phi
    ratio = _kernel(beta, alpha[None, :])
    A_plus = np.sum(np.cos(alpha) * ratio * bdry.zeta_prime(phi + alpha[None, :]) * w)
    B_plus = np.sum(ratio * w)

    # Q-
    alpha, w = lgwt(nodes, 0.5 * math.pi, 1.5 * math.pi)
    beta = bdry.zeta(phi + alpha[None, :]) - zeta_phi
    one_minus = 1.0 - np.cos(alpha)
    A_minus = np.sum(np.sin(alpha) * (beta - np.sin(beta)) / one_minus**2 * w)
    B_minus = np.sum((1.0 - np.cos(beta)) / one_minus * w)

    return SplitParts(float(h * A_plus), float(h * B_plus), float(h * A_minus), float(h * B_minus))


# PSI INEQUALITY
def psi(alpha, beta) -> np.ndarray:
    """Psi(alpha, beta) = (1 - cos alpha)(1 - cos beta) + (beta - sin beta) sin alpha."""
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    return (1.0 - np.cos(alpha)) * (1.0 - np.cos(beta)) + (beta - np.sin(beta)) * np.sin(alpha)


class PsiReport(NamedTuple):
    min_value: float
    argmin_alpha: float
    argmin_beta: float
    edge_decreasing: bool
    diagonal_decreasing: bool
    diagonal_at_minus_half_pi: float
    resolution: int


def psi_region_check(resolution: int = defaults.psi_resolution) -> PsiReport:
    """
    Scan Psi on pi/2 <= alpha <= 3 pi/2, -alpha <= beta <= 2 pi - alpha, and
    check the two one-variable facts used on the region's edges:
        1 - cos b + b - sin b      decreases on [-pi/2, 0]    (alpha = pi/2)
        2 - 2 cos b - b sin b      decreases on [-pi, -pi/2]  (alpha = -beta)
    """
    if resolution < 100:
        raise DomainError(f"Resolution must be >= 100 per axis, got {resolution}")

    alpha = np.linspace(0.5 * math.pi, 1.5 * math.pi, resolution)[:, None]
    t = np.linspace(0.0, 1.0, resolution)[None, :]
    beta = -alpha + 2.0 * math.pi * t
    values = psi(alpha, beta)

    i, j = np.unravel_index(np.argmin(values), values.shape)

    b_edge = np.linspace(-0.5 * math.pi, 0.0, resolution)
    edge = 1.0 - np.cos(b_edge) + b_edge - np.sin(b_edge)
    b_diag = np.linspace(-math.pi, -0.5 * math.pi, resolution)
    diag = 2.0 - 2.0 * np.cos(b_diag) - b_diag * np.sin(b_diag)

    report = PsiReport(
        min_value=float(values[i, j]),
        argmin_alpha=float(alpha[i, 0]),
        argmin_beta=float(beta[i, j]),
        edge_decreasing=bool(np.all(np.diff(edge) <= 1e-15)),
        diagonal_decreasing=bool(np.all(np.diff(diag) <= 1e-15)),
        diagonal_at_minus_half_pi=float(diag[-1]),
        resolution=resolution,
    )
    logger.info(f"Psi scan {resolution}x{resolution}: min {report.min_value:.3e}")
    return report


# BHM TEXT FORMAT
def format_bhm(bdry: BoundaryHomeo) -> str:
    f = fmt.FLOAT.format
    lines = [fmt.BHM_HEADER]
    for n, c in bdry.zeta_coeffs.items():
        lines.append(fmt.BHM_TERM.format(n=n, re=f(c.real), im=f(c.imag)))
    return "\n".join(lines) + "\n"


def parse_bhm(text: str) -> BoundaryHomeo:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(fmt.COMMENT, 1)[0].strip()
        if line:
            lines.append((lineno, line.split()))

    if not lines or " ".join(lines[0][1]) != fmt.BHM_HEADER:
        raise FormatError(f"BHM must start with '{fmt.BHM_HEADER}'")

    coeffs = {}
    for lineno, tokens in lines[1:]:
        if tokens[0] != fmt.BHM_TERM_TAG or len(tokens) != 4:
            raise FormatError(f"line {lineno}: expected 'Z <n> <re> <im>'")
        try:
            n = int(tokens[1])
            c = complex(float(tokens[2]), float(tokens[3]))
        except ValueError as e:
            raise FormatError(f"line {lineno}: {e}") from e
        if n < 0 or n in coeffs:
            raise FormatError(f"line {lineno}: index {n} is negative or repeated")
        coeffs[n] = c

    return BoundaryHomeo(coeffs)


def write_bhm(bdry: BoundaryHomeo, path: Union[str, Path]) -> Path:
    path = write_text_atomic(format_bhm(bdry), path)
    logger.info(f"Wrote BHM boundary map to {path}")
    return path


def read_bhm(path: Union[str, Path]) -> BoundaryHomeo:
    return parse_bhm(Path(path).read_text(encoding="utf-8"))
