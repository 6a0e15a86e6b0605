"""
annulus_core.py

Coefficient representation of harmonic maps on the normalized annulus A(1, R).

A map is the finite table

    h(z) = a0 log|z| + b0 + sum_{n != 0} (a_n z^n + b_n conj(z)^(-n))

Provides:
- AnnulusMap: immutable coefficient table (with rescaling from A(r, R))
- PolarJet: value and first derivatives at a point (or on a grid)
- evaluate() / evaluate_grid(): closed-form term-wise differentiation
- solve_dirichlet() / boundary_traces(): the two-circle Dirichlet problem and its inverse
- conformal_modulus(), is_conformal(), rotate(), laplacian_residual()
- AHM text format: format_ahm(), parse_ahm(), write_ahm(), read_ahm()

Assumptions:
- inner radius is always 1; tables are finite, so every operation is exact up to rounding
- N * log R is capped (defaults.overflow_cap) so R**N stays inside float64
"""


# Stdlib imports
import cmath
import math
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, Sequence, Union

# Third-party imports
import numpy as np

# Internal imports
import src.harmonic.defaults as defaults
import src.harmonic.formats as fmt
from src.harmonic.errors import (
    DomainError,
    FormatError,
    IndexRangeError,
    NonFiniteCoefficientError,
    TruncationRangeError,
)
from src.utils.logger import logger
from src.utils.table_helpers import write_text_atomic


# relative slack on |z| when checking the closed annulus
_RADIUS_SLACK = 1e-14


@dataclass(frozen=True)
class AnnulusMap:
    """
    Harmonic map on A(1, R) stored as a coefficient table.

    Args:
        R: outer radius (> 1)
        log_a0: coefficient of log|z|
        log_b0: constant term
        terms: n -> (a_n, b_n) for nonzero integers n
    """

    R: float
    log_a0: complex = 0j
    log_b0: complex = 0j
    terms: Mapping[int, tuple[complex, complex]] = field(default_factory=dict)

    def __post_init__(self):
        R = float(self.R)
        if not math.isfinite(R) or R <= 1.0:
            raise DomainError(f"Outer radius must be finite and > 1, got {self.R}")

        clean = {}
        for n, (a_n, b_n) in sorted(self.terms.items()):
            if int(n) != n or n == 0:
                raise DomainError(f"Term index must be a nonzero integer, got {n}")
            clean[int(n)] = (complex(a_n), complex(b_n))

        a0, b0 = complex(self.log_a0), complex(self.log_b0)
        values = [a0, b0] + [c for pair in clean.values() for c in pair]
        if not all(cmath.isfinite(c) for c in values):
            raise NonFiniteCoefficientError("Coefficient table holds NaN or inf")

        N = max((abs(n) for n in clean), default=0)
        if N * math.log(R) > defaults.overflow_cap:
            raise TruncationRangeError(
                f"N * log R = {N * math.log(R):.3f} exceeds cap {defaults.overflow_cap}"
            )

        object.__setattr__(self, "R", R)
        object.__setattr__(self, "log_a0", a0)
        object.__setattr__(self, "log_b0", b0)
        object.__setattr__(self, "terms", MappingProxyType(clean))

    @classmethod
    def from_general(
        cls,
        r: float,
        R: float,
        log_a0: complex = 0j,
        log_b0: complex = 0j,
        terms: Mapping[int, tuple[complex, complex]] | None = None,
    ) -> "AnnulusMap":
        """
        Rescale a map given on A(r, R) to A(1, R/r) by substituting w = r z.
        """
        if not (0 < r < R):
            raise DomainError(f"Need 0 < r < R, got r={r}, R={R}")

        rescaled = {
            n: (a_n * r**n, b_n * r ** (-n)) for n, (a_n, b_n) in (terms or {}).items()
        }
        return cls(
            R=R / r,
            log_a0=log_a0,
            log_b0=log_b0 + log_a0 * math.log(r),
            terms=rescaled,
        )

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(n, a_n, b_n) as numpy arrays, sorted by n."""
        n = np.array(list(self.terms.keys()), dtype=float)
        a = np.array([p[0] for p in self.terms.values()], dtype=complex)
        b = np.array([p[1] for p in self.terms.values()], dtype=complex)
        return n, a, b


@dataclass(frozen=True)
class PolarJet:
    """
    Value and first derivatives of h. Fields are scalars for evaluate()
    and arrays of a common shape for evaluate_grid().
    """

    value: complex
    d_rho: complex
    d_theta: complex
    d_z: complex
    d_zbar: complex
    jacobian: float
    grad_norm_sq: float


# HELPERS
def max_order(hmap: AnnulusMap) -> int:
    """Truncation order N (0 for a table with only the log/constant pair)."""
    return max((abs(n) for n in hmap.terms), default=0)


def coefficient_l1(hmap: AnnulusMap) -> float:
    """l1 norm of every stored coefficient."""
    total = abs(hmap.log_a0) + abs(hmap.log_b0)
    for a_n, b_n in hmap.terms.values():
        total += abs(a_n) + abs(b_n)
    return total


def _check_radius(hmap: AnnulusMap, rho) -> None:
    rho = np.asarray(rho, dtype=float)
    lo, hi = 1.0 - _RADIUS_SLACK, hmap.R * (1.0 + _RADIUS_SLACK)
    if np.any(rho < lo) or np.any(rho > hi):
        raise DomainError(f"Radius outside [1, {hmap.R}]: {rho.min()}..{rho.max()}")


def _jet(hmap: AnnulusMap, rho: np.ndarray, theta: np.ndarray) -> PolarJet:
    """Term-wise closed-form evaluation on broadcastable (rho, theta) arrays."""
    rho, theta = np.broadcast_arrays(np.asarray(rho, dtype=float), np.asarray(theta, dtype=float))
    z = rho * np.exp(1j * theta)
    zbar = np.conj(z)

    a0, b0 = hmap.log_a0, hmap.log_b0
    value = a0 * np.log(rho) + b0
    d_rho = a0 / rho + 0j * rho
    d_theta = np.zeros_like(z)
    d_z = a0 / (2.0 * z)
    d_zbar = a0 / (2.0 * zbar)

    for n, (a_n, b_n) in hmap.terms.items():
        e = np.exp(1j * n * theta)
        up = rho ** float(n)
        down = rho ** float(-n)

        value = value + (a_n * up + b_n * down) * e
        d_rho = d_rho + n * (a_n * up - b_n * down) / rho * e
        d_theta = d_theta + 1j * n * (a_n * up + b_n * down) * e
        d_z = d_z + n * a_n * z ** (n - 1)
        d_zbar = d_zbar - n * b_n * zbar ** (-n - 1)

    jacobian = np.abs(d_z) ** 2 - np.abs(d_zbar) ** 2
    grad_norm_sq = np.abs(d_rho) ** 2 + np.abs(d_theta) ** 2 / rho**2

    return PolarJet(value, d_rho, d_theta, d_z, d_zbar, jacobian, grad_norm_sq)


# EVALUATION
def evaluate(hmap: AnnulusMap, z: complex) -> PolarJet:
    """
    Evaluate h and its first derivatives at a single point 1 <= |z| <= R.
    """
    rho, theta = abs(z), cmath.phase(z)
    _check_radius(hmap, rho)

    jet = _jet(hmap, np.array(rho), np.array(theta))
    return PolarJet(
        value=complex(jet.value),
        d_rho=complex(jet.d_rho),
        d_theta=complex(jet.d_theta),
        d_z=complex(jet.d_z),
        d_zbar=complex(jet.d_zbar),
        jacobian=float(jet.jacobian),
        grad_norm_sq=float(jet.grad_norm_sq),
    )


def evaluate_grid(hmap: AnnulusMap, rho, theta) -> PolarJet:
    """
    Vectorised evaluation on the polar grid rho x theta.

    Returns:
        PolarJet whose fields are arrays of shape (len(rho), len(theta))
    """
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    _check_radius(hmap, rho)
    return _jet(hmap, rho[:, None], theta[None, :])


def values(hmap: AnnulusMap, z) -> np.ndarray:
    """h(z) only, for arrays of points (no range check)."""
    z = np.asarray(z, dtype=complex)
    rho = np.abs(z)
    out = hmap.log_a0 * np.log(rho) + hmap.log_b0
    zbar = np.conj(z)
    for n, (a_n, b_n) in hmap.terms.items():
        out = out + a_n * z**n + b_n * zbar ** (-n)
    return out


def laplacian_residual(hmap: AnnulusMap, z: complex, step: float = 1e-3) -> float:
    """
    |5-point discrete Laplacian| of h at an interior point z.
    """
    if not (1.0 + step <= abs(z) <= hmap.R - step):
        raise DomainError(f"Stencil around {z} with step {step} leaves the annulus")

    stencil = np.array([z + step, z - step, z + 1j * step, z - 1j * step, z])
    h = values(hmap, stencil)
    return float(abs(h[0] + h[1] + h[2] + h[3] - 4.0 * h[4]) / step**2)


# DIRICHLET PROBLEM
def _as_index_map(data: Union[Mapping[int, complex], Sequence[complex]]) -> dict[int, complex]:
    """Accept {n: c_n} or a length-(2N+1) sequence indexed -N..N."""
    if isinstance(data, Mapping):
        return {int(n): complex(c) for n, c in data.items()}

    seq = list(data)
    if len(seq) % 2 != 1:
        raise IndexRangeError(f"Coefficient sequence must have odd length, got {len(seq)}")
    N = len(seq) // 2
    return {n: complex(seq[n + N]) for n in range(-N, N + 1)}


def _solve_mode(n: int, c_in: complex, c_out: complex, R: float) -> tuple[complex, complex]:
    """
    Solve a + b = c_in, a R^n + b R^-n = c_out for one nonzero mode.
    """
    if abs(n) * math.log(R) > defaults.scaled_solve_switch:
        # scaled unknowns: divide through by R^|n|
        s = R ** (-abs(n))
        den = 1.0 - s * s
        near = (c_in - c_out * s) / den
        far = (c_out * s - c_in * s * s) / den
        return (far, near) if n > 0 else (near, far)

    up, down = R**n, R ** (-n)
    den = up - down
    return (c_out - c_in * down) / den, (c_in * up - c_out) / den


def solve_dirichlet(inner, outer, R: float) -> AnnulusMap:
    """
    Harmonic map on A(1, R) with prescribed Fourier data on T and on T_R.

    Args:
        inner, outer: {n: c_n} mappings or length-(2N+1) sequences indexed -N..N.
        R: outer radius.

    Returns:
        AnnulusMap whose boundary traces reproduce both data sets.
    """
    if not R > 1.0:
        raise DomainError(f"Outer radius must be > 1, got {R}")

    c_in, c_out = _as_index_map(inner), _as_index_map(outer)
    N_in = max((abs(n) for n in c_in), default=0)
    N_out = max((abs(n) for n in c_out), default=0)
    if N_in != N_out:
        raise IndexRangeError(f"Inner order {N_in} differs from outer order {N_out}")

    b0 = c_in.get(0, 0j)
    a0 = (c_out.get(0, 0j) - b0) / math.log(R)

    terms = {}
    for n in sorted(set(c_in) | set(c_out)):
        if n == 0:
            continue
        terms[n] = _solve_mode(n, c_in.get(n, 0j), c_out.get(n, 0j), R)

    hmap = AnnulusMap(R=R, log_a0=a0, log_b0=b0, terms=terms)
    logger.info(f"Solved Dirichlet problem on A(1, {R}) with N = {N_in}")
    return hmap


def boundary_traces(hmap: AnnulusMap) -> tuple[dict[int, complex], dict[int, complex]]:
    """
    Fourier coefficients of h on T and on T_R.
    """
    R = hmap.R
    inner = {0: hmap.log_b0}
    outer = {0: hmap.log_a0 * math.log(R) + hmap.log_b0}
    for n, (a_n, b_n) in hmap.terms.items():
        inner[n] = a_n + b_n
        outer[n] = a_n * R**n + b_n * R ** (-n)
    return inner, outer


# SIMPLE PREDICATES / TRANSFORMS
def conformal_modulus(hmap: AnnulusMap) -> float:
    """Mod A(1, R) = log R."""
    return math.log(hmap.R)


def is_conformal(hmap: AnnulusMap, tol: float = defaults.conformal_tol) -> bool:
    """
    True iff max(|a0|, max|b_n|) <= tol * max|a_n|.
    The all-zero table counts as conformal.
    """
    if tol < 0:
        raise DomainError(f"Tolerance must be nonnegative, got {tol}")

    anti = max([abs(hmap.log_a0)] + [abs(b) for _, b in hmap.terms.values()])
    holo = max([abs(a) for a, _ in hmap.terms.values()], default=0.0)
    return anti <= tol * holo


def rotate(hmap: AnnulusMap, alpha: float) -> AnnulusMap:
    """Post-compose with the rotation e^{i alpha}."""
    u = cmath.exp(1j * alpha)
    return AnnulusMap(
        R=hmap.R,
        log_a0=u * hmap.log_a0,
        log_b0=u * hmap.log_b0,
        terms={n: (u * a, u * b) for n, (a, b) in hmap.terms.items()},
    )


# AHM TEXT FORMAT
def format_ahm(hmap: AnnulusMap) -> str:
    f = fmt.FLOAT.format
    lines = [
        fmt.AHM_HEADER,
        fmt.AHM_RADIUS.format(R=f(hmap.R)),
        fmt.AHM_LOG.format(
            a0_re=f(hmap.log_a0.real),
            a0_im=f(hmap.log_a0.imag),
            b0_re=f(hmap.log_b0.real),
            b0_im=f(hmap.log_b0.imag),
        ),
    ]
    for n, (a_n, b_n) in hmap.terms.items():
        lines.append(
            fmt.AHM_TERM.format(
                n=n,
                an_re=f(a_n.real),
                an_im=f(a_n.imag),
                bn_re=f(b_n.real),
                bn_im=f(b_n.imag),
            )
        )
    return "\n".join(lines) + "\n"


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(fmt.COMMENT, 1)[0].strip()
        if line:
            out.append((lineno, line.split()))
    return out


def _floats(lineno: int, tokens: list[str], count: int) -> list[float]:
    if len(tokens) != count:
        raise FormatError(f"line {lineno}: expected {count} numbers, got {len(tokens)}")
    try:
        return [float(t) for t in tokens]
    except ValueError as e:
        raise FormatError(f"line {lineno}: {e}") from e


def parse_ahm(text: str) -> AnnulusMap:
    """
    Parse AHM text. Raises FormatError on malformed input and the usual
    DomainError family on an inadmissible table.
    """
    lines = _content_lines(text)
    if len(lines) < 3:
        raise FormatError("AHM needs a header, an R line and a LOG line")

    (l1, header), (l2, radius), (l3, log_line) = lines[:3]
    if " ".join(header) != fmt.AHM_HEADER:
        raise FormatError(f"line {l1}: expected '{fmt.AHM_HEADER}'")
    if radius[0] != fmt.AHM_RADIUS_TAG:
        raise FormatError(f"line {l2}: expected '{fmt.AHM_RADIUS_TAG} <decimal>'")
    if log_line[0] != fmt.AHM_LOG_TAG:
        raise FormatError(f"line {l3}: expected '{fmt.AHM_LOG_TAG}' line")

    (R,) = _floats(l2, radius[1:], 1)
    a0_re, a0_im, b0_re, b0_im = _floats(l3, log_line[1:], 4)

    terms = {}
    for lineno, tokens in lines[3:]:
        if tokens[0] != fmt.AHM_TERM_TAG or len(tokens) != 6:
            raise FormatError(f"line {lineno}: expected 'C <n> <an_re> <an_im> <bn_re> <bn_im>'")
        try:
            n = int(tokens[1])
        except ValueError as e:
            raise FormatError(f"line {lineno}: index is not an integer") from e
        if n == 0 or n in terms:
            raise FormatError(f"line {lineno}: index {n} is zero or repeated")
        an_re, an_im, bn_re, bn_im = _floats(lineno, tokens[2:], 4)
        terms[n] = (complex(an_re, an_im), complex(bn_re, bn_im))

    return AnnulusMap(
        R=R,
        log_a0=complex(a0_re, a0_im),
        log_b0=complex(b0_re, b0_im),
        terms=terms,
    )


def write_ahm(hmap: AnnulusMap, path: Union[str, Path]) -> Path:
    path = write_text_atomic(format_ahm(hmap), path)
    logger.info(f"Wrote AHM map (R={hmap.R}, N={max_order(hmap)}) to {path}")
    return path


def read_ahm(path: Union[str, Path]) -> AnnulusMap:
    text = Path(path).read_text(encoding="utf-8")
    hmap = parse_ahm(text)
    logger.info(f"Read AHM map (R={hmap.R}, N={max_order(hmap)}) from {path}")
    return hmap
