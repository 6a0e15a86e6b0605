"""
quadrature.py

Quadrature rules shared by the oracle computations.

Provides:
- lgwt(): Gauss-Legendre nodes/weights on [a, b]
- composite_gauss(): composite rule, a fixed number of nodes per unit length
- integrate_radial(): composite Gauss-Legendre with node doubling until the
  relative change drops below a tolerance
- trapezoid_angles(): the uniform M-point grid on [0, 2 pi)

Assumptions:
- integrands are smooth in rho (finite coefficient tables) and periodic in theta,
  so Gauss-Legendre converges geometrically and the trapezoid rule is exact on
  trigonometric polynomials of degree < M
"""


# Stdlib imports
import math
from typing import Callable

# Third-party imports
import numpy as np

# Internal imports
from src.utils.logger import logger


def lgwt(N: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """
    N-point Legendre-Gauss nodes and weights on [a, b].
    """
    p1, wq = np.polynomial.legendre.leggauss(N)

    # Linear map from [-1,1] to [a,b]
    pq = (a * (1 - p1) + b * (1 + p1)) / 2
    wq = wq * (b - a) / 2

    return pq, wq


def composite_gauss(a: float, b: float, per_unit: int, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """
    Composite Gauss-Legendre rule with about `per_unit` nodes per unit length,
    split into panels of `order` nodes.
    """
    n_nodes = max(order, int(math.ceil(per_unit * (b - a))))
    panels = max(1, int(math.ceil(n_nodes / order)))
    edges = np.linspace(a, b, panels + 1)

    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        p, w = lgwt(order, lo, hi)
        nodes.append(p)
        weights.append(w)

    return np.concatenate(nodes), np.concatenate(weights)


def integrate_radial(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    per_unit: int = 32,
    rel_tol: float = 1e-10,
    max_doublings: int = 8,
) -> tuple[float, int]:
    """
    Integrate f over [a, b] with composite Gauss-Legendre, doubling the node
    density until two successive estimates agree to rel_tol.

    Args:
        f: vectorised integrand, called with an array of nodes.

    Returns:
        (value, nodes_per_unit actually used)
    """
    nodes, weights = composite_gauss(a, b, per_unit)
    previous = float(np.dot(weights, f(nodes)))

    density = per_unit
    for _ in range(max_doublings):
        density *= 2
        nodes, weights = composite_gauss(a, b, density)
        current = float(np.dot(weights, f(nodes)))
        if abs(current - previous) <= rel_tol * max(1.0, abs(current)):
            return current, density
        previous = current

    logger.warning(f"Radial quadrature on [{a}, {b}] did not settle below {rel_tol}")
    return previous, density


def trapezoid_angles(M: int) -> np.ndarray:
    """Uniform M-point angular grid on [0, 2 pi)."""
    return 2.0 * np.pi * np.arange(M) / M
