"""
gen_maps.py

Generate seeded random inputs for sweeps and property checks.

Provides generators for:
- annulus maps (Laurent tables with a log term)
- holomorphic annulus maps (conformal case)
- monotone boundary homeomorphisms of the circle

Assumptions:
- every generator takes a numpy Generator; seeds come from config.DEFAULT_SEED
- coefficients a_n, b_n are complex Gaussians scaled by |n|^-decay
- boundary maps keep 2 sum n |zeta_n| <= budget < 1, so xi' >= 1 - budget
"""


# Third-party imports
import numpy as np

# Internal imports
import src.config as config
import src.harmonic.defaults as defaults
from src.harmonic.annulus_core import AnnulusMap
from src.harmonic.disk_maps import BoundaryHomeo
from src.harmonic.errors import DomainError
from src.utils.logger import logger


# HELPER FUNCTIONS
def _complex_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)


def make_rng(seed: int | None = None) -> np.random.Generator:
    return np.random.default_rng(config.DEFAULT_SEED if seed is None else seed)


# GENERATORS
def random_annulus_map(
    rng: np.random.Generator,
    order: int | None = None,
    decay: float | None = None,
    R: float = 2.0,
    log_term: bool = True,
) -> AnnulusMap:
    """Random table with |n| <= order, plus a0 log|z| + b0 when log_term."""
    order = config.RANDOM_MAP_ORDER if order is None else order
    decay = config.RANDOM_DECAY if decay is None else decay
    if order < 1:
        raise DomainError(f"Map order must be >= 1, got {order}")

    ns = [n for n in range(-order, order + 1) if n != 0]
    scale = np.abs(np.array(ns, dtype=float)) ** -decay
    a = _complex_normal(rng, len(ns)) * scale
    b = _complex_normal(rng, len(ns)) * scale
    log_a0, log_b0 = _complex_normal(rng, 2) if log_term else (0j, 0j)

    terms = {n: (complex(a_n), complex(b_n)) for n, a_n, b_n in zip(ns, a, b)}
    return AnnulusMap(R=R, log_a0=complex(log_a0), log_b0=complex(log_b0), terms=terms)


def random_conformal_map(
    rng: np.random.Generator,
    order: int | None = None,
    decay: float | None = None,
    R: float = 2.0,
) -> AnnulusMap:
    """Holomorphic table sum a_n z^n, |n| <= order, no log term."""
    order = config.RANDOM_MAP_ORDER if order is None else order
    decay = config.RANDOM_DECAY if decay is None else decay

    ns = [n for n in range(-order, order + 1) if n != 0]
    a = _complex_normal(rng, len(ns)) * np.abs(np.array(ns, dtype=float)) ** -decay
    return AnnulusMap(R=R, terms={n: (complex(a_n), 0j) for n, a_n in zip(ns, a)})


def random_boundary_homeo(
    rng: np.random.Generator,
    order: int = defaults.zeta_order,
    budget: float = defaults.zeta_budget,
) -> BoundaryHomeo:
    """
    xi = theta + zeta with random zeta_n, rescaled so 2 sum n |zeta_n| equals
    budget * u for a uniform u in (0, 1].
    """
    if not (0.0 < budget < 1.0):
        raise DomainError(f"Slope budget must lie in (0, 1), got {budget}")

    raw = _complex_normal(rng, order)
    spent = 2.0 * np.sum(np.arange(1, order + 1) * np.abs(raw))
    target = budget * (1.0 - rng.random())
    coeffs = {0: complex(rng.uniform(-np.pi, np.pi))}
    coeffs.update({n: complex(c * target / spent) for n, c in enumerate(raw, start=1)})

    bdry = BoundaryHomeo(coeffs)
    logger.debug(f"Random boundary map with slope budget {bdry.slope_budget():.4f}")
    return bdry
