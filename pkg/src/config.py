"""
config.py

Read run settings from the project .env file and expose them as module-level constants.

Features:
- .env is resolved against the project root, or taken from NITSCHE_ENV_FILE
- unparsable or non-positive values fall back to the default with a warning
- every numeric setting has a default, so a missing .env is fine
"""


# Stdlib imports
import os
from pathlib import Path


# Third-party imports
from dotenv import load_dotenv


# Internal imports
from src.utils.logger import LOG_DIR, logger  # noqa: F401  LOG_DIR is resolved before .env loads


# Path resolution
PROJECT_ROOT = Path(__file__).resolve().parents[1]
env_path = Path(os.getenv("NITSCHE_ENV_FILE", PROJECT_ROOT / ".env"))

if env_path.exists():
    load_dotenv(dotenv_path=env_path)
    logger.info(f"Loaded settings from {env_path.name}")
else:
    logger.info(f"No {env_path.name} found, using built-in defaults")


def env_number(name: str, default, cast=float):
    """
    Positive number from the environment, or default.
    """
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = cast(raw)
    except ValueError:
        logger.warning(f"{name}={raw!r} is not a valid {cast.__name__}, using {default}")
        return default
    if value <= 0:
        logger.warning(f"{name}={raw!r} must be positive, using {default}")
        return default
    return value


# Tolerances and determinism
DEFAULT_TOL = env_number("NITSCHE_TOL", 1e-8)
DEFAULT_SEED = env_number("NITSCHE_SEED", 7, int)


# Quadrature orders
ANGULAR_NODES = env_number("NITSCHE_ANGULAR_NODES", 256, int)
RADIAL_NODES_PER_UNIT = env_number("NITSCHE_RADIAL_NODES_PER_UNIT", 32, int)
RADIAL_REL_TOL = env_number("NITSCHE_RADIAL_REL_TOL", 1e-10)


# Random map generation
RANDOM_MAP_ORDER = env_number("NITSCHE_RANDOM_MAP_ORDER", 8, int)
RANDOM_DECAY = env_number("NITSCHE_RANDOM_DECAY", 2.0)
