"""
logger.py

Centralized logging configuration for nitsche-lab.

Features:
- writes to logs/app.log under project root (or NITSCHE_LOG_DIR)
- mirrors all output to stderr, stdout is reserved for command output
- UTF-8 encoding and INFO-level default
"""


# Stdlib imports
import logging
import os
import sys
from pathlib import Path


# Path setup
PROJECT_ROOT = Path(__file__).resolve().parents[2]
LOG_DIR = Path(os.getenv("NITSCHE_LOG_DIR", PROJECT_ROOT / "logs"))
LOG_DIR.mkdir(parents=True, exist_ok=True)

LOG_FILE = LOG_DIR / "app.log"


# Logging configuration
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(filename)s:%(lineno)s: %(message)s",
    handlers=[
        logging.FileHandler(LOG_FILE, encoding="utf-8"),
        logging.StreamHandler(sys.stderr),
    ],
)


# Logger instance
logger = logging.getLogger("nitsche_lab")
