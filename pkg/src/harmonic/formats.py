"""
formats.py

Central store of text templates for the coefficient file formats.

Principles:
- AHM (annulus harmonic map) and BHM (boundary homeomorphism) are
  line-oriented UTF-8 text, '#' starts a comment.
- Numbers are written with 17 significant digits so every float round-trips.
- Do NOT hand-format numbers elsewhere; use FLOAT below.
"""


# 1. Number formatting
FLOAT = "{:.17g}"
FLOAT_PERCENT = "%.17g"  # pandas float_format for CSV output


# 2. AHM: harmonic map on A(1, R)
AHM_HEADER = "AHM 1"
AHM_RADIUS = "R {R}"
AHM_LOG = "LOG {a0_re} {a0_im} {b0_re} {b0_im}"
AHM_TERM = "C {n} {an_re} {an_im} {bn_re} {bn_im}"

AHM_RADIUS_TAG = "R"
AHM_LOG_TAG = "LOG"
AHM_TERM_TAG = "C"


# 3. BHM: boundary homeomorphism xi(theta) = theta + zeta(theta)
BHM_HEADER = "BHM 1"
BHM_TERM = "Z {n} {re} {im}"

BHM_TERM_TAG = "Z"


# 4. Comments
COMMENT = "#"
