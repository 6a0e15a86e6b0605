"""
errors.py

Exception hierarchy for nitsche-lab.

Every error raised by the harmonic package derives from NitscheLabError, so the
CLI can map families of failures onto exit codes in one place.
"""


class NitscheLabError(Exception):
    """Base class for all library errors."""


class DomainError(NitscheLabError, ValueError):
    """A point, radius or parameter lies outside the admissible range."""


class NonFiniteCoefficientError(DomainError):
    """A coefficient table holds NaN or inf."""


class TruncationRangeError(DomainError):
    """N * log R exceeds the overflow cap."""


class IndexRangeError(DomainError):
    """Inner and outer Dirichlet data do not share an index range."""


class NotConformalError(DomainError):
    """A conformal-only operator received a map with antiholomorphic part."""


class NonMonotoneBoundaryError(DomainError):
    """xi'(theta) = 1 + zeta'(theta) is not positive everywhere."""


class SingularPointError(DomainError):
    """h_z vanishes where the second dilatation is requested."""


class NoHarmonicHomeomorphism(NitscheLabError):
    """The Nitsche bound fails, so no harmonic homeomorphism exists."""

    def __init__(self, R: float, R_star: float):
        self.R = R
        self.R_star = R_star
        self.deficit = 0.5 * (R + 1.0 / R) - R_star
        super().__init__(
            f"Nitsche bound violated for R={R}, R*={R_star}: deficit {self.deficit:.17g}"
        )


class NoLiftError(NitscheLabError):
    """phi = h_z conj(h_zbar) has no continuous square root on the annulus."""


class FormatError(NitscheLabError):
    """Malformed AHM or BHM text."""
