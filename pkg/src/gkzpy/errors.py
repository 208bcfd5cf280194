"""Exception hierarchy.

Each error class carries the process exit code the command line reports for it.
"""

from typing import ClassVar


class GKZError(Exception):
    """Base exception for gkzpy errors."""

    exit_code: ClassVar[int] = 2


class InputError(GKZError, ValueError):
    """Malformed matrix, vector or problem specification."""


class LatticeError(InputError):
    """The columns of a configuration matrix do not generate the integer lattice."""


class LatticeBoundExhausted(GKZError):
    """An enumeration bound ran out before all lattice classes were found."""


class GeometryError(GKZError):
    """Degenerate polyhedral input, such as a zero-dimensional hull."""


class NonSimplicialCell(GeometryError):
    """The weight vector induces a non-simplicial cell and must be perturbed."""


class RegularityMismatch(GeometryError):
    """The slope test and the face comparison disagree about regularity along t = 0."""


class AnalyticObstruction(GKZError):
    """The requested object does not exist for these data."""

    exit_code: ClassVar[int] = 3


class NotPointed(AnalyticObstruction):
    """The columns do not lie in an open half-space through the origin."""


class NegativeTExponent(AnalyticObstruction):
    """Some direction of the support lowers the power of t without bound."""


class NonInvertibleGamma(AnalyticObstruction):
    """The map between series at t=0 and t=infinity is not invertible for this offset."""


class NoSlope(AnalyticObstruction):
    """No modified slope exists, so there are no divergent solutions to build."""


class GammaPole(AnalyticObstruction):
    """A Borel coefficient would require the Gamma function at a pole."""


class SingularDirection(AnalyticObstruction):
    """The integration ray passes through a singularity of the Borel transform."""


class DomainViolation(AnalyticObstruction):
    """The point lies outside the sector or disc where the sum is defined."""


class StepTooClose(AnalyticObstruction):
    """Analytic continuation would step onto or next to a singular point."""


class NonMinimalNegativeSupport(UserWarning):
    """The series exists but is not annihilated by the hypergeometric system."""
