"""Exception hierarchy for the library.

Every raised error derives from WdvvDualError so callers (and the CLI) can
distinguish domain problems from programming errors.
"""


class WdvvDualError(Exception):
    """Base class for all library errors."""


class ContourError(WdvvDualError):
    """Singularity on a quadrature contour, or quadrature cannot proceed."""


class DerivativeError(WdvvDualError):
    """A Cauchy derivative disk hits a singularity of the integrand."""


class RootFindingError(WdvvDualError):
    """Polynomial root iteration failed to converge."""


class SeriesDomainError(WdvvDualError):
    """Argument outside the convergence domain of a series."""


class BranchCutError(WdvvDualError):
    """Evaluation requested on a branch cut."""


class TruncationError(WdvvDualError):
    """A series did not reach its tail tolerance within the term budget."""


class ChartError(WdvvDualError):
    """Chart invariant violated (coincident points, zero multiplicity, ...)."""


class DiscriminantError(ChartError):
    """Evaluation point is on or numerically too close to the discriminant."""


class OracleError(WdvvDualError):
    """Superpotential residue computation cannot proceed."""


class ClusteredRootsWarning(UserWarning):
    """Roots closer than the clustering threshold: non-simple critical point."""
