"""Dual prepotentials of Frobenius-manifold duality and the special
functions needed to verify, numerically, that they satisfy the WDVV
associativity equations.
"""

from .errors import (
    BranchCutError,
    ChartError,
    ClusteredRootsWarning,
    ContourError,
    DerivativeError,
    DiscriminantError,
    OracleError,
    RootFindingError,
    SeriesDomainError,
    TruncationError,
    WdvvDualError,
)
from .numeric_core import (
    ContourSpec,
    DiffSpec,
    cauchy_derivative,
    contour_integral,
    mixed_partial_3,
    polynomial_roots,
)
from .special_functions import (
    BranchAnchor,
    ModularPoint,
    SeriesPolicy,
    eisenstein,
    elliptic_polylog,
    epolylog3_mixed_partial,
    lambdaN,
    polylog,
    polylog_inverted,
    theta1,
    theta1_log_derivative,
)

__version__ = "0.1.0"
