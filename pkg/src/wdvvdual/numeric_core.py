"""Complex-numerics kernel: contour quadrature, Cauchy derivatives, mixed
partials of holomorphic scalar fields, and polynomial root finding.

All quadrature is the periodic trapezoid rule on equispaced circle nodes,
which is spectrally accurate for integrands analytic in an annulus around
the contour.  Functions passed in may be vectorized over numpy arrays of
evaluation points; scalar-only callables are handled by a fallback loop.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import groupby

import numpy as np

from .errors import (
    ClusteredRootsWarning,
    ContourError,
    DerivativeError,
    RootFindingError,
    WdvvDualError,
)

__all__ = [
    "ContourSpec",
    "DiffSpec",
    "contour_integral",
    "cauchy_derivative",
    "mixed_partial_3",
    "polynomial_roots",
]


@dataclass(frozen=True)
class ContourSpec:
    """Circle contour for residue quadrature."""

    center: complex
    radius: float
    samples: int = 256

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("contour radius must be positive")
        if self.samples < 16 or self.samples % 2:
            raise ValueError("samples must be an even integer >= 16")


@dataclass(frozen=True)
class DiffSpec:
    """Control for Cauchy-circle differentiation."""

    radius: float = 0.05
    samples: int = 64
    tolerance: float = 1e-10

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("derivative radius must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.samples < 16 or self.samples % 2:
            raise ValueError("samples must be an even integer >= 16")


def _eval_on_nodes(f, nodes):
    """Evaluate f on an array of nodes, vectorized when f supports it."""
    try:
        vals = np.asarray(f(nodes), dtype=complex)
        if vals.shape == nodes.shape:
            return vals
    except WdvvDualError:
        raise
    except Exception:
        pass
    return np.array([f(v) for v in nodes.ravel()], dtype=complex).reshape(nodes.shape)


def contour_integral(f, spec: ContourSpec, phase: float = 0.0) -> complex:
    """(1/2pi i) * closed circle integral of f, trapezoid rule.

    `phase` rotates the node set; any phase integrates the same circle.
    Raises ContourError if a sample value is non-finite.
    """
    n = spec.samples
    theta = phase + 2.0 * np.pi * np.arange(n) / n
    rot = np.exp(1j * theta)
    nodes = spec.center + spec.radius * rot
    vals = _eval_on_nodes(f, nodes)
    if not np.all(np.isfinite(vals)):
        raise ContourError("singularity on contour")
    # dv = i r e^{i theta} dtheta; the 1/(2 pi i) cancels all prefactors
    return spec.radius * np.sum(vals * rot) / n


def cauchy_derivative(f, center: complex, order: int, spec: DiffSpec,
                      phase: float = 0.0) -> complex:
    """m-th derivative of f at center via the Cauchy integral formula.

    f must be holomorphic on the closed disk |v - center| <= spec.radius.
    """
    if order < 0:
        raise ValueError("derivative order must be >= 0")
    n = spec.samples
    theta = phase + 2.0 * np.pi * np.arange(n) / n
    nodes = center + spec.radius * np.exp(1j * theta)
    try:
        vals = _eval_on_nodes(f, nodes)
    except WdvvDualError as exc:
        raise DerivativeError("derivative disk hits singularity") from exc
    if not np.all(np.isfinite(vals)):
        raise DerivativeError("derivative disk hits singularity")
    weights = np.exp(-1j * order * theta) * (math.factorial(order) /
                                             (n * spec.radius ** order))
    return complex(np.sum(vals * weights))


def _derivative_weights(order: int, radius: float, samples: int):
    theta = 2.0 * np.pi * np.arange(samples) / samples
    w = np.exp(-1j * order * theta) * (math.factorial(order) /
                                       (samples * radius ** order))
    nodes = radius * np.exp(1j * theta)
    return nodes, w


def mixed_partial_3(F, point, indices, spec: DiffSpec | None = None) -> complex:
    """Third mixed partial of a chart scalar F at a chart point.

    F is called as F(coords) with `coords` a list of coordinate values that
    broadcast together (arrays during quadrature).  `indices` is a triple of
    coordinate positions; it is canonicalized (sorted) first, so the result
    is bit-for-bit invariant under index permutations.  Repeated indices are
    merged into a single higher-order Cauchy derivative.

    If a singularity flag is raised (domain error from F, or non-finite
    samples), the per-coordinate radius is halved, up to 4 times.
    """
    if spec is None:
        spec = DiffSpec()
    if len(indices) != 3:
        raise ValueError("exactly three derivative indices required")
    point = [complex(c) for c in point]
    ncoord = len(point)
    for a in indices:
        if not 0 <= a < ncoord:
            raise ValueError("derivative index out of range")
    canon = sorted(indices)
    groups = [(c, len(list(g))) for c, g in groupby(canon)]

    last_exc = None
    for attempt in range(5):
        radius = spec.radius / 2 ** attempt
        try:
            return _mixed_partial_once(F, point, groups, radius, spec.samples)
        except WdvvDualError as exc:
            last_exc = exc
    raise DerivativeError("derivative disk hits singularity") from last_exc


def _mixed_partial_once(F, point, groups, radius, samples):
    node_sets, weight_sets = [], []
    for _, order in groups:
        nodes, w = _derivative_weights(order, radius, samples)
        node_sets.append(nodes)
        weight_sets.append(w)
    k = len(groups)
    coords = []
    for i, center in enumerate(point):
        g = next((j for j, (c, _) in enumerate(groups) if c == i), None)
        if g is None:
            coords.append(center)
        else:
            shape = [1] * k
            shape[g] = samples
            coords.append(center + node_sets[g].reshape(shape))
    expected = tuple(samples for _ in range(k))
    try:
        vals = np.broadcast_to(np.asarray(F(coords), dtype=complex), expected)
    except WdvvDualError:
        raise
    except Exception:
        grids = np.broadcast_arrays(*[np.broadcast_to(c, expected) for c in coords])
        flat = zip(*(g.ravel() for g in grids))
        vals = np.array([F(list(pt)) for pt in flat], dtype=complex).reshape(expected)
    if not np.all(np.isfinite(vals)):
        raise DerivativeError("derivative disk hits singularity")
    acc = vals
    for g in reversed(range(k)):
        acc = np.tensordot(acc, weight_sets[g], axes=([g], [0]))
    return complex(acc)


def polynomial_roots(coefficients, tolerance: float = 1e-13,
                     max_iterations: int = 500) -> np.ndarray:
    """All complex roots, with multiplicity, by Durand-Kerner iteration.

    `coefficients` are ascending: c[0] + c[1] v + ... + c[n] v^n, with
    c[n] != 0 and n >= 1.  Iteration starts from a perturbed circle and
    stops when the largest update is below `tolerance`.  Roots closer than
    10*tolerance pairwise trigger a ClusteredRootsWarning ("non-simple
    critical point").
    """
    c = np.asarray(coefficients, dtype=complex)
    if c.ndim != 1 or c.size < 2:
        raise ValueError("need a polynomial of degree >= 1")
    if c[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    c = c / c[-1]
    n = c.size - 1

    bound = 1.0 + float(np.max(np.abs(c[:-1]))) if n >= 1 else 1.0
    angles = 2.0 * np.pi * np.arange(n) / n + 0.39
    roots = (0.6 * bound) * np.exp(1j * angles) * (1.0 + 0.01 * np.arange(n))

    powers = np.arange(n + 1)
    for _ in range(max_iterations):
        p = np.sum(c * roots[:, None] ** powers, axis=1)
        diff = roots[:, None] - roots[None, :]
        np.fill_diagonal(diff, 1.0)
        denom = np.prod(diff, axis=1)
        step = p / denom
        roots = roots - step
        if np.max(np.abs(step)) < tolerance:
            break
    else:
        raise RootFindingError("root finding failed")

    if n > 1:
        d = np.abs(roots[:, None] - roots[None, :])
        np.fill_diagonal(d, np.inf)
        if np.min(d) < 10 * tolerance:
            warnings.warn("non-simple critical point", ClusteredRootsWarning)
    return roots
