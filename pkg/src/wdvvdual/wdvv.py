"""Intersection-form matrices, third-derivative tensors, and the WDVV
associativity residual.

For a prepotential F with constant metric G in its flat coordinates, the
WDVV system demands, for every index quadruple (a, b, c, d),

    sum_{lm} c_{abl} G^{lm} c_{mcd}  -  sum_{lm} c_{dbl} G^{lm} c_{mca} = 0,

with c the fully symmetric tensor of third derivatives of F.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from .errors import WdvvDualError
from .numeric_core import DiffSpec, mixed_partial_3
from .prepotentials import PrepotentialModel

__all__ = [
    "MetricMatrix",
    "Tensor3",
    "WDVVReport",
    "intersection_metric",
    "structure_tensor",
    "wdvv_residual",
]


@dataclass(frozen=True)
class MetricMatrix:
    """Constant symmetric nondegenerate metric with cached inverse."""

    entries: np.ndarray
    inverse: np.ndarray = None

    def __post_init__(self):
        g = np.asarray(self.entries, dtype=complex)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError("metric must be square")
        if not np.allclose(g, g.T, atol=1e-12):
            raise ValueError("metric must be symmetric")
        if abs(np.linalg.det(g)) <= 1e-12:
            raise ValueError("metric is degenerate")
        inv = np.linalg.inv(g)
        if not np.allclose(inv @ g, np.eye(g.shape[0]), atol=1e-12):
            raise ValueError("inverse validation failed")
        object.__setattr__(self, "entries", g)
        object.__setattr__(self, "inverse", inv)

    @property
    def dim(self):
        return self.entries.shape[0]


@dataclass(frozen=True)
class Tensor3:
    """Fully symmetric complex rank-3 tensor over chart indices."""

    entries: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.entries, dtype=complex)
        if t.ndim != 3 or len(set(t.shape)) != 1:
            raise ValueError("tensor must be cubic")
        object.__setattr__(self, "entries", t)

    @staticmethod
    def from_canonical(dim, values):
        """Build from a dict {sorted index triple: value}, symmetrizing."""
        t = np.zeros((dim, dim, dim), dtype=complex)
        for (a, b, c), v in values.items():
            for p in {(a, b, c), (a, c, b), (b, a, c),
                      (b, c, a), (c, a, b), (c, b, a)}:
                t[p] = v
        return Tensor3(t)

    @property
    def dim(self):
        return self.entries.shape[0]

    def max_abs(self):
        return float(np.max(np.abs(self.entries)))


@dataclass(frozen=True)
class WDVVReport:
    """Outcome of one WDVV residual evaluation."""

    case: str
    point: tuple
    max_abs_residual: float
    max_relative_residual: float
    tolerance: float
    passed: bool
    worst_quadruples: tuple = ()
    notes: tuple = ()


def intersection_metric(case: str, rank: int,
                        flip_z_sign: bool = False) -> MetricMatrix:
    """Constant intersection form in flat dual coordinates.

    rational: G_ij = delta_ij + 1 over (z^1..z^l).
    elliptic: coordinates ordered (u, z^1..z^l, tau); G_{u tau} = pi^2 and
    G_ij = -(delta_ij + 1) on the z-block (symmetric-product convention for
    2 pi^2 du dtau).  `flip_z_sign` negates the z-block; it exists only as
    a negative control for the verification suite.
    """
    if case == "rational":
        if rank < 2:
            raise ValueError("rational rank must be >= 2")
        g = np.ones((rank, rank), dtype=complex) + np.eye(rank)
        return MetricMatrix(g)
    if case == "elliptic":
        if rank < 1:
            raise ValueError("elliptic rank must be >= 1")
        dim = rank + 2
        g = np.zeros((dim, dim), dtype=complex)
        g[0, dim - 1] = g[dim - 1, 0] = np.pi ** 2
        zblock = -(np.ones((rank, rank)) + np.eye(rank))
        if flip_z_sign:
            zblock = -zblock
        g[1:dim - 1, 1:dim - 1] = zblock
        return MetricMatrix(g)
    if case == "deformed":
        raise WdvvDualError("use oracle metric")
    raise ValueError("unknown case")


def structure_tensor(model: PrepotentialModel, point,
                     spec: DiffSpec | None = None) -> Tensor3:
    """All third derivatives of the model prepotential at a chart point."""
    if spec is None:
        spec = DiffSpec()
    n = model.ncoords
    F = model.evaluator(point)
    values = {}
    for triple in combinations_with_replacement(range(n), 3):
        values[triple] = mixed_partial_3(F, point, triple, spec)
    return Tensor3.from_canonical(n, values)


def wdvv_residual(tensor: Tensor3, metric: MetricMatrix, case: str = "",
                  point: tuple = (), tolerance: float = 1e-8,
                  n_worst: int = 3) -> WDVVReport:
    """Evaluate the WDVV residual of a structure tensor against a metric.

    The relative residual divides by (max |c|)^2 times the max-row-sum
    norm of G^{-1}, a scale-free measure.  Antisymmetry in the outer index
    pair lets the scan run over a < d only.
    """
    c = tensor.entries
    n = tensor.dim
    if metric.dim != n:
        raise ValueError("incompatible dimensions")
    ginv = metric.inverse
    scale = tensor.max_abs() ** 2 * float(
        np.max(np.sum(np.abs(ginv), axis=1)))
    worst = []
    max_abs = 0.0
    for a in range(n):
        for d in range(a + 1, n):
            k = c[a] @ ginv @ c[d]
            r = k - k.T
            idx = np.unravel_index(np.argmax(np.abs(r)), r.shape)
            val = float(np.abs(r[idx]))
            if val > max_abs:
                max_abs = val
            worst.append((val, (a, idx[0], idx[1], d)))
    worst.sort(key=lambda t: -t[0])
    rel = max_abs / scale if scale > 0 else 0.0
    notes = ()
    if n <= 2:
        notes = ("low-rank case",)
    return WDVVReport(
        case=case,
        point=tuple(complex(p) for p in point),
        max_abs_residual=max_abs,
        max_relative_residual=rel,
        tolerance=tolerance,
        passed=bool(rel < tolerance),
        worst_quadruples=tuple((q, v) for v, q in worst[:n_worst]),
        notes=notes,
    )
