"""Independent residue-formula computation of eta, c, g, c* from a
superpotential, used as the oracle against the closed-form prepotentials.

Rational / deformed case: lambda(v) = prod (v - z^i)^{k_i} on the
constraint plane; the tensors are minus the sums of residues of the
Landau-Ginzburg integrands over the critical points d lambda = 0.

Elliptic case:
    lambda(v) = e^{2 pi i u} prod_{i=0}^{l} theta1(v - z_i|tau) / theta1(v|tau)
on sum z_i = 0.  Critical points are never located; the residue sum is
relocated to the known points (the zeros z_0..z_l of lambda and its pole
v = 0), one circle around each inside a fundamental cell, and the tensors
are minus the sum of those residues.

Two convention notes, both pinned by cross-module equality tests:

* the tau-slot of the elliptic integrand uses the lattice-covariant
  derivative  d_tau log lambda + (pi i / 2) (theta1'/theta1)(v) lambda'/lambda;
  with the plain d_tau the integrand is not elliptic and the relocated
  g_{u tau} would vanish instead of equalling pi^2.  `param_derivative`
  itself still returns the plain d_tau lambda (it is what a finite
  difference in tau measures).
* the rational/deformed c* residue sums are doubled: the quarter-weight
  closed-form prepotential sums over ordered pairs, which is twice the
  integral of the bare residue formula (check an A_1 superpotential by
  hand: residue gives 4/z against d^3/dz^3 of 2 z^2 log 4z^2 = 8/z).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from .errors import OracleError, WdvvDualError
from .numeric_core import DiffSpec, polynomial_roots
from .prepotentials import EllipticChart, RationalChart
from .special_functions import DEFAULT_POLICY, SeriesPolicy, _theta1_raw
from .wdvv import Tensor3

__all__ = [
    "Superpotential",
    "ResidueBudget",
    "lambda_eval",
    "param_derivative",
    "tensors_from_critical_points",
    "tensors_from_complementary_contours",
    "relocation_residual",
]


@dataclass(frozen=True)
class ResidueBudget:
    """Contour sizing and parameter-derivative control for residue sums."""

    radius_fraction: float = 0.25
    samples: int = 256
    param_spec: DiffSpec = field(default=DiffSpec(radius=0.02, samples=32))

    def __post_init__(self):
        if not 0.0 < self.radius_fraction <= 0.5:
            raise ValueError("radius fraction must lie in (0, 0.5]")


@dataclass(frozen=True)
class Superpotential:
    """A concrete lambda(v) tied to a chart."""

    case: str
    chart: object

    def __post_init__(self):
        if self.case in ("rational", "deformed"):
            if not isinstance(self.chart, RationalChart):
                raise ValueError("rational/deformed cases need a RationalChart")
        elif self.case == "elliptic":
            if not isinstance(self.chart, EllipticChart):
                raise ValueError("elliptic case needs an EllipticChart")
        else:
            raise ValueError("unknown case")

    @property
    def rank(self):
        return self.chart.rank

    def coord_vector(self):
        ch = self.chart
        if self.case == "elliptic":
            return [ch.u, *ch.coords, ch.m.tau]
        return list(ch.coords)

    def pole_points(self):
        """v-poles of lambda (excluding infinity)."""
        if self.case == "elliptic":
            return [0.0 + 0j]
        ks = self.chart.multiplicities
        return [z for z, k in zip(self.chart.full_coords(), ks) if k < 0]

    def zero_points(self):
        if self.case == "elliptic":
            return list(self.chart.full_coords())
        ks = self.chart.multiplicities
        return [z for z, k in zip(self.chart.full_coords(), ks) if k > 0]


def _lambda_rational(full, ks, v):
    acc = np.ones_like(np.asarray(v, dtype=complex))
    for z, k in zip(full, ks):
        acc = acc * (v - z) ** k
    return acc


def _lambda_elliptic(u, zs, tau, v, policy):
    v = np.asarray(v, dtype=complex)
    z0 = -sum(zs)
    full = [z0] + list(zs)
    num = np.ones(np.broadcast(v, np.asarray(tau)).shape, dtype=complex)
    for z in full:
        num = num * _theta1_raw(v - z, tau, 0, policy)
    den = _theta1_raw(v, tau, 0, policy) ** len(full)
    return np.exp(2j * np.pi * u) * num / den


def _evaluator_from_vector(sp: Superpotential, vector, policy):
    """lambda(v) with chart coordinates taken from `vector` (arrays ok)."""
    if sp.case == "elliptic":
        u, tau = vector[0], vector[-1]
        zs = list(vector[1:-1])
        return lambda v: _lambda_elliptic(u, zs, tau, v, policy)
    ks = sp.chart.multiplicities
    zs = [np.asarray(z, dtype=complex) for z in vector]
    z0 = -sum(k * z for k, z in zip(ks[1:], zs)) / ks[0]
    full = [z0] + zs
    return lambda v: _lambda_rational(full, ks, v)


def lambda_eval(sp: Superpotential, v,
                policy: SeriesPolicy = DEFAULT_POLICY):
    """lambda(v); v may be an array."""
    varr = np.asarray(v, dtype=complex)
    for p in sp.pole_points():
        if sp.case == "elliptic":
            if _torus_min_distance(varr, [p], sp.chart.m.tau) < 1e-8:
                raise OracleError("evaluation at pole")
        elif float(np.min(np.abs(varr - p))) < 1e-8:
            raise OracleError("evaluation at pole")
    out = _evaluator_from_vector(sp, sp.coord_vector(), policy)(varr)
    if out.ndim == 0:
        return complex(out)
    return out


def param_derivative(sp: Superpotential, a: int, v,
                     budget: ResidueBudget | None = None,
                     policy: SeriesPolicy = DEFAULT_POLICY):
    """d lambda / d p^a at fixed v (array-valued over v).

    Chart coordinates are indexed as in PrepotentialModel: z^1..z^l for the
    rational/deformed cases, (u, z^1..z^l, tau) for the elliptic case.  The
    u-derivative is returned analytically as 2 pi i lambda; the others use
    a Cauchy circle in the parameter.
    """
    if budget is None:
        budget = ResidueBudget()
    vector = sp.coord_vector()
    n = len(vector)
    if not 0 <= a < n:
        raise ValueError("coordinate index out of range")
    varr = np.asarray(v, dtype=complex)
    if sp.case == "elliptic" and a == 0:
        out = 2j * np.pi * lambda_eval(sp, varr, policy)
        return out
    spec = budget.param_spec
    theta = 2.0 * np.pi * np.arange(spec.samples) / spec.samples
    ring = spec.radius * np.exp(1j * theta)
    weights = np.exp(-1j * theta) / (spec.samples * spec.radius)
    acc = np.zeros(varr.shape, dtype=complex)
    for node, w in zip(ring, weights):
        shifted = list(vector)
        shifted[a] = vector[a] + node
        vals = _evaluator_from_vector(sp, shifted, policy)(varr)
        if not np.all(np.isfinite(vals)):
            raise OracleError("parameter singularity")
        acc = acc + w * vals
    return acc


def _v_derivative(evaluator, v, singularities, tau=None, fraction=0.3,
                  samples=32):
    """lambda'(v) via per-node Cauchy circles of radius fraction * distance
    to the nearest v-singularity."""
    v = np.asarray(v, dtype=complex)
    if tau is None:
        dist = np.min(np.abs(v[..., None] -
                             np.asarray(singularities)[None, :]), axis=-1)
    else:
        dist = _torus_distance_array(v, singularities, tau)
    r = fraction * dist
    theta = 2.0 * np.pi * np.arange(samples) / samples
    nodes = v[..., None] + r[..., None] * np.exp(1j * theta)
    vals = evaluator(nodes)
    w = np.exp(-1j * theta) / samples
    return np.sum(vals * w, axis=-1) / r


def _torus_lattice_reduce(p, tau):
    """Representative of p in the fundamental cell around 0."""
    p = complex(p)
    w1, w2 = math.pi, math.pi * complex(tau)
    b = p.imag / w2.imag
    a = (p.real - b * w2.real) / w1
    return p - round(a) * w1 - round(b) * w2


def _torus_distance_array(v, points, tau):
    w1, w2 = math.pi, math.pi * complex(tau)
    v = np.asarray(v, dtype=complex)
    best = np.full(v.shape, np.inf)
    for p in points:
        d = v - complex(p)
        b = d.imag / w2.imag
        a = (d.real - b * w2.real) / w1
        for da in (np.floor(a), np.ceil(a)):
            for db in (np.floor(b), np.ceil(b)):
                best = np.minimum(best, np.abs(d - da * w1 - db * w2))
    return best


def _torus_min_distance(v, points, tau):
    return float(np.min(_torus_distance_array(v, points, tau)))


def _critical_points(sp: Superpotential, tolerance=1e-13):
    """Roots of the numerator of lambda' (rational/deformed)."""
    full = sp.chart.full_coords()
    ks = sp.chart.multiplicities
    poly = np.polynomial.polynomial
    num = np.zeros(len(full), dtype=complex)
    for i, (z, k) in enumerate(zip(full, ks)):
        others = [w for j, w in enumerate(full) if j != i]
        num = num + k * poly.polyfromroots(others)
    while num.size > 1 and abs(num[-1]) < 1e-12:
        num = num[:-1]
    if num.size < 2:
        raise OracleError("degenerate superpotential")
    roots = polynomial_roots(num, tolerance)
    pts = list(full)
    for i, r in enumerate(roots):
        others = np.delete(roots, i)
        dmin = np.min(np.abs(r - others)) if others.size else np.inf
        if dmin < 1e-6:
            raise OracleError("degenerate superpotential")
        if np.min(np.abs(r - np.asarray(pts))) < 1e-8:
            raise OracleError("degenerate superpotential")
    return roots


_WHICH_SLOTS = {"eta": 2, "c": 3, "g": 2, "cstar": 3}


def _assemble(sp, which, node_data, weights, n):
    """Contract cached per-node factor arrays into the tensor residue."""
    slots = _WHICH_SLOTS[which]
    logderiv = which in ("g", "cstar")
    lam, dlam_v, dparam = node_data
    if logderiv:
        factors = [dparam[a] / lam for a in range(n)]
        denom = dlam_v / lam
    else:
        factors = list(dparam)
        denom = dlam_v
    if slots == 2:
        out = np.zeros((n, n), dtype=complex)
        for a in range(n):
            for b in range(a, n):
                val = np.sum(weights * factors[a] * factors[b] / denom)
                out[a, b] = out[b, a] = val
        return out
    out = np.zeros((n, n, n), dtype=complex)
    for a, b, c in combinations_with_replacement(range(n), 3):
        val = np.sum(weights * factors[a] * factors[b] * factors[c] / denom)
        for p in {(a, b, c), (a, c, b), (b, a, c), (b, c, a),
                  (c, a, b), (c, b, a)}:
            out[p] = val
    return out


def _contour_node_data(sp, center, radius, budget, policy, covariant_tau):
    """Evaluate lambda, lambda', and all parameter derivatives on a circle."""
    n_nodes = budget.samples
    theta = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
    rot = np.exp(1j * theta)
    nodes = center + radius * rot
    weights = radius * rot / n_nodes  # residue quadrature weights

    vector = sp.coord_vector()
    n = len(vector)
    evaluator = _evaluator_from_vector(sp, vector, policy)
    lam = evaluator(nodes)
    if sp.case == "elliptic":
        tau = sp.chart.m.tau
        sing = [0.0]
        dlam_v = _v_derivative(evaluator, nodes, sing, tau=tau)
    else:
        sing = sp.pole_points()
        all_pts = list(sp.chart.full_coords())
        ref = sing if sing else all_pts
        dlam_v = _v_derivative(evaluator, nodes, ref, tau=None)
    dparam = [param_derivative(sp, a, nodes, budget, policy)
              for a in range(n)]
    if sp.case == "elliptic" and covariant_tau:
        tau = sp.chart.m.tau
        tlog = _theta1_raw(nodes, tau, 1, policy) / \
            _theta1_raw(nodes, tau, 0, policy)
        dparam[n - 1] = dparam[n - 1] + (0.5j * np.pi) * tlog * dlam_v
    return (lam, dlam_v, dparam), weights


def tensors_from_critical_points(sp: Superpotential, which: str,
                                 budget: ResidueBudget | None = None,
                                 policy: SeriesPolicy = DEFAULT_POLICY):
    """eta, c, g or c* for the rational/deformed superpotential.

    Critical points are the roots of the numerator of lambda'; each
    contributes one contour residue of the corresponding integrand, and the
    result is minus their sum (c* doubled, see module docstring).
    """
    if which not in _WHICH_SLOTS:
        raise ValueError("which must be eta, c, g or cstar")
    if sp.case == "elliptic":
        raise OracleError("use complementary contours for the elliptic case")
    if budget is None:
        budget = ResidueBudget()
    crit = _critical_points(sp)
    if which in ("g", "cstar"):
        lam_at_crit = lambda_eval(sp, crit, policy)
        if np.min(np.abs(lam_at_crit)) < 1e-10:
            raise OracleError("lambda vanishes at a critical point")
    others = list(sp.chart.full_coords())
    n = sp.rank
    total = None
    for i, cp in enumerate(crit):
        rest = [c for j, c in enumerate(crit) if j != i] + others
        dist = float(np.min(np.abs(cp - np.asarray(rest))))
        data, w = _contour_node_data(sp, cp, budget.radius_fraction * dist,
                                     budget, policy, covariant_tau=False)
        res = _assemble(sp, which, data, w, n)
        total = res if total is None else total + res
    out = -total
    if which == "cstar":
        out = 2.0 * out
    if _WHICH_SLOTS[which] == 3:
        return Tensor3(out)
    return out


def tensors_from_complementary_contours(sp: Superpotential, which: str,
                                        budget: ResidueBudget | None = None,
                                        policy: SeriesPolicy = DEFAULT_POLICY):
    """g or c* for the elliptic superpotential via relocated residues.

    Circles surround the zeros z_0..z_l of lambda and its pole v = 0, all
    reduced to one fundamental cell; the tensor is minus the sum of those
    residues.  Contours closer than 4 radii to each other are rejected.
    """
    if which not in ("g", "cstar"):
        raise ValueError("which must be g or cstar")
    if sp.case != "elliptic":
        raise OracleError("complementary contours are for the elliptic case")
    if budget is None:
        budget = ResidueBudget()
    tau = sp.chart.m.tau
    points = [_torus_lattice_reduce(p, tau)
              for p in list(sp.chart.full_coords()) + [0.0]]
    n = sp.rank + 2
    total = None
    for i, p in enumerate(points):
        rest = [q for j, q in enumerate(points) if j != i]
        dist = _torus_min_distance(np.asarray([p]), rest, tau)
        radius = budget.radius_fraction * dist
        if dist < 4.0 * radius:
            raise OracleError("contour overlap")
        data, w = _contour_node_data(sp, p, radius, budget, policy,
                                     covariant_tau=True)
        res = _assemble(sp, which, data, w, n)
        total = res if total is None else total + res
    out = -total
    if which == "cstar":
        return Tensor3(out)
    return out


def relocation_residual(sp: Superpotential, which: str = "g",
                        budget: ResidueBudget | None = None,
                        policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Max |sum of residues over every singularity| for a rational
    integrand: critical points, the v-singularities z_i, and infinity.
    The residue theorem makes this vanish; it is a direct numerical test
    of the residue-relocation identity."""
    if sp.case == "elliptic":
        raise OracleError("relocation closure is a rational-case check")
    if budget is None:
        budget = ResidueBudget()
    crit = list(_critical_points(sp))
    pts = list(sp.chart.full_coords())
    n = sp.rank
    total = None
    for i, cp in enumerate(crit + pts):
        rest = [c for j, c in enumerate(crit + pts) if j != i]
        dist = float(np.min(np.abs(cp - np.asarray(rest))))
        data, w = _contour_node_data(sp, cp, budget.radius_fraction * dist,
                                     budget, policy, covariant_tau=False)
        res = _assemble(sp, which, data, w, n)
        total = res if total is None else total + res
    # residue at infinity: minus the big-circle integral equals minus the
    # sum of all finite residues, so closure means big circle == total
    big = 2.0 * max(abs(c) for c in crit + pts) + 3.0
    data, w = _contour_node_data(sp, 0.0, big, budget, policy,
                                 covariant_tau=False)
    ring = _assemble(sp, which, data, w, n)
    return float(np.max(np.abs(total - ring)))
