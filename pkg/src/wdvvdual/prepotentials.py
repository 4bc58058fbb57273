"""Closed-form dual prepotentials on constrained charts.

Three families:

* rational:  F* = 1/4 sum_{i != j} (z_i - z_j)^2 log (z_i - z_j)^2 on the
  plane sum z^i = 0 (indices 0..l, z^0 eliminated);
* deformed:  F* = 1/4 sum_{i != j} k_i k_j (z_i - z_j)^2 log (z_i - z_j)^2
  on sum k_i z^i = 0, k_i nonzero integers;
* elliptic:  F* = 2 pi i [ pi^2 tau u^2 / 2 - (u/2) sum (z^i)^2 ] + Fq with
  Fq = -(1/8) sum'_{i != j} { Li3^ell(q^2, e^{2i(z^i - z^j)}) - Li3^ell(q^2, 1) }
       + (l+1)/4  sum'_i    { Li3^ell(q^2, e^{2i z^i})        - Li3^ell(q^2, 1) },
  primed sums including i = 0.  The u-coefficient of the z-quadratic term
  carries the extra 1/2 required by c*_{u i j} = 2 pi i G_{ij} together
  with d^3F*/du^2 dtau = 2 pi i pi^2; both are exercised by tests.

Scalar evaluation uses principal logarithms.  Third-derivative work goes
through `PrepotentialModel.evaluator`, which anchors every logarithm's
branch at the expansion center so the returned callable is analytic on the
whole Cauchy polydisk (log branch cuts are rotated to point away from the
center).  Values may then differ from the principal-branch ones by
quadratic polynomials, which third derivatives do not see.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ChartError, DiscriminantError
from .special_functions import (
    BranchAnchor,
    DEFAULT_POLICY,
    ModularPoint,
    SeriesPolicy,
    _epolylog3_core,
    _lambda_core,
)

__all__ = [
    "RationalChart",
    "EllipticChart",
    "PrepotentialModel",
    "rational_dual_F",
    "deformed_dual_F",
    "elliptic_dual_F",
    "elliptic_F_temp",
]

#: evaluations closer than this to a discriminant point raise, which makes
#: the Cauchy differentiator shrink its disks
PROXIMITY_GUARD = 0.03


@dataclass(frozen=True)
class RationalChart:
    """Chart z^1..z^l with z^0 = -(sum_{i>=1} k_i z^i)/k_0 eliminated."""

    coords: tuple
    multiplicities: tuple = None

    def __post_init__(self):
        coords = tuple(complex(z) for z in self.coords)
        if len(coords) < 2:
            raise ChartError("rational chart needs rank >= 2")
        if self.multiplicities is None:
            ks = (1,) * (len(coords) + 1)
        else:
            ks = tuple(int(k) for k in self.multiplicities)
        if len(ks) != len(coords) + 1:
            raise ChartError("need l+1 multiplicities k_0..k_l")
        if ks[0] == 0:
            raise ChartError("invalid multiplicity")
        if any(k == 0 for k in ks):
            raise ChartError("invalid multiplicity")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "multiplicities", ks)
        full = self.full_coords()
        for i in range(len(full)):
            for j in range(i + 1, len(full)):
                if full[i] == full[j]:
                    raise ChartError("discriminant point")

    @property
    def rank(self):
        return len(self.coords)

    @property
    def z0(self):
        ks = self.multiplicities
        return -sum(k * z for k, z in zip(ks[1:], self.coords)) / ks[0]

    def full_coords(self):
        return (self.z0,) + self.coords


@dataclass(frozen=True)
class EllipticChart:
    """Chart (u, z^1..z^l, tau) with z^0 = -sum z^i eliminated."""

    u: complex
    coords: tuple
    m: ModularPoint

    def __post_init__(self):
        coords = tuple(complex(z) for z in self.coords)
        if len(coords) < 1:
            raise ChartError("elliptic chart needs rank >= 1")
        object.__setattr__(self, "u", complex(self.u))
        object.__setattr__(self, "coords", coords)
        tau = self.m.tau
        strip = math.pi * tau.imag
        for z in self.full_coords():
            if abs(z.imag) >= strip:
                raise ChartError("coordinate outside fundamental strip")
        full = self.full_coords()
        for z in full:
            if _lattice_distance(z, tau) == 0.0:
                raise ChartError("coordinate on the theta lattice")
        for i in range(len(full)):
            for j in range(i + 1, len(full)):
                if _lattice_distance(full[i] - full[j], tau) == 0.0:
                    raise ChartError("discriminant point")

    @property
    def rank(self):
        return len(self.coords)

    @property
    def z0(self):
        return -sum(self.coords)

    def full_coords(self):
        return (self.z0,) + self.coords


def _lattice_distance(z, tau):
    """Distance from z to the theta lattice {a pi + b pi tau}."""
    z = complex(z)
    wt = math.pi * tau
    b = z.imag / wt.imag
    a = (z.real - b * wt.real) / math.pi
    best = math.inf
    for da in (math.floor(a), math.ceil(a)):
        for db in (math.floor(b), math.ceil(b)):
            best = min(best, abs(z - da * math.pi - db * wt))
    return best


# ---------------------------------------------------------------------------
# scalar prepotentials (principal branches)
# ---------------------------------------------------------------------------

def deformed_dual_F(chart: RationalChart) -> complex:
    """F* = 1/4 sum_{i != j} k_i k_j (z_i - z_j)^2 log (z_i - z_j)^2."""
    full = chart.full_coords()
    ks = chart.multiplicities
    acc = 0.0 + 0j
    for i in range(len(full)):
        for j in range(len(full)):
            if i == j:
                continue
            d = full[i] - full[j]
            acc += ks[i] * ks[j] * d * d * cmath.log(d * d)
    return 0.25 * acc


def rational_dual_F(chart: RationalChart) -> complex:
    """Specialization of the deformed prepotential to all k_i = 1."""
    if any(k != 1 for k in chart.multiplicities):
        raise ChartError("rational case requires all multiplicities = 1")
    return deformed_dual_F(chart)


def _epolylog3_pair(tau, delta, policy, anchor=None):
    """Li3^ell(q^2, e^{2 i delta}) with tau/delta broadcast as arrays."""
    tau = np.asarray(tau, dtype=complex)
    delta = np.asarray(delta, dtype=complex)
    return _epolylog3_core(2j * np.pi * tau, 2j * delta, policy, anchor)


def _epolylog3_one(tau, policy):
    """Li3^ell(q^2, 1)."""
    tau = np.asarray(tau, dtype=complex)
    return _epolylog3_core(2j * np.pi * tau, np.zeros_like(tau), policy, None)


def _elliptic_quantum(zs, tau, policy, anchors=None, drop_single_sum=False):
    """F*_quantum on broadcast arrays; `anchors` maps pair/single keys to
    BranchAnchor instances (None means principal branches)."""
    z0 = -sum(zs)
    full = [z0] + list(zs)
    n = len(full)
    e_one = _epolylog3_one(tau, policy)

    def anchor_for(key):
        return None if anchors is None else anchors.get(key)

    acc = 0.0 + 0j
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            term = _epolylog3_pair(tau, full[i] - full[j], policy,
                                   anchor_for(("pair", i, j)))
            acc = acc - 0.125 * (term - e_one)
    if not drop_single_sum:
        for i in range(n):
            term = _epolylog3_pair(tau, full[i], policy,
                                   anchor_for(("single", i)))
            acc = acc + (n / 4.0) * (term - e_one)
    return acc


def _elliptic_polynomial(u, zs, tau):
    z0 = -sum(zs)
    s2 = z0 * z0 + sum(z * z for z in zs)
    return 2j * np.pi * (0.5 * np.pi ** 2 * tau * u * u - 0.5 * u * s2)


def elliptic_dual_F(chart: EllipticChart,
                    policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Full elliptic dual prepotential: polynomial part plus F*_quantum."""
    u, zs, tau = chart.u, list(chart.coords), chart.m.tau
    val = _elliptic_polynomial(u, zs, tau) + \
        _elliptic_quantum(zs, tau, policy)
    return complex(val)


def _elliptic_temp(zs, tau, policy, anchors=None):
    z0 = -sum(zs)
    full = [z0] + list(zs)
    n = len(full)

    def anchor_for(key):
        return None if anchors is None else anchors.get(key)

    acc = 0.0 + 0j
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            acc = acc + 0.125 * _lambda_core(3, full[i] - full[j], tau,
                                             policy, anchor_for(("pair", i, j)))
    for i in range(n):
        acc = acc - (n / 4.0) * _lambda_core(3, full[i], tau, policy,
                                             anchor_for(("single", i)))
    return acc


def elliptic_F_temp(chart: EllipticChart,
                    policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """F*_temp = 1/8 sum' Lambda_3(z^i - z^j) - (l+1)/4 sum' Lambda_3(z^i)."""
    return complex(_elliptic_temp(list(chart.coords), chart.m.tau, policy))


# ---------------------------------------------------------------------------
# models and anchored evaluators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrepotentialModel:
    """Case tag plus parameters, exposing scalar and batch evaluation.

    Chart coordinate vectors are ordered (z^1..z^l) for the rational and
    deformed cases and (u, z^1..z^l, tau) for the elliptic case.
    """

    case: str
    rank: int
    multiplicities: tuple = None
    use_temp: bool = False          # elliptic: evaluate F*_temp instead of F*
    drop_single_sum: bool = False   # negative-control knob
    policy: SeriesPolicy = field(default=DEFAULT_POLICY)

    def __post_init__(self):
        if self.case not in ("rational", "deformed", "elliptic"):
            raise ValueError("unknown case")
        if self.case == "elliptic":
            if self.rank < 1:
                raise ValueError("elliptic rank must be >= 1")
            if self.multiplicities is not None:
                raise ValueError("elliptic case takes no multiplicities")
        else:
            if self.rank < 2:
                raise ValueError("rational rank must be >= 2")
            if self.case == "deformed":
                if self.multiplicities is None or \
                        len(self.multiplicities) != self.rank + 1:
                    raise ValueError("deformed case needs k_0..k_l")
            elif self.multiplicities is not None and \
                    any(k != 1 for k in self.multiplicities):
                raise ValueError("rational case requires unit multiplicities")
        if self.multiplicities is not None:
            object.__setattr__(self, "multiplicities",
                               tuple(int(k) for k in self.multiplicities))

    @property
    def ncoords(self):
        return self.rank if self.case != "elliptic" else self.rank + 2

    def coord_names(self):
        zs = [f"z{i}" for i in range(1, self.rank + 1)]
        if self.case == "elliptic":
            return ["u"] + zs + ["tau"]
        return zs

    def chart(self, vector):
        vector = [complex(v) for v in vector]
        if len(vector) != self.ncoords:
            raise ValueError("coordinate vector has wrong length")
        if self.case == "elliptic":
            return EllipticChart(vector[0], tuple(vector[1:-1]),
                                 ModularPoint(vector[-1]))
        return RationalChart(tuple(vector), self.multiplicities)

    def value(self, vector) -> complex:
        """Principal-branch scalar value of the prepotential."""
        chart = self.chart(vector)
        if self.case == "rational":
            return rational_dual_F(chart)
        if self.case == "deformed":
            return deformed_dual_F(chart)
        if self.use_temp:
            return elliptic_F_temp(chart, self.policy)
        if self.drop_single_sum:
            u, zs, tau = chart.u, list(chart.coords), chart.m.tau
            return complex(_elliptic_polynomial(u, zs, tau) +
                           _elliptic_quantum(zs, tau, self.policy,
                                             drop_single_sum=True))
        return elliptic_dual_F(chart, self.policy)

    def evaluator(self, center):
        """Branch-anchored batch evaluator for Cauchy differentiation.

        Returns F with F(coords) accepting a list of ncoords values that
        broadcast together; F is analytic on polydisks around `center`
        that stay clear of the discriminant, and raises DiscriminantError
        (triggering disk shrinking) when an evaluation point gets within
        PROXIMITY_GUARD of it.
        """
        center = [complex(v) for v in center]
        self.chart(center)  # validates
        if self.case == "elliptic":
            return self._elliptic_evaluator(center)
        return self._rational_evaluator(center)

    # -- rational / deformed ------------------------------------------------

    def _rational_evaluator(self, center):
        ks = self.multiplicities or (1,) * (self.rank + 1)
        k0 = ks[0]
        zc = list(center)
        z0c = -sum(k * z for k, z in zip(ks[1:], zc)) / k0
        fullc = [z0c] + zc
        n = self.rank + 1
        cut = {}
        for i in range(n):
            for j in range(i + 1, n):
                d = fullc[i] - fullc[j]
                cut[(i, j)] = cmath.phase(d) + math.pi

        def F(coords):
            zs = [np.asarray(c, dtype=complex) for c in coords]
            z0 = -sum(k * z for k, z in zip(ks[1:], zs)) / k0
            full = [z0] + zs
            acc = 0.0 + 0j
            for i in range(n):
                for j in range(i + 1, n):
                    d = full[i] - full[j]
                    if np.min(np.abs(d)) < PROXIMITY_GUARD:
                        raise DiscriminantError("discriminant point")
                    logd = np.log(d * np.exp(-1j * (cut[(i, j)] - np.pi))) \
                        + 1j * (cut[(i, j)] - np.pi)
                    acc = acc + ks[i] * ks[j] * d * d * logd
            return acc

        return F

    # -- elliptic -------------------------------------------------------------

    def _elliptic_evaluator(self, center):
        zc = list(center[1:-1])
        tauc = center[-1]
        z0c = -sum(zc)
        fullc = [z0c] + zc
        n = self.rank + 1
        anchors = {}
        for i in range(n):
            for j in range(n):
                if i != j:
                    anchors[("pair", i, j)] = \
                        BranchAnchor.for_center(fullc[i] - fullc[j])
        for i in range(n):
            anchors[("single", i)] = BranchAnchor.for_center(fullc[i])
        use_temp = self.use_temp
        drop = self.drop_single_sum
        policy = self.policy

        def F(coords):
            u = np.asarray(coords[0], dtype=complex)
            zs = [np.asarray(c, dtype=complex) for c in coords[1:-1]]
            tau = np.asarray(coords[-1], dtype=complex)
            z0 = -sum(zs)
            full = [z0] + zs
            for i in range(n):
                for j in range(i + 1, n):
                    d = np.asarray(full[i] - full[j])
                    if _min_lattice_distance(d, tauc) < PROXIMITY_GUARD:
                        raise DiscriminantError("discriminant point")
            for zi in full:
                if _min_lattice_distance(np.asarray(zi), tauc) < PROXIMITY_GUARD:
                    raise DiscriminantError("coordinate on the theta lattice")
            if use_temp:
                return _elliptic_temp(zs, tau, policy, anchors)
            return _elliptic_polynomial(u, zs, tau) + \
                _elliptic_quantum(zs, tau, policy, anchors,
                                  drop_single_sum=drop)

        return F


def _min_lattice_distance(z, tau):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    wt = math.pi * complex(tau)
    b = z.imag / wt.imag
    a = (z.real - b * wt.real) / math.pi
    best = np.full(z.shape, np.inf)
    for da in (np.floor(a), np.ceil(a)):
        for db in (np.floor(b), np.ceil(b)):
            best = np.minimum(best, np.abs(z - da * math.pi - db * wt))
    return float(np.min(best))
