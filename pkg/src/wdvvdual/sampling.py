"""Seeded chart-point sampling inside the valid region of each case.

Coordinates are drawn from [-1, 1] + [-0.2, 0.2] i; elliptic tau from
[-0.3, 0.3] + [1.2, 2.5] i.  Candidates whose full coordinate set (the
eliminated z^0 included) comes too close to a discriminant are resampled,
up to 100 attempts per point.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ChartError

__all__ = ["sample_points", "MIN_SEPARATION"]

#: smallest allowed pairwise separation (and lattice distance, elliptic)
MIN_SEPARATION = 0.3


def _draw_complex(rng, n, re=1.0, im=0.2):
    return rng.uniform(-re, re, n) + 1j * rng.uniform(-im, im, n)


def _rational_ok(zs, ks):
    z0 = -sum(k * z for k, z in zip(ks[1:], zs)) / ks[0]
    full = [z0] + list(zs)
    for i in range(len(full)):
        for j in range(i + 1, len(full)):
            if abs(full[i] - full[j]) < MIN_SEPARATION:
                return False
    return True


def _torus_dist(z, tau):
    w2 = math.pi * complex(tau)
    b = z.imag / w2.imag
    a = (z.real - b * w2.real) / math.pi
    best = math.inf
    for da in (math.floor(a), math.ceil(a)):
        for db in (math.floor(b), math.ceil(b)):
            best = min(best, abs(z - da * math.pi - db * w2))
    return best


def _elliptic_ok(zs, tau):
    z0 = -sum(zs)
    full = [z0] + list(zs)
    for z in full:
        if _torus_dist(z, tau) < MIN_SEPARATION:
            return False
    for i in range(len(full)):
        for j in range(i + 1, len(full)):
            if _torus_dist(full[i] - full[j], tau) < MIN_SEPARATION:
                return False
    return True


def sample_points(case: str, rank: int, count: int, seed: int,
                  multiplicities=None, im_tau_range=(1.2, 2.5),
                  max_attempts: int = 100):
    """Draw `count` chart coordinate vectors for the given case.

    Rational/deformed vectors are (z^1..z^l); elliptic vectors are
    (u, z^1..z^l, tau).
    """
    rng = np.random.default_rng(seed)
    ks = multiplicities
    if case in ("rational", "deformed"):
        if ks is None:
            ks = (1,) * (rank + 1)
    elif case != "elliptic":
        raise ValueError("unknown case")
    points = []
    for _ in range(count):
        for _attempt in range(max_attempts):
            if case == "elliptic":
                u = complex(_draw_complex(rng, 1)[0])
                zs = list(_draw_complex(rng, rank))
                tau = complex(rng.uniform(-0.3, 0.3) +
                              1j * rng.uniform(*im_tau_range))
                if _elliptic_ok(zs, tau):
                    points.append([u] + [complex(z) for z in zs] + [tau])
                    break
            else:
                zs = list(_draw_complex(rng, rank))
                if _rational_ok(zs, ks):
                    points.append([complex(z) for z in zs])
                    break
        else:
            raise ChartError("could not sample a chart point off the "
                             "discriminant in 100 attempts")
    return points
