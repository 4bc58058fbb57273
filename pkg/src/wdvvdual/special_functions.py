"""Theta functions, polylogarithms, the Lambda_N ladder, the elliptic
trilogarithm, and Eisenstein series.

Conventions fixed here once and used everywhere:

* nome q = exp(i pi tau), with Im tau > 0; q-powers are always computed
  through tau (q^(1/4) means exp(i pi tau / 4)), so every function is
  analytic in tau.
* Li_N has its branch cut on [1, oo); logs are principal unless a branch
  anchor is supplied by the caller (see `BranchAnchor`).
* Lambda_N(z, q) = -(1/2)(2iz)^N/N!
                   - sum_{n>=0} Li_N(q^{2n} e^{2iz})
                   + (-1)^N sum_{n>=1} Li_N(q^{2n} e^{-2iz}).
  The (-1)^N sign and the Li_N in the second sum are forced by the
  identities Lambda_0 = theta1'/(2i theta1), the derivative ladder
  d/dz Lambda_N = 2i Lambda_{N-1}, and the parity relation; the test suite
  pins all three.
* chi_r(Q, zeta) = sum_{j=0..r} B_{j+1}/((r-j)!(j+1)!) (log zeta)^{r-j} (log Q)^j.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BranchCutError, SeriesDomainError, TruncationError
from .numeric_core import DiffSpec, cauchy_derivative

__all__ = [
    "ModularPoint",
    "SeriesPolicy",
    "BranchAnchor",
    "theta1",
    "theta1_log_derivative",
    "polylog",
    "polylog_inverted",
    "lambdaN",
    "elliptic_polylog",
    "eisenstein",
    "epolylog3_mixed_partial",
    "bernoulli_number",
    "zeta_int",
]


@dataclass(frozen=True)
class ModularPoint:
    """Upper-half-plane parameter tau with its cached nome q = exp(i pi tau)."""

    tau: complex
    q: complex = None

    def __post_init__(self):
        tau = complex(self.tau)
        if not tau.imag > 0:
            raise ValueError("tau must lie in the upper half-plane")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "q", cmath.exp(1j * cmath.pi * tau))


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation control for all q-series and Li-series."""

    max_terms: int = 400
    tail_tolerance: float = 1e-14

    def __post_init__(self):
        if self.max_terms < 8:
            raise ValueError("max_terms must be >= 8")
        if not self.tail_tolerance > 0:
            raise ValueError("tail_tolerance must be positive")


DEFAULT_POLICY = SeriesPolicy()


@dataclass(frozen=True)
class BranchAnchor:
    """Branch bookkeeping for Li_N(e^{2iz}) terms along a derivative disk.

    `shift` is the integer k with z - k*pi reduced near the origin; `cut`
    is the angle (in the mu = 2i(z - k pi) plane) of the ray carrying the
    logarithm's branch cut, chosen by callers to point away from the disk.
    """

    shift: int = 0
    cut: float = 0.0

    @staticmethod
    def for_center(z_center: complex):
        k = int(round(z_center.real / math.pi))
        mu = 2j * (complex(z_center) - k * math.pi)
        if abs(mu) < 1e-12:
            return BranchAnchor(k, 0.0)
        cut = cmath.phase(-mu)
        return BranchAnchor(k, cut)


# ---------------------------------------------------------------------------
# Bernoulli numbers and integer zeta values
# ---------------------------------------------------------------------------

_BERNOULLI = [Fraction(1)]


def _bernoulli_fraction(m: int) -> Fraction:
    # B_1 = -1/2 convention: B_m = -(1/(m+1)) sum_{j<m} C(m+1, j) B_j
    while len(_BERNOULLI) <= m:
        n = len(_BERNOULLI)
        acc = Fraction(0)
        for j in range(n):
            acc += math.comb(n + 1, j) * _BERNOULLI[j]
        _BERNOULLI.append(-acc / (n + 1))
    return _BERNOULLI[m]


def bernoulli_number(m: int) -> float:
    """Bernoulli number B_m (B_1 = -1/2)."""
    return float(_bernoulli_fraction(m))


_ZETA_CACHE = {}


def _zeta3_series() -> float:
    # Direct summation of 1/r^3 with an Euler-Maclaurin tail estimate.
    big = 2_000_000
    total = 0.0
    for start in range(1, big + 1, 500_000):
        r = np.arange(start, min(start + 500_000, big + 1), dtype=float)
        total += float(np.sum(r ** -3.0))
    tail = 0.5 / big**2 - 0.5 / big**3 + 0.25 / big**4
    return total + tail


def zeta_int(m: int) -> float:
    """Riemann zeta at an integer m != 1."""
    if m == 1:
        raise ValueError("zeta(1) diverges")
    if m in _ZETA_CACHE:
        return _ZETA_CACHE[m]
    if m == 3:
        val = _zeta3_series()
    elif m <= 0:
        # zeta(-j) = (-1)^j B_{j+1} / (j+1); zero at negative even integers
        j = -m
        val = ((-1) ** j) * bernoulli_number(j + 1) / (j + 1)
    elif m % 2 == 0:
        n = m // 2
        val = ((-1) ** (n + 1) * bernoulli_number(2 * n) *
               (2 * math.pi) ** (2 * n) / (2 * math.factorial(2 * n)))
    else:
        # odd m >= 5: short direct sum with tail estimate
        big = 4000
        r = np.arange(1, big + 1, dtype=float)
        val = float(np.sum(r ** (-float(m))))
        val += big ** (1 - m) / (m - 1) - 0.5 * big ** (-m)
    _ZETA_CACHE[m] = val
    return val


# ---------------------------------------------------------------------------
# theta1 and its z-derivatives
# ---------------------------------------------------------------------------

def _theta1_raw(z, tau, d, policy):
    """d-th z-derivative of theta1(z|tau); z and tau broadcast as arrays."""
    z = np.asarray(z, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    im_tau = float(np.min(tau.imag))
    if im_tau <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    im_z = float(np.max(np.abs(z.imag)))
    quarter = np.exp(1j * np.pi * tau / 4.0)
    acc = np.zeros(np.broadcast(z, tau).shape, dtype=complex)
    # term bounds decay only once the Gaussian q-power wins over exp(m |Im z|)
    nmin = max(2, int(im_z / (math.pi * im_tau)) + 1)
    for n in range(policy.max_terms):
        m = 2 * n + 1
        qpow = np.exp(1j * np.pi * tau * (n * n + n))
        arg = m * z
        if d % 4 == 0:
            trig = np.sin(arg)
        elif d % 4 == 1:
            trig = np.cos(arg)
        elif d % 4 == 2:
            trig = -np.sin(arg)
        else:
            trig = -np.cos(arg)
        acc = acc + ((-1) ** n) * (m ** d) * qpow * trig
        bound = 2.0 * math.exp(-math.pi * im_tau * (n * n + n)) \
            * (m ** d) * math.exp(m * im_z)
        if bound < policy.tail_tolerance and n >= nmin:
            break
    else:
        raise TruncationError("series out of convergence budget")
    return 2.0 * quarter * acc


def theta1(z, m: ModularPoint, d: int = 0,
           policy: SeriesPolicy = DEFAULT_POLICY):
    """Jacobi theta1(z|tau), or its d-th z-derivative (d in 0..3).

    Computed from the sine series 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2}
    sin((2n+1) z), differentiated termwise.
    """
    if d not in (0, 1, 2, 3):
        raise ValueError("derivative order must be in 0..3")
    out = _theta1_raw(z, m.tau, d, policy)
    if out.ndim == 0:
        return complex(out)
    return out


def theta1_log_derivative(z, m: ModularPoint,
                          policy: SeriesPolicy = DEFAULT_POLICY):
    """theta1'(z|tau) / theta1(z|tau)."""
    num = _theta1_raw(z, m.tau, 1, policy)
    den = _theta1_raw(z, m.tau, 0, policy)
    if np.min(np.abs(den)) < 1e-12:
        raise SeriesDomainError("log-derivative at lattice point")
    out = num / den
    if out.ndim == 0:
        return complex(out)
    return out


# ---------------------------------------------------------------------------
# polylogarithms
# ---------------------------------------------------------------------------

_SERIES_CUTOFF = 0.6       # |w| below this: defining series
_UNIT_MU_MAX = 4.8         # |log w| cap for the expansion about w = 1


def _li_series(N, w, policy):
    w = np.asarray(w, dtype=complex)
    wmax = float(np.max(np.abs(w)))
    if wmax >= 1.0:
        raise SeriesDomainError("outside series domain")
    acc = np.zeros(w.shape, dtype=complex)
    term = np.ones(w.shape, dtype=complex)
    for r in range(1, policy.max_terms + 1):
        term = term * w
        acc = acc + term / r ** N
        tail = wmax ** (r + 1) / ((r + 1) ** N * (1.0 - wmax))
        if tail < policy.tail_tolerance:
            return acc
    raise TruncationError("series out of convergence budget")


def _li_from_exponent(N, mu, policy, cut: float = 0.0):
    """Li_N(e^mu) via the expansion about mu = 0, valid for |mu| < 2 pi.

    The log's branch cut lies along arg mu = `cut` (default: mu in [0, oo),
    the principal [1, oo) cut in w).
    """
    mu = np.asarray(mu, dtype=complex)
    mumax = float(np.max(np.abs(mu)))
    if mumax > _UNIT_MU_MAX:
        raise SeriesDomainError("exponent outside expansion disk")
    zero = mu == 0
    if np.any(zero) and N == 1:
        raise SeriesDomainError("Li_1 diverges at 1")
    harmonic = sum(1.0 / j for j in range(1, N))
    # log(-mu) with the cut of the composite rotated to arg mu = cut
    safe_mu = np.where(zero, 1.0, mu)
    logterm = np.log(-safe_mu * np.exp(-1j * cut)) + 1j * cut
    acc = (harmonic - logterm) * safe_mu ** (N - 1) / math.factorial(N - 1)
    acc = np.where(zero, 0.0, acc)
    power = np.ones(mu.shape, dtype=complex)
    kmax = min(policy.max_terms, 220)
    small = 0
    for k in range(kmax):
        if k > 0:
            power = power * mu / k
        if k == N - 1:
            continue
        zk = zeta_int(N - k)
        acc = acc + zk * power
        bound = abs(zk) * mumax ** k / math.factorial(k)
        small = small + 1 if bound < policy.tail_tolerance and k > 4 else 0
        if small >= 3:
            return acc
    raise TruncationError("series out of convergence budget")


def _li_any(N, w, policy):
    """Li_N(w) anywhere off the cut [1, oo); scalar w."""
    w = complex(w)
    if N == 0:
        if w == 1.0:
            raise SeriesDomainError("pole of Li_0 at 1")
        return w / (1.0 - w)
    if w == 1.0:
        if N >= 2:
            return complex(zeta_int(N))
        raise SeriesDomainError("Li_1 diverges at 1")
    if w.imag == 0 and w.real > 1.0:
        raise BranchCutError("branch cut")
    a = abs(w)
    if a <= _SERIES_CUTOFF:
        return complex(_li_series(N, w, policy))
    if a < 1.0 / _SERIES_CUTOFF:
        return complex(_li_from_exponent(N, np.log(w), policy))
    return _li_inverted_value(N, w, policy)


def _bernoulli_poly(N, x):
    acc = 0.0 * x
    for k in range(N + 1):
        acc = acc + math.comb(N, k) * bernoulli_number(k) * x ** (N - k)
    return acc


def _li_inverted_value(N, zeta, policy):
    # Li_N(zeta) = (-1)^{N-1} Li_N(1/zeta) - (2 pi i)^N / N! * B_N(u),
    # u = 1/2 + log(-zeta)/(2 pi i); single formula on both half-planes.
    u = 0.5 + np.log(-zeta) / (2j * np.pi)
    corr = (2j * np.pi) ** N / math.factorial(N) * _bernoulli_poly(N, u)
    inner = _li_series(N, 1.0 / zeta, policy)
    return complex((-1) ** (N - 1) * inner - corr)


def polylog(N: int, z, policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Li_N(z) = sum_{r>=1} z^r / r^N on the series domain |z| < 1.

    N = 0 returns the closed form z/(1-z).
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    z = complex(z)
    if N == 0:
        if abs(z) >= 1.0:
            raise SeriesDomainError("outside series domain")
        return z / (1.0 - z)
    if abs(z) >= 1.0:
        raise SeriesDomainError("outside series domain")
    return complex(_li_series(N, z, policy))


def polylog_inverted(N: int, zeta,
                     policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Li_N(zeta) for |zeta| > 1 via the inversion formula.

    Solves (-1)^{N-1} Li_N(1/zeta) = Li_N(zeta) + sum_j B_j (2 pi i)^j /
    ((N-j)! j!) (log zeta)^{N-j} for Li_N(zeta), using the series at
    1/zeta.  The Bernoulli sum is evaluated through log(-zeta), which keeps
    one formula valid on both sides of the real axis; zeta on the cut
    [1, oo) is rejected.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    zeta = complex(zeta)
    if abs(zeta) <= 1.0:
        raise SeriesDomainError("inversion needs |zeta| > 1")
    if zeta.imag == 0 and zeta.real > 0:
        raise BranchCutError("branch cut")
    return _li_inverted_value(N, zeta, policy)


# ---------------------------------------------------------------------------
# Lambda_N and the elliptic trilogarithm
# ---------------------------------------------------------------------------

def _li_n0_term(N, z, policy, anchor: BranchAnchor | None):
    """Li_N(e^{2iz}) for the n = 0 term of Lambda_N / the elliptic Li."""
    z = np.asarray(z, dtype=complex)
    if anchor is None:
        if z.ndim == 0:
            return _li_any(N, cmath.exp(2j * complex(z)), policy)
        flat = np.array([_li_any(N, cmath.exp(2j * complex(v)), policy)
                         for v in z.ravel()], dtype=complex)
        return flat.reshape(z.shape)
    mu = 2j * (z - anchor.shift * math.pi)
    return _li_from_exponent(N, mu, policy, cut=anchor.cut)


def _lambda_core(N, z, tau, policy, anchor: BranchAnchor | None):
    z = np.asarray(z, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    im_tau = float(np.min(tau.imag))
    im_z = float(np.max(np.abs(z.imag)))
    if im_z >= math.pi * im_tau:
        raise SeriesDomainError("outside fundamental strip")
    Q = np.exp(2j * np.pi * tau)
    qmag = math.exp(-2.0 * math.pi * im_tau)

    acc = -0.5 * (2j * z) ** N / math.factorial(N)
    acc = acc - _li_n0_term(N, z, policy, anchor)
    sign = (-1) ** N
    wp = Q * np.exp(2j * z)
    wm = Q * np.exp(-2j * z)
    for n in range(1, policy.max_terms + 1):
        acc = acc - _li_series(N, wp, policy) \
              + sign * _li_series(N, wm, policy)
        bound = qmag ** n * math.exp(2 * im_z)
        if bound / max(1e-300, 1.0 - bound) < policy.tail_tolerance:
            break
        wp = wp * Q
        wm = wm * Q
    else:
        raise TruncationError("series out of convergence budget")
    return acc


def lambdaN(N: int, z, m: ModularPoint,
            policy: SeriesPolicy = DEFAULT_POLICY):
    """Lambda_N(z, q) for N in 0..3 on the strip |Im z| < pi Im tau."""
    if N not in (0, 1, 2, 3):
        raise ValueError("N must be in 0..3")
    out = _lambda_core(N, z, m.tau, policy, None)
    if out.ndim == 0:
        return complex(out)
    return out


def _chi(r, log_q, log_zeta):
    acc = 0.0 * (log_q + log_zeta)
    for j in range(r + 1):
        acc = acc + (bernoulli_number(j + 1) /
                     (math.factorial(r - j) * math.factorial(j + 1))
                     ) * log_zeta ** (r - j) * log_q ** j
    return acc


def _epolylog3_core(log_q, log_zeta, policy, anchor: BranchAnchor | None):
    """Elliptic trilogarithm with both arguments given as exponents.

    log_q is log of the first argument (2 pi i tau for q^2); log_zeta is a
    chosen logarithm of zeta, used both inside chi_3 and (reduced via the
    anchor) for the n = 0 polylogarithm term.
    """
    log_q = np.asarray(log_q, dtype=complex)
    log_zeta = np.asarray(log_zeta, dtype=complex)
    qmag = float(np.max(np.exp(log_q.real)))
    if qmag >= 1.0:
        raise SeriesDomainError("|q| must be < 1")
    zmag_max = float(np.max(np.abs(log_zeta.real)))
    if qmag * math.exp(zmag_max) >= 1.0:
        raise SeriesDomainError("zeta outside the convergent annulus")

    if anchor is None and np.all(log_zeta == 0):
        n0 = complex(zeta_int(3)) + 0.0 * log_zeta
    elif anchor is None:
        flat = np.asarray(log_zeta, dtype=complex)
        if flat.ndim == 0:
            n0 = _li_any(3, cmath.exp(complex(flat)), policy)
        else:
            n0 = np.array([_li_any(3, cmath.exp(complex(v)), policy)
                           for v in flat.ravel()],
                          dtype=complex).reshape(flat.shape)
    else:
        mu = log_zeta - 2j * np.pi * anchor.shift
        n0 = _li_from_exponent(3, mu, policy, cut=anchor.cut)

    acc = n0 - _chi(3, log_q, log_zeta)
    wp = np.exp(log_q + log_zeta)
    wm = np.exp(log_q - log_zeta)
    for n in range(1, policy.max_terms + 1):
        acc = acc + _li_series(3, wp, policy) + _li_series(3, wm, policy)
        bound = qmag ** n * math.exp(zmag_max)
        if bound / max(1e-300, 1.0 - bound) < policy.tail_tolerance:
            break
        wp = wp * np.exp(log_q)
        wm = wm * np.exp(log_q)
    else:
        raise TruncationError("series out of convergence budget")
    return acc


def elliptic_polylog(r: int, qarg, zeta,
                     policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Beilinson-Levin elliptic polylogarithm, r = 3 only.

    Li^ell_3(q, zeta) = sum_{n>=0} Li_3(q^n zeta) + sum_{n>=1} Li_3(q^n/zeta)
    - chi_3(q, zeta), principal logs.  zeta = 1 is allowed (the n = 0 term
    is zeta(3), summed directly).
    """
    if r != 3:
        raise ValueError("only r = 3 is supported")
    qarg = complex(qarg)
    zeta = complex(zeta)
    if abs(qarg) >= 1.0:
        raise SeriesDomainError("|q| must be < 1")
    log_q = cmath.log(qarg)
    log_zeta = 0.0 if zeta == 1.0 else cmath.log(zeta)
    return complex(_epolylog3_core(log_q, log_zeta, policy, None))


# ---------------------------------------------------------------------------
# Eisenstein series
# ---------------------------------------------------------------------------

def _sigma_table(k, n):
    sig = np.zeros(n + 1)
    for d in range(1, n + 1):
        sig[d::d] += float(d) ** k
    return sig


def eisenstein(k: int, m: ModularPoint,
               policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Normalised Eisenstein series E_2 or E_4 in Q = q^2 = exp(2 pi i tau).

    E_2 = 1 - 24 sum sigma_1(n) Q^n,  E_4 = 1 + 240 sum sigma_3(n) Q^n.
    """
    if k not in (2, 4):
        raise ValueError("only E_2 and E_4 are implemented")
    Q = m.q ** 2
    qmag = abs(Q)
    coeff = -24.0 if k == 2 else 240.0
    power = k - 1
    nmax = min(policy.max_terms, 200)
    sig = _sigma_table(power, nmax)
    acc = 1.0 + 0j
    Qn = 1.0 + 0j
    for n in range(1, nmax + 1):
        Qn *= Q
        acc += coeff * sig[n] * Qn
        # sigma_{k-1}(n) <= n^k as a crude tail bound
        if abs(coeff) * (n + 1) ** k * qmag ** (n + 1) / max(1e-300, 1 - qmag) \
                < policy.tail_tolerance:
            return complex(acc)
    raise TruncationError("series out of convergence budget")


# ---------------------------------------------------------------------------
# Appendix identity machinery: mixed tau/z derivatives of Li^ell_3 at z = 0
# ---------------------------------------------------------------------------

def epolylog3_mixed_partial(d_tau: int, d_z: int, tau: complex,
                            policy: SeriesPolicy = DEFAULT_POLICY,
                            tau_radius: float = 0.1,
                            z_radius: float = 0.2,
                            samples: int = 64) -> complex:
    """d^3 Li^ell_3(q^2, e^{2iz}) / dtau^{d_tau} dz^{d_z} at z = 0.

    The tau-derivative is taken first: it removes the tau-independent
    n = 0 term Li_3(e^{2iz}), whose branch point at z = 0 would otherwise
    obstruct Cauchy differentiation in z.  Requires d_tau >= 1 when
    d_z >= 1, and d_tau + d_z = 3.
    """
    if d_tau + d_z != 3 or d_tau < 0 or d_z < 0:
        raise ValueError("need d_tau + d_z = 3")
    if d_z > 0 and d_tau == 0:
        raise ValueError("pure z-derivatives at z = 0 are singular")
    tau = complex(tau)

    if d_z == 0:
        def f_tau(t):
            return _epolylog3_core(2j * np.pi * np.asarray(t, dtype=complex),
                                   np.zeros_like(np.asarray(t, dtype=complex)),
                                   policy, None)
        return cauchy_derivative(f_tau, tau, 3,
                                 DiffSpec(radius=tau_radius, samples=samples))

    n = samples
    theta_z = np.pi / n + 2.0 * np.pi * np.arange(n) / n
    z_nodes = z_radius * np.exp(1j * theta_z)
    theta_t = 2.0 * np.pi * np.arange(n) / n
    t_nodes = tau + tau_radius * np.exp(1j * theta_t)

    zz = z_nodes[:, None]
    tt = t_nodes[None, :]
    # principal-branch anchor keeps the n = 0 term vectorized; the z-node
    # phase offset keeps every node off the cut below z = 0
    vals = _epolylog3_core(2j * np.pi * tt, 2j * zz + 0.0 * tt, policy,
                           BranchAnchor(0, 0.0))

    w_tau = np.exp(-1j * d_tau * theta_t) * (math.factorial(d_tau) /
                                             (n * tau_radius ** d_tau))
    w_z = np.exp(-1j * d_z * theta_z) * (math.factorial(d_z) /
                                         (n * z_radius ** d_z))
    inner = vals @ w_tau
    return complex(np.sum(inner * w_z))
