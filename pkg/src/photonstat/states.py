"""Truncated photon-number distributions for the supported state families.

Every quantity in the library flows through ``PhotonNumberDistribution``: a
finite vector of probabilities P(0..N_max) together with a certified bound on
the probability mass beyond the truncation.  Families with finite support
(number and binomial states) are stored exactly with a zero tail bound; the
others are truncated by doubling the window until an analytic tail estimate
drops below the requested ``tail_eps``.
"""

import math
import os
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import gammaln
from scipy.stats import nbinom, poisson

from .errors import ParameterError
from .numerics import log_binomial, log_cosh, log_sinh

DEFAULT_TAIL_EPS = 1e-14

# Test hook: verify-suite sensitivity (perturbs P(0) without renormalizing).
_TAMPER_ENV = "PHOTONSTAT_DEBUG_TAMPER"


class Family(str, Enum):
    FOCK = "fock"
    COHERENT = "coherent"
    THERMAL = "thermal"
    SQUEEZED = "squeezed"
    CAT_EVEN = "cat-even"
    CAT_ODD = "cat-odd"
    BINOMIAL = "binomial"
    NEG_BINOMIAL = "negbinomial"
    AGARWAL = "agarwal"


@dataclass(frozen=True)
class StateSpec:
    """A state family plus its parameters.

    Exactly the parameters belonging to the family may be set: ``n`` for
    number states, ``alpha2`` (= |alpha|^2) for coherent and cat states,
    ``nbar`` for thermal and squeezed vacuum, ``eta``/``m`` for the binomial
    family and both negative-binomial variants.
    """

    family: Family
    n: int | None = None
    alpha2: float | None = None
    nbar: float | None = None
    eta: float | None = None
    m: int | None = None

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        required = _REQUIRED_PARAMS[fam]
        for name in ("n", "alpha2", "nbar", "eta", "m"):
            value = getattr(self, name)
            if name in required and value is None:
                raise ParameterError(f"{fam.value} state requires parameter {name!r}")
            if name not in required and value is not None:
                raise ParameterError(f"{fam.value} state does not take parameter {name!r}")
        if self.n is not None and (self.n < 0 or self.n != int(self.n)):
            raise ParameterError("photon number n must be a non-negative integer")
        if self.m is not None and (self.m < 0 or self.m != int(self.m)):
            raise ParameterError("m must be a non-negative integer")
        if self.alpha2 is not None and not (self.alpha2 >= 0.0 and math.isfinite(self.alpha2)):
            raise ParameterError("|alpha|^2 must be finite and >= 0")
        if fam is Family.CAT_ODD and self.alpha2 == 0.0:
            raise ParameterError("odd cat state requires |alpha|^2 > 0")
        if self.nbar is not None and not (self.nbar >= 0.0 and math.isfinite(self.nbar)):
            raise ParameterError("nbar must be finite and >= 0")
        if self.eta is not None and not 0.0 <= self.eta <= 1.0:
            raise ParameterError("eta must lie in [0, 1]")
        if fam in (Family.NEG_BINOMIAL, Family.AGARWAL) and self.eta == 0.0:
            raise ParameterError(f"{fam.value} state requires eta > 0")

    # -- convenience constructors ------------------------------------------

    @classmethod
    def fock(cls, n):
        return cls(Family.FOCK, n=n)

    @classmethod
    def coherent(cls, alpha2):
        return cls(Family.COHERENT, alpha2=alpha2)

    @classmethod
    def thermal(cls, nbar):
        return cls(Family.THERMAL, nbar=nbar)

    @classmethod
    def squeezed(cls, nbar):
        return cls(Family.SQUEEZED, nbar=nbar)

    @classmethod
    def cat_even(cls, alpha2):
        return cls(Family.CAT_EVEN, alpha2=alpha2)

    @classmethod
    def cat_odd(cls, alpha2):
        return cls(Family.CAT_ODD, alpha2=alpha2)

    @classmethod
    def binomial(cls, eta, m):
        return cls(Family.BINOMIAL, eta=eta, m=m)

    @classmethod
    def neg_binomial(cls, eta, m):
        return cls(Family.NEG_BINOMIAL, eta=eta, m=m)

    @classmethod
    def agarwal(cls, eta, m):
        return cls(Family.AGARWAL, eta=eta, m=m)

    def analytic_mean(self):
        """Mean photon number, used to size the truncation window."""
        fam = self.family
        if fam is Family.FOCK:
            return float(self.n)
        if fam is Family.COHERENT:
            return self.alpha2
        if fam in (Family.THERMAL, Family.SQUEEZED):
            return self.nbar
        if fam is Family.CAT_EVEN:
            return self.alpha2 * math.tanh(self.alpha2)
        if fam is Family.CAT_ODD:
            return self.alpha2 / math.tanh(self.alpha2)
        if fam is Family.BINOMIAL:
            return self.eta * self.m
        if fam is Family.NEG_BINOMIAL:
            return (self.m + 1) / self.eta - 1.0
        if fam is Family.AGARWAL:
            return (self.m + 1) / self.eta - 1.0 - self.m
        raise AssertionError(fam)

    def params_dict(self):
        out = {}
        for name in ("n", "alpha2", "nbar", "eta", "m"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


_REQUIRED_PARAMS = {
    Family.FOCK: {"n"},
    Family.COHERENT: {"alpha2"},
    Family.THERMAL: {"nbar"},
    Family.SQUEEZED: {"nbar"},
    Family.CAT_EVEN: {"alpha2"},
    Family.CAT_ODD: {"alpha2"},
    Family.BINOMIAL: {"eta", "m"},
    Family.NEG_BINOMIAL: {"eta", "m"},
    Family.AGARWAL: {"eta", "m"},
}


@dataclass(frozen=True, eq=False)
class PhotonNumberDistribution:
    """Probabilities P(0..truncation) with a certified tail bound."""

    probs: np.ndarray
    tail_bound: float
    truncation: int

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        probs = np.array(probs, copy=True)
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        if probs.ndim != 1 or probs.size == 0:
            raise ParameterError("probability vector must be a non-empty 1-d array")
        if self.truncation != probs.size - 1:
            raise ParameterError("truncation must equal len(probs) - 1")
        if not (0.0 <= self.tail_bound < 1.0):
            raise ParameterError("tail bound must lie in [0, 1)")
        if np.any(probs < 0.0) or not np.all(np.isfinite(probs)):
            raise ParameterError("probabilities must be finite and >= 0")
        total = float(probs.sum())
        if total > 1.0 + 1e-12 or total < 1.0 - self.tail_bound - 1e-9:
            raise ParameterError(f"probabilities sum to {total}, outside tolerance")

    def __len__(self):
        return self.probs.size

    @property
    def ns(self):
        return np.arange(self.probs.size)

    def pmf(self, n):
        if n < 0:
            raise ParameterError("photon number must be >= 0")
        if n >= self.probs.size:
            return 0.0
        return float(self.probs[n])

    @property
    def mean(self):
        return float(np.dot(self.ns, self.probs))

    @property
    def variance(self):
        mu = self.mean
        second = float(np.dot(self.ns.astype(float) ** 2, self.probs))
        return max(0.0, second - mu * mu)

    def is_point_mass(self, tol=0.0):
        return float(self.probs.max()) >= 1.0 - self.tail_bound - tol - 1e-12


def from_probs(probs, tail_bound=0.0):
    """Wrap a probability vector, trimming nothing and validating invariants."""
    probs = np.asarray(probs, dtype=float)
    return PhotonNumberDistribution(probs=probs, tail_bound=float(tail_bound), truncation=probs.size - 1)


def point_mass(n):
    probs = np.zeros(n + 1)
    probs[n] = 1.0
    return from_probs(probs, tail_bound=0.0)


@dataclass(frozen=True)
class MomentReport:
    """Elementary statistics of a distribution up to a requested order."""

    mean: float
    variance: float
    g2: float | None
    parity: float
    factorial_moments: tuple
    negative_factorial_moments: tuple


def build_distribution(spec, tail_eps=DEFAULT_TAIL_EPS):
    """Construct the truncated photon-number distribution of ``spec``.

    Finite-support families come back exact with ``tail_bound == 0``; all
    others are truncated so the certified tail mass is below ``tail_eps``.
    """
    if not 0.0 < tail_eps < 1.0:
        raise ParameterError("tail_eps must lie in (0, 1)")
    fam = spec.family
    if fam is Family.FOCK:
        dist = point_mass(spec.n)
    elif fam is Family.BINOMIAL:
        dist = _binomial_dist(spec.eta, spec.m)
    else:
        pmf_fn, tail_fn = _INFINITE_FAMILIES[fam](spec)
        dist = _certified(pmf_fn, tail_fn, spec.analytic_mean(), tail_eps)
    return _apply_tamper(dist)


def _apply_tamper(dist):
    delta = abs(float(os.environ.get(_TAMPER_ENV, "0") or 0.0))
    if delta == 0.0:
        return dist
    probs = np.array(dist.probs, copy=True)
    probs[0] = max(0.0, probs[0] - delta)
    return PhotonNumberDistribution(probs=probs, tail_bound=dist.tail_bound + delta,
                                    truncation=dist.truncation)


# Weighting the tail by (N+1)^8 keeps factorial moments up to order ~8
# accurate at the working tolerances; a bare mass bound leaves n^m-weighted
# tails as large as 1e-7 on narrow thermal states.
MOMENT_GUARD = 8


def _certified(pmf_fn, tail_fn, mean, tail_eps):
    n_max = max(32, math.ceil(8.0 * (mean + 1.0)))
    while True:
        tail = float(tail_fn(n_max))
        if tail * (n_max + 1.0) ** MOMENT_GUARD <= tail_eps:
            break
        if n_max >= 1 << 22:
            raise ParameterError("truncation window exceeded 4M photon numbers")
        n_max *= 2
    probs = pmf_fn(n_max)
    return PhotonNumberDistribution(probs=probs, tail_bound=max(tail, 0.0), truncation=n_max)


def _binomial_dist(eta, m):
    if eta == 0.0:
        return point_mass(0)
    if eta == 1.0:
        return point_mass(m)
    n = np.arange(m + 1, dtype=float)
    logp = log_binomial(float(m), n) + n * math.log(eta) + (m - n) * math.log1p(-eta)
    return from_probs(np.exp(logp), tail_bound=0.0)


def _coherent(spec):
    a = spec.alpha2
    if a == 0.0:
        return _vacuum_family()

    def pmf(n_max):
        n = np.arange(n_max + 1, dtype=float)
        return np.exp(-a + n * math.log(a) - gammaln(n + 1.0))

    def tail(n_max):
        return poisson.sf(n_max, a)

    return pmf, tail


def _thermal(spec):
    nb = spec.nbar
    if nb == 0.0:
        return _vacuum_family()
    r = nb / (nb + 1.0)

    def pmf(n_max):
        n = np.arange(n_max + 1, dtype=float)
        return np.exp(n * math.log(r) + math.log1p(-r))

    def tail(n_max):
        return math.exp((n_max + 1.0) * math.log(r))

    return pmf, tail


def _squeezed(spec):
    nb = spec.nbar
    if nb == 0.0:
        return _vacuum_family()
    r = nb / (nb + 1.0)
    log_norm = -0.5 * math.log(nb + 1.0)

    def pmf(n_max):
        probs = np.zeros(n_max + 1)
        k = np.arange(n_max // 2 + 1, dtype=float)
        logp = (log_norm + k * math.log(r)
                + gammaln(2.0 * k + 1.0) - 2.0 * k * math.log(2.0) - 2.0 * gammaln(k + 1.0))
        probs[::2] = np.exp(logp)
        return probs

    def tail(n_max):
        # even-index coefficients C(2k,k)/4^k decrease, so the tail is
        # geometrically dominated by the last kept term
        k = n_max // 2
        log_ck = gammaln(2.0 * k + 1.0) - 2.0 * gammaln(k + 1.0) - 2.0 * k * math.log(2.0)
        return math.exp(log_norm + log_ck + (k + 1.0) * math.log(r)) / (1.0 - r)

    return pmf, tail


def _cat(spec, even):
    a = spec.alpha2
    if a == 0.0:
        return _vacuum_family()
    log_denom = log_cosh(a) if even else log_sinh(a)

    def pmf(n_max):
        probs = np.zeros(n_max + 1)
        start = 0 if even else 1
        n = np.arange(start, n_max + 1, 2, dtype=float)
        probs[start::2] = np.exp(n * math.log(a) - gammaln(n + 1.0) - log_denom)
        return probs

    def tail(n_max):
        # kept-parity terms are a subset of the full Poisson(a) tail
        return math.exp(a - log_denom) * poisson.sf(n_max, a)

    return pmf, tail


def _neg_binomial(spec, shifted):
    eta, m = spec.eta, spec.m
    if eta == 1.0:
        dist = point_mass(m if shifted else 0)
        return (lambda n_max: np.pad(dist.probs, (0, n_max - dist.truncation))), (lambda n_max: 0.0)
    offset = m if shifted else 0

    def pmf(n_max):
        probs = np.zeros(n_max + 1)
        n = np.arange(offset, n_max + 1, dtype=float)
        logp = (log_binomial(n - offset + m, float(m)) + (m + 1.0) * math.log(eta)
                + (n - offset) * math.log1p(-eta))
        probs[offset:] = np.exp(logp)
        return probs

    def tail(n_max):
        return nbinom.sf(n_max - offset, m + 1, eta)

    return pmf, tail


def _vacuum_family():
    return (lambda n_max: np.pad([1.0], (0, n_max))), (lambda n_max: 0.0)


_INFINITE_FAMILIES = {
    Family.COHERENT: _coherent,
    Family.THERMAL: _thermal,
    Family.SQUEEZED: _squeezed,
    Family.CAT_EVEN: lambda spec: _cat(spec, even=True),
    Family.CAT_ODD: lambda spec: _cat(spec, even=False),
    Family.NEG_BINOMIAL: lambda spec: _neg_binomial(spec, shifted=True),
    Family.AGARWAL: lambda spec: _neg_binomial(spec, shifted=False),
}


def factorial_moment(dist, m):
    """<n(n-1)...(n-m+1)> by direct summation in log-gamma space."""
    if m < 0:
        raise ParameterError("moment order must be >= 0")
    if m == 0:
        return float(dist.probs.sum())
    n = dist.ns.astype(float)
    weights = np.zeros_like(n)
    ok = n >= m
    weights[ok] = np.exp(gammaln(n[ok] + 1.0) - gammaln(n[ok] - m + 1.0))
    return float(np.dot(weights, dist.probs))


def negative_factorial_moment(dist, m):
    """<(n+1)(n+2)...(n+m)> by direct summation in log-gamma space."""
    if m < 0:
        raise ParameterError("moment order must be >= 0")
    if m == 0:
        return float(dist.probs.sum())
    n = dist.ns.astype(float)
    weights = np.exp(gammaln(n + m + 1.0) - gammaln(n + 1.0))
    return float(np.dot(weights, dist.probs))


def parity(dist):
    """P(even) - P(odd) = sum_n (-1)^n P(n)."""
    signs = 1.0 - 2.0 * (dist.ns % 2)
    return float(np.dot(signs, dist.probs))


def moments(dist, k):
    """MomentReport with factorial and negative factorial moments up to order k."""
    if k < 0:
        raise ParameterError("moment order must be >= 0")
    if k > dist.truncation:
        raise ParameterError(f"moment order {k} exceeds truncation {dist.truncation}")
    mean = dist.mean
    fm = tuple(factorial_moment(dist, m) for m in range(k + 1))
    nfm = tuple(negative_factorial_moment(dist, m) for m in range(k + 1))
    g2 = None
    if mean > 0.0:
        g2 = factorial_moment(dist, 2) / mean**2
    return MomentReport(
        mean=mean,
        variance=dist.variance,
        g2=g2,
        parity=parity(dist),
        factorial_moments=fm,
        negative_factorial_moments=nfm,
    )
