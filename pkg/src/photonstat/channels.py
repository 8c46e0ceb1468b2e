"""Ideal attenuation and ideal amplification acting on distributions.

Attenuation with transmission eta applies the binomial kernel
P'(n) = sum_{m>=n} C(m,n) eta^n (1-eta)^{m-n} P(m), which rescales factorial
moments by eta^m and the first generating function as M'(mu) = M(eta*mu).
Amplification with gain G applies the negative-binomial kernel
P'(n) = sum_{M<=n} C(n,M) G^{-(M+1)} (1-1/G)^{n-M} P(M), rescaling negative
factorial moments by G^m and the second generating function as
N'(lambda) = N(G*lambda).  Kernels are materialized one output row at a time
with log-gamma binomials, so memory stays linear in the window size.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import nbinom

from . import states
from .errors import ImpossibleEventError, ParameterError
from .numerics import log_binomial
from .ops import add, subtract
from .states import DEFAULT_TAIL_EPS, PhotonNumberDistribution, StateSpec, build_distribution, point_mass


@dataclass(frozen=True)
class ChannelSpec:
    kind: str  # "attenuate" | "amplify"
    value: float

    def __post_init__(self):
        if self.kind == "attenuate":
            if not 0.0 <= self.value <= 1.0:
                raise ParameterError("attenuation eta must lie in [0, 1]")
        elif self.kind == "amplify":
            if not self.value >= 1.0:
                raise ParameterError("amplifier gain must be >= 1")
        else:
            raise ParameterError(f"unknown channel kind {self.kind!r}")

    def apply(self, dist, tail_eps=DEFAULT_TAIL_EPS):
        if self.kind == "attenuate":
            return attenuate(dist, self.value)
        return amplify(dist, self.value, tail_eps=tail_eps)


def attenuate(dist, eta):
    """Ideal loss channel with per-photon survival probability eta."""
    if not 0.0 <= eta <= 1.0:
        raise ParameterError("attenuation eta must lie in [0, 1]")
    if eta == 1.0:
        return dist
    if eta == 0.0:
        return point_mass(0)
    probs = dist.probs
    size = probs.size
    log_eta = math.log(eta)
    log_keep = math.log1p(-eta)
    out = np.zeros(size)
    for n in range(size):
        m = np.arange(n, size, dtype=float)
        logk = log_binomial(m, float(n)) + n * log_eta + (m - n) * log_keep
        out[n] = float(np.dot(np.exp(logk), probs[n:]))
    return PhotonNumberDistribution(probs=out, tail_bound=dist.tail_bound,
                                    truncation=dist.truncation)


def amplify(dist, gain, tail_eps=DEFAULT_TAIL_EPS):
    """Ideal fully-inverted amplifier with gain >= 1."""
    if not gain >= 1.0:
        raise ParameterError("amplifier gain must be >= 1")
    if gain == 1.0:
        return dist
    probs = dist.probs
    in_size = probs.size
    src = np.arange(in_size)

    # gain inflates the support: re-certify the window against the amplified
    # mean G*mean + G - 1, then extend until the summed per-input tails drop
    mean_out = gain * dist.mean + gain - 1.0
    n_max = max(32, math.ceil(8.0 * (mean_out + 1.0)), in_size - 1)
    while True:
        tails = nbinom.sf(n_max - src, src + 1, 1.0 / gain)
        tail = float(np.dot(tails, probs))
        if tail * (n_max + 1.0) ** states.MOMENT_GUARD <= tail_eps:
            break
        if n_max >= 1 << 22:
            raise ParameterError("amplifier window exceeded 4M photon numbers")
        n_max *= 2

    log_g = math.log(gain)
    log_excess = math.log1p(-1.0 / gain)
    out = np.zeros(n_max + 1)
    for n in range(n_max + 1):
        m = np.arange(0, min(n, in_size - 1) + 1, dtype=float)
        logk = log_binomial(float(n), m) - (m + 1.0) * log_g + (n - m) * log_excess
        out[n] = float(np.dot(np.exp(logk), probs[: m.size]))
    return PhotonNumberDistribution(probs=out, tail_bound=dist.tail_bound + tail,
                                    truncation=n_max)


@dataclass(frozen=True)
class ClosureReport:
    id: str
    max_pmf_diff: float
    max_moment_rel_err: float


def max_abs_diff(d1, d2):
    """Pointwise distance between two distributions, padding the shorter with zeros."""
    size = max(len(d1), len(d2))
    a = np.zeros(size)
    b = np.zeros(size)
    a[: len(d1)] = d1.probs
    b[: len(d2)] = d2.probs
    return float(np.max(np.abs(a - b)))


def binomial_closure_check(eta, m, ell, orders=4):
    """l-photon subtraction maps the binomial state (eta, M) onto (eta, M-l).

    Returns the pointwise distance to the directly built target and the worst
    relative error of the factorial moments against eta^k (M-l)!/(M-l-k)!.
    """
    if ell > m:
        raise ImpossibleEventError(f"cannot subtract {ell} photons from a binomial state with M={m}")
    source = build_distribution(StateSpec.binomial(eta, m))
    subtracted, _ = subtract(source, ell)
    target = build_distribution(StateSpec.binomial(eta, m - ell))
    pmf_diff = max_abs_diff(subtracted, target)
    worst = 0.0
    for k in range(1, orders + 1):
        got = states.factorial_moment(subtracted, k)
        if k > m - ell:
            want = 0.0
            worst = max(worst, abs(got))
        else:
            want = eta**k * math.factorial(m - ell) / math.factorial(m - ell - k)
            worst = max(worst, abs(got - want) / want)
    return ClosureReport(id=f"binomial({eta},{m})-sub-{ell}", max_pmf_diff=pmf_diff,
                         max_moment_rel_err=worst)


def negbinomial_closure_check(eta, m, ell, orders=4):
    """l-photon addition maps the negative-binomial state (eta, M) onto (eta, M+l).

    Returns the pointwise distance to the directly built target and the worst
    relative error of the negative factorial moments against
    eta^{-k} (M+l+k)!/(M+l)!.
    """
    source = build_distribution(StateSpec.neg_binomial(eta, m))
    added, _ = add(source, ell)
    target = build_distribution(StateSpec.neg_binomial(eta, m + ell))
    pmf_diff = max_abs_diff(added, target)
    worst = 0.0
    for k in range(1, orders + 1):
        got = states.negative_factorial_moment(added, k)
        want = eta**-k * math.factorial(m + ell + k) / math.factorial(m + ell)
        worst = max(worst, abs(got - want) / want)
    return ClosureReport(id=f"negbinomial({eta},{m})-add-{ell}", max_pmf_diff=pmf_diff,
                         max_moment_rel_err=worst)
