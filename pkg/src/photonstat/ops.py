"""Heralded multi-photon subtraction and addition on distributions.

Subtracting l photons reweights by the falling factorial, P'(n) being
proportional to (n+l)!/n! * P(n+l); adding l photons reweights by the rising
factorial, P'(n) proportional to n!/(n-l)! * P(n-l).  The normalizers are the
l-th factorial moment and the l-th negative factorial moment of the input,
i.e. the success weights of the heralding event, and they are reported in an
``OpRecord`` alongside the conditioned distribution.

Note: the success weight of l-photon addition used throughout is the
antinormally-ordered moment <(n+1)...(n+l)>, the quantity that actually
normalizes the reweighted distribution (it is >= 1, so addition is always
possible).
"""

from dataclasses import dataclass

import numpy as np

from . import states
from .errors import ImpossibleEventError, ParameterError
from .numerics import falling_factorial_weights, rising_factorial_weights
from .states import PhotonNumberDistribution

ZERO_NORM_EPS = 1e-300


@dataclass(frozen=True)
class OpRecord:
    kind: str
    count: int
    success_norm: float


def subtract(dist, ell):
    """Condition on a successful l-photon subtraction.

    Raises ImpossibleEventError when the l-th factorial moment vanishes
    (vacuum input, or l exceeding the support of a number state).
    """
    if ell < 1:
        raise ParameterError("subtraction count must be >= 1")
    probs = dist.probs
    if probs.size <= ell:
        raise ImpossibleEventError(f"cannot subtract {ell} photons: support too small")
    src = np.arange(ell, probs.size)
    weights = falling_factorial_weights(src, ell)
    unnorm = weights * probs[ell:]
    norm = float(unnorm.sum())
    if norm <= ZERO_NORM_EPS:
        raise ImpossibleEventError(f"{ell}-photon subtraction has zero success weight")
    out = PhotonNumberDistribution(
        probs=unnorm / norm,
        tail_bound=dist.tail_bound,
        truncation=dist.truncation - ell,
    )
    return out, OpRecord(kind="subtract", count=ell, success_norm=norm)


def add(dist, ell):
    """Condition on a successful l-photon addition (always possible)."""
    if ell < 1:
        raise ParameterError("addition count must be >= 1")
    probs = dist.probs
    src = np.arange(probs.size)
    weights = rising_factorial_weights(src, ell)
    unnorm = weights * probs
    norm = float(unnorm.sum())
    out_probs = np.zeros(probs.size + ell)
    out_probs[ell:] = unnorm / norm
    out = PhotonNumberDistribution(
        probs=out_probs,
        tail_bound=dist.tail_bound,
        truncation=dist.truncation + ell,
    )
    return out, OpRecord(kind="add", count=ell, success_norm=norm)


def subtracted_factorial_moment(dist, ell, m):
    """m-th factorial moment after l-photon subtraction, as the moment ratio
    <n^(m+l)> / <n^(l)> of the input distribution."""
    denom = states.factorial_moment(dist, ell)
    if denom <= ZERO_NORM_EPS:
        raise ImpossibleEventError(f"{ell}-photon subtraction has zero success weight")
    return states.factorial_moment(dist, m + ell) / denom


def added_negative_factorial_moment(dist, ell, m):
    """m-th negative factorial moment after l-photon addition, as the ratio
    <(n+1)^(-m-l)> / <(n+1)^(-l)> of the input distribution."""
    denom = states.negative_factorial_moment(dist, ell)
    return states.negative_factorial_moment(dist, m + ell) / denom


@dataclass(frozen=True)
class MeanShiftReport:
    mean_before: float
    mean_after_sub: float | None
    mean_after_add: float
    g2: float | None
    predicted_add_mean: float


def mean_shift_analysis(dist):
    """How single-photon subtraction and addition move the mean.

    ``predicted_add_mean`` is mean + 1 + variance/(mean + 1), which the
    reweighting rule reproduces exactly; the subtraction branch is None when
    the input has no photons to subtract.
    """
    mean = dist.mean
    var = dist.variance
    predicted = mean + 1.0 + var / (mean + 1.0)
    added, _ = add(dist, 1)
    g2 = None
    mean_after_sub = None
    if mean > 0.0:
        g2 = states.factorial_moment(dist, 2) / mean**2
        subtracted, _ = subtract(dist, 1)
        mean_after_sub = subtracted.mean
    return MeanShiftReport(
        mean_before=mean,
        mean_after_sub=mean_after_sub,
        mean_after_add=added.mean,
        g2=g2,
        predicted_add_mean=predicted,
    )


def covariance_double_sum(dist, ell):
    """Direct double-sum oracle for the positivity of
    sum_{m,n} P(n)P(m) [A(m)-A(n)][B(m)-B(n)]
    with A(n) = n+1 and B(n) = (n+1)...(n+l)."""
    if ell < 1:
        raise ParameterError("ell must be >= 1")
    p = dist.probs
    a = dist.ns.astype(float) + 1.0
    b = rising_factorial_weights(dist.ns, ell)
    da = a[:, None] - a[None, :]
    db = b[:, None] - b[None, :]
    return float(np.einsum("i,j,ij,ij->", p, p, da, db))
