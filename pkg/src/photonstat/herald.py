"""Bayesian conditioning on heralding success, plus a Monte Carlo simulator of
the beam-splitter subtraction mechanism.

The microscopic model: each of the n photons present is independently
reflected into the ancilla and detected with probability p, and the herald
fires when exactly one detector click occurs.  The chance of heralding given
n photons is therefore n p (1-p)^(n-1), which makes success evidence for
larger n; conditioning on it tilts the prior towards n P(n), and in the
p -> 0 limit the surviving mode carries exactly the one-photon-subtracted
statistics.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ImpossibleEventError, InsufficientStatisticsError, ParameterError
from .states import PhotonNumberDistribution, from_probs

RNG_ALGORITHM = "pcg64"


@dataclass(frozen=True)
class HeraldConfig:
    p: float
    samples: int
    seed: int

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ParameterError("per-photon coupling probability p must lie in (0, 1)")
        if self.samples < 1:
            raise ParameterError("sample count must be >= 1")


@dataclass(frozen=True)
class HeraldResult:
    empirical_conditional: PhotonNumberDistribution
    success_rate: float
    accepted: int
    samples: int
    rng_algorithm: str = RNG_ALGORITHM


def success_prob_given_n(n, p):
    """Probability that exactly one of n photons triggers the herald."""
    if n < 0:
        raise ParameterError("photon number must be >= 0")
    if not 0.0 < p < 1.0:
        raise ParameterError("p must lie in (0, 1)")
    if n == 0:
        return 0.0
    return n * p * (1.0 - p) ** (n - 1)


def posterior_given_subtraction(prior):
    """Posterior over the pre-subtraction photon number, proportional to n P(n)."""
    weights = prior.ns.astype(float) * prior.probs
    norm = float(weights.sum())
    if norm <= 0.0:
        raise ImpossibleEventError("subtraction from a photonless state cannot herald")
    return from_probs(weights / norm)


def posterior_given_addition(prior):
    """Posterior over the pre-addition photon number, proportional to (n+1) P(n)."""
    weights = (prior.ns.astype(float) + 1.0) * prior.probs
    return from_probs(weights / float(weights.sum()))


def exact_heralded_conditional(prior, p):
    """Analytic conditional of the one-click model: proportional to
    n p (1-p)^(n-1) P(n), shifted down by the subtracted photon.

    Returns (conditional, success probability)."""
    n = prior.ns.astype(float)
    weights = n * p * (1.0 - p) ** (n - 1.0) * prior.probs
    success = float(weights.sum())
    if success <= 1e-300:
        raise ImpossibleEventError("heralded subtraction has zero success probability")
    return from_probs(weights[1:] / success), success


def simulate_heralded_subtraction(prior, cfg):
    """Monte Carlo estimate of the heralded one-photon-subtracted state.

    Draws photon numbers from the prior by inverse CDF, flips n independent
    detection coins per draw, accepts on exactly one click and records n - 1.
    Identical seeds give bit-identical results.
    """
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    cdf = np.cumsum(prior.probs)
    u = rng.random(cfg.samples)
    ns = np.searchsorted(cdf, u, side="right")
    np.clip(ns, 0, prior.truncation, out=ns)
    clicks = rng.binomial(ns, cfg.p)
    heralded = ns[clicks == 1] - 1
    accepted = int(heralded.size)
    if accepted == 0:
        conditional, success = exact_heralded_conditional(prior, cfg.p)
        raise InsufficientStatisticsError(
            f"no heralding event in {cfg.samples} samples",
            exact_conditional=conditional,
            success_prob=success,
        )
    counts = np.bincount(heralded, minlength=1).astype(float)
    empirical = from_probs(counts / accepted)
    return HeraldResult(
        empirical_conditional=empirical,
        success_rate=accepted / cfg.samples,
        accepted=accepted,
        samples=cfg.samples,
    )


def tv_distance(d1, d2):
    """Total variation distance, half the l1 distance on the padded supports."""
    size = max(len(d1), len(d2))
    a = np.zeros(size)
    b = np.zeros(size)
    a[: len(d1)] = d1.probs
    b[: len(d2)] = d2.probs
    return 0.5 * float(np.abs(a - b).sum())


@dataclass(frozen=True)
class BayesConsistencyReport:
    alpha2: float
    p: float
    ratios: tuple
    max_deviation: float


def coherent_bayes_consistency(prior, alpha2, p, n_max=8):
    """Check the linear-in-n success law on a coherent prior.

    The one-click model gives P(succ|n)/P(succ) -> n/|alpha|^2 as p -> 0;
    reported deviations are |ratio * |alpha|^2 / n - 1| for n = 1..n_max.
    """
    if alpha2 <= 0.0:
        raise ParameterError("the consistency check needs |alpha|^2 > 0")
    n = prior.ns.astype(float)
    success = float(np.dot(n * p * (1.0 - p) ** (n - 1.0), prior.probs))
    ratios = []
    deviations = []
    for k in range(1, n_max + 1):
        ratio = success_prob_given_n(k, p) / success
        ratios.append(ratio)
        deviations.append(abs(ratio * alpha2 / k - 1.0))
    return BayesConsistencyReport(
        alpha2=alpha2,
        p=p,
        ratios=tuple(ratios),
        max_deviation=max(deviations),
    )
