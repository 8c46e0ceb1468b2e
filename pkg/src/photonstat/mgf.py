"""The two moment generating functions, as truncated series and closed forms.

``mgf_M`` evaluates sum_n (1-mu)^n P(n); ``mgf_N`` evaluates
sum_n (1+lambda)^{-(n+1)} P(n).  Series evaluation carries a convergence
flag: outside |1-mu| <= 1 (or |1+lambda| >= 1) the truncated sum only
represents the full series when the terms have decayed at the edge of the
truncation window, which is exactly what the flag certifies.  Closed forms
are exact analytic expressions per state family, independent of any
truncation, and the numerical-differentiation helpers cross-check the two
routes against each other.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ClosedFormDomainError, ParameterError, SeriesDivergenceError
from .numerics import richardson_derivative
from .states import Family

_EDGE_TERMS = 8
_EDGE_TOL = 1e-12


@dataclass(frozen=True)
class MgfPoint:
    argument: float
    value: float
    converged: bool


def _series_point(arg, terms, exact, contracting):
    """Sum the truncated series and certify it.

    Exact finite-support sums and contracting series (term multiplier of
    magnitude <= 1, truncation error bounded by the certified tail mass) are
    converged outright; otherwise the terms must be decaying and negligible
    at the edge of the truncation window.
    """
    total = float(terms.sum())
    if not math.isfinite(total):
        return MgfPoint(argument=arg, value=total, converged=False)
    if exact or contracting:
        return MgfPoint(argument=arg, value=total, converged=True)
    tail = np.abs(terms[-2 * _EDGE_TERMS:])
    near, far = tail[-_EDGE_TERMS:].max(), tail[:-_EDGE_TERMS].max()
    converged = near <= far and near <= _EDGE_TOL * max(1.0, abs(total))
    return MgfPoint(argument=arg, value=total, converged=bool(converged))


def mgf_M_point(dist, mu):
    base = 1.0 - mu
    n = dist.ns
    with np.errstate(over="ignore", invalid="ignore"):
        terms = np.power(base, n.astype(float)) * dist.probs
    return _series_point(mu, terms, dist.tail_bound == 0.0, abs(base) <= 1.0)


def mgf_N_point(dist, lam):
    base = 1.0 + lam
    if base == 0.0:
        raise SeriesDivergenceError("mgf_N undefined at lambda = -1")
    n = dist.ns
    with np.errstate(over="ignore", invalid="ignore"):
        terms = np.power(base, -(n.astype(float) + 1.0)) * dist.probs
    return _series_point(lam, terms, dist.tail_bound == 0.0, abs(base) >= 1.0)


def mgf_M(dist, mu):
    point = mgf_M_point(dist, mu)
    if not point.converged:
        raise SeriesDivergenceError(f"M-series does not converge at mu={mu}")
    return point.value


def mgf_N(dist, lam):
    point = mgf_N_point(dist, lam)
    if not point.converged:
        raise SeriesDivergenceError(f"N-series does not converge at lambda={lam}")
    return point.value


def raw_moment(dist, m):
    """<n^m> = sum_n n^m P(n)."""
    if m < 0:
        raise ParameterError("moment order must be >= 0")
    return float(np.dot(dist.ns.astype(float) ** m, dist.probs))


# -- closed forms ------------------------------------------------------------


def closed_form_M(spec, mu):
    """Exact M(mu) for the state family, independent of truncation."""
    fam = spec.family
    if fam is Family.FOCK:
        return (1.0 - mu) ** spec.n
    if fam is Family.COHERENT:
        return math.exp(-mu * spec.alpha2)
    if fam is Family.THERMAL:
        denom = 1.0 + mu * spec.nbar
        if denom == 0.0:
            raise ClosedFormDomainError("thermal M(mu) pole at 1 + mu*nbar = 0")
        return 1.0 / denom
    if fam is Family.SQUEEZED:
        inner = 1.0 + 2.0 * mu * spec.nbar - mu**2 * spec.nbar
        if inner <= 0.0:
            raise ClosedFormDomainError("squeezed M(mu) branch point")
        return inner**-0.5
    if fam is Family.CAT_EVEN:
        return math.cosh((1.0 - mu) * spec.alpha2) / math.cosh(spec.alpha2)
    if fam is Family.CAT_ODD:
        return math.sinh((1.0 - mu) * spec.alpha2) / math.sinh(spec.alpha2)
    if fam is Family.BINOMIAL:
        return (1.0 - spec.eta * mu) ** spec.m
    if fam is Family.NEG_BINOMIAL:
        denom = 1.0 - (1.0 - spec.eta) * (1.0 - mu)
        if denom == 0.0:
            raise ClosedFormDomainError("negative-binomial M(mu) pole")
        return spec.eta ** (spec.m + 1) * (1.0 - mu) ** spec.m / denom ** (spec.m + 1)
    if fam is Family.AGARWAL:
        denom = spec.eta + mu * (1.0 - spec.eta)
        if denom == 0.0:
            raise ClosedFormDomainError("Agarwal M(mu) pole")
        return (spec.eta / denom) ** (spec.m + 1)
    raise AssertionError(fam)


def closed_form_N(spec, lam):
    """Exact N(lambda) for the state family, independent of truncation."""
    fam = spec.family
    g = 1.0 + lam
    if g == 0.0:
        raise ClosedFormDomainError("N(lambda) pole at lambda = -1")
    if fam is Family.FOCK:
        return g ** -(spec.n + 1.0)
    if fam is Family.COHERENT:
        return math.exp(-lam * spec.alpha2 / g) / g
    if fam is Family.THERMAL:
        denom = 1.0 + lam * (spec.nbar + 1.0)
        if denom == 0.0:
            raise ClosedFormDomainError("thermal N(lambda) pole")
        return 1.0 / denom
    if fam is Family.SQUEEZED:
        inner = 1.0 + lam * (2.0 + lam) / g**2 * spec.nbar
        if inner <= 0.0:
            raise ClosedFormDomainError("squeezed N(lambda) branch point")
        return inner**-0.5 / g
    if fam is Family.CAT_EVEN:
        return math.cosh(spec.alpha2 / g) / (g * math.cosh(spec.alpha2))
    if fam is Family.CAT_ODD:
        return math.sinh(spec.alpha2 / g) / (g * math.sinh(spec.alpha2))
    if fam is Family.BINOMIAL:
        return (1.0 + lam * (1.0 - spec.eta)) ** spec.m / g ** (spec.m + 1.0)
    if fam is Family.NEG_BINOMIAL:
        denom = lam + spec.eta
        if denom == 0.0:
            raise ClosedFormDomainError("negative-binomial N(lambda) pole")
        return (spec.eta / denom) ** (spec.m + 1)
    if fam is Family.AGARWAL:
        denom = lam + spec.eta
        if denom == 0.0:
            raise ClosedFormDomainError("Agarwal N(lambda) pole")
        return (spec.eta * g / denom) ** (spec.m + 1) / g
    raise AssertionError(fam)


def moments_from_closed_form(spec, kind, m):
    """Factorial (kind "M") or negative factorial (kind "N") moment of order m
    obtained by Richardson-extrapolated differentiation of the closed form at 0.

    This is the slow cross-check route; direct summation over the distribution
    is the primary one.
    """
    if m < 0 or m > 6:
        raise ParameterError("differentiation order capped at 6")
    if kind == "M":
        f = lambda mu: closed_form_M(spec, mu)
    elif kind == "N":
        f = lambda lam: closed_form_N(spec, lam)
    else:
        raise ParameterError("kind must be 'M' or 'N'")
    if m == 0:
        return f(0.0)
    return (-1.0) ** m * richardson_derivative(f, 0.0, m)


def probability_via_derivative(spec, n):
    """P(n) = (1/n!) (-d/dmu)^n M(mu) at mu = 1, by numerical differentiation."""
    if n < 0 or n > 6:
        raise ParameterError("differentiation order capped at 6")
    f = lambda mu: closed_form_M(spec, mu)
    if n == 0:
        return f(1.0)
    deriv = (-1.0) ** n * richardson_derivative(f, 1.0, n)
    return deriv / math.factorial(n)
