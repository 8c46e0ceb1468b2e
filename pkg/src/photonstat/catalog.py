"""Closed-form results for post-operation states, registered for differential
testing.

Each generic pipeline result (build a distribution, subtract/add photons,
evaluate a generating function or a moment) has an independently coded
analytic counterpart here.  Entries are plain data: an id, an evaluator kind,
a tolerance and a thunk producing (label, generic, reference) triples, so the
verification harness can enumerate the whole catalog without per-entry code.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import states
from .errors import ClosedFormDomainError, ImpossibleEventError, ParameterError
from .mgf import closed_form_M, closed_form_N, mgf_M, mgf_N
from .numerics import laguerre, log_binomial
from .ops import add, added_negative_factorial_moment, subtract, subtracted_factorial_moment
from .states import StateSpec, build_distribution

# -- closed forms ------------------------------------------------------------


def thermal_sub_mgf(nbar, ell, mu):
    """M(mu) of the l-photon subtracted thermal state: (1 + mu*nbar)^-(l+1)."""
    if nbar <= 0.0:
        raise ImpossibleEventError("subtraction from a thermal state needs nbar > 0")
    denom = 1.0 + mu * nbar
    if denom <= 0.0:
        raise ClosedFormDomainError("pole of the subtracted-thermal M(mu)")
    return denom ** -(ell + 1.0)


def thermal_sub_pmf(nbar, ell, n):
    """P(n) of the l-photon subtracted thermal state (negative binomial)."""
    if nbar <= 0.0:
        raise ImpossibleEventError("subtraction from a thermal state needs nbar > 0")
    return math.exp(
        n * math.log(nbar) - (n + ell + 1.0) * math.log1p(nbar) + log_binomial(ell + n, ell)
    )


def thermal_sub_factorial_moment(nbar, ell, m):
    """<n^(m)> of the l-photon subtracted thermal state: (m+l)!/l! nbar^m."""
    if nbar <= 0.0:
        raise ImpossibleEventError("subtraction from a thermal state needs nbar > 0")
    return math.factorial(m + ell) / math.factorial(ell) * nbar**m


def thermal_add_mgf(nbar, ell, lam):
    """N(lambda) of the l-photon added thermal state: [1 + lambda(1+nbar)]^-(l+1)."""
    denom = 1.0 + lam * (1.0 + nbar)
    if denom <= 0.0:
        raise ClosedFormDomainError("pole of the added-thermal N(lambda)")
    return denom ** -(ell + 1.0)


def thermal_add_pmf(nbar, ell, n):
    """P(n) of the l-photon added thermal state; zero below n = l."""
    if n < ell:
        return 0.0
    if nbar == 0.0:
        return 1.0 if n == ell else 0.0
    return math.exp(
        (n - ell) * math.log(nbar) - (n + 1.0) * math.log1p(nbar) + log_binomial(n, ell)
    )


def thermal_add_neg_moment(nbar, ell, m):
    """<(n+1)^(-m)> of the l-photon added thermal state: (m+l)!/l! (1+nbar)^m."""
    return math.factorial(m + ell) / math.factorial(ell) * (1.0 + nbar) ** m


def coherent_add_mgf(alpha2, ell, lam):
    """N(lambda) of the l-photon added coherent state (Laguerre form)."""
    g = 1.0 + lam
    if g == 0.0:
        raise ClosedFormDomainError("pole at lambda = -1")
    base = math.exp(-lam * alpha2 / g) / g
    return base * laguerre(ell, -alpha2 / g) / (g**ell * laguerre(ell, -alpha2))


def coherent_add_pmf(alpha2, ell, n):
    """P(n) of the 1- or 2-photon added coherent state, as shifted Poissonians."""
    a = alpha2

    def shifted(k):
        # e^-a a^(n-k) / (n-k)!, zero when the shift undercuts the support
        if n < k:
            return 0.0
        return math.exp(-a + (n - k) * math.log(a) - math.lgamma(n - k + 1.0)) if a > 0.0 \
            else (1.0 if n == k else 0.0)

    if ell == 1:
        return (shifted(1) + a * shifted(2)) / (1.0 + a)
    if ell == 2:
        return (2.0 * shifted(2) + 4.0 * a * shifted(3) + a**2 * shifted(4)) / (a**2 + 4.0 * a + 2.0)
    raise ParameterError("closed-form pmf available for ell in {1, 2} only")


def coherent_add_mean_plus_one(alpha2, ell):
    """<n+1> of the l-photon added coherent state via the Laguerre ratio."""
    return alpha2 + 2.0 * ell + 1.0 - ell * laguerre(ell - 1, -alpha2) / laguerre(ell, -alpha2)


def fock_sub_mgf(n, ell, mu):
    """M(mu) of the l-photon subtracted number state: (1-mu)^(N-l)."""
    if ell > n:
        raise ImpossibleEventError(f"cannot subtract {ell} photons from |{n}>")
    return (1.0 - mu) ** (n - ell)


def fock_add_mgf(n, ell, lam):
    """N(lambda) of the l-photon added number state: (1+lambda)^-(N+l+1)."""
    g = 1.0 + lam
    if g == 0.0:
        raise ClosedFormDomainError("pole at lambda = -1")
    return g ** -(n + ell + 1.0)


def squeezed_sub_mgf(nbar, ell, mu):
    """M(mu) of the 1- or 2-photon subtracted squeezed vacuum."""
    if nbar <= 0.0:
        raise ImpossibleEventError("subtraction from squeezed vacuum needs nbar > 0")
    inner = 1.0 + 2.0 * mu * nbar - mu**2 * nbar
    if inner <= 0.0:
        raise ClosedFormDomainError("branch point of the subtracted-squeezed M(mu)")
    if ell == 1:
        return (1.0 - mu) / inner**1.5
    if ell == 2:
        return (1.0 + nbar * (3.0 - 4.0 * mu + 2.0 * mu**2)) / (inner**2.5 * (1.0 + 3.0 * nbar))
    raise ParameterError("closed form available for ell in {1, 2} only")


def cat_sub_mgf(even_in, alpha2, ell, mu):
    """M(mu) of the l-photon subtracted cat state: parity flips iff l is odd."""
    even_out = even_in if ell % 2 == 0 else not even_in
    spec = StateSpec.cat_even(alpha2) if even_out else StateSpec.cat_odd(alpha2)
    return closed_form_M(spec, mu)


def cat_factorial_moments(even, alpha2):
    """The first two factorial and negative factorial moments of a cat state.

    Returns (<n^(1)>, <n^(2)>, <(n+1)^(-1)>, <(n+1)^(-2)>); tanh for the even
    cat, coth for the odd one.
    """
    t = math.tanh(alpha2) if even else 1.0 / math.tanh(alpha2)
    a = alpha2
    return (a * t, a**2, a * t + 1.0, a**2 + 4.0 * a * t + 2.0)


def agarwal_mean_plus_one(eta, m):
    """<n+1> of Agarwal's negative binomial state: (M+1)/eta - M."""
    return (m + 1.0) / eta - m


# -- registry ----------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    """One differential check: a generic-pipeline evaluation against a closed form."""

    id: str
    kind: str  # mgf_M | mgf_N | pmf | moment
    tol: float
    pairs: object = field(repr=False)  # () -> list[(label, generic, reference)]
    absolute: bool = False


_MU_GRID = tuple(np.linspace(0.0, 2.0, 9))
_LAM_GRID = tuple(np.linspace(0.0, 5.0, 11))
_NBAR_GRID = (0.5, 1.0, 2.0)
_ALPHA2_GRID = (0.25, 1.0, 4.0)


def _thermal_sub_entries():
    def mgf_pairs():
        out = []
        for nbar in _NBAR_GRID:
            dist = build_distribution(StateSpec.thermal(nbar))
            for ell in (1, 2, 3):
                sub, _ = subtract(dist, ell)
                for mu in _MU_GRID:
                    out.append((f"nbar={nbar},ell={ell},mu={mu:g}",
                                mgf_M(sub, mu), thermal_sub_mgf(nbar, ell, mu)))
        return out

    def pmf_pairs():
        out = []
        for nbar in _NBAR_GRID:
            dist = build_distribution(StateSpec.thermal(nbar))
            for ell in (1, 2, 3):
                sub, _ = subtract(dist, ell)
                for n in range(13):
                    out.append((f"nbar={nbar},ell={ell},n={n}",
                                sub.pmf(n), thermal_sub_pmf(nbar, ell, n)))
        return out

    def moment_pairs():
        out = []
        for nbar in _NBAR_GRID:
            dist = build_distribution(StateSpec.thermal(nbar))
            for ell in (1, 2, 3):
                for m in range(5):
                    out.append((f"nbar={nbar},ell={ell},m={m}",
                                subtracted_factorial_moment(dist, ell, m),
                                thermal_sub_factorial_moment(nbar, ell, m)))
        return out

    return [
        CatalogEntry(id="thermal-sub-mgf", kind="mgf_M", tol=1e-9, pairs=mgf_pairs),
        CatalogEntry(id="thermal-sub-pmf", kind="pmf", tol=1e-9, pairs=pmf_pairs),
        CatalogEntry(id="thermal-sub-moments", kind="moment", tol=1e-10, pairs=moment_pairs),
    ]


def _thermal_add_entries():
    def mgf_pairs():
        out = []
        for nbar in _NBAR_GRID:
            dist = build_distribution(StateSpec.thermal(nbar))
            for ell in (1, 2, 3):
                added, _ = add(dist, ell)
                for lam in _LAM_GRID:
                    out.append((f"nbar={nbar},ell={ell},lam={lam:g}",
                                mgf_N(added, lam), thermal_add_mgf(nbar, ell, lam)))
        return out

    def pmf_pairs():
        out = []
        for nbar in _NBAR_GRID:
            dist = build_distribution(StateSpec.thermal(nbar))
            for ell in (1, 2, 3):
                added, _ = add(dist, ell)
                for n in range(13):
                    out.append((f"nbar={nbar},ell={ell},n={n}",
                                added.pmf(n), thermal_add_pmf(nbar, ell, n)))
        return out

    def moment_pairs():
        out = []
        for nbar in _NBAR_GRID:
            dist = build_distribution(StateSpec.thermal(nbar))
            for ell in (1, 2, 3):
                for m in range(5):
                    out.append((f"nbar={nbar},ell={ell},m={m}",
                                added_negative_factorial_moment(dist, ell, m),
                                thermal_add_neg_moment(nbar, ell, m)))
        return out

    return [
        CatalogEntry(id="thermal-add-mgf", kind="mgf_N", tol=1e-9, pairs=mgf_pairs),
        CatalogEntry(id="thermal-add-pmf", kind="pmf", tol=1e-9, pairs=pmf_pairs),
        CatalogEntry(id="thermal-add-moments", kind="moment", tol=1e-10, pairs=moment_pairs),
    ]


def _coherent_add_entries():
    lam_grid = tuple(np.linspace(0.0, 3.0, 7))

    def mgf_pairs():
        out = []
        for a2 in _ALPHA2_GRID:
            dist = build_distribution(StateSpec.coherent(a2))
            for ell in (1, 2, 3, 4):
                added, _ = add(dist, ell)
                for lam in lam_grid:
                    out.append((f"a2={a2},ell={ell},lam={lam:g}",
                                mgf_N(added, lam), coherent_add_mgf(a2, ell, lam)))
        return out

    def pmf_pairs():
        out = []
        for a2 in _ALPHA2_GRID:
            dist = build_distribution(StateSpec.coherent(a2))
            for ell in (1, 2):
                added, _ = add(dist, ell)
                for n in range(13):
                    out.append((f"a2={a2},ell={ell},n={n}",
                                added.pmf(n), coherent_add_pmf(a2, ell, n)))
        return out

    def mean_pairs():
        out = []
        for a2 in (0.1, 1.0, 10.0):
            dist = build_distribution(StateSpec.coherent(a2))
            for ell in (1, 2, 3, 4):
                got = added_negative_factorial_moment(dist, ell, 1)
                out.append((f"a2={a2},ell={ell}", got, coherent_add_mean_plus_one(a2, ell)))
        return out

    return [
        CatalogEntry(id="coherent-add-mgf", kind="mgf_N", tol=1e-9, pairs=mgf_pairs),
        CatalogEntry(id="coherent-add-pmf", kind="pmf", tol=1e-9, pairs=pmf_pairs),
        CatalogEntry(id="coherent-add-mean", kind="moment", tol=1e-10, pairs=mean_pairs),
    ]


def _fock_entries():
    def sub_pairs():
        out = []
        for n in (1, 2, 3, 5):
            dist = build_distribution(StateSpec.fock(n))
            for ell in range(1, n + 1):
                sub, _ = subtract(dist, ell)
                for mu in _MU_GRID:
                    out.append((f"N={n},ell={ell},mu={mu:g}",
                                mgf_M(sub, mu), fock_sub_mgf(n, ell, mu)))
        return out

    def add_pairs():
        out = []
        for n in (0, 1, 3):
            dist = build_distribution(StateSpec.fock(n))
            for ell in (1, 2, 3):
                added, _ = add(dist, ell)
                for lam in _LAM_GRID:
                    out.append((f"N={n},ell={ell},lam={lam:g}",
                                mgf_N(added, lam), fock_add_mgf(n, ell, lam)))
        return out

    return [
        CatalogEntry(id="fock-sub-mgf", kind="mgf_M", tol=1e-12, pairs=sub_pairs, absolute=True),
        CatalogEntry(id="fock-add-mgf", kind="mgf_N", tol=1e-12, pairs=add_pairs),
    ]


def _squeezed_entries():
    def pairs():
        out = []
        for nbar in _NBAR_GRID:
            dist = build_distribution(StateSpec.squeezed(nbar))
            for ell in (1, 2):
                sub, _ = subtract(dist, ell)
                for mu in _MU_GRID:
                    out.append((f"nbar={nbar},ell={ell},mu={mu:g}",
                                mgf_M(sub, mu), squeezed_sub_mgf(nbar, ell, mu)))
        return out

    return [CatalogEntry(id="squeezed-sub-mgf", kind="mgf_M", tol=1e-9, pairs=pairs)]


def _cat_entries():
    a2_grid = (0.5, 1.0, 2.0)

    def sub_pairs():
        out = []
        for a2 in a2_grid:
            for even in (True, False):
                spec = StateSpec.cat_even(a2) if even else StateSpec.cat_odd(a2)
                dist = build_distribution(spec)
                for ell in (1, 2):
                    sub, _ = subtract(dist, ell)
                    for mu in _MU_GRID:
                        label = f"{'even' if even else 'odd'},a2={a2},ell={ell},mu={mu:g}"
                        out.append((label, mgf_M(sub, mu), cat_sub_mgf(even, a2, ell, mu)))
        return out

    def moment_pairs():
        out = []
        for a2 in a2_grid:
            for even in (True, False):
                spec = StateSpec.cat_even(a2) if even else StateSpec.cat_odd(a2)
                dist = build_distribution(spec)
                want = cat_factorial_moments(even, a2)
                got = (
                    states.factorial_moment(dist, 1),
                    states.factorial_moment(dist, 2),
                    states.negative_factorial_moment(dist, 1),
                    states.negative_factorial_moment(dist, 2),
                )
                tag = "even" if even else "odd"
                for name, g, w in zip(("fm1", "fm2", "nfm1", "nfm2"), got, want):
                    out.append((f"{tag},a2={a2},{name}", g, w))
        return out

    return [
        CatalogEntry(id="cat-sub-mgf", kind="mgf_M", tol=1e-9, pairs=sub_pairs),
        CatalogEntry(id="cat-moments", kind="moment", tol=1e-10, pairs=moment_pairs),
    ]


def base_state_specs():
    specs = {}
    for nbar in _NBAR_GRID:
        specs[f"thermal({nbar})"] = StateSpec.thermal(nbar)
        specs[f"squeezed({nbar})"] = StateSpec.squeezed(nbar)
    for a2 in _ALPHA2_GRID:
        specs[f"coherent({a2})"] = StateSpec.coherent(a2)
        specs[f"cat-even({a2})"] = StateSpec.cat_even(a2)
        specs[f"cat-odd({a2})"] = StateSpec.cat_odd(a2)
    for n in (0, 1, 4):
        specs[f"fock({n})"] = StateSpec.fock(n)
    for eta, m in ((0.3, 2), (0.5, 3), (0.8, 5)):
        specs[f"binomial({eta},{m})"] = StateSpec.binomial(eta, m)
        specs[f"negbinomial({eta},{m})"] = StateSpec.neg_binomial(eta, m)
        specs[f"agarwal({eta},{m})"] = StateSpec.agarwal(eta, m)
    return specs


def _base_state_entries():
    def m_pairs():
        out = []
        for name, spec in base_state_specs().items():
            dist = build_distribution(spec)
            for mu in _MU_GRID:
                out.append((f"{name},mu={mu:g}", mgf_M(dist, mu), closed_form_M(spec, mu)))
        return out

    def n_pairs():
        out = []
        for name, spec in base_state_specs().items():
            dist = build_distribution(spec)
            for lam in _LAM_GRID:
                out.append((f"{name},lam={lam:g}", mgf_N(dist, lam), closed_form_N(spec, lam)))
        return out

    def agarwal_mean_pairs():
        out = []
        for eta, m in ((0.3, 2), (0.5, 1), (0.8, 5)):
            dist = build_distribution(StateSpec.agarwal(eta, m))
            got = states.negative_factorial_moment(dist, 1)
            out.append((f"eta={eta},M={m}", got, agarwal_mean_plus_one(eta, m)))
        return out

    return [
        CatalogEntry(id="states-mgf-M", kind="mgf_M", tol=1e-9, pairs=m_pairs),
        CatalogEntry(id="states-mgf-N", kind="mgf_N", tol=1e-9, pairs=n_pairs),
        CatalogEntry(id="agarwal-mean", kind="moment", tol=1e-12, pairs=agarwal_mean_pairs),
    ]


def all_entries():
    """The full registry, in a stable order."""
    entries = []
    entries.extend(_base_state_entries())
    entries.extend(_thermal_sub_entries())
    entries.extend(_thermal_add_entries())
    entries.extend(_coherent_add_entries())
    entries.extend(_fock_entries())
    entries.extend(_squeezed_entries())
    entries.extend(_cat_entries())
    return entries
