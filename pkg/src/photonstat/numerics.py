"""Low-level numerical kernels.

Factorial-style weights are evaluated as differences of log-gamma and then
exponentiated, so they stay finite well past the n ~ 170 overflow point of
plain factorials.
"""

import math

import numpy as np
from scipy.special import gammaln

from .errors import ExtrapolationError


def log_binomial(n, k):
    """log C(n, k), valid for real n >= k >= 0."""
    return gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)


def falling_factorial_weights(n, m):
    """n!/(n-m)! = n(n-1)...(n-m+1) for an integer array n; zero where n < m."""
    n = np.asarray(n, dtype=float)
    out = np.zeros_like(n)
    ok = n >= m
    out[ok] = np.exp(gammaln(n[ok] + 1.0) - gammaln(n[ok] - m + 1.0))
    return out


def rising_factorial_weights(n, m):
    """(n+1)(n+2)...(n+m) for an integer array n."""
    n = np.asarray(n, dtype=float)
    return np.exp(gammaln(n + m + 1.0) - gammaln(n + 1.0))


def laguerre(k, x):
    """Laguerre polynomial L_k(x) by the three-term recurrence.

    (j+1) L_{j+1} = (2j+1-x) L_j - j L_{j-1}; stable for the negative
    arguments used by the photon-added coherent closed forms.
    """
    if k < 0:
        raise ValueError("Laguerre order must be >= 0")
    if k == 0:
        return 1.0
    prev, cur = 1.0, 1.0 - x
    for j in range(1, k):
        prev, cur = cur, ((2.0 * j + 1.0 - x) * cur - j * prev) / (j + 1.0)
    return cur


def log_cosh(x):
    return x + math.log1p(math.exp(-2.0 * x)) - math.log(2.0)


def log_sinh(x):
    if x <= 0.0:
        raise ValueError("log_sinh requires x > 0")
    return x + math.log1p(-math.exp(-2.0 * x)) - math.log(2.0)


def central_difference(f, x, m, h):
    """m-th derivative of f at x from the (m+1)-point central stencil, O(h^2)."""
    total = 0.0
    for k in range(m + 1):
        coeff = (-1.0) ** k * math.comb(m, k)
        total += coeff * f(x + (m / 2.0 - k) * h)
    return total / h**m


def richardson_derivative(f, x, m, h0=None, rel_tol=1e-3):
    """m-th derivative of f at x: central differences at h, h/2, h/4 plus two
    Richardson levels.

    Step sizes above order 4 are widened; the narrow default step leaves too
    little signal above the fp rounding floor once h**m reaches ~1e-12.
    Raises ExtrapolationError when the last two levels disagree badly.
    """
    if m < 0:
        raise ValueError("derivative order must be >= 0")
    if m == 0:
        return f(x)
    if h0 is None:
        base = 1e-2 if m <= 4 else 2.5e-2
        h0 = base * (1.0 + abs(x))
    d = [central_difference(f, x, m, h0 / 2.0**k) for k in range(3)]
    r1 = [(4.0 * d[k + 1] - d[k]) / 3.0 for k in range(2)]
    r2 = (16.0 * r1[1] - r1[0]) / 15.0
    err = abs(r2 - r1[1])
    if not math.isfinite(r2) or err > rel_tol * (abs(r2) + 1.0):
        raise ExtrapolationError(
            f"order-{m} derivative at {x} did not converge (spread {err:.3g})"
        )
    return r2
