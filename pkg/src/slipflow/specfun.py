"""Complete elliptic integrals and toroidal Legendre Q functions.

K and E are computed by arithmetic-geometric mean iteration, which converges
quadratically and needs no external special-function library.  The toroidal
functions Q_{n-1/2}(z) and Q^{-1}_{n-1/2}(z) for z > 1 are seeded from their
elliptic-integral closed forms and continued by the three-term recurrence

    (n + 1/2) u_{n+1} = 2 z n u_n - (n - 1/2) u_{n-1}.

Q_{n-1/2} is the minimal solution of that recurrence, so forward iteration
amplifies roundoff along the dominant (P-type) solution.  A running error
bound is carried alongside the values and a warning is emitted once the
estimated loss exceeds six digits; callers needing accurate large-n values
should use the quadrature route for the Fourier coefficients instead.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

__all__ = [
    "DomainError",
    "ToroidalAccuracyWarning",
    "elliptic_k",
    "elliptic_e",
    "elliptic_ke",
    "toroidal_q",
    "toroidal_q_sequence",
]

_EPS = np.finfo(float).eps


class DomainError(ValueError):
    """Argument outside the mathematical domain of a special function."""


class ToroidalAccuracyWarning(UserWarning):
    """Forward toroidal recurrence has lost more than six digits."""


def elliptic_ke(k: float) -> tuple[float, float]:
    """Complete elliptic integrals (K(k), E(k)) by one joint AGM pass.

    Modulus convention: K(k) = int_0^{pi/2} (1 - k^2 sin^2 t)^{-1/2} dt.
    """
    if not 0.0 <= k <= 1.0 or math.isnan(k):
        raise DomainError(f"modulus k={k!r} outside [0, 1]")
    if k == 1.0:
        raise DomainError("K(k) diverges at k = 1")
    a, b = 1.0, math.sqrt((1.0 - k) * (1.0 + k))
    c = k
    csum = 0.5 * c * c
    power = 1.0
    while abs(a - b) > _EPS * a:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        csum += power * c * c
        power *= 2.0
    big_k = math.pi / (2.0 * a)
    return big_k, big_k * (1.0 - csum)


def elliptic_k(k: float) -> float:
    """K(k), complete elliptic integral of the first kind, 0 <= k < 1."""
    if not 0.0 <= k < 1.0 or math.isnan(k):
        raise DomainError(f"modulus k={k!r} outside [0, 1) for K")
    return elliptic_ke(k)[0]


def elliptic_e(k: float) -> float:
    """E(k), complete elliptic integral of the second kind, 0 <= k <= 1."""
    if not 0.0 <= k <= 1.0 or math.isnan(k):
        raise DomainError(f"modulus k={k!r} outside [0, 1] for E")
    if k == 1.0:
        return 1.0
    return elliptic_ke(k)[1]


def _toroidal_seeds(q2: float) -> tuple[float, float]:
    """(Q_{-1/2}(q2), Q_{1/2}(q2)) from their K/E closed forms."""
    q = 0.5 * (q2 + 1.0)
    k = 1.0 / math.sqrt(q)
    big_k, big_e = elliptic_ke(k)
    q_minus = k * big_k
    q_plus = q2 * k * big_k - 2.0 * math.sqrt(q) * big_e
    return q_minus, q_plus


def toroidal_q_sequence(nmax: int, mu: int, q2: float) -> tuple[np.ndarray, np.ndarray]:
    """Q^mu_{n-1/2}(q2) for n = 0..nmax together with estimated digits lost.

    mu must be 0 or -1.  The second array gives, per index, the estimated
    number of decimal digits lost to forward-recurrence error growth
    (relative to the returned value).
    """
    if mu not in (0, -1):
        raise DomainError(f"order mu={mu} not supported (0 or -1)")
    if not q2 > 1.0:
        raise DomainError(f"toroidal argument q2={q2!r} must exceed 1")
    n_top = max(nmax, 1) + (1 if mu == -1 else 0)
    vals = np.empty(n_top + 1)
    errs = np.empty(n_top + 1)
    vals[0], vals[1] = _toroidal_seeds(q2)
    errs[0] = _EPS * abs(vals[0])
    errs[1] = _EPS * abs(vals[1])
    for n in range(1, n_top):
        # (RE(1/2)): (n+1/2) u_{n+1} = 2 q2 n u_n - (n-1/2) u_{n-1}
        vals[n + 1] = (2.0 * q2 * n * vals[n] - (n - 0.5) * vals[n - 1]) / (n + 0.5)
        # worst-case propagation: magnitudes add
        errs[n + 1] = (2.0 * q2 * n * errs[n] + (n - 0.5) * errs[n - 1]) / (n + 0.5)
    if mu == 0:
        out = vals[: nmax + 1].copy()
        err = errs[: nmax + 1].copy()
    else:
        # Q^{-1}_{n-1/2}(z) = (z Q_{n-1/2} - Q_{n-3/2}) / ((n+1/2) sqrt(z^2-1)),
        # with Q_{-3/2} = Q_{1/2} by the mu-independent reflection in n.
        root = math.sqrt(q2 * q2 - 1.0)
        out = np.empty(nmax + 1)
        err = np.empty(nmax + 1)
        for n in range(nmax + 1):
            prev = vals[1] if n == 0 else vals[n - 1]
            eprev = errs[1] if n == 0 else errs[n - 1]
            out[n] = (q2 * vals[n] - prev) / ((n + 0.5) * root)
            err[n] = (q2 * errs[n] + eprev) / ((n + 0.5) * root)
    with np.errstate(divide="ignore", invalid="ignore"):
        lost = np.log10(np.maximum(err / np.maximum(np.abs(out), 1e-300), 1.0) / _EPS)
    return out, np.maximum(lost, 0.0)


def toroidal_q(n: int, mu: int, q2: float) -> float:
    """Toroidal Legendre function Q^mu_{n-1/2}(q2) for q2 > 1, mu in {0, -1}.

    Uses Q^mu_{-n-1/2} = Q^mu_{n-1/2} for negative n.  Warns via
    ToroidalAccuracyWarning when the forward recurrence has lost more than
    six digits; the quadrature route through the boundary Fourier
    coefficients is then the accurate alternative.
    """
    n = abs(int(n))
    vals, lost = toroidal_q_sequence(n, mu, q2)
    if lost[n] > 6.0:
        warnings.warn(
            f"toroidal_q(n={n}, mu={mu}, q2={q2:g}) lost ~{lost[n]:.1f} digits in "
            "forward recurrence; use the quadrature-backed Fourier coefficients "
            "for accurate values at this index",
            ToroidalAccuracyWarning,
            stacklevel=2,
        )
    return float(vals[n])


def toroidal_q_m1_alt(n: int, q2: float) -> float:
    """Q^{-1}_{n-1/2}(q2) via the alternative contiguous relation.

    Uses (Q_{n+1/2} - Q_{n-3/2}) / (2 n sqrt(z^2 - 1)) for n >= 1; n = 0
    falls back to the primary route.  Exists so the two published formulas
    can be cross-checked against each other.
    """
    n = abs(int(n))
    if not q2 > 1.0:
        raise DomainError(f"toroidal argument q2={q2!r} must exceed 1")
    if n == 0:
        return toroidal_q(0, -1, q2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ToroidalAccuracyWarning)
        vals, _ = toroidal_q_sequence(n + 1, 0, q2)
    return float((vals[n + 1] - vals[n - 1]) / (2.0 * n * math.sqrt(q2 * q2 - 1.0)))
