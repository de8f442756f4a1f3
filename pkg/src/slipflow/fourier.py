"""Fourier cosine coefficients of the boundary metric factor and its
reciprocal, plus the associated toroidal polynomial families.

For the area-pi ellipse the boundary metric factor is
g(psi) = 1/sqrt(1 - e^2 cos^2 psi) and ghat = 1/g.  Their cosine
coefficients

    g_n    = (2/pi) int_0^pi g(psi)    cos(2 n psi) dpsi,
    ghat_n = (2/pi) int_0^pi ghat(psi) cos(2 n psi) dpsi,

satisfy the three-term recurrences (RE(1/2)) and (RE(3/2)) with K/E seeds.
Both sequences are minimal solutions, so forward recurrence amplifies
roundoff along the dominant solution; a running error bound flags the
first unreliable index and the tail is recomputed by adaptive composite
Gauss-Legendre quadrature (panel doubling, smooth integrand).

The polynomial families p01/p10 (order 1/2) and their hatted analogues
(order 3/2) are kept in exact rational arithmetic so the contiguous
identities can be verified exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np
from numpy.polynomial.legendre import leggauss

from .geometry import EllipseGeom
from .specfun import DomainError, elliptic_ke

__all__ = [
    "CoeffKind",
    "FourierCoeffs",
    "CoeffMethod",
    "g_pointwise",
    "ghat_pointwise",
    "coeffs",
    "coeffs_quadrature",
    "cross_checks",
    "CrossCheckReport",
    "PolyFamily",
    "PolySeq",
    "poly_family",
    "poly_eval",
    "poly_identities",
    "PolyIdentityReport",
    "IdentityViolationError",
]


class CoeffKind(Enum):
    G = "g"
    GHAT = "ghat"


class CoeffMethod(Enum):
    RECURRENCE = "recurrence"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class FourierCoeffs:
    kind: CoeffKind
    values: np.ndarray          # indices 0..N
    N: int
    geom: EllipseGeom
    method: CoeffMethod
    quadrature_from: int | None = None   # first index recomputed by quadrature


def g_pointwise(geom: EllipseGeom, psi) -> np.ndarray | float:
    """g(psi) = 1/sqrt(1 - e^2 cos^2 psi)."""
    return 1.0 / np.sqrt(1.0 - geom.e2 * np.cos(psi) ** 2)


def ghat_pointwise(geom: EllipseGeom, psi) -> np.ndarray | float:
    """ghat(psi) = sqrt(1 - e^2 cos^2 psi) = 1/g(psi)."""
    return np.sqrt(1.0 - geom.e2 * np.cos(psi) ** 2)


_GL_NODES, _GL_WEIGHTS = leggauss(16)


def coeffs_quadrature(geom: EllipseGeom, kind: CoeffKind, indices) -> np.ndarray:
    """Cosine coefficients for the given indices by panel-doubling composite GL.

    Panels double until every requested coefficient moves by less than
    1e-13 * max(1, |value|); the integrands are smooth (e < 1) so the
    convergence is exponential in the panel count.
    """
    indices = np.atleast_1d(np.asarray(indices, dtype=int))
    fun = g_pointwise if kind is CoeffKind.G else ghat_pointwise
    nmax = int(indices.max(initial=0))
    panels = max(8, nmax // 2)
    prev = None
    while True:
        edges = np.linspace(0.0, math.pi, panels + 1)
        h = edges[1] - edges[0]
        mid = edges[:-1] + h / 2.0
        psi = (mid[:, None] + (h / 2.0) * _GL_NODES[None, :]).ravel()
        wts = np.broadcast_to((h / 2.0) * _GL_WEIGHTS[None, :], (panels, 16)).ravel()
        fvals = fun(geom, psi) * wts
        est = (2.0 / math.pi) * (np.cos(2.0 * np.outer(indices, psi)) @ fvals)
        if prev is not None:
            if np.all(np.abs(est - prev) <= 1e-13 * np.maximum(1.0, np.abs(est))):
                return est
        if panels > 1 << 16:
            return est
        prev = est
        panels *= 2


def _seeds(geom: EllipseGeom, kind: CoeffKind) -> tuple[float, float, float]:
    """(value0, value1, worst-case absolute error of value1).

    The n = 1 seeds cancel K against E as e -> 0, so the error estimate
    carries the magnitude of the cancelled terms.
    """
    big_k, big_e = elliptic_ke(geom.e)
    eps = np.finfo(float).eps
    if kind is CoeffKind.G:
        v0 = (4.0 / math.pi) * big_k
        v1 = (4.0 / math.pi) * (geom.q2 * big_k - 2.0 * geom.q * big_e)
        e1 = eps * (4.0 / math.pi) * (geom.q2 * big_k + 2.0 * geom.q * big_e)
    else:
        v0 = (4.0 / math.pi) * big_e
        v1 = (4.0 / (3.0 * math.pi)) * ((geom.q2 - 1.0) * big_k - geom.q2 * big_e)
        e1 = eps * (4.0 / (3.0 * math.pi)) * ((geom.q2 - 1.0) * big_k + geom.q2 * big_e)
    return v0, v1, e1


def coeffs(geom: EllipseGeom, kind: CoeffKind, N: int) -> FourierCoeffs:
    """Coefficients 0..N by recurrence with monitored quadrature fallback."""
    if N < 1:
        raise DomainError(f"truncation N={N} must be >= 1")
    if geom.is_circle:
        values = np.zeros(N + 1)
        values[0] = 2.0
        return FourierCoeffs(kind=kind, values=values, N=N, geom=geom,
                             method=CoeffMethod.RECURRENCE)
    eps = np.finfo(float).eps
    q2 = geom.q2
    values = np.empty(N + 1)
    errs = np.empty(N + 1)
    values[0], values[1], errs[1] = _seeds(geom, kind)
    errs[0] = eps * abs(values[0])
    # (RE(1/2)): (n-1/2) g_n    = 2 q2 (n-1) g_{n-1}    - (n-3/2) g_{n-2}
    # (RE(3/2)): (n+1/2) ghat_n = 2 q2 (n-1) ghat_{n-1} - (n-5/2) ghat_{n-2}
    lo, hi = (-0.5, -1.5) if kind is CoeffKind.G else (0.5, -2.5)
    flagged = 1 if errs[1] > 1e-8 * max(abs(values[1]), 1e-300) else None
    for n in range(2, N + 1) if flagged is None else ():
        den = n + lo
        values[n] = (2.0 * q2 * (n - 1) * values[n - 1] - (n + hi) * values[n - 2]) / den
        errs[n] = (2.0 * q2 * (n - 1) * errs[n - 1] + abs(n + hi) * errs[n - 2]) / den
        if flagged is None and errs[n] > 1e-8 * max(abs(values[n]), 1e-300):
            flagged = n
            break
    if flagged is not None:
        idx = np.arange(flagged, N + 1)
        values[flagged:] = coeffs_quadrature(geom, kind, idx)
        return FourierCoeffs(kind=kind, values=values, N=N, geom=geom,
                             method=CoeffMethod.QUADRATURE, quadrature_from=flagged)
    return FourierCoeffs(kind=kind, values=values, N=N, geom=geom,
                         method=CoeffMethod.RECURRENCE)


@dataclass(frozen=True)
class CrossCheckReport:
    """Max absolute residuals of the g <-> ghat coefficient identities."""

    residual_cross0: float    # 4 q ghat_n - (2 q2 g_n - g_{n+1} - g_{n-1})
    residual_cross1: float    # g_{n+1} - (q2 g_n + (4n-2) q ghat_n)
    residual_cross2: float    # 8 n q ghat_n - (g_{n+1} - g_{n-1})
    residual_cross1a2: float  # g_{n-1} - (q2 g_n - (4n+2) q ghat_n)
    quadrature_indices: tuple[int, ...]

    @property
    def max_residual(self) -> float:
        return max(self.residual_cross0, self.residual_cross1,
                   self.residual_cross2, self.residual_cross1a2)


def cross_checks(g: FourierCoeffs, ghat: FourierCoeffs) -> CrossCheckReport:
    """Residuals of the four published relations over n = 1..N-1."""
    if g.geom != ghat.geom or g.N != ghat.N:
        raise ValueError("cross_checks needs matching geometry and truncation")
    if g.kind is not CoeffKind.G or ghat.kind is not CoeffKind.GHAT:
        raise ValueError("pass (kind=G, kind=GHAT) in that order")
    if g.geom.is_circle:
        return CrossCheckReport(0.0, 0.0, 0.0, 0.0, ())
    q, q2 = g.geom.q, g.geom.q2
    n = np.arange(1, g.N)
    gn, gp, gm = g.values[1:-1], g.values[2:], g.values[:-2]
    hn = ghat.values[1:-1]
    r0 = np.abs(4.0 * q * hn - (2.0 * q2 * gn - gp - gm)).max()
    r1 = np.abs(gp - (q2 * gn + (4.0 * n - 2.0) * q * hn)).max()
    r2 = np.abs(8.0 * n * q * hn - (gp - gm)).max()
    r12 = np.abs(gm - (q2 * gn - (4.0 * n + 2.0) * q * hn)).max()
    quad_idx: list[int] = []
    for fc in (g, ghat):
        if fc.quadrature_from is not None:
            quad_idx.extend(range(fc.quadrature_from, fc.N + 1))
    return CrossCheckReport(float(r0), float(r1), float(r2), float(r12),
                            tuple(sorted(set(quad_idx))))


# ---------------------------------------------------------------------------
# Exact-rational toroidal polynomial families
# ---------------------------------------------------------------------------

class PolyFamily(Enum):
    P01 = "p01"
    P10 = "p10"
    P01HAT = "p01hat"
    P10HAT = "p10hat"


_FAMILY_ALPHA = {
    PolyFamily.P01: Fraction(1, 2),
    PolyFamily.P10: Fraction(1, 2),
    PolyFamily.P01HAT: Fraction(3, 2),
    PolyFamily.P10HAT: Fraction(3, 2),
}

MAX_POLY_ORDER = 64

Poly = tuple[Fraction, ...]   # dense coefficients, index = power of x


def _poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return tuple((p[i] if i < len(p) else Fraction(0)) + (q[i] if i < len(q) else Fraction(0))
                 for i in range(n))


def _poly_scale(p: Poly, s: Fraction) -> Poly:
    return tuple(ci * s for ci in p)


def _poly_shift_x(p: Poly) -> Poly:
    """Multiply by x."""
    return (Fraction(0),) + p


def _poly_mul(p: Poly, q: Poly) -> Poly:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        if pi:
            for j, qj in enumerate(q):
                out[i + j] += pi * qj
    return tuple(out)


def _poly_diff(p: Poly) -> Poly:
    if len(p) <= 1:
        return (Fraction(0),)
    return tuple(Fraction(i) * p[i] for i in range(1, len(p)))


def _poly_trim(p: Poly) -> Poly:
    n = len(p)
    while n > 1 and p[n - 1] == 0:
        n -= 1
    return p[:n]


@dataclass(frozen=True)
class PolySeq:
    family: PolyFamily
    coeffs: tuple[Poly, ...]     # index n = 0..N

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1


def poly_family(family: PolyFamily, N: int) -> PolySeq:
    """Exact-rational polynomial solutions of (RE(alpha)), alpha = 1/2 or 3/2."""
    if N > MAX_POLY_ORDER:
        raise DomainError(f"polynomial order N={N} exceeds cap {MAX_POLY_ORDER}")
    alpha = _FAMILY_ALPHA[family]
    starts_one_at = 1 if family in (PolyFamily.P01, PolyFamily.P01HAT) else 0
    u0: Poly = (Fraction(1 - starts_one_at),)
    u1: Poly = (Fraction(starts_one_at),)
    out = [u0, u1]
    for n in range(1, N):
        # (n + alpha) u_{n+1} = 2 x n u_n - (n - alpha) u_{n-1}
        term = _poly_add(_poly_scale(_poly_shift_x(out[n]), Fraction(2 * n)),
                         _poly_scale(out[n - 1], -(Fraction(n) - alpha)))
        out.append(_poly_trim(_poly_scale(term, 1 / (Fraction(n) + alpha))))
    return PolySeq(family=family, coeffs=tuple(out[: N + 1]))


def poly_eval(seq: PolySeq, n: int, x: float) -> float:
    """Evaluate member n at x (Horner)."""
    acc = 0.0
    for c in reversed(seq.coeffs[n]):
        acc = acc * x + float(c)
    return acc


class IdentityViolationError(RuntimeError):
    """An exact polynomial identity failed; names the first failing index."""


@dataclass(frozen=True)
class PolyIdentityReport:
    N: int
    checked: tuple[str, ...] = field(default_factory=tuple)


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def poly_identities(N: int) -> PolyIdentityReport:
    """Exact verification of the published contiguous identities up to N.

    Raises IdentityViolationError naming the identity and the first failing
    index; success returns the list of identities checked.
    """
    if N < 5:
        raise DomainError("identity suite needs N >= 5")
    p01 = poly_family(PolyFamily.P01, N + 1).coeffs
    p10 = poly_family(PolyFamily.P10, N + 1).coeffs
    h01 = poly_family(PolyFamily.P01HAT, N + 1).coeffs
    h10 = poly_family(PolyFamily.P10HAT, N + 1).coeffs

    def fail(name: str, n: int):
        raise IdentityViolationError(f"identity {name} fails first at n={n}")

    one = (Fraction(1),)
    for n in range(N):
        lhs = _poly_add(_poly_mul(p10[n], p01[n + 1]),
                        _poly_scale(_poly_mul(p10[n + 1], p01[n]), Fraction(-1)))
        if _poly_trim(lhs) != _poly_scale(one, Fraction(1, 2 * n + 1)):
            fail("wronskian_half", n)
        lhs = _poly_add(_poly_mul(h10[n], h01[n + 1]),
                        _poly_scale(_poly_mul(h10[n + 1], h01[n]), Fraction(-1)))
        if _poly_trim(lhs) != _poly_scale(one, Fraction(-3, (2 * n - 1) * (2 * n + 1) * (2 * n + 3))):
            fail("wronskian_three_half", n)
    for n in range(1, N + 1):
        lead = p01[n][-1]
        if lead != Fraction(2 ** (2 * n - 2) * math.factorial(n - 1), _double_factorial(2 * n - 1)):
            fail("leading_coefficient", n)
    for n in range(1, N):
        lhs = _poly_add(_poly_scale(h01[n], Fraction(-4)),
                        _poly_scale(_poly_shift_x(h10[n]), Fraction(12)))
        rhs = _poly_scale(_poly_add(p10[n + 1], _poly_scale(p10[n - 1], Fraction(-1))),
                          Fraction(3, n))
        if _poly_trim(lhs) != _poly_trim(rhs):
            fail("mixed_lower", n)
        lhs = _poly_add(_poly_scale(_poly_shift_x(h01[n]), Fraction(4)),
                        _poly_scale(h10[n], Fraction(-12)))
        rhs = _poly_scale(_poly_add(p01[n + 1], _poly_scale(p01[n - 1], Fraction(-1))),
                          Fraction(3, n))
        if _poly_trim(lhs) != _poly_trim(rhs):
            fail("mixed_upper", n)
    x2m1 = (Fraction(-1), Fraction(0), Fraction(1))
    for j in range(1, N + 1):
        lhs = _poly_scale(_poly_mul(x2m1, _poly_diff(p10[j])), Fraction(2))
        rhs = _poly_add(_poly_add(_poly_scale(_poly_shift_x(p10[j]), Fraction(2 * j)), p01[j]),
                        _poly_scale(p10[j - 1], Fraction(-(2 * j - 1))))
        if _poly_trim(lhs) != _poly_trim(rhs):
            fail("derivative_p10", j)
        lhs = _poly_scale(_poly_mul(x2m1, _poly_diff(p01[j])), Fraction(2))
        rhs = _poly_add(_poly_add(_poly_scale(_poly_shift_x(p01[j]), Fraction(2 * j - 2)),
                                  _poly_scale(p10[j], Fraction(-1))),
                        _poly_scale(p01[j - 1], Fraction(-(2 * j - 1))))
        if _poly_trim(lhs) != _poly_trim(rhs):
            fail("derivative_p01", j)
    for n in range(1, N + 1):
        scale = Fraction(4 * n * n - 1)
        lhs = _poly_scale(h01[n], scale)
        rhs = _poly_add(_poly_scale(_poly_diff(_poly_add(_poly_shift_x(p01[n]), p10[n])), Fraction(6)),
                        _poly_scale(p01[n], Fraction(-3)))
        if _poly_trim(lhs) != _poly_trim(rhs):
            fail("order_shift_p01hat", n)
        lhs = _poly_scale(h10[n], scale)
        rhs = _poly_add(_poly_scale(_poly_diff(_poly_add(_poly_shift_x(p10[n]), p01[n])), Fraction(2)),
                        _poly_scale(p10[n], Fraction(-3)))
        if _poly_trim(lhs) != _poly_trim(rhs):
            fail("order_shift_p10hat", n)
    # reflection symmetry u_{-n} = u_n by downward extension of the recurrence
    for fam, seq in ((PolyFamily.P01, p01), (PolyFamily.P10, p10)):
        alpha = _FAMILY_ALPHA[fam]
        down = [seq[1], seq[0]]   # u_1, u_0, then u_{-1}, u_{-2}, ...
        for k in range(min(N, 8)):
            n = -k
            # (n - alpha) u_{n-1} = 2 x n u_n - (n + alpha) u_{n+1}
            term = _poly_add(_poly_scale(_poly_shift_x(down[k + 1]), Fraction(2 * n)),
                             _poly_scale(down[k], -(Fraction(n) + alpha)))
            down.append(_poly_trim(_poly_scale(term, 1 / (Fraction(n) - alpha))))
            if _poly_trim(down[-1]) != _poly_trim(seq[k + 1]):
                fail(f"reflection_{fam.value}", -(k + 1))
    return PolyIdentityReport(
        N=N,
        checked=("wronskian_half", "wronskian_three_half", "leading_coefficient",
                 "mixed_lower", "mixed_upper", "derivative_p10", "derivative_p01",
                 "order_shift_p01hat", "order_shift_p10hat", "reflection"),
    )
