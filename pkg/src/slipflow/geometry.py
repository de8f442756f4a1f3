"""Ellipse and rectangle geometry: axes, elliptic-coordinate parameters,
perimeter, area moments, and boundary moments.

Ellipses are normalized to area pi (semi-axes a and 1/a, a >= 1).  The
circle a = 1 degenerates the elliptic-coordinate quantities (eta0, q, q2
are infinite) and is carried as an explicit `is_circle` branch; every
downstream formula has a clean circle limit.

Boundary moments i(m,n) = int_{dOmega} x^{2m} y^{2n} ds are computed from
the reduced integrals j(m,n) with i(m,n) = 2 a^{2(m-n)+1} j(m,n).  The edge
sequence u_m = j(m,0) follows a three-term recurrence seeded by K/E values;
the recurrence divides by e^2 each step, so a cancellation monitor switches
to direct Gauss-Legendre quadrature for near-circular ellipses.  Interior
entries fill in through j(m+1,n) + j(m,n+1) = j(m,n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .specfun import DomainError, elliptic_ke

__all__ = [
    "EllipseGeom",
    "RectGeom",
    "MomentSet",
    "ellipse_from_aspect",
    "perimeter",
    "boundary_moment",
    "moment_set",
    "MAX_MOMENT_ORDER",
]

MAX_MOMENT_ORDER = 8


@dataclass(frozen=True)
class EllipseGeom:
    """Scalar geometry of an area-pi ellipse with semi-axes a >= 1 and b = 1/a."""

    a: float
    b: float
    c: float        # focal half-distance sqrt(a^2 - 1/a^2)
    e: float        # eccentricity
    eta0: float     # boundary elliptic coordinate (inf for the circle)
    q: float        # cosh^2(eta0) = 1/e^2
    q2: float       # 2q - 1
    is_circle: bool

    @property
    def e2(self) -> float:
        return self.e * self.e

    @property
    def area(self) -> float:
        return math.pi

    @property
    def eps(self) -> float:
        """Aspect perturbation parameter (a^4 - 1)/(a^4 + 1)."""
        a4 = self.a ** 4
        return (a4 - 1.0) / (a4 + 1.0)


@dataclass(frozen=True)
class RectGeom:
    """Rectangle (-a, a) x (-b, b)."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (self.a > 0.0 and self.b > 0.0):
            raise DomainError(f"rectangle half-sides must be positive, got ({self.a}, {self.b})")

    @property
    def area(self) -> float:
        return 4.0 * self.a * self.b

    @property
    def perimeter(self) -> float:
        return 4.0 * (self.a + self.b)


@dataclass(frozen=True)
class MomentSet:
    """Area/boundary moment bundle for the quadratic variational machinery."""

    A: float
    P: float
    Ixx: float
    Iyy: float
    i2: float
    i4: float
    C1: float
    C2: float


def ellipse_from_aspect(a: float) -> EllipseGeom:
    """Build the area-pi ellipse with semi-major axis a >= 1."""
    if not (a >= 1.0 and math.isfinite(a)):
        raise DomainError(f"aspect a={a!r} must be finite and >= 1 (swap axes first)")
    if a == 1.0:
        return EllipseGeom(a=1.0, b=1.0, c=0.0, e=0.0,
                           eta0=math.inf, q=math.inf, q2=math.inf, is_circle=True)
    a4m1 = (a - 1.0) * (a + 1.0) * (a * a + 1.0)   # a^4 - 1 without cancellation
    e2 = a4m1 / a ** 4
    e = math.sqrt(e2)
    c = math.sqrt(a4m1) / a
    eta0 = 0.5 * math.log((a * a + 1.0) / (a * a - 1.0))   # arctanh(1/a^2)
    q = 1.0 / e2
    q2 = (a ** 4 + 1.0) / a4m1
    return EllipseGeom(a=a, b=1.0 / a, c=c, e=e, eta0=eta0, q=q, q2=q2, is_circle=False)


def perimeter(geom: EllipseGeom) -> float:
    """Perimeter 4 a E(e) of the area-pi ellipse."""
    if geom.is_circle:
        return 2.0 * math.pi
    _, big_e = elliptic_ke(geom.e)
    return 4.0 * geom.a * big_e


def _edge_u_quadrature(e2: float, mmax: int) -> np.ndarray:
    """u_m = 2 int_0^{pi/2} cos^{2m}(t) sqrt(1 - e^2 cos^2 t) dt by 96-pt GL."""
    x, w = leggauss(96)
    t = (x + 1.0) * (math.pi / 4.0)
    wt = w * (math.pi / 4.0)
    c2 = np.cos(t) ** 2
    root = np.sqrt(1.0 - e2 * c2)
    powers = c2[None, :] ** np.arange(mmax + 1)[:, None]
    return 2.0 * (powers * root[None, :]) @ wt


def _edge_u_recurrence(e2: float, mmax: int) -> tuple[np.ndarray, np.ndarray]:
    """u_m by the three-term recurrence, with a worst-case error estimate."""
    big_k, big_e = elliptic_ke(math.sqrt(e2))
    ep2 = 1.0 - e2
    u = np.empty(mmax + 1)
    err = np.empty(mmax + 1)
    u[0] = 2.0 * big_e
    err[0] = np.finfo(float).eps * u[0]
    if mmax >= 1:
        u[1] = (2.0 / 3.0) * ((1.0 - 2.0 * ep2) * big_e + ep2 * big_k) / e2
        # the seed itself cancels K against E as e -> 0
        err[1] = np.finfo(float).eps * (2.0 / 3.0) * (big_e + big_k) / e2
    for m in range(1, mmax):
        # (2m-1) u_{m-1} - ((2m+2)e^2 + 2m) u_m + (2m+3) e^2 u_{m+1} = 0
        den = (2 * m + 3) * e2
        u[m + 1] = (((2 * m + 2) * e2 + 2 * m) * u[m] - (2 * m - 1) * u[m - 1]) / den
        err[m + 1] = (((2 * m + 2) * e2 + 2 * m) * err[m] + (2 * m - 1) * err[m - 1]) / den
    return u, err


def _edge_u(geom: EllipseGeom, mmax: int) -> np.ndarray:
    e2 = geom.e2
    u, err = _edge_u_recurrence(e2, mmax)
    bad = err > 1e-13 * np.maximum(1.0, np.abs(u))
    if bad.any():
        first = int(np.argmax(bad))
        u[first:] = _edge_u_quadrature(e2, mmax)[first:]
    return u


def boundary_moment(geom: EllipseGeom, m: int, n: int) -> float:
    """Boundary moment i(m,n) = int_{dOmega} x^{2m} y^{2n} ds, m + n <= 8."""
    if m < 0 or n < 0 or m + n > MAX_MOMENT_ORDER:
        raise DomainError(f"boundary moment order (m={m}, n={n}) outside 0 <= m+n <= {MAX_MOMENT_ORDER}")
    if geom.is_circle:
        # j(m,n) = B(m+1/2, n+1/2) on the unit circle
        j = math.gamma(m + 0.5) * math.gamma(n + 0.5) / math.gamma(m + n + 1.0)
        return 2.0 * j
    u = _edge_u(geom, m + n)
    # walk down the Pascal triangle: j(m, k+1) = j(m, k) - j(m+1, k)
    row = u.copy()
    for _ in range(n):
        row = row[:-1] - row[1:]
    j = row[m]
    return 2.0 * geom.a ** (2 * (m - n) + 1) * j


def moment_set(geom: EllipseGeom) -> MomentSet:
    """Full moment bundle; closed K/E forms for i2, i4, C1, C2."""
    if geom.is_circle:
        return MomentSet(A=math.pi, P=2.0 * math.pi, Ixx=math.pi / 4.0, Iyy=math.pi / 4.0,
                         i2=2.0 * math.pi, i4=2.0 * math.pi, C1=0.0, C2=0.0)
    a = geom.a
    big_k, big_e = elliptic_ke(geom.e)
    p = 4.0 * a * big_e
    a4 = a ** 4
    i2 = 4.0 / (3.0 * a) * ((1.0 + a4) * big_e + big_k)
    i4 = 4.0 / (5.0 * a ** 3) * ((1.0 - a4 + a4 * a4) * big_e + 2.0 * (1.0 + a4) * big_k)
    c1 = (-2.0 * a * a * p + (1.0 + a4) * i2) / (a4 - 1.0)
    c2 = (4.0 * a4 * p - 4.0 * a * a * (1.0 + a4) * i2 + (1.0 + a4) ** 2 * i4) / (a4 - 1.0) ** 2
    return MomentSet(A=math.pi, P=p, Ixx=math.pi * a * a / 4.0, Iyy=math.pi / (4.0 * a * a),
                     i2=i2, i4=i4, C1=c1, C2=c2)
