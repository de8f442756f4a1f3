"""Non-series estimates of the flow rate: classical bounds, the quadratic
variational lower bound, the rational lower bounds R and R_a, and the
small-slip / large-slip / near-circular asymptotic expansions.

All lower bounds come from the variational functional
J(v) = int(2v - |grad v|^2) - (1/beta) oint v^2, whose maximiser solves
the Robin problem with J(u) = Q.  The rational bound

    R(beta) = Q0 + beta A^2/P + beta (Sinf - Q0)^2 / (beta (Sinf - Q0) - S1)

uses the P(inf) functionals; R_a substitutes their quadratic-test-function
approximations and coincides with the quadratic variational winner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geometry import (EllipseGeom, MomentSet, RectGeom, boundary_moment,
                       moment_set, perimeter)
from .specfun import DomainError, elliptic_ke

__all__ = [
    "Method",
    "BoundKind",
    "FlowEstimate",
    "QuadraticLB",
    "km93_lower",
    "upper_bounds",
    "quad_varl_lb",
    "r_bound",
    "ra_bound",
    "sigma_approx",
    "q0_ellipse",
    "q1_ellipse",
    "q_small_beta",
    "q_large_beta",
    "q_near_circular",
    "r1_inequality_check",
    "STANDARD_A_GRID",
    "STANDARD_BETA_GRID",
]

STANDARD_A_GRID = (1.0, 65.0 / 64.0, 17.0 / 16.0, 5.0 / 4.0, 2.0, 4.0, 16.0)
STANDARD_BETA_GRID = (1.0 / 64.0, 1.0 / 16.0, 1.0 / 4.0, 1.0, 4.0, 16.0, 64.0)


class Method(Enum):
    FOURIER = "fourier"
    QUAD_VARL = "quad_varl"
    R_BOUND = "r"
    RA_BOUND = "ra"
    KM93_LB = "km93"
    UPPER_U = "upper_u"
    UPPER_ISO = "upper_iso"
    SMALL_BETA = "small_beta"
    LARGE_BETA = "large_beta"
    NEAR_CIRC = "near_circ"
    FD = "fd"


class BoundKind(Enum):
    EXACT_SERIES = "exact_series"
    LOWER = "lower"
    UPPER = "upper"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class FlowEstimate:
    method: Method
    value: float
    kind: BoundKind


@dataclass(frozen=True)
class QuadraticLB:
    """Variational winner over v = c0 + cxx x^2 + cyy y^2."""

    c0: float
    cxx: float
    cyy: float
    J: float
    trivial: bool = False       # beta = 0 gives only the zero bound

    @property
    def estimate(self) -> FlowEstimate:
        return FlowEstimate(method=Method.QUAD_VARL, value=self.J, kind=BoundKind.LOWER)


def q0_ellipse(geom: EllipseGeom) -> float:
    """No-slip flow pi a^2/(4 (1 + a^4)) of the area-pi ellipse."""
    a = geom.a
    return math.pi * a * a / (4.0 * (1.0 + a ** 4))


def q1_ellipse(geom: EllipseGeom) -> float:
    """Small-slip slope (4/3) a^3 (2 (1+a^4) E(e) - K(e)) / (1+a^4)^2."""
    if geom.is_circle:
        return math.pi / 2.0
    big_k, big_e = elliptic_ke(geom.e)
    a4 = geom.a ** 4
    return (4.0 / 3.0) * geom.a ** 3 / (1.0 + a4) ** 2 * (2.0 * (1.0 + a4) * big_e - big_k)


def _area_perimeter(geom_or_rect: EllipseGeom | RectGeom) -> tuple[float, float]:
    if isinstance(geom_or_rect, RectGeom):
        return geom_or_rect.area, geom_or_rect.perimeter
    return math.pi, perimeter(geom_or_rect)


def km93_lower(geom_or_rect: EllipseGeom | RectGeom, beta: float, q0: float) -> FlowEstimate:
    """Classical bound Q >= Q0 + beta A^2 / P."""
    if beta < 0.0:
        raise DomainError("beta must be >= 0")
    area, perim = _area_perimeter(geom_or_rect)
    return FlowEstimate(method=Method.KM93_LB, value=q0 + beta * area * area / perim,
                        kind=BoundKind.LOWER)


def upper_bounds(geom_or_rect: EllipseGeom | RectGeom, beta: float,
                 sigma_inf: float) -> tuple[FlowEstimate, FlowEstimate]:
    """(U(beta), Q_disk(beta)): the P(inf) bound and the same-area disk bound."""
    if beta < 0.0:
        raise DomainError("beta must be >= 0")
    area, perim = _area_perimeter(geom_or_rect)
    u = FlowEstimate(method=Method.UPPER_U, value=beta * area * area / perim + sigma_inf,
                     kind=BoundKind.UPPER)
    r_eq = math.sqrt(area / math.pi)
    iso = FlowEstimate(method=Method.UPPER_ISO,
                       value=math.pi * r_eq ** 3 * (r_eq + 4.0 * beta) / 8.0,
                       kind=BoundKind.UPPER)
    return u, iso


def _quad_varl_core(A: float, P: float, Ixx: float, Iyy: float,
                    ixx: float, iyy: float, i40: float, i22: float, i04: float,
                    beta: float) -> QuadraticLB:
    """Stationarity system of J over quadratics c0 + cxx x^2 + cyy y^2."""
    mat = np.array([
        [P, ixx, iyy],
        [ixx, 4.0 * beta * Ixx + i40, i22],
        [iyy, i22, 4.0 * beta * Iyy + i04],
    ])
    rhs = beta * np.array([A, Ixx, Iyy])
    try:
        c0, cxx, cyy = np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError("singular variational system: degenerate moments") from exc
    j = c0 * A + cxx * Ixx + cyy * Iyy
    return QuadraticLB(c0=float(c0), cxx=float(cxx), cyy=float(cyy), J=float(j))


def quad_varl_lb(geom_or_rect: EllipseGeom | RectGeom, beta: float) -> QuadraticLB:
    """Variational lower bound over quadratic test functions.

    The solved coefficients satisfy J = Qc = c0 A + cxx Ixx + cyy Iyy
    identically.  beta = 0 only admits the trivial zero bound (flagged).
    Boundary moments come from the geometry module; for the circle the
    winner reproduces the exact solution.
    """
    if beta < 0.0:
        raise DomainError("beta must be >= 0")
    if beta == 0.0:
        return QuadraticLB(c0=0.0, cxx=0.0, cyy=0.0, J=0.0, trivial=True)
    if isinstance(geom_or_rect, RectGeom):
        a, b = geom_or_rect.a, geom_or_rect.b
        return _quad_varl_core(
            A=4.0 * a * b, P=4.0 * (a + b),
            Ixx=4.0 * a ** 3 * b / 3.0, Iyy=4.0 * a * b ** 3 / 3.0,
            ixx=4.0 * (a * a * b + a ** 3 / 3.0),
            iyy=4.0 * (b * b * a + b ** 3 / 3.0),
            i40=4.0 * (a ** 4 * b + a ** 5 / 5.0),
            i22=4.0 * (a * a * b ** 3 / 3.0 + b * b * a ** 3 / 3.0),
            i04=4.0 * (b ** 4 * a + b ** 5 / 5.0),
            beta=beta)
    geom = geom_or_rect
    if geom.is_circle:
        # the winner is the exact solution u = 1/4 + beta/2 - r^2/4
        return QuadraticLB(c0=0.25 + 0.5 * beta, cxx=-0.25, cyy=-0.25,
                           J=math.pi * (1.0 + 4.0 * beta) / 8.0)
    moments = moment_set(geom)
    return _quad_varl_core(
        A=moments.A, P=moments.P, Ixx=moments.Ixx, Iyy=moments.Iyy,
        ixx=boundary_moment(geom, 1, 0), iyy=boundary_moment(geom, 0, 1),
        i40=boundary_moment(geom, 2, 0), i22=boundary_moment(geom, 1, 1),
        i04=boundary_moment(geom, 0, 2), beta=beta)


def r_bound(area: float, perim: float, q0: float, sigma_inf: float,
            sigma_1: float, beta: float) -> FlowEstimate:
    """Rational lower bound R(beta) from (A, P, Q0, Sigma_inf, Sigma_1).

    The circle degenerates Sigma_inf = Q0, Sigma_1 = 0; the 0/0 limit is
    the exact circle value Q0 + beta A^2/P.
    """
    if beta < 0.0:
        raise DomainError("beta must be >= 0")
    gap = sigma_inf - q0
    if gap < -1e-12 * max(1.0, abs(q0)):
        raise DomainError(f"Sigma_inf={sigma_inf} below Q0={q0} violates the contract")
    if sigma_1 > 1e-12:
        raise DomainError(f"Sigma_1={sigma_1} must be <= 0")
    base = q0 + beta * area * area / perim
    den = beta * gap - sigma_1
    extra = 0.0 if den <= 0.0 else beta * gap * gap / den
    return FlowEstimate(method=Method.R_BOUND, value=base + extra, kind=BoundKind.LOWER)


def sigma_approx(geom: EllipseGeom, moments: MomentSet | None = None) -> tuple[float, float]:
    """Quadratic-test-function approximations (Sigma_a_inf, Sigma_a_1).

    Sigma_a_inf = pi (a^4 + (1/4)(a^4 - 1 - 4 a^2 C1/P)^2) / (4 a^2 (a^4 + 1));
    Sigma_a_1 follows from the boundary square of the same test function.
    Both keep R_a a rigorous lower bound and underestimate the true values.
    """
    if geom.is_circle:
        return math.pi / 8.0, 0.0
    if moments is None:
        moments = moment_set(geom)
    a = geom.a
    a4 = a ** 4
    t = a4 - 1.0 - 4.0 * a * a * moments.C1 / moments.P
    s_inf = math.pi * (a4 + 0.25 * t * t) / (4.0 * a * a * (a4 + 1.0))
    s_1 = -(t * t) * (moments.C2 - moments.C1 ** 2 / moments.P) / (16.0 * (a4 + 1.0) ** 2)
    return s_inf, s_1


def ra_bound(geom: EllipseGeom, beta: float, moments: MomentSet | None = None) -> FlowEstimate:
    """R(beta) evaluated with the quadratic approximations of the Sigmas."""
    if moments is None:
        moments = moment_set(geom)
    s_inf, s_1 = sigma_approx(geom, moments)
    est = r_bound(moments.A, moments.P, q0_ellipse(geom), s_inf, s_1, beta)
    return FlowEstimate(method=Method.RA_BOUND, value=est.value, kind=BoundKind.LOWER)


def q_small_beta(geom: EllipseGeom, beta: float) -> FlowEstimate:
    """Two-term small-slip expansion Q0 + beta Q1."""
    if beta < 0.0:
        raise DomainError("beta must be >= 0")
    return FlowEstimate(method=Method.SMALL_BETA,
                        value=q0_ellipse(geom) + beta * q1_ellipse(geom),
                        kind=BoundKind.ASYMPTOTIC)


def q_large_beta(geom_or_rect: EllipseGeom | RectGeom, beta: float,
                 sigma_inf: float, sigma_1: float) -> FlowEstimate:
    """Three-term large-slip expansion beta A^2/P + Sigma_inf + Sigma_1/beta."""
    if beta <= 0.0:
        raise DomainError("beta must be > 0 for the large-slip expansion")
    area, perim = _area_perimeter(geom_or_rect)
    return FlowEstimate(method=Method.LARGE_BETA,
                        value=beta * area * area / perim + sigma_inf + sigma_1 / beta,
                        kind=BoundKind.ASYMPTOTIC)


def q_large_beta_dominant(geom_or_rect: EllipseGeom | RectGeom, beta: float) -> float:
    """Dominant term beta A^2 / P alone."""
    area, perim = _area_perimeter(geom_or_rect)
    return beta * area * area / perim


def q_near_circular(e: float, beta: float) -> FlowEstimate:
    """Second-order expansion in the aspect parameter for small eccentricity.

    Converts e to eps = e^2/(2 - e^2) and returns
    (pi/8)(1 + 4 beta) + q1 eps^2 with
    q1 = -(pi/16)(1 + beta (1 + 6 beta) / (2 (2 beta + 1))).
    """
    if not 0.0 <= e < 1.0:
        raise DomainError(f"eccentricity e={e} outside [0, 1)")
    if beta < 0.0:
        raise DomainError("beta must be >= 0")
    eps = e * e / (2.0 - e * e)
    q1 = -(math.pi / 16.0) * (1.0 + beta * (1.0 + 6.0 * beta) / (2.0 * (2.0 * beta + 1.0)))
    return FlowEstimate(method=Method.NEAR_CIRC,
                        value=(math.pi / 8.0) * (1.0 + 4.0 * beta) + q1 * eps * eps,
                        kind=BoundKind.ASYMPTOTIC)


def r1_inequality_check(geom: EllipseGeom, sigma_inf: float | None = None,
                        sigma_1: float | None = None) -> bool:
    """Check A^2/P - (Sigma_inf - Q0)^2 / Sigma_1 <= Q1.

    With Sigma_1 <= 0 the middle term is non-negative.  Defaults to the
    quadratic approximations of the Sigma functionals; the circle is the
    equality-degenerate case (second term 0/0 resolved to 0).
    """
    if sigma_inf is None or sigma_1 is None:
        sigma_inf, sigma_1 = sigma_approx(geom)
    area, perim = math.pi, perimeter(geom)
    q0 = q0_ellipse(geom)
    q1 = q1_ellipse(geom)
    if sigma_1 == 0.0:
        lhs = area * area / perim
    else:
        lhs = area * area / perim - (sigma_inf - q0) ** 2 / sigma_1
    return lhs <= q1 * (1.0 + 1e-12) + 1e-12
