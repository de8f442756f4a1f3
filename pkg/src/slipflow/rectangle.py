"""Rectangle cross-section (-a, a) x (-b, b): no-slip flow series, exact
large-slip limit functions, and the closed-form quadratic lower bound.

The large-slip limit u_inf is a plain quadratic here, so Sigma_inf and
Sigma_1 have rational closed forms and the rational bound R(beta) is fully
explicit up to the classical Q0 eigenfunction series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundKind, FlowEstimate, Method, r_bound
from .geometry import RectGeom
from .specfun import DomainError

__all__ = [
    "RectQ0",
    "q0_rect",
    "sigma_rect",
    "uinf_rect",
    "quad_lb_rect",
    "r_bound_rect",
    "DEFAULT_Q0_TERMS",
]

DEFAULT_Q0_TERMS = 40


@dataclass(frozen=True)
class RectQ0:
    value: float
    tail_bound: float
    terms: int


def q0_rect(rect: RectGeom, terms: int = DEFAULT_Q0_TERMS) -> RectQ0:
    """No-slip flow by the classical eigenfunction series.

    Q0 = (4 a^3 b / 3)(1 - (192/pi^5)(a/b) sum tanh(pi (2n-1) b/(2a))/(2n-1)^5).
    The reported tail bound uses tanh < 1 and the exact remainder of the
    (2n-1)^{-5} sum.
    """
    if terms < 1:
        raise DomainError("series needs at least one term")
    a, b = rect.a, rect.b
    n = np.arange(1, terms + 1)
    odd = 2.0 * n - 1.0
    series = float(np.sum(np.tanh(math.pi * odd * b / (2.0 * a)) / odd ** 5))
    prefac = 4.0 * a ** 3 * b / 3.0
    value = prefac * (1.0 - (192.0 / math.pi ** 5) * (a / b) * series)
    # sum_{n > terms} (2n-1)^{-5} < int_{terms}^{inf} (2t-1)^{-5} dt
    tail = prefac * (192.0 / math.pi ** 5) * (a / b) / (8.0 * (2.0 * terms - 1.0) ** 4)
    return RectQ0(value=value, tail_bound=tail, terms=terms)


def sigma_rect(rect: RectGeom) -> tuple[float, float]:
    """Closed forms of the large-slip functionals.

    Sigma_inf = 8 a^3 b^3 / (3 (a+b)^2),
    Sigma_1 = -(4/45) a^2 b^2 (a^4 + 6 a^3 b - 10 a^2 b^2 + 6 a b^3 + b^4)/(a+b)^3.
    """
    a, b = rect.a, rect.b
    s_inf = 8.0 * a ** 3 * b ** 3 / (3.0 * (a + b) ** 2)
    s_1 = -(4.0 / 45.0) * a * a * b * b * (a ** 4 + 6.0 * a ** 3 * b - 10.0 * a * a * b * b
                                           + 6.0 * a * b ** 3 + b ** 4) / (a + b) ** 3
    return s_inf, s_1


def uinf_rect(rect: RectGeom, x, y) -> np.ndarray | float:
    """Large-slip limit u_inf, a quadratic with zero boundary mean."""
    a, b = rect.a, rect.b
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(x) > a * (1.0 + 1e-12)) or np.any(np.abs(y) > b * (1.0 + 1e-12)):
        raise DomainError("point outside the rectangle")
    out = (a * b * (a * a + 6.0 * a * b + b * b) / (6.0 * (a + b) ** 2)
           - (b * x * x + a * y * y) / (2.0 * (a + b)))
    return out if out.shape else float(out)


def quad_lb_rect(rect: RectGeom, beta: float) -> FlowEstimate:
    """Closed-form rational lower bound from quadratic test functions.

    Trivially zero at beta = 0; approaches beta A^2/P as beta grows.
    """
    if beta < 0.0:
        raise DomainError("beta must be >= 0")
    a, b = rect.a, rect.b
    num = 4.0 * a * a * b * b * beta * (15.0 * a * beta + b * b + 5.0 * a * b) \
        * (5.0 * a * b + a * a + 15.0 * b * beta)
    den = 3.0 * (30.0 * a * b ** 3 * beta + 5.0 * b ** 4 * beta + 30.0 * a ** 3 * b * beta
                 + 5.0 * a ** 4 * beta + 75.0 * a * a * b * beta * beta
                 + 75.0 * a * b * b * beta * beta
                 + 2.0 * a * a * b ** 3 + 2.0 * b * b * a ** 3)
    return FlowEstimate(method=Method.QUAD_VARL, value=num / den, kind=BoundKind.LOWER)


def r_bound_rect(rect: RectGeom, beta: float, terms: int = DEFAULT_Q0_TERMS) -> FlowEstimate:
    """R(beta) with the series Q0 and the closed-form Sigma functionals."""
    q0 = q0_rect(rect, terms).value
    s_inf, s_1 = sigma_rect(rect)
    est = r_bound(rect.area, rect.perimeter, q0, s_inf, s_1, beta)
    return FlowEstimate(method=Method.R_BOUND, value=est.value, kind=BoundKind.LOWER)
