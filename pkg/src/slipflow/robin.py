"""Truncated Fourier-Galerkin solution of the Robin Poisson problem
-lap(u) = 1, u + beta du/dn = 0 on an area-pi ellipse.

In elliptic coordinates (eta, psi) the solution splits as

    u = sum_n A_n cosh(2 n eta) cos(2 n psi) - (c^2/8)(cosh 2 eta + cos 2 psi),

and the Robin condition on eta = eta0 projects onto cos(2 m psi) to give a
dense linear system.  The projection of the boundary factor g(psi) uses the
product-to-sum rule, so each matrix entry is a closed combination of the
Fourier coefficients g_{n+m} and g_{|n-m|}; assembly needs g up to index
2 N and involves no quadrature.

The raw coefficients A_n pair cosh(2 n eta0) growth against decay of the
series, so the system is solved in the scaled unknowns
ahat_n = A_n cosh(2 n eta0), which keeps every matrix entry O(1) even for
nearly circular ellipses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .fourier import CoeffKind, FourierCoeffs, coeffs, g_pointwise
from .geometry import EllipseGeom
from .specfun import DomainError

__all__ = [
    "RobinSolution",
    "InsufficientCoefficientsError",
    "OutsideDomainError",
    "assemble",
    "solve",
    "flow_rate",
    "eval_u",
    "eval_u_xy",
    "area_quadrature_q",
    "DEFAULT_TRUNCATION",
]

DEFAULT_TRUNCATION = 32


class InsufficientCoefficientsError(ValueError):
    """Assembly needs boundary coefficients up to index 2N."""


class OutsideDomainError(ValueError):
    """Evaluation point lies outside the closed cross-section."""


@dataclass(frozen=True)
class RobinSolution:
    geom: EllipseGeom
    beta: float
    N: int
    ahat: np.ndarray          # ahat[n] = A_n cosh(2 n eta0); ahat[0] = A_0
    residual_norm: float

    @property
    def a0(self) -> float:
        return float(self.ahat[0])

    @property
    def a1(self) -> float:
        if self.geom.is_circle:
            return 0.0
        return float(self.ahat[1] / math.cosh(2.0 * self.geom.eta0))


def _cosh_ratio(n: np.ndarray, eta, eta0: float) -> np.ndarray:
    """cosh(2 n eta)/cosh(2 n eta0) without overflow (0 <= eta <= eta0)."""
    n = np.asarray(n, dtype=float)
    eta = np.asarray(eta, dtype=float)
    expo = np.exp(2.0 * n * (eta - eta0))
    return expo * (1.0 + np.exp(-4.0 * n * eta)) / (1.0 + np.exp(-4.0 * n * eta0))


def assemble(geom: EllipseGeom, beta: float, N: int,
             gcoeffs: FourierCoeffs) -> tuple[np.ndarray, np.ndarray]:
    """Galerkin system (matrix, rhs) in the scaled unknowns ahat_n."""
    if beta < 0.0:
        raise DomainError(f"slip length beta={beta} must be >= 0")
    if gcoeffs.kind is not CoeffKind.G:
        raise ValueError("assembly needs coefficients of g (kind=G)")
    if gcoeffs.N < 2 * N:
        raise InsufficientCoefficientsError(
            f"need g coefficients up to 2N={2 * N}, got {gcoeffs.N}")
    eta0, c = geom.eta0, geom.c
    c2 = c * c
    gn = gcoeffs.values
    n = np.arange(N + 1)
    m = n[:, None]
    diag = np.where(n == 0, 2.0 * math.pi, math.pi)
    # gamma_n / cosh(2 n eta0) = 2 n beta tanh(2 n eta0) / (c cosh eta0)
    gfac = 2.0 * n * beta * np.tanh(2.0 * n * eta0) / (c * math.cosh(eta0))
    mat = np.diag(diag) + gfac[None, :] * (math.pi / 2.0) * (gn[m + n] + gn[np.abs(m - n)])
    rhs = c * beta * math.sinh(2.0 * eta0) / (4.0 * math.cosh(eta0)) * math.pi * gn[: N + 1]
    rhs[0] += (c2 / 8.0) * math.cosh(2.0 * eta0) * 2.0 * math.pi
    if N >= 1:
        rhs[1] += (c2 / 8.0) * math.pi
    return mat, rhs


def _boundary_residual(sol: RobinSolution, samples: int = 512) -> float:
    """sup over psi of |u + beta (1/sqrt(J)) du/deta| on the boundary."""
    geom, beta = sol.geom, sol.beta
    if geom.is_circle:
        return 0.0
    eta0, c = geom.eta0, geom.c
    psi = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    n = np.arange(sol.N + 1)
    cosmat = np.cos(2.0 * np.outer(psi, n))
    u_b = cosmat @ sol.ahat - (c * c / 8.0) * (math.cosh(2.0 * eta0) + np.cos(2.0 * psi))
    du = cosmat @ (sol.ahat * 2.0 * n * np.tanh(2.0 * n * eta0)) \
        - (c * c / 4.0) * math.sinh(2.0 * eta0)
    jac_root = c * np.sqrt(math.cosh(eta0) ** 2 - np.cos(psi) ** 2)
    return float(np.abs(u_b + beta * du / jac_root).max())


def solve(geom: EllipseGeom, beta: float, N: int = DEFAULT_TRUNCATION,
          gcoeffs: FourierCoeffs | None = None) -> RobinSolution:
    """Solve the truncated Robin system.

    Short-circuits: the circle has the closed polar solution; beta = 0 has
    exactly two nonzero coefficients.
    """
    if beta < 0.0:
        raise DomainError(f"slip length beta={beta} must be >= 0")
    if geom.is_circle:
        ahat = np.zeros(N + 1)
        ahat[0] = 0.25 + 0.5 * beta
        return RobinSolution(geom=geom, beta=beta, N=N, ahat=ahat, residual_norm=0.0)
    if beta == 0.0:
        eta0 = geom.eta0
        ahat = np.zeros(N + 1)
        ahat[0] = math.cosh(2.0 * eta0) / (4.0 * math.sinh(2.0 * eta0))
        if N >= 1:
            # ahat_1 = A_1 cosh(2 eta0) with A_1 = 1/(4 cosh(2 eta0) sinh(2 eta0))
            ahat[1] = 1.0 / (4.0 * math.sinh(2.0 * eta0))
        tmp = RobinSolution(geom=geom, beta=beta, N=N, ahat=ahat, residual_norm=0.0)
        return RobinSolution(geom=geom, beta=beta, N=N, ahat=ahat,
                             residual_norm=_boundary_residual(tmp))
    if N < 2:
        raise DomainError(f"truncation N={N} must be >= 2 for beta > 0")
    if gcoeffs is None:
        gcoeffs = coeffs(geom, CoeffKind.G, 2 * N)
    mat, rhs = assemble(geom, beta, N, gcoeffs)
    try:
        ahat = np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError("singular Robin system: assembly bug") from exc
    sol = RobinSolution(geom=geom, beta=beta, N=N, ahat=ahat, residual_norm=0.0)
    return RobinSolution(geom=geom, beta=beta, N=N, ahat=ahat,
                         residual_norm=_boundary_residual(sol))


def flow_rate(sol: RobinSolution) -> float:
    """Q = -(pi/8) coth(2 eta0) + pi A_0 - (pi/2) A_1; circle closed form."""
    if sol.geom.is_circle:
        return math.pi * (1.0 + 4.0 * sol.beta) / 8.0
    eta0 = sol.geom.eta0
    return (-(math.pi / 8.0) / math.tanh(2.0 * eta0)
            + math.pi * sol.a0 - 0.5 * math.pi * sol.a1)


def eval_u(sol: RobinSolution, eta, psi) -> np.ndarray | float:
    """Series evaluation at elliptic coordinates inside the domain."""
    geom = sol.geom
    if geom.is_circle:
        raise ValueError("circle solutions have no elliptic coordinates; use eval_u_xy")
    eta = np.asarray(eta, dtype=float)
    psi = np.asarray(psi, dtype=float)
    if np.any(eta < -1e-12) or np.any(eta > geom.eta0 * (1.0 + 1e-12) + 1e-12):
        raise OutsideDomainError("eta outside [0, eta0]")
    n = np.arange(sol.N + 1)
    ratios = _cosh_ratio(n[None, :], eta.ravel()[:, None], geom.eta0)
    harm = (ratios * np.cos(2.0 * np.outer(psi.ravel(), n))) @ sol.ahat
    c2 = geom.c ** 2
    part = -(c2 / 8.0) * (np.cosh(2.0 * eta.ravel()) + np.cos(2.0 * psi.ravel()))
    out = harm + part
    return out.reshape(eta.shape) if eta.shape else float(out[0])


def eval_u_xy(sol: RobinSolution, x, y) -> np.ndarray | float:
    """Evaluate at Cartesian points via the inverse coordinate map."""
    geom = sol.geom
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if geom.is_circle:
        r2 = x * x + y * y
        if np.any(r2 > 1.0 + 1e-10):
            raise OutsideDomainError("point outside the unit circle")
        out = 0.25 * (1.0 - r2) + 0.5 * sol.beta
        return out if out.shape else float(out)
    inside = (x / geom.a) ** 2 + (y * geom.a) ** 2 <= 1.0 + 1e-10
    if not np.all(inside):
        raise OutsideDomainError("point outside the ellipse")
    w = np.arccosh((x + 1j * y) / geom.c)
    eta = np.clip(np.real(w), 0.0, geom.eta0)
    psi = np.imag(w)
    return eval_u(sol, eta, psi)


def area_quadrature_q(sol: RobinSolution, n_eta: int = 64, n_psi: int = 256) -> float:
    """Q by area quadrature of u against the elliptic-coordinate Jacobian.

    Gauss-Legendre in eta, periodic trapezoid in psi; independent of the
    three-coefficient flow formula.
    """
    geom = sol.geom
    if geom.is_circle:
        return math.pi * (1.0 + 4.0 * sol.beta) / 8.0
    xg, wg = leggauss(n_eta)
    etas = (xg + 1.0) * (geom.eta0 / 2.0)
    weta = wg * (geom.eta0 / 2.0)
    psis = np.linspace(0.0, 2.0 * math.pi, n_psi, endpoint=False)
    ee, pp = np.meshgrid(etas, psis, indexing="ij")
    u = eval_u(sol, ee, pp)
    jac = np.cosh(ee) ** 2 - np.cos(pp) ** 2
    c2 = geom.c ** 2
    return float(c2 * np.einsum("i,ij->", weta, u * jac) * (2.0 * math.pi / n_psi))
